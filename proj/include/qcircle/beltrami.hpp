#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcircle/field.hpp"
#include "qcircle/map.hpp"
#include "qcircle/transforms.hpp"

namespace qcircle {

/// Dilatation mu with ||mu||_inf < 1 that vanishes outside a declared radius.
class BeltramiCoefficient {
public:
    BeltramiCoefficient(ComplexField field, double support_radius);

    /// mu = 0 on the grid.
    static BeltramiCoefficient zero(const Grid& grid);

    const ComplexField& field() const { return field_; }
    const Grid& grid() const { return field_.grid; }
    double sup_bound() const { return sup_; }
    double support_radius() const { return support_; }

    BeltramiCoefficient scaled(double t) const;

private:
    ComplexField field_;
    double sup_;
    double support_;
};

struct SolveReport {
    ComplexField solution;
    std::vector<double> residual_history;  ///< ||(I - mu S) h_k - Phi||_2
    int iterations = 0;
    bool converged = false;
};

/// h = sum_k (mu S)^k Phi, stopped once the unweighted residual is <= tol.
/// Non-convergence is reported through `converged`, never thrown.
SolveReport neumann_solve(const SpectralPlan& plan, const BeltramiCoefficient& mu, const ComplexField& phi,
                          double tol, int max_iter = 200);

/// rho(z) = z + (T h)(z) by direct quadrature over the nonzero cells of h.
MapEvaluator cauchy_map(const ComplexField& h);

struct BeltramiSolution {
    MapEvaluator map;  ///< rho(z) = z + (T h)(z), direct quadrature
    ComplexField h;    ///< dbar rho
    SolveReport report;
};

/// Solves (I - mu S) h = mu. Throws ConvergenceError when the series stalls.
BeltramiSolution solve_beltrami(const SpectralPlan& plan, const BeltramiCoefficient& mu, double tol,
                                int max_iter = 200);

struct ProbeRecord {
    std::string label;
    double ratio;  ///< ||h||_w^2 / ||Phi||_w^2, w = 1/|y|
    int iterations;
};

struct OperatorStats {
    double weighted_norm_estimate = 0.0;
    int iteration_count = 0;
    double relative_change_at_stop = 0.0;
    std::optional<double> probe_c1_estimate;
    bool converged = false;
    std::vector<double> rayleigh_history;
    std::vector<ProbeRecord> probes;
};

/// Power iteration for ||mu S|| on L^2(dm/|y|): iterates A*A with
/// A*g = |y| S*(conj(mu) g / |y|), reports sqrt of the Rayleigh quotient. The iterates live on
/// the padded grid, where S acts as the exact periodic operator.
OperatorStats weighted_operator_norm(const SpectralPlan& plan, const BeltramiCoefficient& mu, double tol,
                                     int max_iter = 1000);

/// Empirical lower estimate of c1 in ||(I - mu S)^{-1} Phi||_w^2 <= c1 ||Phi||_w^2.
OperatorStats inverse_weighted_bound(const SpectralPlan& plan, const BeltramiCoefficient& mu,
                                     const std::vector<ComplexField>& probes, double tol, int max_iter = 500);

/// Windowed noise probes plus mollified balls centred at heights L/32, L/16, L/8, L/4
/// (each at least 4h so coarse grids still resolve them).
std::vector<ComplexField> default_probes(const Grid& grid, std::size_t noise_count = 8, std::uint64_t seed = 0);
std::vector<std::string> default_probe_labels(std::size_t noise_count = 8);

struct InhomogeneousSolution {
    ComplexField H;           ///< T(dbar H) on the grid
    ComplexField dbar_H;      ///< (I - mu S)^{-1}(mu C'_f)
    LineFunction boundary;    ///< H on the line samples of f
    SolveReport report;
};

/// dbar H - mu dH = mu C'_f with H = T(dbar H).
InhomogeneousSolution solve_inhomogeneous(const SpectralPlan& plan, const BeltramiCoefficient& mu,
                                          const LineFunction& f, double tol, int max_iter = 200);

}  // namespace qcircle
