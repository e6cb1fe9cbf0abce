#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcircle/beltrami.hpp"
#include "qcircle/field.hpp"
#include "qcircle/map.hpp"
#include "qcircle/transforms.hpp"

namespace qcircle {

/// Samples of Gamma = rho(R) at uniform parameters on [-X, X].
struct CurveTrace {
    std::vector<double> params;
    std::vector<cplx> points;
    std::vector<double> cum_length;

    CurveTrace() = default;
    CurveTrace(std::vector<double> params, std::vector<cplx> points);

    std::size_t size() const { return points.size(); }
    double total_length() const { return cum_length.empty() ? 0.0 : cum_length.back(); }
    double window() const { return params.empty() ? 0.0 : 0.5 * (params.back() - params.front()); }

    /// Image under z -> a z + b.
    CurveTrace transformed(cplx a, cplx b) const;
};

CurveTrace trace_curve(const MapEvaluator& rho, double X, std::size_t samples);
/// Columns x, re, im, cum_length.
void write_trace_csv(const CurveTrace& t, const std::string& path);

struct ChordArcReport {
    double constant = 1.0;
    std::size_t witness_i = 0;
    std::size_t witness_j = 0;
    double window = 0.0;  ///< parameter half-width of the pairs considered
    std::size_t samples = 0;
};

/// Max of arclength/chord over pairs in the middle half of the parameter window.
ChordArcReport chord_arc_constant(const CurveTrace& trace);
/// Arclength/chord for one pair, as used by the report.
double chord_arc_ratio(const CurveTrace& trace, std::size_t i, std::size_t j);

struct BilipschitzProfile {
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> blowup_exponent;  ///< slope of log ratio vs log |z - w| on anchored pairs
    double fitted_slope = 0.0;
};

/// Pairs (anchor + s, anchor) with s = +-10^{-e} for e in [min_exp, max_exp] (`per_decade` per decade).
std::vector<std::pair<cplx, cplx>> anchored_pairs(cplx anchor, double min_exp = 1.0, double max_exp = 6.0,
                                                  int per_decade = 4);
/// Slopes with magnitude below `threshold` are reported as no blowup.
BilipschitzProfile bilipschitz_profile(const MapEvaluator& rho, const std::vector<std::pair<cplx, cplx>>& pairs,
                                       std::optional<cplx> anchor = cplx{}, double threshold = 0.05);

struct CauchyNormReport {
    double norm = 0.0;
    int iterations = 0;
    double relative_change = 0.0;
    bool converged = false;
};

/// Norm of M_ij = (1/(2 pi i)) ds_j / (gamma_j - gamma_i), i != j, on l^2(ds), by power iteration on M*M.
CauchyNormReport curve_cauchy_operator(const CurveTrace& trace, double tol = 1e-4, int max_iter = 500);

/// sup over trace points z0 and radii L_total / 2^{k+1} of length(Gamma in B(z0, R)) / R.
double regularity_check(const CurveTrace& trace, double min_radius_segments = 4.0);
/// Exact length of the polyline inside the closed disc B(c, R).
double length_in_disc(const CurveTrace& trace, cplx c, double R);

/// Increasing boundary homeomorphism f of R, with the averages the extension needs.
struct BoundaryMap {
    std::function<double(double)> value;
    /// (1/(b - a)) int_a^b f, for a < b.
    std::function<double(double, double)> average;
    std::string name;

    static BoundaryMap identity();
    /// sign(x) |x|^{1/K}
    static BoundaryMap power(double K);
    /// Piecewise-linear interpolant of increasing samples, extended linearly outside.
    static BoundaryMap from_samples(const LineFunction& f);
};

struct Jacobian {
    cplx d;     ///< d rho
    cplx dbar;  ///< dbar rho
    cplx mu() const { return dbar / d; }
};

/// Beurling-Ahlfors extension
/// rho(x + iy) = (1/2) int_0^1 [f(x+ty) + f(x-ty)] dt + i int_0^1 [f(x+ty) - f(x-ty)] dt, y > 0,
/// rho(conj z) = conj rho(z). The identity extends to the identity.
class BAExtension {
public:
    explicit BAExtension(BoundaryMap f);

    cplx operator()(cplx z) const;
    /// Closed-form derivatives of the averaged representation.
    Jacobian jacobian(cplx z) const;
    cplx dilatation(cplx z) const { return jacobian(z).mu(); }
    MapEvaluator evaluator() const;
    const BoundaryMap& boundary() const { return f_; }

private:
    BoundaryMap f_;
};

BAExtension ba_extension(const BoundaryMap& f);
/// Requires strictly increasing samples.
BAExtension ba_extension(const LineFunction& f);

/// mu sampled on the grid, zero outside `truncation_radius` when given.
ComplexField sample_dilatation(const BAExtension& ext, const Grid& grid,
                               std::optional<double> truncation_radius = std::nullopt);

/// mu = dbar rho / d rho by fourth-order centred differences with step `step` * max(|z|, 1).
cplx dilatation_fd(const std::function<cplx(cplx)>& rho, cplx z, double step = 1e-4);
Jacobian jacobian_fd(const std::function<cplx(cplx)>& rho, cplx z, double step = 1e-4);

/// The closed-form map of the non-bilipschitz chord-arc example.
class Prop2Map {
public:
    enum class Sector { right, left, upper, lower };

    explicit Prop2Map(double K);

    double K() const { return K_; }
    static Sector sector_of(cplx z);
    cplx operator()(cplx z) const;
    /// The formula of `s` continued analytically past its sector, for one-sided stencils.
    cplx evaluate_branch(cplx z, Sector s) const;
    /// 1 - 1/K, |mu| off the sectors E0 and E1.
    double expected_dilatation_modulus() const { return 1.0 - 1.0 / K_; }

    MapEvaluator evaluator() const;
    cplx dilatation(cplx z, double step = 1e-4) const;
    Jacobian jacobian(cplx z, double step = 1e-4) const;

private:
    double K_;
};

struct Prop2Result {
    Prop2Map map;
    MapEvaluator evaluator;
    ComplexField mu;  ///< dilatation on the whole grid box (not compactly supported)
};

/// Throws DomainError unless 1 < K < 2.
Prop2Result prop2_map(double K, const Grid& grid);

/// Restriction of a field to the disc of radius R (values outside set to 0, support declared).
ComplexField truncate_to_disc(const ComplexField& f, double R);

/// dbar rho sampled on the grid by finite differences of a closed-form map.
ComplexField dbar_field(const std::function<Jacobian(cplx)>& jac, const Grid& grid,
                        std::optional<double> truncation_radius = std::nullopt);

/// True when two non-adjacent polyline segments intersect.
bool has_self_intersection(const CurveTrace& trace);

}  // namespace qcircle
