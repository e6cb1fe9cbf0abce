#include "qcircle/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "qcircle/errors.hpp"

namespace qcircle {

BeltramiCoefficient::BeltramiCoefficient(ComplexField field, double support_radius)
    : field_(std::move(field)), sup_(0.0), support_(support_radius) {
    if (!(support_radius > 0.0) || !std::isfinite(support_radius))
        throw DomainError("Beltrami coefficient: support radius must be positive");
    field_.require_finite("Beltrami coefficient");
    field_.support_radius = support_radius;
    field_.require_support();
    for (const auto& v : field_.values) sup_ = std::max(sup_, std::abs(v));
    if (!(sup_ < 1.0)) throw DomainError("Beltrami coefficient: sup |mu| must be < 1");
}

BeltramiCoefficient BeltramiCoefficient::zero(const Grid& grid) {
    return BeltramiCoefficient(ComplexField(grid), grid.half_width() / 2);
}

BeltramiCoefficient BeltramiCoefficient::scaled(double t) const {
    return BeltramiCoefficient(cplx(t) * field_, support_);
}

namespace {
ComplexField mu_times_S(const SpectralPlan& plan, const BeltramiCoefficient& mu, const ComplexField& h) {
    ComplexField out = multiply(mu.field(), plan.beurling(h));
    out.support_radius = mu.support_radius();
    return out;
}

// Nonzero cells of a field, prepared for direct evaluation of T.
struct CellSum {
    std::vector<cplx> w;
    std::vector<cplx> c;

    explicit CellSum(const ComplexField& f) {
        const Grid& g = f.grid;
        for (std::size_t k = 0; k < g.n(); ++k)
            for (std::size_t j = 0; j < g.n(); ++j)
                if (f.at(j, k) != cplx{}) {
                    w.push_back(g.point(j, k));
                    c.push_back(f.at(j, k) * (-g.cell_area() / std::numbers::pi));
                }
    }

    cplx operator()(cplx z) const {
        cplx s{};
        for (std::size_t m = 0; m < w.size(); ++m) {
            const cplx d = w[m] - z;
            if (d == cplx{}) continue;
            s += c[m] / d;
        }
        return s;
    }
};
}  // namespace

MapEvaluator cauchy_map(const ComplexField& h) {
    auto sum = std::make_shared<CellSum>(h);
    return {[sum](cplx z) { return z + (*sum)(z); }, Provenance::solver, "rho = z + T h, direct quadrature over supp h"};
}

SolveReport neumann_solve(const SpectralPlan& plan, const BeltramiCoefficient& mu, const ComplexField& phi,
                          double tol, int max_iter) {
    if (!(tol > 0.0)) throw DomainError("neumann_solve: tol must be positive");
    if (max_iter < 1) throw DomainError("neumann_solve: max_iter must be >= 1");
    if (mu.grid() != plan.grid() || phi.grid != plan.grid()) throw DomainError("neumann_solve: grid mismatch");
    phi.require_finite("neumann_solve right-hand side");

    SolveReport rep{phi, {}, 0, false};
    ComplexField& h = rep.solution;
    for (int it = 1; it <= max_iter; ++it) {
        const ComplexField muSh = mu_times_S(plan, mu, h);
        ComplexField next = phi + muSh;
        const double res = norm(h - next);  // ||h - mu S h - Phi||
        rep.residual_history.push_back(res);
        rep.iterations = it;
        if (res <= tol) {
            rep.converged = true;
            break;
        }
        h = std::move(next);
    }
    h.support_radius = phi.support_radius;
    return rep;
}

BeltramiSolution solve_beltrami(const SpectralPlan& plan, const BeltramiCoefficient& mu, double tol, int max_iter) {
    SolveReport rep = neumann_solve(plan, mu, mu.field(), tol, max_iter);
    if (!rep.converged) throw ConvergenceError("solve_beltrami: Neumann series did not reach the tolerance");
    MapEvaluator map = cauchy_map(rep.solution);
    ComplexField h = rep.solution;
    return {std::move(map), std::move(h), std::move(rep)};
}

OperatorStats weighted_operator_norm(const SpectralPlan& plan, const BeltramiCoefficient& mu, double tol,
                                     int max_iter) {
    if (!(tol > 0.0)) throw DomainError("weighted_operator_norm: tol must be positive");
    if (mu.grid() != plan.grid()) throw DomainError("weighted_operator_norm: grid mismatch");
    OperatorStats st;
    if (mu.sup_bound() == 0.0) {
        st.converged = true;
        return st;
    }
    // Iterate on the padded torus, where S is an exact periodic operator and A* the exact
    // weighted adjoint of A. Horizontal cell shifts of mu are then exact symmetries.
    const Grid& g = plan.padded_grid();
    const std::size_t n = g.n();
    const ComplexField m = plan.extend(mu.field());

    auto A = [&](const ComplexField& f) { return multiply(m, plan.beurling(f)); };
    auto A_star = [&](const ComplexField& v) {
        ComplexField t(g);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) t.at(j, k) = std::conj(m.at(j, k)) * v.at(j, k) / std::abs(g.y(k));
        ComplexField s = plan.beurling_adjoint(t);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) s.at(j, k) *= std::abs(g.y(k));
        return s;
    };
    auto normalise = [&](ComplexField f) {
        const double nv = norm(f, Weight::inv_abs_y);
        return cplx(1.0 / nv) * std::move(f);
    };

    // Start from A*|mu|: covariant under translation of mu, insensitive to t in t*mu.
    ComplexField absmu(g);
    for (std::size_t i = 0; i < absmu.values.size(); ++i) absmu.values[i] = std::abs(m.values[i]);
    ComplexField f = normalise(A_star(absmu));

    double lam = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        const ComplexField g1 = A(f);
        const double nl = std::pow(norm(g1, Weight::inv_abs_y), 2);
        st.rayleigh_history.push_back(nl);
        st.iteration_count = it;
        const double change = it > 1 ? std::abs(nl - lam) / nl : 1.0;
        lam = nl;
        st.relative_change_at_stop = change;
        if (it > 1 && change <= tol) {
            st.converged = true;
            break;
        }
        f = normalise(A_star(g1));
    }
    st.weighted_norm_estimate = std::sqrt(lam);
    return st;
}

OperatorStats inverse_weighted_bound(const SpectralPlan& plan, const BeltramiCoefficient& mu,
                                     const std::vector<ComplexField>& probes, double tol, int max_iter) {
    if (probes.empty()) throw DomainError("inverse_weighted_bound: empty probe set");
    OperatorStats st;
    st.converged = true;
    double c1 = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const ComplexField& phi = probes[i];
        const double pn = norm(phi, Weight::inv_abs_y);
        if (!(pn > 0.0)) throw DomainError("inverse_weighted_bound: zero probe");
        SolveReport rep = neumann_solve(plan, mu, phi, tol, max_iter);
        if (!rep.converged) throw ConvergenceError("inverse_weighted_bound: probe solve did not converge");
        const double ratio = std::pow(norm(rep.solution, Weight::inv_abs_y) / pn, 2);
        st.probes.push_back({"probe_" + std::to_string(i), ratio, rep.iterations});
        st.iteration_count += rep.iterations;
        c1 = std::max(c1, ratio);
    }
    st.probe_c1_estimate = c1;
    return st;
}

std::vector<ComplexField> default_probes(const Grid& grid, std::size_t noise_count, std::uint64_t seed) {
    const double L = grid.half_width();
    std::vector<ComplexField> out;
    for (std::size_t i = 0; i < noise_count; ++i) out.push_back(windowed_noise(grid, seed + i, 0.05, L / 2));
    for (double frac : {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4}) {
        const double height = std::max(L * frac, 4.0 * grid.spacing());
        const double r = height / 2;
        out.push_back(indicator_ball(grid, cplx(0.0, height), r, r / 2));
    }
    return out;
}

std::vector<std::string> default_probe_labels(std::size_t noise_count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < noise_count; ++i) out.push_back("noise_" + std::to_string(i));
    for (const char* s : {"ball_L/32", "ball_L/16", "ball_L/8", "ball_L/4"}) out.emplace_back(s);
    return out;
}

InhomogeneousSolution solve_inhomogeneous(const SpectralPlan& plan, const BeltramiCoefficient& mu,
                                          const LineFunction& f, double tol, int max_iter) {
    const Grid& g = plan.grid();
    ComplexField rhs(g);
    std::vector<cplx> pts;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < g.n(); ++k)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (mu.field().at(j, k) != cplx{}) {
                pts.push_back(g.point(j, k));
                idx.push_back(g.index(j, k));
            }
    const auto cf = cauchy_line_derivative(f, pts);
    for (std::size_t i = 0; i < idx.size(); ++i) rhs.values[idx[i]] = mu.field().values[idx[i]] * cf[i];
    rhs.support_radius = mu.support_radius();

    SolveReport rep = neumann_solve(plan, mu, rhs, tol, max_iter);
    if (!rep.converged) throw ConvergenceError("solve_inhomogeneous: Neumann series did not reach the tolerance");
    ComplexField dbarH = rep.solution;
    ComplexField H = plan.cauchy_plane(dbarH);
    LineFunction boundary(f.X, boundary_trace(dbarH, f));
    return {std::move(H), std::move(dbarH), std::move(boundary), std::move(rep)};
}

}  // namespace qcircle
