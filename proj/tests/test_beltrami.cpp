#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qcircle/beltrami.hpp"
#include "qcircle/errors.hpp"
#include "qcircle/geometry.hpp"

using namespace qcircle;
using doctest::Approx;

namespace {

BeltramiCoefficient ball(const Grid& g, double c, cplx center = {0, 2}, double r = 1.0) {
    return BeltramiCoefficient(cplx(c) * indicator_ball(g, center, r, r / 4), std::abs(center) + r);
}

// Integer-cell horizontal shift.
BeltramiCoefficient shifted(const BeltramiCoefficient& mu, long cells) {
    const Grid& g = mu.grid();
    ComplexField f(g);
    const long n = static_cast<long>(g.n());
    for (long k = 0; k < n; ++k)
        for (long j = 0; j < n; ++j) {
            const long src = j - cells;
            if (src >= 0 && src < n) f.at(j, k) = mu.field().at(src, k);
        }
    return BeltramiCoefficient(std::move(f), mu.support_radius() + std::abs(cells) * g.spacing());
}

}  // namespace

TEST_CASE("coefficient validation") {
    const Grid g(8.0, 64);
    CHECK(ball(g, 0.5).sup_bound() == Approx(0.5));
    CHECK_THROWS_AS(ball(g, 1.0), DomainError);
    CHECK_THROWS_AS(BeltramiCoefficient(cplx(0.5) * indicator_ball(g, {0, 2}, 1), 1.5), SupportError);
    ComplexField bad = cplx(0.5) * indicator_ball(g, {0, 2}, 1);
    bad.at(32, 40) = std::nan("");
    CHECK_THROWS_AS(BeltramiCoefficient(bad, 3.0), DomainError);
    CHECK(BeltramiCoefficient::zero(g).sup_bound() == 0.0);
    CHECK(ball(g, 0.5).scaled(0.5).sup_bound() == Approx(0.25));
}

TEST_CASE("Neumann series") {
    const Grid g(8.0, 64);
    const SpectralPlan plan(g);
    const BeltramiCoefficient mu = ball(g, 0.5);

    SUBCASE("mu = 0 returns Phi after one iteration") {
        const ComplexField phi = windowed_noise(g, 1, 0.2, 4.0);
        const SolveReport r = neumann_solve(plan, BeltramiCoefficient::zero(g), phi, 1e-12);
        CHECK(r.iterations == 1);
        CHECK(r.converged);
        CHECK(r.solution.values == phi.values);
    }

    SUBCASE("contraction and resolvent identity") {
        const SolveReport r = neumann_solve(plan, mu, mu.field(), 1e-10);
        REQUIRE(r.converged);
        const auto& h = r.residual_history;
        for (std::size_t k = 1; k < h.size(); ++k) {
            CHECK(h[k] < h[k - 1]);
            if (k >= 2) CHECK(h[k] / h[k - 1] <= 0.55);
        }
        const ComplexField resid = r.solution - mu.field() - multiply(mu.field(), plan.beurling(r.solution));
        CHECK(norm(resid) <= 1e-10 * 2);
    }

    SUBCASE("linearity") {
        const ComplexField phi = multiply(windowed_noise(g, 2, 0.2, 4.0), indicator_ball(g, {0, 2}, 2, 0.5));
        const cplx a(-1.5, 0.75);
        const SolveReport r1 = neumann_solve(plan, mu, phi, 1e-13);
        const SolveReport r2 = neumann_solve(plan, mu, a * phi, 1e-13 * std::abs(a));
        CHECK(norm(r2.solution - a * r1.solution) <= 1e-10 * norm(r2.solution));
    }

    SUBCASE("non-convergence is reported, or thrown by the map solver") {
        const SolveReport r = neumann_solve(plan, mu, mu.field(), 1e-14, 3);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 3);
        CHECK_THROWS_AS(solve_beltrami(plan, mu, 1e-14, 3), ConvergenceError);
        CHECK_THROWS_AS(neumann_solve(plan, mu, mu.field(), 0.0), DomainError);
    }
}

TEST_CASE("solve_beltrami maps") {
    const Grid g(8.0, 128);
    const SpectralPlan plan(g);

    SUBCASE("mu = 0 gives the identity") {
        const BeltramiSolution s = solve_beltrami(plan, BeltramiCoefficient::zero(g), 1e-10);
        for (cplx z : {cplx(0.3, 0.2), cplx(-5, 1), cplx(2, -7)}) CHECK(s.map(z) == z);
        CHECK(s.map.provenance == Provenance::solver);
    }

    SUBCASE("decay like 1/|z|") {
        const BeltramiSolution s = solve_beltrami(plan, ball(g, 0.3), 1e-10);
        const double mass = std::abs(integrate(s.h)) / std::numbers::pi;
        for (double R : {6.0, 12.0, 24.0, 48.0}) {
            const double prod = std::abs(s.map(cplx(R, 0.5)) - cplx(R, 0.5)) * R;
            CHECK(prod <= 1.5 * mass);
            if (R >= 24) CHECK(prod == Approx(mass).epsilon(0.1));
        }
    }

    SUBCASE("trace is injective") {
        const BeltramiSolution s = solve_beltrami(plan, ball(g, 0.3), 1e-10);
        CHECK_FALSE(has_self_intersection(trace_curve(s.map, 8.0, 512)));
    }

    SUBCASE("reflected conjugate coefficient mirrors the trace") {
        const BeltramiCoefficient mu = ball(g, 0.3, {0.5, 2.0});
        ComplexField refl(g);
        for (std::size_t k = 0; k < g.n(); ++k)
            for (std::size_t j = 0; j < g.n(); ++j) refl.at(j, k) = std::conj(mu.field().at(j, g.n() - 1 - k));
        const BeltramiSolution a = solve_beltrami(plan, mu, 1e-12);
        const BeltramiSolution b = solve_beltrami(plan, BeltramiCoefficient(refl, mu.support_radius()), 1e-12);
        const CurveTrace ta = trace_curve(a.map, 8.0, 256), tb = trace_curve(b.map, 8.0, 256);
        double worst = 0.0;
        for (std::size_t i = 0; i < ta.size(); ++i) worst = std::max(worst, std::abs(tb.points[i] - std::conj(ta.points[i])));
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("weighted operator norm") {
    const Grid g(8.0, 64);
    const SpectralPlan plan(g);
    const BeltramiCoefficient mu = ball(g, 0.5);

    CHECK(weighted_operator_norm(plan, BeltramiCoefficient::zero(g), 1e-8).weighted_norm_estimate == 0.0);

    const OperatorStats base = weighted_operator_norm(plan, mu, 1e-10);
    REQUIRE(base.converged);
    CHECK(base.weighted_norm_estimate > 0.0);
    for (std::size_t k = 1; k < base.rayleigh_history.size(); ++k)
        CHECK(base.rayleigh_history[k] >= base.rayleigh_history[k - 1] * (1 - 1e-12));

    SUBCASE("homogeneity") {
        for (double t : {0.1, 0.5, 0.9}) {
            const double e = weighted_operator_norm(plan, mu.scaled(t), 1e-10).weighted_norm_estimate;
            CHECK(std::abs(e - t * base.weighted_norm_estimate) <= 1e-10 * t * base.weighted_norm_estimate);
        }
    }

    SUBCASE("horizontal translation") {
        for (long cells : {-8L, 3L, 12L}) {
            const double e = weighted_operator_norm(plan, shifted(mu, cells), 1e-10).weighted_norm_estimate;
            CHECK(std::abs(e - base.weighted_norm_estimate) <= 1e-10 * base.weighted_norm_estimate);
        }
    }
}

TEST_CASE("inverse weighted bound") {
    const Grid g(8.0, 64);
    const SpectralPlan plan(g);
    const auto probes = default_probes(g);
    CHECK(probes.size() == 12);
    CHECK(default_probe_labels().size() == 12);
    for (const auto& p : probes) CHECK(norm(p) > 0.0);

    const OperatorStats id = inverse_weighted_bound(plan, BeltramiCoefficient::zero(g), probes, 1e-10);
    CHECK(*id.probe_c1_estimate == Approx(1.0).epsilon(1e-10));

    const BeltramiCoefficient mu = ball(g, 0.3);
    const double s = weighted_operator_norm(plan, mu, 1e-8).weighted_norm_estimate;
    REQUIRE(s < 1.0);
    const double c1 = *inverse_weighted_bound(plan, mu, probes, 1e-10).probe_c1_estimate;
    CHECK(c1 >= 1.0 - 1e-9);
    CHECK(c1 <= 1.05 / ((1 - s) * (1 - s)));

    const double c1_16 = *inverse_weighted_bound(plan, mu, default_probes(g, 16), 1e-10).probe_c1_estimate;
    CHECK(std::abs(c1_16 - c1) <= 0.1 * c1);

    CHECK_THROWS_AS(inverse_weighted_bound(plan, mu, {}, 1e-8), DomainError);
    CHECK_THROWS_AS(inverse_weighted_bound(plan, mu, {ComplexField(g)}, 1e-8), DomainError);
}

TEST_CASE("inhomogeneous problem with mu = 0") {
    const Grid g(8.0, 64);
    const SpectralPlan plan(g);
    const LineFunction f = LineFunction::sample(8.0, 256, [](double x) { return cplx(std::exp(-x * x)); }, 4.0);
    const InhomogeneousSolution s = solve_inhomogeneous(plan, BeltramiCoefficient::zero(g), f, 1e-10);
    for (const cplx& v : s.H.values) CHECK(v == cplx{});
    for (const cplx& v : s.boundary.values) CHECK(v == cplx{});
}
