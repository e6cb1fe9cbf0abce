#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qcircle/analysis.hpp"
#include "qcircle/errors.hpp"
#include "qcircle/geometry.hpp"

using namespace qcircle;
using doctest::Approx;

namespace {

MapEvaluator graph_of_sine() {
    MapEvaluator m;
    m.fn = [](cplx z) { return cplx(z.real(), std::sin(z.real()) + z.imag()); };
    return m;
}

// f(x) = x + 0.3 sin x, increasing and bilipschitz.
BoundaryMap wavy(double lambda = 1.0) {
    auto F = [lambda](double x) { return (0.5 * lambda * x * x - 0.3 * std::cos(lambda * x) / lambda) / lambda; };
    return {[lambda](double x) { return (lambda * x + 0.3 * std::sin(lambda * x)) / lambda; },
            [F](double a, double b) { return (F(b) - F(a)) / (b - a); }, "wavy"};
}

}  // namespace

TEST_CASE("trace_curve") {
    const CurveTrace id = trace_curve(MapEvaluator::identity(), 5.0, 101);
    CHECK(id.size() == 101);
    CHECK(id.points.front() == cplx(-5.0));
    CHECK(id.points.back() == cplx(5.0));
    for (std::size_t i = 0; i < id.size(); ++i) CHECK(id.points[i] == cplx(id.params[i]));
    CHECK(id.total_length() == Approx(10.0).epsilon(1e-14));
    CHECK(id.window() == Approx(5.0));

    const cplx a(1.5, -2.0);
    const CurveTrace af = trace_curve(MapEvaluator::affine(a, {3, 1}), 5.0, 101);
    CHECK(std::abs(af.total_length() - 10.0 * std::abs(a)) <= 1e-12 * af.total_length());

    CHECK_THROWS_AS(trace_curve(MapEvaluator::identity(), 5.0, 32), DomainError);
    CHECK_THROWS_AS(CurveTrace({0.0, 0.0}, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(CurveTrace({0.0, 1.0}, {0.0, std::nan("")}), DomainError);

    namespace fs = std::filesystem;
    fs::create_directories(QCIRCLE_TEST_TMP);
    const std::string path = std::string(QCIRCLE_TEST_TMP) + "/trace.csv";
    write_trace_csv(id, path);
    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    CHECK(header == "x,re,im,cum_length");
}

TEST_CASE("chord-arc constant") {
    CHECK(chord_arc_constant(trace_curve(MapEvaluator::identity(), 8.0, 256)).constant == Approx(1.0).epsilon(1e-12));

    const CurveTrace sine = trace_curve(graph_of_sine(), 8.0, 400);
    const ChordArcReport rep = chord_arc_constant(sine);
    CHECK(rep.constant >= 1.0);
    CHECK(rep.samples == 400);
    CHECK(chord_arc_ratio(sine, rep.witness_i, rep.witness_j) == rep.constant);
    const double dense = oracle::chord_arc_dense([](double x) { return cplx(x, std::sin(x)); }, 8.0, 4000);
    CHECK(rep.constant == Approx(dense).epsilon(0.01));

    const CurveTrace moved = sine.transformed(std::polar(2.5, 0.8), {-3, 7});
    CHECK(chord_arc_constant(moved).constant == Approx(rep.constant).epsilon(1e-10));
    CHECK(regularity_check(moved) == Approx(regularity_check(sine)).epsilon(1e-10));

    CHECK_THROWS_AS(chord_arc_ratio(CurveTrace({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}), 0, 2), DomainError);
}

TEST_CASE("bilipschitz profile") {
    const auto pairs = anchored_pairs(0.0);
    CHECK(pairs.size() >= 20);
    const BilipschitzProfile id = bilipschitz_profile(MapEvaluator::identity(), pairs);
    CHECK(id.lower == Approx(1.0).epsilon(1e-12));
    CHECK(id.upper == Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(id.blowup_exponent.has_value());

    const BilipschitzProfile two = bilipschitz_profile(MapEvaluator::affine(2.0, 0.0), pairs);
    CHECK(two.lower == Approx(2.0).epsilon(1e-12));
    CHECK(two.upper == Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(two.blowup_exponent.has_value());

    const BilipschitzProfile p2 = bilipschitz_profile(Prop2Map(1.5).evaluator(), pairs);
    REQUIRE(p2.blowup_exponent.has_value());
    CHECK(*p2.blowup_exponent == Approx(1.0 / 1.5 - 1.0).epsilon(0.01));
    CHECK_THROWS_AS(bilipschitz_profile(MapEvaluator::identity(), {{1.0, 1.0}}), DomainError);
}

TEST_CASE("curve Cauchy operator") {
    SUBCASE("line trace converges to one half at first order") {
        double prev_err = 0.0;
        for (std::size_t n : {256, 512, 1024}) {
            const double v = curve_cauchy_operator(trace_curve(MapEvaluator::identity(), 8.0, n), 1e-8, 5000).norm;
            const double err = std::abs(v - 0.5);
            CHECK(v < 0.5);
            if (prev_err > 0) CHECK(err <= 0.6 * prev_err);
            prev_err = err;
        }
    }

    SUBCASE("invariant under translation and rotation") {
        const CurveTrace sine = trace_curve(graph_of_sine(), 8.0, 256);
        const double base = curve_cauchy_operator(sine, 1e-6).norm;
        CHECK(curve_cauchy_operator(sine.transformed(1.0, {4, -2}), 1e-6).norm == Approx(base).epsilon(1e-10));
        CHECK(curve_cauchy_operator(sine.transformed(std::polar(1.0, 1.1), 0.0), 1e-6).norm == Approx(base).epsilon(1e-10));
    }

    CHECK_THROWS_AS(curve_cauchy_operator(CurveTrace({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 2.0})), DomainError);
}

TEST_CASE("regularity") {
    const CurveTrace line = trace_curve(MapEvaluator::identity(), 8.0, 257);
    CHECK(regularity_check(line) == Approx(2.0).epsilon(0.02));
    CHECK(length_in_disc(line, 0.0, 1.0) == Approx(2.0).epsilon(1e-12));
    CHECK(length_in_disc(line, {0.0, 0.6}, 1.0) == Approx(1.6).epsilon(1e-12));

    const CurveTrace sine = trace_curve(graph_of_sine(), 8.0, 512);
    const double total = sine.total_length();
    const double dense = oracle::regularity_dense([](double x) { return cplx(x, std::sin(x)); }, 8.0, 4096, 8,
                                                  4.0 * total / 511);
    CHECK(regularity_check(sine) == Approx(dense).epsilon(0.02));
    CHECK(regularity_check(sine.transformed(3.0, 0.0)) == Approx(regularity_check(sine)).epsilon(1e-10));
}

TEST_CASE("self intersection") {
    CHECK_FALSE(has_self_intersection(trace_curve(graph_of_sine(), 8.0, 128)));
    MapEvaluator loop;
    loop.fn = [](cplx z) {
        const double t = z.real();
        return cplx(t * t, t * t * t - t);
    };
    CHECK(has_self_intersection(trace_curve(loop, 2.0, 128)));
}

TEST_CASE("Beurling-Ahlfors extension") {
    SUBCASE("identity extends to the identity") {
        const BAExtension e = ba_extension(BoundaryMap::identity());
        for (cplx z : {cplx(0.3, 0.7), cplx(-4, -2), cplx(5, 0.1)}) {
            CHECK(std::abs(e(z) - z) <= 1e-13 * std::abs(z));
            CHECK(std::abs(e.dilatation(z)) <= 1e-13);
        }
        CHECK(e(2.5) == cplx(2.5));
        CHECK(e.evaluator().provenance == Provenance::extension);
    }

    SUBCASE("closed-form Jacobian agrees with finite differences") {
        for (const BoundaryMap& f : {wavy(), BoundaryMap::power(1.5)}) {
            const BAExtension e = ba_extension(f);
            for (cplx z : {cplx(0.3, 0.7), cplx(-2, -1.5), cplx(1.2, 0.05), cplx(-0.4, 3)}) {
                const Jacobian a = e.jacobian(z), b = jacobian_fd([&](cplx w) { return e(w); }, z, 1e-4);
                CHECK(std::abs(a.d - b.d) <= 1e-7 * std::abs(a.d));
                CHECK(std::abs(a.dbar - b.dbar) <= 1e-7 * std::abs(a.d));
            }
        }
    }

    SUBCASE("scale equivariance") {
        const double lambda = 2.5;
        const BAExtension e = ba_extension(wavy()), el = ba_extension(wavy(lambda));
        for (cplx z : {cplx(0.3, 0.7), cplx(-1, -0.4), cplx(1.7, 2.2)}) {
            CHECK(std::abs(el(z) - e(lambda * z) / lambda) <= 1e-12 * std::abs(el(z)));
            CHECK(std::abs(el.dilatation(z) - e.dilatation(lambda * z)) <= 1e-12);
        }
    }

    SUBCASE("bilipschitz boundary data gives |mu| bounded away from 1") {
        const BAExtension e = ba_extension(wavy());
        double s64 = 0, s128 = 0;
        for (const cplx& v : sample_dilatation(e, Grid(8.0, 64)).values) s64 = std::max(s64, std::abs(v));
        for (const cplx& v : sample_dilatation(e, Grid(8.0, 128)).values) s128 = std::max(s128, std::abs(v));
        CHECK(s64 < 0.5);
        CHECK(s128 < 0.5);
        CHECK(s128 == Approx(s64).epsilon(0.1));
    }

    SUBCASE("sampled boundary maps") {
        const LineFunction f = LineFunction::sample(8.0, 256, [](double x) { return cplx(x + 0.3 * std::sin(x)); });
        const BAExtension e = ba_extension(f);
        CHECK(std::abs(e({0.4, 1.0}) - ba_extension(wavy())({0.4, 1.0})) <= 1e-3);
        const LineFunction bad = LineFunction::sample(8.0, 64, [](double x) { return cplx(std::sin(x)); });
        CHECK_THROWS_AS(ba_extension(bad), DomainError);
        CHECK_THROWS_AS(BoundaryMap::power(0.5), DomainError);
    }

    SUBCASE("truncated dilatation field") {
        const ComplexField mu = sample_dilatation(ba_extension(BoundaryMap::power(1.5)), Grid(8.0, 64), 3.0);
        CHECK(mu.support_radius == 3.0);
        CHECK_NOTHROW(mu.require_support());
    }
}

TEST_CASE("closed-form non-bilipschitz map") {
    const double K = 1.5;
    const Prop2Map m(K);
    CHECK_THROWS_AS(Prop2Map(2.0), DomainError);
    CHECK_THROWS_AS(Prop2Map(1.0), DomainError);
    CHECK_THROWS_AS(prop2_map(2.5, Grid(8.0, 32)), DomainError);

    for (double x : {-3.0, -0.01, 0.5, 7.0}) {
        const cplx want(std::copysign(std::pow(std::abs(x), 1 / K), x));
        CHECK(std::abs(m(x) - want) <= 1e-14 * std::abs(want));
    }
    CHECK(m(0.0) == cplx{});

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(0.01, 10), ut(-oracle::pi, oracle::pi);
    for (int i = 0; i < 200; ++i) {
        const cplx z = std::polar(ur(rng), ut(rng));
        CHECK(std::abs(m(z)) == Approx(std::pow(std::abs(z), 1 / K)).epsilon(1e-13));
        if (Prop2Map::sector_of(z) == Prop2Map::Sector::upper || Prop2Map::sector_of(z) == Prop2Map::Sector::lower)
            CHECK(std::abs(m.dilatation(z)) == Approx(oracle::prop2_mu_modulus(K, z)).epsilon(1e-7));
    }
    CHECK(std::abs(m.dilatation({0, 1})) == Approx(oracle::prop2_c_15).epsilon(1e-9));
    CHECK(m.expected_dilatation_modulus() == Approx(oracle::prop2_c_15).epsilon(1e-9));

    SUBCASE("Carleson norm of the truncated density is stable as the box doubles") {
        std::vector<double> v;
        for (auto [L, n] : {std::pair{8.0, std::size_t(128)}, std::pair{16.0, std::size_t(256)}}) {
            const Prop2Result r = prop2_map(K, Grid(L, n));
            v.push_back(carleson_norm(carleson_density(truncate_to_disc(r.mu, L / 2))).norm);
        }
        CHECK(v[1] == Approx(v[0]).epsilon(0.1));
    }

    SUBCASE("truncate_to_disc") {
        const Prop2Result r = prop2_map(K, Grid(8.0, 32));
        const ComplexField t = truncate_to_disc(r.mu, 2.0);
        for (std::size_t k = 0; k < 32; ++k)
            for (std::size_t j = 0; j < 32; ++j)
                CHECK(t.at(j, k) == (std::abs(t.grid.point(j, k)) <= 2.0 ? r.mu.at(j, k) : cplx{}));
        CHECK(t.support_radius == 2.0);
    }
}
