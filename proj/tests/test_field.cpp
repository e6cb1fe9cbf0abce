#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qcircle/errors.hpp"
#include "qcircle/field.hpp"

using namespace qcircle;
using doctest::Approx;

namespace {

ComplexField sample(const Grid& g, const std::function<cplx(cplx)>& fn) {
    ComplexField f(g);
    for (std::size_t k = 0; k < g.n(); ++k)
        for (std::size_t j = 0; j < g.n(); ++j) f.at(j, k) = fn(g.point(j, k));
    return f;
}

}  // namespace

TEST_CASE("grid layout") {
    const Grid g(8.0, 64);
    CHECK(g.spacing() == 0.25);
    CHECK(g.x(0) == -8.0 + 0.125);
    CHECK(g.y(63) == 8.0 - 0.125);
    CHECK(g.index(3, 2) == 2 * 64 + 3);
    double min_y = 1e9;
    for (std::size_t k = 0; k < g.n(); ++k) min_y = std::min(min_y, std::abs(g.y(k)));
    CHECK(min_y == g.spacing() / 2);
    CHECK(g.contains_disc({0, 2}, 1));
    CHECK_FALSE(g.contains_disc({7.5, 0}, 1));

    CHECK_THROWS_AS(Grid(8.0, 48), DomainError);
    CHECK_THROWS_AS(Grid(8.0, 8), DomainError);
    CHECK_THROWS_AS(Grid(-1.0, 64), DomainError);
}

TEST_CASE("integrate") {
    const Grid g(8.0, 256);
    CHECK(integrate(ComplexField(g)) == cplx{});

    const auto gauss = sample(g, [](cplx z) { return std::exp(-std::norm(z)); });
    CHECK(std::abs(integrate(gauss) - oracle::pi) <= 1e-10);

    const Grid fine(8.0, 1024);
    CHECK(integrate(indicator_ball(fine, 0.0, 1.0)).real() == Approx(oracle::pi).epsilon(0.02));

    SUBCASE("linearity") {
        const auto f = bandlimited_noise(g, 1, 0.2), h = indicator_ball(g, {1, 1}, 2);
        const cplx a(0.3, -1.2), b(2.0, 0.5);
        const cplx lhs = integrate(a * f + b * h), rhs = a * integrate(f) + b * integrate(h);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
    }

    SUBCASE("second-order convergence on a smooth non-periodic integrand") {
        const double exact = std::pow(std::exp(1.0) - std::exp(-1.0), 2);
        auto err = [&](std::size_t n) {
            const Grid gg(1.0, n);
            return std::abs(integrate(sample(gg, [](cplx z) { return std::exp(z.real() + z.imag()); })).real() - exact);
        };
        CHECK(err(64) / err(128) >= 3.9);
        CHECK(err(128) / err(256) >= 3.9);
    }
}

TEST_CASE("weighted norms") {
    const Grid g(8.0, 512);
    for (auto w : {Weight::unweighted, Weight::inv_abs_y, Weight::abs_y}) CHECK(norm(ComplexField(g), w) == 0.0);

    SUBCASE("ball bracket against the radial oracle") {
        for (double r : {0.5, 1.0, 2.0}) {
            const auto f = indicator_ball(g, {0.3, 2 * r}, r);
            const double m = std::pow(norm(f, Weight::inv_abs_y), 2);
            CHECK(m >= oracle::pi * r / 3);
            CHECK(m <= oracle::pi * r);
            CHECK(m == Approx(oracle::ball_inv_y_integral(r)).epsilon(0.03));
        }
    }

    SUBCASE("homogeneity") {
        const auto f = bandlimited_noise(g, 4, 0.1);
        for (auto w : {Weight::unweighted, Weight::inv_abs_y, Weight::abs_y})
            CHECK(norm(cplx(-2.5, 1.0) * f, w) == Approx(std::abs(cplx(-2.5, 1.0)) * norm(f, w)).epsilon(1e-12));
    }

    SUBCASE("weight ordering away from the axis") {
        const auto f = multiply(bandlimited_noise(g, 2, 0.1), indicator_ball(g, {0, 3}, 2, 0.5));
        CHECK(norm(f, Weight::inv_abs_y) <= norm(f));
        CHECK(norm(f) <= norm(f, Weight::abs_y));
    }

    SUBCASE("inner product") {
        const auto f = bandlimited_noise(g, 5, 0.1);
        CHECK(inner(f, f, Weight::inv_abs_y).real() == Approx(std::pow(norm(f, Weight::inv_abs_y), 2)).epsilon(1e-12));
    }
}

TEST_CASE("indicator_ball") {
    const Grid g(8.0, 128);
    const auto sharp = indicator_ball(g, {1, -2}, 1.5);
    for (const cplx& v : sharp.values) CHECK((v == cplx(0) || v == cplx(1)));

    const auto soft = indicator_ball(g, {1, -2}, 1.5, 0.5);
    for (std::size_t k = 0; k < g.n(); ++k)
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double d = std::abs(g.point(j, k) - cplx(1, -2));
            const double v = soft.at(j, k).real();
            CHECK(soft.at(j, k).imag() == 0.0);
            CHECK((v >= 0.0 && v <= 1.0));
            if (d <= 1.0) CHECK(v == 1.0);
            if (d >= 1.5) CHECK(v == 0.0);
        }
    CHECK(soft.support_radius.has_value());
    CHECK_NOTHROW(soft.require_support());
    CHECK_THROWS_AS(indicator_ball(g, {7.5, 0}, 1), DomainError);
    CHECK_THROWS_AS(indicator_ball(g, 0.0, 1, 2), DomainError);
}

TEST_CASE("bandlimited_noise") {
    const Grid g(8.0, 128);
    const auto a = bandlimited_noise(g, 42, 0.2), b = bandlimited_noise(g, 42, 0.2), c = bandlimited_noise(g, 43, 0.2);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(std::abs(integrate(a)) <= 1e-12);
    CHECK(norm(a) != norm(c));
    double ms = 0;
    for (const cplx& v : a.values) ms += std::norm(v);
    CHECK(ms / double(g.size()) == Approx(1.0).epsilon(1e-12));

    SUBCASE("Fourier support by direct DFT") {
        const Grid s(8.0, 32);
        const auto f = bandlimited_noise(s, 3, 0.25);
        const double n = 32.0;
        double inside = 0, outside = 0;
        for (int q = -16; q < 16; ++q)
            for (int p = -16; p < 16; ++p) {
                cplx c{};
                for (std::size_t k = 0; k < 32; ++k)
                    for (std::size_t j = 0; j < 32; ++j)
                        c += f.at(j, k) * std::polar(1.0, -2 * oracle::pi * (p * double(j) + q * double(k)) / n);
                (std::hypot(p, q) <= 0.25 * n ? inside : outside) += std::norm(c);
            }
        CHECK(outside <= 1e-24 * inside);
    }
    CHECK_THROWS_AS(bandlimited_noise(g, 1, 0.0), DomainError);
    CHECK_THROWS_AS(bandlimited_noise(g, 1, 0.6), DomainError);
}

TEST_CASE("finite differences of polynomials") {
    const Grid g(2.0, 64);
    const auto f = sample(g, [](cplx z) { return std::conj(z) * std::conj(z) + z * z * z; });
    const auto want_dbar = sample(g, [](cplx z) { return 2.0 * std::conj(z); });
    const auto want_d = sample(g, [](cplx z) { return 3.0 * z * z; });
    for (int order : {4, 6, 8}) {
        CHECK(relative_error_interior(dbar_fd(f, order), want_dbar, 4) <= 1e-12);
        CHECK(relative_error_interior(d_fd(f, order), want_d, 4) <= 1e-12);
    }
    CHECK(dbar_fd(f, 8).at(0, 10) == cplx{});
    CHECK_THROWS_AS(d_fd(f, 3), DomainError);
}

TEST_CASE("validation") {
    const Grid g(8.0, 32);
    ComplexField f(g);
    f.support_radius = 2.0;
    f.at(0, 0) = 1.0;
    CHECK_THROWS_AS(f.require_support(), SupportError);
    f.at(0, 0) = std::nan("");
    CHECK_FALSE(f.all_finite());
    CHECK_THROWS_AS(f.require_finite("test"), DomainError);
    CHECK_THROWS_AS(ComplexField(g, std::vector<cplx>(10)), DomainError);
    CHECK_THROWS_AS(ComplexField(g) + ComplexField(Grid(8.0, 64)), DomainError);
}

TEST_CASE("field I/O") {
    namespace fs = std::filesystem;
    fs::create_directories(QCIRCLE_TEST_TMP);
    const Grid g(4.0, 32);
    const auto f = bandlimited_noise(g, 9, 0.3);
    const std::string path = std::string(QCIRCLE_TEST_TMP) + "/f.bin";
    write_binary(f, path);
    CHECK(fs::file_size(path) == 3 * 8 + g.size() * 16);
    const auto r = read_binary(path);
    CHECK(r.grid == g);
    CHECK(r.values == f.values);

    std::ostringstream os;
    write_csv(indicator_ball(g, 0.0, 1.0), os);
    std::istringstream is(os.str());
    std::string header, first;
    std::getline(is, header);
    std::getline(is, first);
    CHECK(header == "x,y,re,im");
    CHECK(first.rfind("-3.875,-3.875,", 0) == 0);

    std::ofstream(path, std::ios::binary) << "junk";
    CHECK_THROWS_AS(read_binary(path), DomainError);
}
