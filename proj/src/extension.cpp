#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "qcircle/errors.hpp"
#include "qcircle/geometry.hpp"

namespace qcircle {

constexpr double kPi = std::numbers::pi;

BoundaryMap BoundaryMap::identity() {
    return {[](double x) { return x; }, [](double a, double b) { return 0.5 * (a + b); }, "identity"};
}

BoundaryMap BoundaryMap::power(double K) {
    if (!(K >= 1.0) || !std::isfinite(K)) throw DomainError("power boundary map: need K >= 1");
    const double a = 1.0 / K;
    auto F = [a](double x) { return std::pow(std::abs(x), a + 1.0) / (a + 1.0); };
    return {[a](double x) { return x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), a), x); },
            [F](double lo, double hi) { return (F(hi) - F(lo)) / (hi - lo); }, "power"};
}

BoundaryMap BoundaryMap::from_samples(const LineFunction& f) {
    const std::size_t m = f.size();
    auto xs = std::make_shared<std::vector<double>>(m);
    auto ys = std::make_shared<std::vector<double>>(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (f.values[i].imag() != 0.0) throw DomainError("boundary map samples must be real");
        (*xs)[i] = f.x(i);
        (*ys)[i] = f.values[i].real();
        if (i > 0 && !((*ys)[i] > (*ys)[i - 1])) throw DomainError("boundary map samples must increase strictly");
    }
    // Exact antiderivative of the piecewise-linear interpolant, zero at xs[0].
    auto cum = std::make_shared<std::vector<double>>(m, 0.0);
    for (std::size_t i = 1; i < m; ++i)
        (*cum)[i] = (*cum)[i - 1] + 0.5 * ((*ys)[i] + (*ys)[i - 1]) * ((*xs)[i] - (*xs)[i - 1]);

    auto locate = [xs](double x) {
        const auto it = std::upper_bound(xs->begin(), xs->end(), x);
        std::size_t i = it == xs->begin() ? 0 : static_cast<std::size_t>(it - xs->begin()) - 1;
        return std::min(i, xs->size() - 2);
    };
    auto value = [xs, ys, locate](double x) {
        const std::size_t i = locate(x);
        const double s = ((*ys)[i + 1] - (*ys)[i]) / ((*xs)[i + 1] - (*xs)[i]);
        return (*ys)[i] + s * (x - (*xs)[i]);
    };
    auto F = [xs, ys, cum, locate](double x) {
        const std::size_t i = locate(x);
        const double s = ((*ys)[i + 1] - (*ys)[i]) / ((*xs)[i + 1] - (*xs)[i]);
        const double t = x - (*xs)[i];
        return (*cum)[i] + (*ys)[i] * t + 0.5 * s * t * t;
    };
    return {value, [F](double lo, double hi) { return (F(hi) - F(lo)) / (hi - lo); }, "samples"};
}

BAExtension::BAExtension(BoundaryMap f) : f_(std::move(f)) {
    if (!f_.value || !f_.average) throw DomainError("BA extension: incomplete boundary map");
}

namespace {
struct Upper {
    cplx rho, rho_x, rho_y;
};

Upper upper_half(const BoundaryMap& f, double x, double y) {
    const double fp = f.value(x + y), fm = f.value(x - y), f0 = f.value(x);
    const double u = f.average(x - y, x + y);
    const double v = f.average(x, x + y) - f.average(x - y, x);
    const double ux = (fp - fm) / (2.0 * y);
    const double uy = ((fp - u) + (fm - u)) / (2.0 * y);
    const double vx = ((fp - f0) + (fm - f0)) / y;
    const double vy = (fp - fm) / y - v / y;
    return {{u, v}, {ux, vx}, {uy, vy}};
}
}  // namespace

cplx BAExtension::operator()(cplx z) const {
    const double x = z.real(), y = z.imag();
    if (y == 0.0) return f_.value(x);
    if (y > 0.0) return upper_half(f_, x, y).rho;
    return std::conj(upper_half(f_, x, -y).rho);
}

Jacobian BAExtension::jacobian(cplx z) const {
    const double x = z.real(), y = z.imag();
    if (y == 0.0) throw DomainError("BA extension: Jacobian is not evaluated on the real axis");
    cplx rx, ry;
    if (y > 0.0) {
        const Upper u = upper_half(f_, x, y);
        rx = u.rho_x;
        ry = u.rho_y;
    } else {
        const Upper u = upper_half(f_, x, -y);
        rx = std::conj(u.rho_x);
        ry = -std::conj(u.rho_y);
    }
    const cplx I(0.0, 1.0);
    return {0.5 * (rx - I * ry), 0.5 * (rx + I * ry)};
}

MapEvaluator BAExtension::evaluator() const {
    auto self = std::make_shared<BAExtension>(*this);
    return {[self](cplx z) { return (*self)(z); }, Provenance::extension,
            "Beurling-Ahlfors extension of " + f_.name + " boundary map"};
}

BAExtension ba_extension(const BoundaryMap& f) { return BAExtension(f); }
BAExtension ba_extension(const LineFunction& f) { return BAExtension(BoundaryMap::from_samples(f)); }

ComplexField sample_dilatation(const BAExtension& ext, const Grid& grid, std::optional<double> truncation_radius) {
    ComplexField mu(grid);
    for (std::size_t k = 0; k < grid.n(); ++k)
        for (std::size_t j = 0; j < grid.n(); ++j) {
            const cplx z = grid.point(j, k);
            if (truncation_radius && std::abs(z) > *truncation_radius) continue;
            mu.at(j, k) = ext.dilatation(z);
        }
    mu.support_radius = truncation_radius;
    mu.require_finite("BA dilatation");
    return mu;
}

Jacobian jacobian_fd(const std::function<cplx(cplx)>& rho, cplx z, double step) {
    const double d = step * std::max(std::abs(z), 1.0);
    auto diff = [&](cplx e) {
        return (-rho(z + 2.0 * e) + 8.0 * rho(z + e) - 8.0 * rho(z - e) + rho(z - 2.0 * e)) / (12.0 * d);
    };
    const cplx rx = diff(cplx(d, 0.0));
    const cplx ry = diff(cplx(0.0, d));
    const cplx I(0.0, 1.0);
    return {0.5 * (rx - I * ry), 0.5 * (rx + I * ry)};
}

cplx dilatation_fd(const std::function<cplx(cplx)>& rho, cplx z, double step) {
    return jacobian_fd(rho, z, step).mu();
}

Prop2Map::Prop2Map(double K) : K_(K) {
    if (!(K > 1.0 && K < 2.0)) throw DomainError("prop2 map: K must lie in (1, 2)");
}

Prop2Map::Sector Prop2Map::sector_of(cplx z) {
    const double x = z.real(), y = z.imag();
    if (x > 0.0 && std::abs(y) < x) return Sector::right;
    if (x < 0.0 && std::abs(y) < -x) return Sector::left;
    return y >= 0.0 ? Sector::upper : Sector::lower;
}

cplx Prop2Map::evaluate_branch(cplx z, Sector s) const {
    const double a = 1.0 / K_;
    const double alpha = 2.0 - a;
    const double r = std::pow(std::abs(z), a);
    switch (s) {
        case Sector::right: return std::polar(r, a * std::arg(z));
        case Sector::left: return -std::polar(r, a * std::arg(-z));
        case Sector::upper: return std::polar(r, a * kPi / 4 + alpha * (std::arg(z) - kPi / 4));
        case Sector::lower: return std::polar(r, -a * kPi / 4 + alpha * (std::arg(z) + kPi / 4));
    }
    return {};
}

cplx Prop2Map::operator()(cplx z) const {
    if (z == cplx{}) return {};
    return evaluate_branch(z, sector_of(z));
}

MapEvaluator Prop2Map::evaluator() const {
    const Prop2Map self = *this;
    return {[self](cplx z) { return self(z); }, Provenance::closed_form,
            "|rho(z)| = |z|^{1/K}, piecewise-linear argument, K = " + std::to_string(K_)};
}

Jacobian Prop2Map::jacobian(cplx z, double step) const {
    if (z == cplx{}) throw DomainError("prop2 map: Jacobian undefined at 0");
    const Sector s = sector_of(z);
    const double d = step * std::abs(z);
    auto f = [&](cplx w) { return evaluate_branch(w, s); };
    auto diff = [&](cplx e) { return (-f(z + 2.0 * e) + 8.0 * f(z + e) - 8.0 * f(z - e) + f(z - 2.0 * e)) / (12.0 * d); };
    const cplx rx = diff(cplx(d, 0.0));
    const cplx ry = diff(cplx(0.0, d));
    const cplx I(0.0, 1.0);
    return {0.5 * (rx - I * ry), 0.5 * (rx + I * ry)};
}

cplx Prop2Map::dilatation(cplx z, double step) const { return jacobian(z, step).mu(); }

Prop2Result prop2_map(double K, const Grid& grid) {
    Prop2Map m(K);
    ComplexField mu(grid);
    for (std::size_t k = 0; k < grid.n(); ++k)
        for (std::size_t j = 0; j < grid.n(); ++j) mu.at(j, k) = m.dilatation(grid.point(j, k));
    mu.require_finite("prop2 dilatation");
    return {m, m.evaluator(), std::move(mu)};
}

ComplexField truncate_to_disc(const ComplexField& f, double R) {
    ComplexField out = f;
    for (std::size_t k = 0; k < f.grid.n(); ++k)
        for (std::size_t j = 0; j < f.grid.n(); ++j)
            if (std::abs(f.grid.point(j, k)) > R) out.at(j, k) = cplx{};
    out.support_radius = R;
    return out;
}

ComplexField dbar_field(const std::function<Jacobian(cplx)>& jac, const Grid& grid,
                        std::optional<double> truncation_radius) {
    ComplexField out(grid);
    for (std::size_t k = 0; k < grid.n(); ++k)
        for (std::size_t j = 0; j < grid.n(); ++j) {
            const cplx z = grid.point(j, k);
            if (truncation_radius && std::abs(z) > *truncation_radius) continue;
            out.at(j, k) = jac(z).dbar;
        }
    out.support_radius = truncation_radius;
    out.require_finite("dbar field");
    return out;
}

}  // namespace qcircle
