#include "qcircle/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fft.hpp"
#include "qcircle/errors.hpp"
#include "random.hpp"

namespace qcircle {

namespace {
bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const ComplexField& a, const ComplexField& b) {
    if (a.grid != b.grid) throw DomainError("fields live on different grids");
}

double weight_at(const Grid& g, std::size_t k, Weight w) {
    switch (w) {
        case Weight::unweighted: return 1.0;
        case Weight::inv_abs_y: return 1.0 / std::abs(g.y(k));
        case Weight::abs_y: return std::abs(g.y(k));
    }
    return 1.0;
}

// C-infinity step: 0 at s <= 0, 1 at s >= 1.
double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}
}  // namespace

Grid::Grid(double half_width, std::size_t n) : L_(half_width), n_(n), h_(0.0) {
    if (!(std::isfinite(half_width) && half_width > 0.0)) throw DomainError("grid half-width must be positive");
    if (n < 16 || !is_pow2(n)) throw DomainError("grid size must be a power of two >= 16");
    h_ = 2.0 * L_ / static_cast<double>(n_);
}

bool Grid::contains_disc(cplx c, double r) const {
    return std::abs(c.real()) + r <= L_ && std::abs(c.imag()) + r <= L_;
}

ComplexField::ComplexField(const Grid& g) : grid(g), values(g.size(), cplx{}) {}

ComplexField::ComplexField(const Grid& g, std::vector<cplx> v, std::optional<double> support)
    : grid(g), values(std::move(v)), support_radius(support) {
    if (values.size() != grid.size()) throw DomainError("field size does not match grid");
}

bool ComplexField::all_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

void ComplexField::require_finite(const char* what) const {
    if (!all_finite()) throw DomainError(std::string(what) + ": non-finite sample");
}

void ComplexField::require_support() const {
    if (!support_radius) return;
    const double R = *support_radius;
    for (std::size_t k = 0; k < grid.n(); ++k)
        for (std::size_t j = 0; j < grid.n(); ++j)
            if (std::abs(grid.point(j, k)) > R && at(j, k) != cplx{})
                throw SupportError("field is nonzero outside its declared support radius");
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    if (support_radius && o.support_radius)
        support_radius = std::max(*support_radius, *o.support_radius);
    else
        support_radius.reset();
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    if (support_radius && o.support_radius)
        support_radius = std::max(*support_radius, *o.support_radius);
    else
        support_radius.reset();
    return *this;
}

ComplexField& ComplexField::operator*=(cplx s) {
    for (auto& v : values) v *= s;
    return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

ComplexField multiply(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    ComplexField out(a.grid);
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
    if (a.support_radius && b.support_radius)
        out.support_radius = std::min(*a.support_radius, *b.support_radius);
    else if (a.support_radius)
        out.support_radius = a.support_radius;
    else
        out.support_radius = b.support_radius;
    return out;
}

const char* to_string(Weight w) {
    switch (w) {
        case Weight::unweighted: return "unweighted";
        case Weight::inv_abs_y: return "inv_abs_y";
        case Weight::abs_y: return "abs_y";
    }
    return "?";
}

cplx integrate(const ComplexField& f) {
    cplx s{};
    for (const auto& v : f.values) s += v;
    return s * f.grid.cell_area();
}

double norm(const ComplexField& f, Weight w) {
    const std::size_t n = f.grid.n();
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::norm(f.at(j, k));
        s += row * weight_at(f.grid, k, w);
    }
    return std::sqrt(s * f.grid.cell_area());
}

cplx inner(const ComplexField& f, const ComplexField& g, Weight w) {
    require_same_grid(f, g);
    const std::size_t n = f.grid.n();
    cplx s{};
    for (std::size_t k = 0; k < n; ++k) {
        cplx row{};
        for (std::size_t j = 0; j < n; ++j) row += f.at(j, k) * std::conj(g.at(j, k));
        s += row * weight_at(f.grid, k, w);
    }
    return s * f.grid.cell_area();
}

ComplexField indicator_ball(const Grid& grid, cplx center, double radius, double mollify_width) {
    if (!(radius > 0.0) || !(mollify_width >= 0.0) || mollify_width > radius)
        throw DomainError("indicator_ball: need radius > 0 and 0 <= mollify_width <= radius");
    if (!grid.contains_disc(center, radius)) throw DomainError("indicator_ball: ball escapes the grid domain");
    ComplexField f(grid);
    f.support_radius = std::abs(center) + radius;
    for (std::size_t k = 0; k < grid.n(); ++k) {
        for (std::size_t j = 0; j < grid.n(); ++j) {
            const double d = std::abs(grid.point(j, k) - center);
            double v;
            if (mollify_width == 0.0)
                v = d <= radius ? 1.0 : 0.0;
            else
                v = smooth_step((radius - d) / mollify_width);
            f.at(j, k) = v;
        }
    }
    return f;
}

ComplexField bandlimited_noise(const Grid& grid, std::uint64_t seed, double cutoff) {
    if (!(cutoff > 0.0 && cutoff <= 0.5)) throw DomainError("bandlimited_noise: cutoff must lie in (0, 1/2]");
    const std::size_t n = grid.n();
    const double kmax = cutoff * static_cast<double>(n);
    detail::NormalSource rng(seed);
    std::vector<cplx> a(n * n, cplx{});
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t p = 0; p < n; ++p) {
            const double kx = static_cast<double>(detail::freq_index(p, n));
            const double ky = static_cast<double>(detail::freq_index(q, n));
            if ((kx == 0.0 && ky == 0.0) || std::hypot(kx, ky) > kmax) continue;
            const double re = rng.normal();
            const double im = rng.normal();
            a[q * n + p] = {re, im};
        }
    }
    detail::Fft2d fft(n);
    fft.backward(a);
    double ss = 0.0;
    for (const auto& v : a) ss += std::norm(v);
    const double rms = std::sqrt(ss / static_cast<double>(a.size()));
    if (rms > 0.0)
        for (auto& v : a) v /= rms;
    return ComplexField(grid, std::move(a));
}

ComplexField windowed_noise(const Grid& grid, std::uint64_t seed, double cutoff, double radius) {
    ComplexField w = indicator_ball(grid, 0.0, radius, 0.5 * radius);
    return multiply(bandlimited_noise(grid, seed, cutoff), w);
}

namespace {
std::vector<double> fd_coefficients(int order) {
    switch (order) {
        case 2: return {0.5};
        case 4: return {2.0 / 3.0, -1.0 / 12.0};
        case 6: return {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
        case 8: return {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
        default: throw DomainError("finite differences: order must be 2, 4, 6 or 8");
    }
}

// sign = -1 gives d, +1 gives dbar: (d_x + sign * i d_y) / 2
ComplexField wirtinger_fd(const ComplexField& f, int order, double sign) {
    const auto c = fd_coefficients(order);
    const std::size_t r = c.size();
    const std::size_t n = f.grid.n();
    const double h = f.grid.spacing();
    ComplexField out(f.grid);
    const cplx iy(0.0, sign);
    for (std::size_t k = r; k + r < n; ++k) {
        for (std::size_t j = r; j + r < n; ++j) {
            cplx dx{}, dy{};
            for (std::size_t m = 1; m <= r; ++m) {
                dx += c[m - 1] * (f.at(j + m, k) - f.at(j - m, k));
                dy += c[m - 1] * (f.at(j, k + m) - f.at(j, k - m));
            }
            out.at(j, k) = 0.5 * (dx + iy * dy) / h;
        }
    }
    return out;
}
}  // namespace

ComplexField d_fd(const ComplexField& f, int order) { return wirtinger_fd(f, order, -1.0); }
ComplexField dbar_fd(const ComplexField& f, int order) { return wirtinger_fd(f, order, 1.0); }

double relative_error_interior(const ComplexField& a, const ComplexField& b, std::size_t margin) {
    require_same_grid(a, b);
    const std::size_t n = a.grid.n();
    double num = 0.0, den = 0.0;
    for (std::size_t k = margin; k + margin < n; ++k)
        for (std::size_t j = margin; j + margin < n; ++j) {
            num += std::norm(a.at(j, k) - b.at(j, k));
            den += std::norm(b.at(j, k));
        }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace qcircle
