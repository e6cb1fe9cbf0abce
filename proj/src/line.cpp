#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "qcircle/errors.hpp"
#include "qcircle/transforms.hpp"

namespace qcircle {

namespace {
const cplx kTwoPiI(0.0, 2.0 * std::numbers::pi);

void require_off_line(const LineFunction& f, std::span<const cplx> points) {
    const double d = f.spacing();
    for (const cplx& z : points)
        if (!(std::abs(z.imag()) >= d))
            throw DomainError("line Cauchy integral: evaluation point closer to the real axis than one spacing");
}
}  // namespace

LineFunction::LineFunction(double half_width, std::vector<cplx> v, std::optional<double> supp)
    : X(half_width), values(std::move(v)), support(supp) {
    if (!(half_width > 0.0) || values.size() < 2) throw DomainError("LineFunction: need X > 0 and >= 2 samples");
    for (const auto& c : values)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("LineFunction: non-finite sample");
    if (support) {
        if (*support > X / 2) throw SupportError("LineFunction: support must lie inside [-X/2, X/2]");
        for (std::size_t i = 0; i < values.size(); ++i)
            if (std::abs(x(i)) > *support && values[i] != cplx{})
                throw SupportError("LineFunction: nonzero sample outside declared support");
    }
}

LineFunction LineFunction::sample(double half_width, std::size_t count, const std::function<cplx(double)>& fn,
                                  std::optional<double> supp) {
    if (count < 2) throw DomainError("LineFunction: need >= 2 samples");
    const double d = 2.0 * half_width / static_cast<double>(count);
    std::vector<cplx> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = -half_width + (static_cast<double>(i) + 0.5) * d;
        v[i] = (supp && std::abs(x) > *supp) ? cplx{} : fn(x);
    }
    return LineFunction(half_width, std::move(v), supp);
}

double LineFunction::norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s * spacing());
}

std::vector<cplx> cauchy_line_extension(const LineFunction& f, std::span<const cplx> points) {
    require_off_line(f, points);
    const double d = f.spacing();
    std::vector<cplx> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        cplx s{};
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f.values[i] != cplx{}) s += f.values[i] / (f.x(i) - points[p]);
        out[p] = s * d / kTwoPiI;
    }
    return out;
}

std::vector<cplx> cauchy_line_derivative(const LineFunction& f, std::span<const cplx> points) {
    require_off_line(f, points);
    const double d = f.spacing();
    std::vector<cplx> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        cplx s{};
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f.values[i] != cplx{}) {
                const cplx r = 1.0 / (f.x(i) - points[p]);
                s += f.values[i] * r * r;
            }
        out[p] = s * d / kTwoPiI;
    }
    return out;
}

LineFunction principal_value_part(const LineFunction& f) {
    const std::size_t m = f.size();
    const std::size_t N = 2 * m;
    const double d = f.spacing();
    std::vector<cplx> a(N, cplx{});
    std::copy(f.values.begin(), f.values.end(), a.begin());
    detail::Fft1d fft(N);
    fft.forward(a);
    for (std::size_t i = 0; i < N; ++i) {
        const long k = detail::freq_index(i, N);
        const bool nyquist = N % 2 == 0 && i == N / 2;
        a[i] *= (k == 0 || nyquist) ? 0.0 : (k > 0 ? 0.5 : -0.5);
    }
    fft.backward(a);

    // (pi/P) cot(pi s/P) = 1/s - (pi^2/(3P^2)) s + ...
    const double P = static_cast<double>(N) * d;
    cplx M0{}, M1{};
    for (std::size_t i = 0; i < m; ++i) {
        M0 += f.values[i];
        M1 += f.x(i) * f.values[i];
    }
    M0 *= d;
    M1 *= d;
    const cplx coef = cplx(0.0, 0.5) * (std::numbers::pi / (3.0 * P * P));
    std::vector<cplx> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = a[i] + coef * (f.x(i) * M0 - M1);
    return LineFunction(f.X, std::move(out));
}

PlemeljPair plemelj_boundary(const LineFunction& f) {
    const LineFunction pv = principal_value_part(f);
    std::vector<cplx> plus(f.size()), minus(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        plus[i] = 0.5 * f.values[i] + pv.values[i];
        minus[i] = -0.5 * f.values[i] + pv.values[i];
    }
    return {LineFunction(f.X, std::move(plus)), LineFunction(f.X, std::move(minus))};
}

std::vector<cplx> boundary_trace(const ComplexField& g, const LineFunction& line) {
    const double off = 0.5 * g.grid.spacing();
    std::vector<cplx> pts;
    pts.reserve(2 * line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
        pts.emplace_back(line.x(i), off);
        pts.emplace_back(line.x(i), -off);
    }
    const auto v = cauchy_plane_at(g, pts);
    std::vector<cplx> out(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) out[i] = 0.5 * (v[2 * i] + v[2 * i + 1]);
    return out;
}

DualitySides duality_sides(const ComplexField& g, const LineFunction& h) {
    const auto trace = boundary_trace(g, h);
    cplx lhs{};
    for (std::size_t i = 0; i < h.size(); ++i) lhs += trace[i] * h.values[i];
    lhs *= h.spacing();

    std::vector<cplx> pts, gv;
    for (std::size_t k = 0; k < g.grid.n(); ++k)
        for (std::size_t j = 0; j < g.grid.n(); ++j)
            if (g.at(j, k) != cplx{}) {
                pts.push_back(g.grid.point(j, k));
                gv.push_back(g.at(j, k));
            }
    const auto ch = cauchy_line_extension(h, pts);
    cplx rhs{};
    for (std::size_t i = 0; i < pts.size(); ++i) rhs += gv[i] * ch[i];
    rhs *= cplx(0.0, 2.0) * g.grid.cell_area();
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return {lhs, rhs, scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0};
}

}  // namespace qcircle
