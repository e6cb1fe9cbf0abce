#include "qcircle/transforms.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "qcircle/errors.hpp"

namespace qcircle {

namespace {
bool is_pow2(long v) { return v > 0 && (v & (v - 1)) == 0; }

void require_vanishing_frame(const ComplexField& f) {
    const std::size_t n = f.grid.n();
    for (std::size_t i = 0; i < n; ++i) {
        if (f.at(i, 0) != cplx{} || f.at(i, n - 1) != cplx{} || f.at(0, i) != cplx{} || f.at(n - 1, i) != cplx{})
            throw SupportError("field must vanish on the boundary cells of the grid (compact support)");
    }
}
}  // namespace

SpectralPlan::SpectralPlan(const Grid& grid, int padding_factor)
    : grid_(grid),
      p_(padding_factor),
      padded_(is_pow2(padding_factor) && padding_factor >= 2
                  ? Grid(grid.half_width() * padding_factor, grid.n() * static_cast<std::size_t>(padding_factor))
                  : throw DomainError("padding factor must be a power of two >= 2")),
      offset_((static_cast<std::size_t>(padding_factor) - 1) * grid.n() / 2) {
    const std::size_t N = padded_.n();
    const double h = grid_.spacing();
    xi_.resize(N);
    for (std::size_t i = 0; i < N; ++i)
        xi_[i] = static_cast<double>(detail::freq_index(i, N)) / (static_cast<double>(N) * h);
    fft_ = std::make_unique<detail::Fft2d>(N);
}

SpectralPlan::~SpectralPlan() = default;

cplx SpectralPlan::multiplier(Op op, std::size_t p, std::size_t q) const {
    const cplx xi = frequency(p, q);
    if (xi == cplx{}) return {};
    switch (op) {
        case Op::beurling: return std::conj(xi) / xi;
        case Op::beurling_adjoint: return xi / std::conj(xi);
        case Op::cauchy: return 1.0 / (cplx(0.0, std::numbers::pi) * xi);
    }
    return {};
}

ComplexField SpectralPlan::extend(const ComplexField& f) const {
    if (f.grid != grid_) throw DomainError("extend: field is not on the plan grid");
    ComplexField out(padded_);
    const std::size_t n = grid_.n();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) out.at(j + offset_, k + offset_) = f.at(j, k);
    out.support_radius = f.support_radius;
    return out;
}

ComplexField SpectralPlan::restrict(const ComplexField& f) const {
    if (f.grid != padded_) throw DomainError("restrict: field is not on the padded grid");
    ComplexField out(grid_);
    const std::size_t n = grid_.n();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) out.at(j, k) = f.at(j + offset_, k + offset_);
    return out;
}

std::vector<cplx> SpectralPlan::transform_padded(std::vector<cplx> a, Op op) const {
    const std::size_t N = padded_.n();
    fft_->forward(a);
    for (std::size_t q = 0; q < N; ++q)
        for (std::size_t p = 0; p < N; ++p) a[q * N + p] *= multiplier(op, p, q);
    fft_->backward(a);
    return a;
}

ComplexField SpectralPlan::apply(const ComplexField& f, Op op) const {
    f.require_finite("spectral transform input");
    const bool on_padded = f.grid == padded_;
    if (!on_padded && f.grid != grid_) throw DomainError("field is not on the plan grid");
    if (!on_padded) require_vanishing_frame(f);
    const ComplexField src = on_padded ? f : extend(f);

    std::vector<cplx> a = transform_padded(src.values, op);
    if (op == Op::cauchy) {
        // The periodic kernel of 1/(pi z) is 1/(pi z) - conj(z)/A + O(|z|^3); undo the
        // linear term so that dbar(Tf) = f holds exactly rather than f - mean.
        const std::size_t N = padded_.n();
        const double area = padded_.cell_area();
        const double A = std::pow(2.0 * padded_.half_width(), 2);
        cplx M0{}, M1bar{};
        for (std::size_t q = 0; q < N; ++q)
            for (std::size_t p = 0; p < N; ++p) {
                const cplx v = src.values[q * N + p];
                if (v == cplx{}) continue;
                M0 += v;
                M1bar += std::conj(padded_.point(p, q)) * v;
            }
        M0 *= area;
        M1bar *= area;
        for (std::size_t q = 0; q < N; ++q)
            for (std::size_t p = 0; p < N; ++p) a[q * N + p] += (std::conj(padded_.point(p, q)) * M0 - M1bar) / A;
    }
    ComplexField out(padded_, std::move(a));
    return on_padded ? out : restrict(out);
}

ComplexField SpectralPlan::beurling(const ComplexField& f) const { return apply(f, Op::beurling); }
ComplexField SpectralPlan::beurling_adjoint(const ComplexField& f) const { return apply(f, Op::beurling_adjoint); }
ComplexField SpectralPlan::cauchy_plane(const ComplexField& f) const { return apply(f, Op::cauchy); }

std::vector<cplx> cauchy_plane_at(const ComplexField& f, std::span<const cplx> points) {
    f.require_finite("cauchy_plane_at input");
    const Grid& g = f.grid;
    std::vector<cplx> w;
    std::vector<cplx> c;
    for (std::size_t k = 0; k < g.n(); ++k)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (f.at(j, k) != cplx{}) {
                w.push_back(g.point(j, k));
                c.push_back(f.at(j, k) * (-g.cell_area() / std::numbers::pi));
            }
    const double tiny = 1e-9 * g.spacing();
    std::vector<cplx> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const cplx z = points[i];
        cplx s{};
        for (std::size_t m = 0; m < w.size(); ++m) {
            const cplx d = w[m] - z;
            if (std::abs(d) < tiny) continue;
            s += c[m] / d;
        }
        out[i] = s;
    }
    return out;
}

}  // namespace qcircle
