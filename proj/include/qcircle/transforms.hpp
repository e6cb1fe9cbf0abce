#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qcircle/field.hpp"

namespace qcircle {

namespace detail {
class Fft2d;
}

/// Zero-padded spectral realisation of the plane operators.
///
/// Fields on grid() are embedded in the centre of padded_grid() (side p*n, same
/// spacing), transformed periodically and restricted back. Fields already on
/// padded_grid() are transformed as exact periodic operators with no truncation.
class SpectralPlan {
public:
    enum class Op { beurling, beurling_adjoint, cauchy };

    explicit SpectralPlan(const Grid& grid, int padding_factor = 2);
    ~SpectralPlan();
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    const Grid& grid() const { return grid_; }
    const Grid& padded_grid() const { return padded_; }
    int padding_factor() const { return p_; }

    /// Frequency xi = xi1 + i xi2 of padded bin (p, q), convention e^{-2 pi i x.xi}.
    cplx frequency(std::size_t p, std::size_t q) const { return {xi_[p], xi_[q]}; }
    /// conj(xi)/xi, xi/conj(xi) or 1/(pi i xi); zero at xi = 0.
    cplx multiplier(Op op, std::size_t p, std::size_t q) const;

    ComplexField beurling(const ComplexField& f) const;
    ComplexField beurling_adjoint(const ComplexField& f) const;
    /// Tf with mean-zero gauge; satisfies dbar(Tf) = f and d(Tf) = Sf.
    ComplexField cauchy_plane(const ComplexField& f) const;

    ComplexField extend(const ComplexField& f) const;
    ComplexField restrict(const ComplexField& f) const;

private:
    ComplexField apply(const ComplexField& f, Op op) const;
    std::vector<cplx> transform_padded(std::vector<cplx> a, Op op) const;

    Grid grid_;
    int p_;
    Grid padded_;
    std::size_t offset_;
    std::vector<double> xi_;
    std::unique_ptr<detail::Fft2d> fft_;
};

/// Tf(z) = -(1/pi) sum f(w) h^2 / (w - z) by direct quadrature over the nonzero
/// cells of f. A cell coinciding with z is skipped.
std::vector<cplx> cauchy_plane_at(const ComplexField& f, std::span<const cplx> points);

/// Samples f(x_i), x_i = -X + (i + 1/2) d, d = 2X/m.
struct LineFunction {
    double X = 1.0;
    std::vector<cplx> values;
    std::optional<double> support;  ///< f vanishes for |x| > support

    LineFunction() = default;
    LineFunction(double half_width, std::vector<cplx> v, std::optional<double> supp = std::nullopt);

    static LineFunction sample(double half_width, std::size_t count, const std::function<cplx(double)>& fn,
                               std::optional<double> supp = std::nullopt);

    std::size_t size() const { return values.size(); }
    double spacing() const { return 2.0 * X / static_cast<double>(values.size()); }
    double x(std::size_t i) const { return -X + (static_cast<double>(i) + 0.5) * spacing(); }
    double norm() const;
};

/// C_f(z) = (1/(2 pi i)) sum f(x_i) d / (x_i - z). Requires |Im z| >= d.
std::vector<cplx> cauchy_line_extension(const LineFunction& f, std::span<const cplx> points);
/// C'_f(z) = (1/(2 pi i)) sum f(x_i) d / (x_i - z)^2. Requires |Im z| >= d.
std::vector<cplx> cauchy_line_derivative(const LineFunction& f, std::span<const cplx> points);

/// Principal-value part (1/(2 pi i)) pv int f(t)/(t - x) dt via the multiplier sign(xi)/2
/// on a twice zero-padded line, plus the first-order periodisation correction.
LineFunction principal_value_part(const LineFunction& f);

struct PlemeljPair {
    LineFunction plus;
    LineFunction minus;
};
/// f_+ = f/2 + PV f, f_- = -f/2 + PV f.
PlemeljPair plemelj_boundary(const LineFunction& f);

/// Values of Tg on the line points of `line`, each the average of direct quadrature at
/// x + i h/2 and x - i h/2 (the two grid rows adjacent to the real axis).
std::vector<cplx> boundary_trace(const ComplexField& g, const LineFunction& line);

struct DualitySides {
    cplx lhs;  ///< int (Tg)(x) h(x) dx
    cplx rhs;  ///< 2i int g C_h dm
    double relative_gap;
};
DualitySides duality_sides(const ComplexField& g, const LineFunction& h);

/// Fourier transform of K_h(x) = (2/h) log|(x + h)/x|.
struct KernelTransform {
    double h = 1.0;
    std::vector<double> freq;
    std::vector<cplx> values;
    double sup_abs = 0.0;
};
KernelTransform dq_kernel_transform(double h_step, std::span<const double> freqs);
/// +-[0.05, 3.95] in steps of 0.1 (avoids the integer zeros of e^{2 pi i xi} - 1).
std::vector<double> default_kernel_freqs();

struct KernelShapeFit {
    cplx c;                         ///< fitted constant in c (e^{2 pi i xi} - 1)/|xi|
    double max_relative_deviation;  ///< max |ratio - c| / |c| over the kept frequencies
    std::size_t used;
};
KernelShapeFit fit_kernel_shape(const KernelTransform& kt, double exclude_below = 0.05);

}  // namespace qcircle
