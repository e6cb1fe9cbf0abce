#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qcircle {

using cplx = std::complex<double>;

/// Cell-centred square grid on [-L, L]^2. Samples sit at
/// z_jk = (-L + (j+1/2)h) + i(-L + (k+1/2)h), so |Im z| >= h/2 everywhere.
class Grid {
public:
    Grid(double half_width, std::size_t n);

    double half_width() const { return L_; }
    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ * n_; }
    double spacing() const { return h_; }
    double cell_area() const { return h_ * h_; }
    static constexpr double stagger = 0.5;

    double x(std::size_t j) const { return -L_ + (static_cast<double>(j) + 0.5) * h_; }
    double y(std::size_t k) const { return -L_ + (static_cast<double>(k) + 0.5) * h_; }
    cplx point(std::size_t j, std::size_t k) const { return {x(j), y(k)}; }
    std::size_t index(std::size_t j, std::size_t k) const { return k * n_ + j; }

    /// True when the closed disc lies inside the square.
    bool contains_disc(cplx center, double radius) const;

    bool operator==(const Grid& o) const { return L_ == o.L_ && n_ == o.n_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    double L_;
    std::size_t n_;
    double h_;
};

/// Complex samples on a Grid, row-major (index k*n + j). A declared support
/// radius promises the values vanish for |z| > support_radius.
struct ComplexField {
    Grid grid;
    std::vector<cplx> values;
    std::optional<double> support_radius;

    explicit ComplexField(const Grid& g);
    ComplexField(const Grid& g, std::vector<cplx> v, std::optional<double> support = std::nullopt);

    cplx& at(std::size_t j, std::size_t k) { return values[grid.index(j, k)]; }
    const cplx& at(std::size_t j, std::size_t k) const { return values[grid.index(j, k)]; }

    bool all_finite() const;
    /// Throws DomainError when a value is NaN/Inf.
    void require_finite(const char* what) const;
    /// Throws SupportError when a value outside the declared radius is nonzero.
    void require_support() const;

    ComplexField& operator+=(const ComplexField& o);
    ComplexField& operator-=(const ComplexField& o);
    ComplexField& operator*=(cplx s);
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(cplx s, ComplexField a);
/// Pointwise product.
ComplexField multiply(const ComplexField& a, const ComplexField& b);

enum class Weight { unweighted, inv_abs_y, abs_y };

const char* to_string(Weight w);

cplx integrate(const ComplexField& f);
double norm(const ComplexField& f, Weight w = Weight::unweighted);
/// sum f * conj(g) * w * h^2
cplx inner(const ComplexField& f, const ComplexField& g, Weight w = Weight::unweighted);

/// Sharp (mollify_width == 0) or smoothly ramped indicator of B(center, radius).
/// The ramp is C-infinity, equal to 1 for |z-c| <= radius - width and 0 for |z-c| >= radius.
ComplexField indicator_ball(const Grid& grid, cplx center, double radius, double mollify_width = 0.0);

/// Deterministic random field with Fourier support |xi| <= cutoff * n/(2L), zero mean.
/// Normalised to unit root-mean-square value.
ComplexField bandlimited_noise(const Grid& grid, std::uint64_t seed, double cutoff);

/// Band-limited noise multiplied by a mollified window B(0, radius), so the result is
/// compactly supported and numerically band-limited.
ComplexField windowed_noise(const Grid& grid, std::uint64_t seed, double cutoff, double radius);

/// Centred finite-difference derivatives (order 2, 4, 6 or 8).
/// Samples within order/2 cells of the edge are set to 0.
ComplexField d_fd(const ComplexField& f, int order = 8);
ComplexField dbar_fd(const ComplexField& f, int order = 8);

/// ||a-b||_2 / ||b||_2 over samples at least `margin` cells from the edge.
double relative_error_interior(const ComplexField& a, const ComplexField& b, std::size_t margin);

// Field I/O. Binary: little-endian double L, uint64 n, double stagger, then n^2
// interleaved (re, im) doubles in storage order.
void write_binary(const ComplexField& f, const std::string& path);
ComplexField read_binary(const std::string& path);
void write_csv(const ComplexField& f, std::ostream& os);
void write_csv(const ComplexField& f, const std::string& path);

}  // namespace qcircle
