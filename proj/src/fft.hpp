#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace qcircle::detail {

/// Square 2-D complex FFT of side N. Plans use FFTW_ESTIMATE so results are
/// reproducible run to run; execution is thread-safe on caller buffers.
class Fft2d {
public:
    explicit Fft2d(std::size_t N);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    std::size_t side() const { return N_; }
    /// Unnormalised forward transform, in place.
    void forward(std::vector<std::complex<double>>& a) const;
    /// Inverse transform including the 1/N^2 factor, in place.
    void backward(std::vector<std::complex<double>>& a) const;

private:
    struct Plans;
    std::size_t N_;
    std::unique_ptr<Plans> p_;
};

class Fft1d {
public:
    explicit Fft1d(std::size_t N);
    ~Fft1d();
    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;

    void forward(std::vector<std::complex<double>>& a) const;
    void backward(std::vector<std::complex<double>>& a) const;

private:
    struct Plans;
    std::size_t N_;
    std::unique_ptr<Plans> p_;
};

/// Signed integer frequency index of bin i in a length-N transform.
inline long freq_index(std::size_t i, std::size_t N) {
    return i < (N + 1) / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(N);
}

}  // namespace qcircle::detail
