#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace qcircle::detail {

namespace {
// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

struct Fft2d::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Fft2d::Fft2d(std::size_t N) : N_(N), p_(std::make_unique<Plans>()) {
    std::vector<std::complex<double>> scratch(N * N);
    std::lock_guard lock(planner_mutex());
    const int n = static_cast<int>(N);
    p_->fwd = fftw_plan_dft_2d(n, n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, kFlags);
    p_->bwd = fftw_plan_dft_2d(n, n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, kFlags);
    if (!p_->fwd || !p_->bwd) throw std::runtime_error("fftw planning failed");
}

Fft2d::~Fft2d() {
    std::lock_guard lock(planner_mutex());
    if (p_->fwd) fftw_destroy_plan(p_->fwd);
    if (p_->bwd) fftw_destroy_plan(p_->bwd);
}

void Fft2d::forward(std::vector<std::complex<double>>& a) const {
    if (a.size() != N_ * N_) throw std::invalid_argument("Fft2d: size mismatch");
    fftw_execute_dft(p_->fwd, as_fftw(a.data()), as_fftw(a.data()));
}

void Fft2d::backward(std::vector<std::complex<double>>& a) const {
    if (a.size() != N_ * N_) throw std::invalid_argument("Fft2d: size mismatch");
    fftw_execute_dft(p_->bwd, as_fftw(a.data()), as_fftw(a.data()));
    const double s = 1.0 / static_cast<double>(N_ * N_);
    for (auto& v : a) v *= s;
}

struct Fft1d::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Fft1d::Fft1d(std::size_t N) : N_(N), p_(std::make_unique<Plans>()) {
    std::vector<std::complex<double>> scratch(N);
    std::lock_guard lock(planner_mutex());
    const int n = static_cast<int>(N);
    p_->fwd = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, kFlags);
    p_->bwd = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, kFlags);
    if (!p_->fwd || !p_->bwd) throw std::runtime_error("fftw planning failed");
}

Fft1d::~Fft1d() {
    std::lock_guard lock(planner_mutex());
    if (p_->fwd) fftw_destroy_plan(p_->fwd);
    if (p_->bwd) fftw_destroy_plan(p_->bwd);
}

void Fft1d::forward(std::vector<std::complex<double>>& a) const {
    if (a.size() != N_) throw std::invalid_argument("Fft1d: size mismatch");
    fftw_execute_dft(p_->fwd, as_fftw(a.data()), as_fftw(a.data()));
}

void Fft1d::backward(std::vector<std::complex<double>>& a) const {
    if (a.size() != N_) throw std::invalid_argument("Fft1d: size mismatch");
    fftw_execute_dft(p_->bwd, as_fftw(a.data()), as_fftw(a.data()));
    const double s = 1.0 / static_cast<double>(N_);
    for (auto& v : a) v *= s;
}

}  // namespace qcircle::detail
