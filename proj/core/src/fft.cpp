#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>
#include <stdexcept>

namespace lev::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("RealFft: size must be at least 2");
    const auto bins = n / 2 + 1;
    real_ = fftw_alloc_real(n);
    auto* spec = fftw_alloc_complex(bins);
    spectrum_ = spec;
    if (real_ == nullptr || spec == nullptr) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    forward_plan_ = fftw_plan_dft_r2c_1d(ni, real_, spec, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_1d(ni, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    fftw_free(real_);
    fftw_free(spectrum_);
}

void RealFft::forward(std::span<const double> in, std::vector<std::complex<double>>& out) {
    if (in.size() != n_) throw std::invalid_argument("RealFft::forward: size mismatch");
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
    const auto bins = n_ / 2 + 1;
    out.resize(bins);
    std::memcpy(out.data(), spectrum_, bins * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::vector<double>& out) {
    const auto bins = n_ / 2 + 1;
    if (in.size() != bins) throw std::invalid_argument("RealFft::inverse: size mismatch");
    // c2r destroys its input, so always work on the owned buffer.
    std::memcpy(spectrum_, in.data(), bins * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(inverse_plan_));
    out.assign(real_, real_ + n_);
}

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
    if (n < 1) throw std::invalid_argument("ComplexFft: empty transform");
    auto* buf = fftw_alloc_complex(n);
    if (buf == nullptr) throw std::bad_alloc();
    buffer_ = buf;
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
}

ComplexFft::~ComplexFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(buffer_);
}

void ComplexFft::forward(std::vector<std::complex<double>>& data) {
    if (data.size() != n_) throw std::invalid_argument("ComplexFft::forward: size mismatch");
    std::memcpy(buffer_, data.data(), n_ * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::memcpy(data.data(), buffer_, n_ * sizeof(fftw_complex));
}

}  // namespace lev::detail
