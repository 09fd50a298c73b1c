#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lev::detail {

// Thin RAII wrapper over FFTW plans. Plan creation is serialised internally;
// execution on a given instance is not thread-safe, so give each worker its own.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    // Unnormalised forward transform; out has n/2 + 1 bins.
    void forward(std::span<const double> in, std::vector<std::complex<double>>& out);
    // Unnormalised inverse (no 1/n factor).
    void inverse(std::span<const std::complex<double>> in, std::vector<double>& out);

private:
    std::size_t n_;
    double* real_ = nullptr;
    void* spectrum_ = nullptr;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

class ComplexFft {
public:
    explicit ComplexFft(std::size_t n);
    ~ComplexFft();
    ComplexFft(const ComplexFft&) = delete;
    ComplexFft& operator=(const ComplexFft&) = delete;

    // In-place unnormalised forward transform (exp(-i...) sign convention).
    void forward(std::vector<std::complex<double>>& data);

private:
    std::size_t n_;
    void* buffer_ = nullptr;
    void* plan_ = nullptr;
};

}  // namespace lev::detail
