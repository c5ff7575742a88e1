#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace swarmdoppler {

enum class FftSign { negative, positive };  // sign of the exponent: e^{-2 pi i jk/n} or e^{+...}

/// Reusable in-place complex DFT of a fixed length (unnormalized). Planning
/// is serialized internally; execute() on distinct plans may run concurrently.
class FftPlan {
public:
    FftPlan(std::size_t length, FftSign sign);
    ~FftPlan();
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t length() const { return length_; }

    /// Transforms `data` (length() values) in place.
    void execute(std::span<std::complex<double>> data);

private:
    struct Impl;
    std::size_t length_ = 0;
    std::unique_ptr<Impl> impl_;
};

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> input, FftSign sign);

}  // namespace swarmdoppler
