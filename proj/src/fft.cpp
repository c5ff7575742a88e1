#include "swarmdoppler/fft.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "swarmdoppler/errors.hpp"

namespace swarmdoppler {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct FftPlan::Impl {
    fftw_complex* buffer = nullptr;
    fftw_plan plan = nullptr;

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (plan) fftw_destroy_plan(plan);
        if (buffer) fftw_free(buffer);
    }
};

FftPlan::FftPlan(std::size_t length, FftSign sign) : length_(length), impl_(std::make_unique<Impl>()) {
    if (length == 0) throw DomainError("FftPlan: length must be > 0");
    std::lock_guard lock(planner_mutex());
    impl_->buffer = fftw_alloc_complex(length);
    if (!impl_->buffer) throw std::bad_alloc();
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(length), impl_->buffer, impl_->buffer,
                                   sign == FftSign::negative ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->plan) throw std::runtime_error("FftPlan: FFTW planning failed");
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::execute(std::span<std::complex<double>> data) {
    if (data.size() != length_) throw DomainError("FftPlan::execute: length mismatch");
    auto* buf = reinterpret_cast<std::complex<double>*>(impl_->buffer);
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(impl_->plan);
    std::copy(buf, buf + length_, data.begin());
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> input, FftSign sign) {
    std::vector<std::complex<double>> out(input.begin(), input.end());
    FftPlan plan(out.size(), sign);
    plan.execute(out);
    return out;
}

}  // namespace swarmdoppler
