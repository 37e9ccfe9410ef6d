#pragma once

#include <complex>
#include <cstddef>
#include <mutex>

#include <fftw3.h>

namespace t2x::detail {

/// Forward in-place complex FFT of fixed length (FFTW, sign −1).
/// Planning goes through a global mutex; execution is thread-safe per plan.
class FftPlan {
public:
  explicit FftPlan(std::size_t n) : n_(n) {
    buf_ = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(buf_);
  }

  std::size_t size() const noexcept { return n_; }
  std::complex<double>* data() noexcept { return reinterpret_cast<std::complex<double>*>(buf_); }
  void clear() noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      data()[i] = {};
  }
  void execute() noexcept { fftw_execute(plan_); }

private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
};

} // namespace t2x::detail
