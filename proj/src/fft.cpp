#include "nlshom/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace nlshom {

namespace {

// FFTW's planner is not thread safe; executing distinct plans is. Each thread
// keeps its own plan + buffer per size, creation serialized by a global mutex.
std::mutex planner_mutex;

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_complex* buf = nullptr;

  PlanPair() = default;
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
};

PlanPair& plans_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, PlanPair> cache;
  auto [it, inserted] = cache.try_emplace(n);
  PlanPair& p = it->second;
  if (inserted) {
    p.buf = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(planner_mutex);
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), p.buf, p.buf, FFTW_FORWARD,
                             FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_1d(static_cast<int>(n), p.buf, p.buf, FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }
  return p;
}

void check_size(std::size_t n) {
  if (!is_pow2(n)) {
    throw std::invalid_argument("fft: grid size must be a power of two, got " +
                                std::to_string(n));
  }
}

}  // namespace

void fft_forward(std::vector<cd>& a) {
  const std::size_t n = a.size();
  check_size(n);
  PlanPair& p = plans_for(n);
  std::memcpy(p.buf, a.data(), n * sizeof(cd));
  fftw_execute(p.fwd);
  const double s = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = cd(p.buf[i][0], p.buf[i][1]) * s;
}

void fft_backward(std::vector<cd>& a) {
  const std::size_t n = a.size();
  check_size(n);
  PlanPair& p = plans_for(n);
  std::memcpy(p.buf, a.data(), n * sizeof(cd));
  fftw_execute(p.bwd);
  for (std::size_t i = 0; i < n; ++i) a[i] = cd(p.buf[i][0], p.buf[i][1]);
}

std::vector<cd> modes_of(std::vector<cd> values) {
  fft_forward(values);
  return values;
}

std::vector<cd> values_of(std::vector<cd> modes) {
  fft_backward(modes);
  return modes;
}

std::vector<cd> upsample(const std::vector<cd>& values, std::size_t factor) {
  const std::size_t n = values.size();
  check_size(n);
  if (factor == 1) return values;
  const std::size_t m = n * factor;
  check_size(m);
  std::vector<cd> hat = modes_of(values);
  std::vector<cd> big(m, cd(0.0, 0.0));
  // Zero padding in mode space; the n/2 coefficient is split symmetrically so
  // that real data stays real after resampling.
  for (std::size_t j = 0; j < n; ++j) {
    int k = fft_wavenumber(j, n);
    if (static_cast<std::size_t>(2 * std::abs(k)) == n) {
      big[fft_index(k, m)] += 0.5 * hat[j];
      big[fft_index(-k, m)] += 0.5 * hat[j];
    } else {
      big[fft_index(k, m)] = hat[j];
    }
  }
  fft_backward(big);
  return big;
}

}  // namespace nlshom
