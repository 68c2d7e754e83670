#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace cyclotopo::detail {

namespace {

std::mutex planner_mutex;

struct PlanCache {
  std::map<std::pair<std::size_t, std::size_t>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(std::size_t n, std::size_t howmany) {
  std::lock_guard lock(planner_mutex);
  auto key = std::make_pair(n, howmany);
  auto it = cache().plans.find(key);
  if (it != cache().plans.end()) return it->second;
  // planning with a scratch buffer keeps user data untouched
  std::vector<fftw_complex> scratch(n * howmany);
  int len = static_cast<int>(n);
  fftw_plan plan = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), scratch.data(), nullptr, 1, len,
                                      scratch.data(), nullptr, 1, len, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache().plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_forward_many(std::complex<double>* data, std::size_t n, std::size_t howmany) {
  if (n == 0 || howmany == 0) return;
  fftw_plan plan = plan_for(n, howmany);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

void fft_forward(std::vector<std::complex<double>>& inout) { fft_forward_many(inout.data(), inout.size(), 1); }

}  // namespace cyclotopo::detail
