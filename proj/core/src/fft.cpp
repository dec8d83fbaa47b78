#include "jcr/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace jcr::fft {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t len, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find({len, sign});
    if (it != plans_.end()) return it->second;
    // Planning scratch; FFTW_ESTIMATE leaves the buffers untouched.
    std::vector<fftw_complex> in(len), out(len);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(len), in.data(), out.data(), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(std::make_pair(len, sign), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<Complex> data, int sign) {
  if (data.size() <= 1) return;
  fftw_plan plan = cache().get(data.size(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  // Plans were made out-of-place; new-array execution accepts in-place
  // buffers only for in-place plans, so route through a scratch copy.
  thread_local std::vector<Complex> scratch;
  scratch.assign(data.begin(), data.end());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(scratch.data()), ptr);
}

}  // namespace

void forward(std::span<Complex> data) { run(data, FFTW_FORWARD); }
void inverse(std::span<Complex> data) { run(data, FFTW_BACKWARD); }

}  // namespace jcr::fft
