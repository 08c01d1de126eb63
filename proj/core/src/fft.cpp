#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace nlslab::detail {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& dims, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(dims, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t n = 1;
    for (int m : dims) n *= static_cast<std::size_t>(m);
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), a, b, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft(std::span<const int> dims, const std::complex<double>* in, std::complex<double>* out, int sign) {
  std::vector<int> key(dims.begin(), dims.end());
  fftw_plan plan = cache().get(key, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD);
  // c2c out-of-place transforms leave the input untouched
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace nlslab::detail
