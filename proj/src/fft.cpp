#include "kgs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "kgs/errors.hpp"

namespace kgs::fft {
namespace {

struct PlanCache {
    std::mutex mutex;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

fftw_plan plan_for(std::span<const int> extents, Sign sign) {
    auto& c = cache();
    std::vector<int> key(extents.begin(), extents.end());
    std::lock_guard lock(c.mutex);
    auto it = c.plans.find({key, static_cast<int>(sign)});
    if (it != c.plans.end()) return it->second;

    const std::size_t n = std::accumulate(key.begin(), key.end(), std::size_t{1},
                                          [](std::size_t a, int b) { return a * b; });
    // FFTW_ESTIMATE never touches the scratch buffer contents.
    auto* scratch = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(key.size()), key.data(), scratch, scratch,
                                   static_cast<int>(sign), FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw ContractViolation("fftw: unable to create plan");
    c.plans.emplace(std::make_pair(std::move(key), static_cast<int>(sign)), plan);
    return plan;
}

}  // namespace

void execute(std::span<std::complex<double>> data, std::span<const int> extents, Sign sign) {
    std::size_t n = 1;
    for (int e : extents) n *= static_cast<std::size_t>(e);
    if (n != data.size()) throw ContractViolation("fft: extents do not match data size");
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_for(extents, sign), ptr, ptr);
}

void forward_normalized(std::span<std::complex<double>> data, std::span<const int> extents) {
    execute(data, extents, Sign::forward);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

void backward(std::span<std::complex<double>> data, std::span<const int> extents) {
    execute(data, extents, Sign::backward);
}

}  // namespace kgs::fft
