#include "comove/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace comove {

namespace {

// Plans are created once per (length, direction) under a lock and executed
// through the new-array interface. FFTW_UNALIGNED keeps the plans valid for
// any caller buffer; FFTW_ESTIMATE keeps planning deterministic.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(const std::complex<double>* in, std::complex<double>* out, std::size_t n,
                 int sign) {
        const bool in_place = in == out;
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_tuple(n, sign, in_place);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                // Planning with FFTW_ESTIMATE leaves the buffers untouched;
                // UNALIGNED keeps the plan valid for any execution address.
                auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in));
                auto* dst = reinterpret_cast<fftw_complex*>(out);
                plan = fftw_plan_dft_1d(static_cast<int>(n), src, dst, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in));
        fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out));
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) {
            (void)key;
            fftw_destroy_plan(plan);
        }
    }

    std::mutex mutex_;
    std::map<std::tuple<std::size_t, int, bool>, fftw_plan> plans_;
};

} // namespace

void fft_forward(std::complex<double>* data, std::size_t n) {
    PlanCache::instance().execute(data, data, n, FFTW_FORWARD);
}

void fft_inverse(std::complex<double>* data, std::size_t n) {
    PlanCache::instance().execute(data, data, n, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

void fft_forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
    PlanCache::instance().execute(in, out, n, FFTW_FORWARD);
}

void fft_inverse(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
    PlanCache::instance().execute(in, out, n, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] *= scale;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace comove
