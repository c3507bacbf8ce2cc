#include "comove/cwt.hpp"

#include "comove/errors.hpp"
#include "comove/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>

namespace comove {

namespace {

// Envelope e-folds kept before the padded signal wraps; exp(-8^2/2) ~ 1e-14
// keeps circular leakage below the 1e-8 agreement demanded of the FFT path.
constexpr double kTailEfolds = 8.0;

// Frequency-domain window per scale: the DFT of the sampled wavelet, i.e.
// the continuous-time transform periodized at 2*pi/dt. The alias replicas
// matter near the smallest scales, where the pass band sits close to
// Nyquist. Stored as runs of non-negligible bins (below exp(-72) the
// contribution is lost in double rounding); the table is built once per
// (grid, padded length) and shared.
struct WindowRun {
    std::size_t start = 0;
    std::vector<double> values;
};

struct WindowTable {
    std::vector<std::vector<WindowRun>> rows; // one run list per scale
};

std::shared_ptr<const WindowTable> window_table(const ScaleGrid& grid, std::size_t m) {
    using Key = std::tuple<double, double, double, double, std::size_t, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const WindowTable>> cache;
    const Key key{grid.dt, grid.s0, grid.dj, grid.omega0, grid.size(), m};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto table = std::make_shared<WindowTable>();
    table->rows.resize(grid.size());
    const double domega = 2.0 * M_PI / (static_cast<double>(m) * grid.dt);
    const double omega_period = 2.0 * M_PI / grid.dt;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s = grid.scales[k];
        const double norm = std::pow(M_PI, -0.25) * std::sqrt(2.0 * M_PI * s);
        std::vector<WindowRun>& runs = table->rows[k];
        for (std::size_t i = 0; i < m; ++i) {
            const double omega = (i <= m / 2) ? domega * static_cast<double>(i)
                                              : -domega * static_cast<double>(m - i);
            double window = 0.0;
            for (int replica = -1; replica <= 1; ++replica) {
                const double arg = s * (omega + replica * omega_period) - grid.omega0;
                if (std::abs(arg) <= 12.0) window += std::exp(-0.5 * arg * arg);
            }
            if (window != 0.0) {
                if (runs.empty() || runs.back().start + runs.back().values.size() != i) {
                    runs.push_back(WindowRun{i, {}});
                }
                runs.back().values.push_back(norm * window);
            }
        }
    }
    if (cache.size() > 16) cache.clear();
    cache.emplace(key, table);
    return table;
}

} // namespace

namespace detail {

struct MorletEngine::Impl {
    std::size_t n = 0;
    std::size_t padded = 0;
    std::vector<std::complex<double>> spectrum;
    std::vector<std::complex<double>> windowed;
    std::vector<std::complex<double>> time;
    std::shared_ptr<const WindowTable> windows;
    const std::vector<WindowRun>* last_runs = nullptr;
};

MorletEngine::MorletEngine(const std::vector<double>& x, const ScaleGrid& grid)
    : impl_(std::make_unique<Impl>()) {
    impl_->n = x.size();
    if (impl_->n < 4) throw UsageError("morlet_cwt: series must have at least 4 samples");
    if (grid.scales.empty()) throw UsageError("morlet_cwt: empty scale grid");
    for (double v : x) {
        if (!std::isfinite(v)) throw NumericError("morlet_cwt: non-finite input value");
    }

    const double mean =
        std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(impl_->n);
    const double max_scale_bars = grid.scales.back() / grid.dt;
    const std::size_t pad =
        static_cast<std::size_t>(std::ceil(kTailEfolds * max_scale_bars)) + 1;
    impl_->padded = next_pow2(impl_->n + pad);

    impl_->spectrum.assign(impl_->padded, {0.0, 0.0});
    for (std::size_t t = 0; t < impl_->n; ++t) impl_->spectrum[t] = x[t] - mean;
    fft_forward(impl_->spectrum.data(), impl_->padded);

    impl_->windows = window_table(grid, impl_->padded);
    impl_->windowed.assign(impl_->padded, {0.0, 0.0});
    impl_->time.resize(impl_->padded);
}

MorletEngine::~MorletEngine() = default;
MorletEngine::MorletEngine(MorletEngine&&) noexcept = default;
MorletEngine& MorletEngine::operator=(MorletEngine&&) noexcept = default;

std::size_t MorletEngine::length() const { return impl_->n; }

void MorletEngine::row(std::size_t k, std::complex<double>* out) {
    // Clear the previous row's support, then write this row's bands; the
    // buffer stays zero everywhere else.
    if (impl_->last_runs != nullptr) {
        for (const WindowRun& run : *impl_->last_runs) {
            std::fill(
                impl_->windowed.begin() + static_cast<std::ptrdiff_t>(run.start),
                impl_->windowed.begin() +
                    static_cast<std::ptrdiff_t>(run.start + run.values.size()),
                std::complex<double>{0.0, 0.0});
        }
    }
    const std::vector<WindowRun>& runs = impl_->windows->rows[k];
    for (const WindowRun& run : runs) {
        for (std::size_t j = 0; j < run.values.size(); ++j) {
            impl_->windowed[run.start + j] = impl_->spectrum[run.start + j] * run.values[j];
        }
    }
    impl_->last_runs = &runs;
    fft_inverse(impl_->windowed.data(), impl_->time.data(), impl_->padded);
    std::copy(impl_->time.begin(), impl_->time.begin() + static_cast<std::ptrdiff_t>(impl_->n),
              out);
}

} // namespace detail

CwtField morlet_cwt(const std::vector<double>& x, const ScaleGrid& grid) {
    detail::MorletEngine engine(x, grid);

    CwtField field;
    field.grid = grid;
    field.n_original = x.size();
    field.coi = cone_of_influence(x.size(), grid.dt, grid);
    field.coefficients = ComplexMatrix(grid.size(), x.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        engine.row(k, field.coefficients.row(k));
    }
    return field;
}

} // namespace comove
