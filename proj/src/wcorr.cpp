#include "comove/wcorr.hpp"

#include "comove/errors.hpp"
#include "comove/rng.hpp"

#include <algorithm>
#include <cmath>

namespace comove {

namespace {

struct PearsonResult {
    double rho = 0.0;
    bool ok = false;
};

PearsonResult pearson(const double* x, const double* y, std::size_t n) {
    const double dn = static_cast<double>(n);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= dn;
    my /= dn;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    PearsonResult r;
    if (sxx > 0.0 && syy > 0.0) {
        r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
        r.ok = true;
    }
    return r;
}

double atanh_clamped(double rho) {
    return std::atanh(std::clamp(rho, -1.0 + 1e-15, 1.0 - 1e-15));
}

// Effective sample size at level j: coefficients are serially dependent
// with decorrelation length about 2^j, so n_eff is deflated accordingly.
double effective_n(std::size_t n_eff, std::size_t level) {
    return static_cast<double>(n_eff) / std::pow(2.0, static_cast<double>(level));
}

} // namespace

WaveletCorrelation wavelet_correlation(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       const WaveletFilter& filter, std::size_t levels,
                                       double alpha, std::vector<std::string>* warnings) {
    if (x.size() != y.size()) throw UsageError("wavelet_correlation: length mismatch");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("wavelet_correlation: bad alpha");

    const std::size_t n = x.size();
    const ModwtDecomposition dx = modwt(x, filter, levels, warnings);
    const ModwtDecomposition dy = modwt(y, filter, levels);

    WaveletCorrelation result;
    result.alpha = alpha;
    result.filter_name = filter.name;
    const double z_crit = normal_quantile(1.0 - alpha / 2.0);

    for (std::size_t j = 1; j <= levels; ++j) {
        const std::size_t lj = equivalent_filter_length(filter, j);
        if (lj - 1 >= n || n - (lj - 1) < 4) {
            if (warnings != nullptr) {
                warnings->push_back("level " + std::to_string(j) +
                                    " omitted: fewer than 4 non-boundary coefficients");
            }
            continue;
        }
        const std::size_t start = lj - 1;
        const std::size_t n_eff = n - start;
        const PearsonResult pr =
            pearson(dx.w[j - 1].data() + start, dy.w[j - 1].data() + start, n_eff);
        if (!pr.ok) {
            throw NumericError("wavelet_correlation: zero-variance coefficients at level " +
                               std::to_string(j));
        }

        ScaleCorrelation sc;
        sc.level = j;
        sc.rho = pr.rho;
        sc.n_eff = n_eff;
        const double n_hat = effective_n(n_eff, j);
        if (n_hat > 3.0) {
            const double half_width = z_crit / std::sqrt(n_hat - 3.0);
            const double fz = atanh_clamped(pr.rho);
            // min/max keep the bracket valid when rho sits at +-1 exactly.
            sc.ci_low = std::min(std::tanh(fz - half_width), pr.rho);
            sc.ci_high = std::max(std::tanh(fz + half_width), pr.rho);
        } else {
            sc.ci_low = -1.0;
            sc.ci_high = 1.0;
            if (warnings != nullptr) {
                warnings->push_back("level " + std::to_string(j) +
                                    ": effective sample too small for a confidence interval");
            }
        }
        result.scales.push_back(sc);
    }
    return result;
}

WindowSplit split_windows(std::size_t n, std::size_t break_index) {
    if (break_index == 0 || break_index >= n) {
        throw DataError("split_windows: break must fall strictly inside the series");
    }
    const std::size_t len = std::min(break_index, n - break_index);
    WindowSplit split;
    split.length = len;
    split.begin_i = break_index - len; // tail of the pre-break window
    split.begin_ii = break_index;      // head of the post-break window
    return split;
}

std::size_t find_break_index(const ReturnSeries& series, EpochSeconds break_ts) {
    const auto it =
        std::lower_bound(series.timestamps.begin(), series.timestamps.end(), break_ts);
    return static_cast<std::size_t>(it - series.timestamps.begin());
}

ContagionReport contagion_test(const std::vector<double>& x, const std::vector<double>& y,
                               std::size_t break_index, const WaveletFilter& filter,
                               std::size_t levels, double alpha, double dt_minutes,
                               std::vector<std::string>* warnings) {
    if (x.size() != y.size()) throw UsageError("contagion_test: length mismatch");
    const WindowSplit split = split_windows(x.size(), break_index);

    auto slice = [](const std::vector<double>& v, std::size_t begin, std::size_t len) {
        return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(begin),
                                   v.begin() + static_cast<std::ptrdiff_t>(begin + len));
    };
    const std::vector<double> xi = slice(x, split.begin_i, split.length);
    const std::vector<double> yi = slice(y, split.begin_i, split.length);
    const std::vector<double> xii = slice(x, split.begin_ii, split.length);
    const std::vector<double> yii = slice(y, split.begin_ii, split.length);

    const WaveletCorrelation ci = wavelet_correlation(xi, yi, filter, levels, alpha, warnings);
    const WaveletCorrelation cii = wavelet_correlation(xii, yii, filter, levels, alpha);

    ContagionReport report;
    report.break_index = break_index;
    report.window_length = split.length;
    report.alpha = alpha;
    report.filter_name = filter.name;

    for (std::size_t j = 1; j <= levels; ++j) {
        auto find = [j](const WaveletCorrelation& wc) -> const ScaleCorrelation* {
            for (const auto& sc : wc.scales) {
                if (sc.level == j) return &sc;
            }
            return nullptr;
        };
        const ScaleCorrelation* si = find(ci);
        const ScaleCorrelation* sii = find(cii);

        ScaleContagion sc;
        sc.level = j;
        sc.horizon = scale_to_horizon(j, dt_minutes);
        sc.horizon_text = horizon_label(sc.horizon);
        if (si == nullptr || sii == nullptr) {
            report.scales.push_back(sc);
            continue;
        }
        sc.rho_i = si->rho;
        sc.rho_ii = sii->rho;
        sc.ci_low_i = si->ci_low;
        sc.ci_high_i = si->ci_high;
        sc.ci_low_ii = sii->ci_low;
        sc.ci_high_ii = sii->ci_high;

        const double n_hat_i = effective_n(si->n_eff, j);
        const double n_hat_ii = effective_n(sii->n_eff, j);
        if (n_hat_i > 3.0 && n_hat_ii > 3.0) {
            const double se = std::sqrt(1.0 / (n_hat_i - 3.0) + 1.0 / (n_hat_ii - 3.0));
            const double z = (atanh_clamped(si->rho) - atanh_clamped(sii->rho)) / se;
            sc.z = z;
            sc.p_value = 2.0 * (1.0 - normal_cdf(std::abs(z)));
            sc.reject = *sc.p_value < alpha;
            const double diff = sii->rho - si->rho;
            sc.direction = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        }
        report.scales.push_back(sc);
    }
    return report;
}

} // namespace comove
