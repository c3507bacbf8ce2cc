#include "comove/modwt.hpp"

#include "comove/errors.hpp"

#include <cmath>
#include <cstdio>

namespace comove {

namespace {

// Scaling (low-pass) coefficients in DWT normalization, sum = sqrt(2).
// D(4) is the extremal-phase Daubechies filter; LA(8) the least-asymmetric
// length-8 filter of Daubechies as tabulated by Percival & Walden.
const std::vector<double> kHaarG = {0.7071067811865476, 0.7071067811865476};

const std::vector<double> kD4G = {0.4829629131445341, 0.8365163037378079,
                                  0.2241438680420134, -0.1294095225512604};

const std::vector<double> kLa8G = {-0.0757657147892733, -0.0296355276459985,
                                   0.4976186676320155,  0.8037387518059161,
                                   0.2978577956052774,  -0.0992195435768472,
                                   -0.0126039672620378, 0.0322231006040427};

WaveletFilter build_filter(std::string name, const std::vector<double>& g) {
    WaveletFilter f;
    f.name = std::move(name);
    f.g = g;
    const std::size_t L = g.size();
    f.h.resize(L);
    // Quadrature mirror: h_l = (-1)^l * g_{L-1-l}.
    for (std::size_t l = 0; l < L; ++l) {
        f.h[l] = (l % 2 == 0 ? 1.0 : -1.0) * g[L - 1 - l];
    }
    return f;
}

} // namespace

WaveletFilter wavelet_filter(const std::string& name) {
    if (name == "haar") return build_filter("haar", kHaarG);
    if (name == "d4") return build_filter("d4", kD4G);
    if (name == "la8") return build_filter("la8", kLa8G);
    throw UsageError("unknown wavelet filter '" + name + "' (expected haar, d4 or la8)");
}

std::size_t equivalent_filter_length(const WaveletFilter& filter, std::size_t level) {
    if (level < 1) throw UsageError("filter level must be >= 1");
    return ((std::size_t{1} << level) - 1) * (filter.length() - 1) + 1;
}

std::vector<std::size_t> boundary_mask(std::size_t n, const WaveletFilter& filter,
                                       std::size_t level) {
    const std::size_t lj = equivalent_filter_length(filter, level);
    const std::size_t count = std::min(n, lj - 1);
    std::vector<std::size_t> mask(count);
    for (std::size_t i = 0; i < count; ++i) mask[i] = i;
    return mask;
}

std::size_t ModwtDecomposition::boundary_count(std::size_t level) const {
    return std::min(size(), equivalent_filter_length(filter, level) - 1);
}

ModwtDecomposition modwt(const std::vector<double>& x, const WaveletFilter& filter,
                         std::size_t levels, std::vector<std::string>* warnings) {
    const std::size_t n = x.size();
    if (n < 2) throw UsageError("modwt: series must have at least 2 samples");
    if (levels < 1) throw UsageError("modwt: levels must be >= 1");
    if (warnings != nullptr && (std::size_t{1} << levels) > n) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "modwt: 2^J = %zu exceeds series length %zu",
                      std::size_t{1} << levels, n);
        warnings->push_back(buf);
    }

    const std::size_t L = filter.length();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<double> ht(L);
    std::vector<double> gt(L);
    for (std::size_t l = 0; l < L; ++l) {
        ht[l] = filter.h[l] * inv_sqrt2;
        gt[l] = filter.g[l] * inv_sqrt2;
    }

    ModwtDecomposition d;
    d.filter = filter;
    d.levels = levels;
    d.w.reserve(levels);

    std::vector<double> v_prev = x;
    std::vector<double> wj(n);
    std::vector<double> vj(n);
    for (std::size_t j = 1; j <= levels; ++j) {
        const std::size_t stride = (std::size_t{1} << (j - 1)) % n;
        for (std::size_t t = 0; t < n; ++t) {
            double acc_w = 0.0;
            double acc_v = 0.0;
            std::size_t idx = t;
            for (std::size_t l = 0; l < L; ++l) {
                acc_w += ht[l] * v_prev[idx];
                acc_v += gt[l] * v_prev[idx];
                idx = (idx >= stride) ? idx - stride : idx + n - stride;
            }
            wj[t] = acc_w;
            vj[t] = acc_v;
        }
        d.w.push_back(wj);
        v_prev = vj;
    }
    d.v = std::move(v_prev);
    return d;
}

std::vector<double> imodwt(const ModwtDecomposition& d) {
    if (d.levels == 0 || d.w.size() != d.levels) {
        throw UsageError("imodwt: malformed decomposition");
    }
    const std::size_t n = d.v.size();
    for (const auto& wj : d.w) {
        if (wj.size() != n) throw UsageError("imodwt: inconsistent vector lengths");
    }

    const std::size_t L = d.filter.length();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<double> ht(L);
    std::vector<double> gt(L);
    for (std::size_t l = 0; l < L; ++l) {
        ht[l] = d.filter.h[l] * inv_sqrt2;
        gt[l] = d.filter.g[l] * inv_sqrt2;
    }

    std::vector<double> v = d.v;
    std::vector<double> prev(n);
    for (std::size_t j = d.levels; j >= 1; --j) {
        const std::size_t stride = (std::size_t{1} << (j - 1)) % n;
        const std::vector<double>& wj = d.w[j - 1];
        for (std::size_t t = 0; t < n; ++t) {
            double acc = 0.0;
            std::size_t idx = t;
            for (std::size_t l = 0; l < L; ++l) {
                acc += ht[l] * wj[idx] + gt[l] * v[idx];
                idx += stride;
                if (idx >= n) idx -= n;
            }
            prev[t] = acc;
        }
        v = prev;
    }
    return v;
}

HorizonBand scale_to_horizon(std::size_t level, double dt) {
    if (level < 1) throw UsageError("scale_to_horizon: level must be >= 1");
    if (!(dt > 0.0)) throw UsageError("scale_to_horizon: dt must be positive");
    HorizonBand band;
    const double p = std::pow(2.0, static_cast<double>(level));
    band.freq_low = 1.0 / (2.0 * p);
    band.freq_high = 1.0 / p;
    band.time_low = p * dt;
    band.time_high = 2.0 * p * dt;
    return band;
}

std::string horizon_label(const HorizonBand& band, double trading_day_minutes) {
    char buf[64];
    if (band.time_low >= trading_day_minutes) {
        std::snprintf(buf, sizeof(buf), "%.1f-%.1f days", band.time_low / trading_day_minutes,
                      band.time_high / trading_day_minutes);
    } else {
        std::snprintf(buf, sizeof(buf), "%g-%g min", band.time_low, band.time_high);
    }
    return std::string(buf);
}

} // namespace comove
