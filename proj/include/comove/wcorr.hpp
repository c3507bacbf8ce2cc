#pragma once

#include "comove/modwt.hpp"
#include "comove/series.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace comove {

/// Wavelet correlation at one level, with the Fisher-z confidence interval
/// computed on n_hat = n_eff / 2^j effective observations.
struct ScaleCorrelation {
    std::size_t level = 0;
    double rho = 0.0;
    double ci_low = -1.0;
    double ci_high = 1.0;
    std::size_t n_eff = 0; // non-boundary coefficients used
};

struct WaveletCorrelation {
    std::vector<ScaleCorrelation> scales; // levels with n_eff >= 4 only
    double alpha = 0.05;
    std::string filter_name;
};

/// Pearson correlation of the two series' non-boundary MODWT coefficients,
/// level by level. Levels with fewer than 4 usable coefficients are
/// omitted with a warning.
WaveletCorrelation wavelet_correlation(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       const WaveletFilter& filter, std::size_t levels,
                                       double alpha = 0.05,
                                       std::vector<std::string>* warnings = nullptr);

/// Index split for the two-window contagion design: window I is [begin_i,
/// break), window II is [break, ...), both truncated to the shorter length
/// (window I keeps its tail, window II its head).
struct WindowSplit {
    std::size_t begin_i = 0;
    std::size_t begin_ii = 0;
    std::size_t length = 0;
};

WindowSplit split_windows(std::size_t n, std::size_t break_index);

/// First observation index at or after the break timestamp.
std::size_t find_break_index(const ReturnSeries& series, EpochSeconds break_ts);

/// Two-sample rho comparison at one level. z and p are absent when either
/// window's effective sample is too small for the Fisher variance.
struct ScaleContagion {
    std::size_t level = 0;
    HorizonBand horizon;
    std::string horizon_text;
    double rho_i = 0.0;
    double rho_ii = 0.0;
    double ci_low_i = -1.0, ci_high_i = 1.0;
    double ci_low_ii = -1.0, ci_high_ii = 1.0;
    std::optional<double> z;
    std::optional<double> p_value;
    bool reject = false;
    int direction = 0; // sign of rho_II - rho_I
};

struct ContagionReport {
    std::size_t break_index = 0;
    std::size_t window_length = 0;
    double alpha = 0.05;
    std::string filter_name;
    std::vector<ScaleContagion> scales;
};

/// Tests H0: rho_I,j = rho_II,j per level with the two-sample Fisher-z
/// statistic on effective sample sizes n_eff / 2^j.
ContagionReport contagion_test(const std::vector<double>& x, const std::vector<double>& y,
                               std::size_t break_index, const WaveletFilter& filter,
                               std::size_t levels, double alpha = 0.05, double dt_minutes = 5.0,
                               std::vector<std::string>* warnings = nullptr);

} // namespace comove
