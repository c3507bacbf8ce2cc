#pragma once

#include "comove/coherence.hpp"
#include "comove/cwt.hpp"
#include "comove/matrix.hpp"
#include "comove/modwt.hpp"
#include "comove/series.hpp"
#include "comove/wcorr.hpp"

#include <string>
#include <vector>

namespace comove {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

// -- return series ----------------------------------------------------------

/// Schema: "# comove-returns v1 ..." comment, then timestamp,return,day_index.
void write_return_series_csv(const ReturnSeries& series, const std::string& path);
ReturnSeries read_return_series_csv(const std::string& path);

std::string stats_to_json(const DescriptiveStats& stats, const std::string& symbol);

// -- matrices and fields -----------------------------------------------------

void write_matrix_csv(const RealMatrix& m, const std::string& path, const std::string& kind);
void write_matrix_csv(const BoolMatrix& m, const std::string& path, const std::string& kind);
RealMatrix read_matrix_csv(const std::string& path);

/// Writes <base>_real.csv, <base>_imag.csv and <base>_meta.json.
void save_cwt_field(const CwtField& field, const std::string& base_path);

/// Writes r2.csv, phase.csv, significance.csv and meta.json in out_dir.
void save_coherence_field(const CoherenceField& field, const std::string& out_dir,
                          std::size_t n_sim = 0, std::uint64_t seed = 0);

/// One column per wavelet level plus the scaling column, with a JSON sidecar.
void save_decomposition(const ModwtDecomposition& d, const std::string& csv_path,
                        const std::string& json_path);

// -- reports -----------------------------------------------------------------

std::string wcorr_to_json(const WaveletCorrelation& wc);
void write_wcorr_csv(const WaveletCorrelation& wc, const std::string& path);

std::string contagion_to_json(const ContagionReport& report);
void write_contagion_csv(const ContagionReport& report, const std::string& path);

// -- svg ----------------------------------------------------------------------

/// Coherence heatmap (warm = high r2), cone-of-influence shading and phase
/// arrows on significant cells.
void write_coherence_svg(const CoherenceField& field, const std::string& path);

/// Writes text to path, creating parent directories if needed.
void write_text_file(const std::string& path, const std::string& text);

} // namespace comove
