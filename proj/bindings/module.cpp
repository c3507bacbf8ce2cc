#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "comove/coherence.hpp"
#include "comove/cwt.hpp"
#include "comove/ingest.hpp"
#include "comove/modwt.hpp"
#include "comove/synth.hpp"
#include "comove/wcorr.hpp"

#include <complex>
#include <cstring>
#include <vector>

namespace py = pybind11;
using namespace comove;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    const auto* ptr = a.data();
    return std::vector<double>(ptr, ptr + a.shape(0));
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
    return out;
}

py::array_t<double> to_array(const RealMatrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::memcpy(out.mutable_data(), m.data().data(), m.data().size() * sizeof(double));
    return out;
}

py::array_t<bool> to_array(const BoolMatrix& m) {
    py::array_t<bool> out({m.rows(), m.cols()});
    auto* ptr = out.mutable_data();
    for (std::size_t i = 0; i < m.data().size(); ++i) ptr[i] = m.data()[i] != 0;
    return out;
}

py::array_t<std::complex<double>> to_array(const ComplexMatrix& m) {
    py::array_t<std::complex<double>> out({m.rows(), m.cols()});
    std::memcpy(out.mutable_data(), m.data().data(),
                m.data().size() * sizeof(std::complex<double>));
    return out;
}

ScaleGrid grid_for(std::size_t n, double dt, double omega0, double s0, double dj,
                   std::size_t n_scales) {
    const double s0_eff = s0 > 0.0 ? s0 : 2.0 * dt;
    const std::size_t count =
        n_scales > 0 ? n_scales : default_scale_count(n, dt, s0_eff, dj, omega0);
    return make_scale_grid(dt, s0_eff, dj, count, omega0);
}

} // namespace

PYBIND11_MODULE(comove, m) {
    m.doc() = "Wavelet comovement analysis: Morlet coherence with Monte Carlo "
              "significance, MODWT correlation and two-window contagion tests.";

    m.def(
        "morlet_cwt",
        [](py::array_t<double, py::array::c_style> x, double dt, double omega0, double s0,
           double dj, std::size_t n_scales) {
            const std::vector<double> xs = to_vector(x);
            CwtField field;
            {
                py::gil_scoped_release release;
                field = morlet_cwt(xs, grid_for(xs.size(), dt, omega0, s0, dj, n_scales));
            }
            py::dict out;
            out["coefficients"] = to_array(field.coefficients);
            out["scales"] = to_array(field.grid.scales);
            out["periods"] = to_array([&] {
                std::vector<double> p(field.grid.size());
                for (std::size_t k = 0; k < p.size(); ++k) p[k] = field.grid.fourier_period(k);
                return p;
            }());
            out["coi"] = to_array(field.coi);
            return out;
        },
        py::arg("x"), py::arg("dt") = 1.0, py::arg("omega0") = 6.0, py::arg("s0") = 0.0,
        py::arg("dj") = 1.0 / 12.0, py::arg("n_scales") = 0,
        "Continuous Morlet transform; returns coefficients (scales x time), "
        "scales, Fourier periods and the cone of influence.");

    m.def(
        "wavelet_coherence",
        [](py::array_t<double, py::array::c_style> x, py::array_t<double, py::array::c_style> y,
           double dt, double omega0, double s0, double dj, std::size_t n_scales,
           std::size_t n_sim, double alpha, std::uint64_t seed, unsigned threads,
           bool significance) {
            const std::vector<double> xs = to_vector(x);
            const std::vector<double> ys = to_vector(y);
            CoherenceField field;
            SignificanceResult sig;
            {
                py::gil_scoped_release release;
                const ScaleGrid grid = grid_for(xs.size(), dt, omega0, s0, dj, n_scales);
                field = wavelet_coherence(xs, ys, grid);
                if (significance) {
                    McParams params;
                    params.n_sim = n_sim;
                    params.alpha = alpha;
                    params.seed = seed;
                    params.threads = threads;
                    sig = significance_mc(xs, ys, grid, params, &field.r2);
                }
            }
            py::dict out;
            out["r2"] = to_array(field.r2);
            out["phase"] = to_array(field.phase);
            out["scales"] = to_array(field.grid.scales);
            out["coi"] = to_array(field.coi);
            if (significance) {
                out["significant"] = to_array(sig.significant);
                out["thresholds"] = to_array(sig.thresholds);
            }
            return out;
        },
        py::arg("x"), py::arg("y"), py::arg("dt") = 1.0, py::arg("omega0") = 6.0,
        py::arg("s0") = 0.0, py::arg("dj") = 1.0 / 12.0, py::arg("n_scales") = 0,
        py::arg("n_sim") = 300, py::arg("alpha") = 0.05, py::arg("seed") = 0,
        py::arg("threads") = 0, py::arg("significance") = false,
        "Squared wavelet coherence, phase differences, and optionally the "
        "Monte Carlo significance mask against AR(1) surrogates.");

    m.def(
        "modwt",
        [](py::array_t<double, py::array::c_style> x, const std::string& filter,
           std::size_t levels) {
            const std::vector<double> xs = to_vector(x);
            const WaveletFilter f = wavelet_filter(filter);
            ModwtDecomposition d;
            {
                py::gil_scoped_release release;
                d = modwt(xs, f, levels);
            }
            py::dict out;
            RealMatrix w(d.levels, d.size());
            for (std::size_t j = 0; j < d.levels; ++j) {
                std::memcpy(w.row(j), d.w[j].data(), d.size() * sizeof(double));
            }
            out["w"] = to_array(w);
            out["v"] = to_array(d.v);
            std::vector<double> boundary(d.levels);
            for (std::size_t j = 1; j <= d.levels; ++j) {
                boundary[j - 1] = static_cast<double>(d.boundary_count(j));
            }
            out["boundary_counts"] = to_array(boundary);
            return out;
        },
        py::arg("x"), py::arg("filter") = "la8", py::arg("levels") = 8,
        "Maximal-overlap transform: wavelet rows (levels x time), scaling "
        "vector, and per-level boundary coefficient counts.");

    m.def(
        "imodwt",
        [](py::array_t<double, py::array::c_style> w, py::array_t<double, py::array::c_style> v,
           const std::string& filter) {
            if (w.ndim() != 2) throw std::invalid_argument("w must be 2-D (levels x time)");
            ModwtDecomposition d;
            d.filter = wavelet_filter(filter);
            d.levels = static_cast<std::size_t>(w.shape(0));
            const auto n = static_cast<std::size_t>(w.shape(1));
            d.w.resize(d.levels);
            for (std::size_t j = 0; j < d.levels; ++j) {
                const double* row = w.data() + j * n;
                d.w[j].assign(row, row + n);
            }
            d.v = to_vector(v);
            std::vector<double> out;
            {
                py::gil_scoped_release release;
                out = imodwt(d);
            }
            return to_array(out);
        },
        py::arg("w"), py::arg("v"), py::arg("filter") = "la8",
        "Inverse maximal-overlap transform.");

    m.def(
        "wavelet_correlation",
        [](py::array_t<double, py::array::c_style> x, py::array_t<double, py::array::c_style> y,
           const std::string& filter, std::size_t levels, double alpha) {
            const std::vector<double> xs = to_vector(x);
            const std::vector<double> ys = to_vector(y);
            WaveletCorrelation wc;
            {
                py::gil_scoped_release release;
                wc = wavelet_correlation(xs, ys, wavelet_filter(filter), levels, alpha);
            }
            py::list rows;
            for (const auto& sc : wc.scales) {
                py::dict row;
                row["level"] = sc.level;
                row["rho"] = sc.rho;
                row["ci_low"] = sc.ci_low;
                row["ci_high"] = sc.ci_high;
                row["n_eff"] = sc.n_eff;
                rows.append(row);
            }
            return rows;
        },
        py::arg("x"), py::arg("y"), py::arg("filter") = "la8", py::arg("levels") = 8,
        py::arg("alpha") = 0.05,
        "Scale-by-scale wavelet correlation with Fisher-z confidence bands.");

    m.def(
        "contagion_test",
        [](py::array_t<double, py::array::c_style> x, py::array_t<double, py::array::c_style> y,
           std::size_t break_index, const std::string& filter, std::size_t levels,
           double alpha, double dt_minutes) {
            const std::vector<double> xs = to_vector(x);
            const std::vector<double> ys = to_vector(y);
            ContagionReport report;
            {
                py::gil_scoped_release release;
                report = contagion_test(xs, ys, break_index, wavelet_filter(filter), levels,
                                        alpha, dt_minutes);
            }
            py::list rows;
            for (const auto& sc : report.scales) {
                py::dict row;
                row["level"] = sc.level;
                row["horizon"] = sc.horizon_text;
                row["rho_i"] = sc.rho_i;
                row["rho_ii"] = sc.rho_ii;
                if (sc.z) {
                    row["z"] = *sc.z;
                    row["p_value"] = *sc.p_value;
                } else {
                    row["z"] = py::none();
                    row["p_value"] = py::none();
                }
                row["reject"] = sc.reject;
                row["direction"] = sc.direction;
                rows.append(row);
            }
            py::dict out;
            out["window_length"] = report.window_length;
            out["scales"] = rows;
            return out;
        },
        py::arg("x"), py::arg("y"), py::arg("break_index"), py::arg("filter") = "la8",
        py::arg("levels") = 8, py::arg("alpha") = 0.05, py::arg("dt_minutes") = 5.0,
        "Two-window wavelet correlation change test (Fisher z, two-sided).");

    m.def(
        "gen_ar1",
        [](std::size_t n, double phi, double sigma, std::uint64_t seed,
           std::uint64_t stream) {
            std::vector<double> out;
            {
                py::gil_scoped_release release;
                out = gen_ar1(n, phi, sigma, {seed, stream});
            }
            return to_array(out);
        },
        py::arg("n"), py::arg("phi"), py::arg("sigma") = 1.0, py::arg("seed") = 0,
        py::arg("stream") = 0, "Deterministic stationary AR(1) draws.");

    m.def(
        "gen_correlated_pair",
        [](std::size_t n, const std::vector<double>& rho_by_scale, const std::string& filter,
           std::uint64_t seed, std::uint64_t stream) {
            std::pair<std::vector<double>, std::vector<double>> pair;
            {
                py::gil_scoped_release release;
                pair = gen_correlated_pair(n, rho_by_scale, wavelet_filter(filter),
                                           {seed, stream});
            }
            return py::make_tuple(to_array(pair.first), to_array(pair.second));
        },
        py::arg("n"), py::arg("rho_by_scale"), py::arg("filter") = "la8", py::arg("seed") = 0,
        py::arg("stream") = 0,
        "Bivariate white-noise pair with the requested wavelet correlation "
        "per scale.");

    m.def(
        "descriptive_stats",
        [](py::array_t<double, py::array::c_style> x) {
            const DescriptiveStats s = descriptive_stats(to_vector(x));
            py::dict out;
            out["n"] = s.n;
            out["mean"] = s.mean;
            out["st_dev"] = s.st_dev;
            out["skewness"] = s.skewness ? py::cast(*s.skewness) : py::none();
            out["kurtosis"] = s.kurtosis ? py::cast(*s.kurtosis) : py::none();
            out["min"] = s.min;
            out["max"] = s.max;
            return out;
        },
        py::arg("x"),
        "Sample moments: mean, n-1 standard deviation, skewness, raw kurtosis.");
}
