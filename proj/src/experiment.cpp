#include "regime/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regime/csv_io.hpp"

namespace regime {

H2Rule H2Rule::parse(const std::string& text) {
    if (text.empty()) {
        throw ParameterError("h2: empty value");
    }
    std::string core = text;
    bool percent = false;
    if (core.back() == '%') {
        percent = true;
        core.pop_back();
    }
    double v = 0.0;
    try {
        v = parse_double(core, "h2");
    } catch (const IoError&) {
        throw ParameterError("h2: cannot parse '" + text + "'");
    }
    if (!(v > 0.0)) {
        throw ParameterError("h2 must be positive, got '" + text + "'");
    }
    if (!percent && v != std::floor(v)) {
        throw ParameterError("absolute h2 must be an integer, got '" + text + "'");
    }
    return {v, percent};
}

std::size_t H2Rule::resolve(std::size_t h1) const {
    std::size_t h2;
    if (percent) {
        h2 = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(value / 100.0 * static_cast<double>(h1) + 0.5)));
    } else {
        h2 = static_cast<std::size_t>(value);
    }
    if (h2 > h1) {
        throw ParameterError("resolved h2 = " + std::to_string(h2) + " exceeds h1 = " +
                             std::to_string(h1));
    }
    return h2;
}

std::string H2Rule::str() const {
    if (percent) {
        std::string v = format_double(value);
        return v + "%";
    }
    return std::to_string(static_cast<std::size_t>(value));
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ShapeError("pearson: need two samples of equal length >= 2");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

CellOutcome run_cell_full(const Stream& stream, const std::vector<int>* truth_points,
                          const CellSpec& spec, std::size_t workers) {
    const std::size_t h2 = spec.h2.resolve(spec.h1);
    CellOutcome out;
    out.lift_base = LiftConfig(spec.h1, h2);
    out.summary.h1 = spec.h1;
    out.summary.h2 = h2;
    out.summary.L = spec.L;
    out.summary.K = spec.K;
    out.summary.n_runs = spec.n_runs;

    std::vector<int> truth_returns;
    MultiRunOptions opts;
    opts.workers = workers;
    if (truth_points) {
        if (truth_points->size() != stream.n_points()) {
            throw ShapeError("run_cell: truth has " + std::to_string(truth_points->size()) +
                             " entries for " + std::to_string(stream.n_points()) + " price rows");
        }
        truth_returns.assign(truth_points->begin() + 1, truth_points->end());
        opts.truth = &truth_returns;
    }

    ClusterConfig cfg;
    cfg.k = spec.K;
    cfg.p = spec.p;
    cfg.seed = spec.seed;
    const ProjectionSet ps = make_projection_set(stream.dimension(), spec.L);

    out.runs = multi_run(stream, out.lift_base, cfg, ps, spec.n_runs, opts);

    out.summary.selected_run = out.runs.selected;
    out.summary.run_ta.reserve(spec.n_runs);
    out.summary.run_mcc.reserve(spec.n_runs);
    for (const RunOutcome& run : out.runs.runs) {
        out.summary.run_ta.push_back(run.accuracy);
        out.summary.run_mcc.push_back(run.clustering.final_mean_centroid_centroid());
    }
    if (truth_points) {
        out.summary.ta_median = median(out.summary.run_ta);
        out.summary.ta_max =
            *std::max_element(out.summary.run_ta.begin(), out.summary.run_ta.end());
        out.summary.ta_selected = out.summary.run_ta[out.runs.selected];
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.summary.ta_median = nan;
        out.summary.ta_max = nan;
        out.summary.ta_selected = nan;
    }
    return out;
}

CellResult run_cell(const Stream& stream, const std::vector<int>* truth_points,
                    const CellSpec& spec, std::size_t workers) {
    return run_cell_full(stream, truth_points, spec, workers).summary;
}

std::string sweep_to_csv(const SweepReport& report) {
    std::string out = "h1,h2,L,K,n_runs,ta_median,ta_max,ta_metric_selected\n";
    for (const CellResult& cell : report.cells) {
        out += std::to_string(cell.h1);
        out += "," + std::to_string(cell.h2);
        out += "," + std::to_string(cell.L);
        out += "," + std::to_string(cell.K);
        out += "," + std::to_string(cell.n_runs);
        if (cell.failed) {
            out += ",failed,failed,failed\n";
            continue;
        }
        out += "," + format_double(cell.ta_median);
        out += "," + format_double(cell.ta_max);
        out += "," + format_double(cell.ta_selected) + "\n";
    }
    return out;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report) {
    write_file(path, sweep_to_csv(report));
}

}  // namespace regime
