#include "regime/cli_commands.hpp"

#include <cmath>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "regime/csv_io.hpp"
#include "regime/experiment.hpp"
#include "regime/rng.hpp"
#include "regime/synthgen.hpp"
#include "regime/version.hpp"

namespace regime {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int classify(const std::exception& e) {
    if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
        dynamic_cast<const SizeGuardError*>(&e) || dynamic_cast<const ContractError*>(&e) ||
        dynamic_cast<const GenerationError*>(&e)) {
        return kExitConfigError;
    }
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const DegenerateInputError*>(&e) ||
        dynamic_cast<const InsufficientDataError*>(&e)) {
        return kExitDataError;
    }
    return kExitRuntimeError;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
}

void ensure_out_dir(const fs::path& out) {
    if (out.empty()) {
        throw ParameterError("--out is required");
    }
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) {
        throw IoError("cannot create output directory " + out.string() +
                      (ec ? ": " + ec.message() : ""));
    }
}

json regime_params_json(const RegimeParams& r) {
    return json{{"mu", r.mu},
                {"sigma", r.sigma},
                {"rho", r.rho},
                {"shape", r.shape == RegimeShape::kMoons ? "moons" : "gaussian"},
                {"moon_noise", r.moon_noise}};
}

json run_seeds_json(std::uint64_t master, std::size_t n_runs, std::size_t h2) {
    json runs = json::array();
    for (std::size_t i = 0; i < n_runs; ++i) {
        const auto [seed, delta] = run_seed_delta(master, i, h2);
        runs.push_back(json{{"run", i}, {"seed", seed}, {"delta", delta}});
    }
    return runs;
}

std::optional<std::vector<int>> load_truth(const fs::path& path, std::size_t n_points) {
    if (path.empty()) {
        return std::nullopt;
    }
    std::vector<int> truth = read_truth_csv(path);
    if (truth.size() != n_points) {
        throw IoError("truth csv " + path.string() + " has " + std::to_string(truth.size()) +
                      " rows, prices have " + std::to_string(n_points));
    }
    return truth;
}

json regime_stats_json(const RegimeStats& stats) {
    json out = json::array();
    for (const auto& pr : stats.regimes) {
        json entry{{"regime", pr.regime}, {"count", pr.count}, {"stats_valid", pr.stats_valid}};
        if (pr.stats_valid) {
            entry["mean"] = pr.mean;
            entry["stddev"] = pr.stddev;
            entry["correlation_defined"] = pr.correlation_defined;
            if (pr.correlation_defined) {
                json corr = json::array();
                for (std::size_t a = 0; a < pr.correlation.rows(); ++a) {
                    json row = json::array();
                    for (std::size_t b = 0; b < pr.correlation.cols(); ++b) {
                        row.push_back(pr.correlation(a, b));
                    }
                    corr.push_back(row);
                }
                entry["correlation"] = corr;
            }
        }
        out.push_back(entry);
    }
    return out;
}

void write_json(const fs::path& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

}  // namespace

int cmd_generate(const GenerateArgs& args) {
    return guarded([&] {
        const ScenarioType type = scenario_from_string(args.scenario);
        ensure_out_dir(args.out);
        const SyntheticDataset dataset = gen_scenario(type, args.seed, args.years);

        write_prices_csv(args.out / "prices.csv", dataset.prices);
        write_truth_csv(args.out / "truth.csv", dataset.truth, nullptr);

        json regimes = json::array();
        for (const RegimeParams& r : dataset.spec.regimes) {
            regimes.push_back(regime_params_json(r));
        }
        const json manifest{
            {"artifact_version", kVersion},
            {"command", "generate"},
            {"scenario", args.scenario},
            {"seed", args.seed},
            {"spec",
             {{"d", dataset.spec.d},
              {"years", dataset.spec.years},
              {"days_per_year", dataset.spec.days_per_year},
              {"obs_per_day", dataset.spec.obs_per_day},
              {"n_points", dataset.spec.n_points()},
              {"minority_period_count", dataset.spec.minority_period_count},
              {"minority_period_length", dataset.spec.period_length()},
              {"regimes", regimes}}},
        };
        write_json(args.out / "manifest.json", manifest);
    });
}

int cmd_cluster(const ClusterArgs& args) {
    return guarded([&] {
        const H2Rule h2_rule = H2Rule::parse(args.h2);
        const Stream stream = read_prices_csv(args.data);
        const auto truth = load_truth(args.truth, stream.n_points());
        ensure_out_dir(args.out);

        CellSpec spec;
        spec.h1 = args.h1;
        spec.h2 = h2_rule;
        spec.L = args.L;
        spec.K = args.K;
        spec.p = args.p;
        spec.n_runs = args.runs;
        spec.seed = args.seed;

        const CellOutcome outcome =
            run_cell_full(stream, truth ? &*truth : nullptr, spec, args.workers);

        std::vector<ClusteringResult> results;
        results.reserve(outcome.runs.runs.size());
        for (const RunOutcome& run : outcome.runs.runs) {
            results.push_back(run.clustering);
        }
        write_diagnostics_csv(args.out / "diagnostics.csv", results);

        const RunOutcome& selected = outcome.runs.selected_run();
        const std::vector<std::string>* ts =
            stream.timestamps() ? &*stream.timestamps() : nullptr;
        write_labels_csv(args.out / "labels.csv", selected.labels, ts);

        const Matrix raw = log_returns(stream).unstandardized();
        write_json(args.out / "regime_stats.json", regime_stats_json(regime_stats(raw, selected.labels)));

        if (truth) {
            const std::vector<int> mapping = map_clusters(selected.labels);
            json per_regime = json::object();
            int max_regime = 0;
            for (int r : *selected.labels.truth) {
                max_regime = std::max(max_regime, r);
            }
            for (int r = 0; r <= max_regime; ++r) {
                std::vector<std::size_t> partition;
                for (std::size_t i = 0; i < selected.labels.truth->size(); ++i) {
                    if ((*selected.labels.truth)[i] == r) {
                        partition.push_back(i);
                    }
                }
                per_regime[std::to_string(r)] =
                    total_accuracy(selected.labels, mapping, &partition);
            }
            const json accuracy{
                {"ta_selected", outcome.summary.ta_selected},
                {"ta_median", outcome.summary.ta_median},
                {"ta_max", outcome.summary.ta_max},
                {"selected_run", outcome.summary.selected_run},
                {"cluster_to_regime", mapping},
                {"per_regime_accuracy", per_regime},
            };
            write_json(args.out / "accuracy.json", accuracy);
        }

        const json manifest{
            {"artifact_version", kVersion},
            {"command", "cluster"},
            {"config",
             {{"data", args.data.string()},
              {"truth", args.truth.string()},
              {"h1", args.h1},
              {"h2", h2_rule.str()},
              {"h2_resolved", outcome.summary.h2},
              {"L", args.L},
              {"K", args.K},
              {"p", args.p},
              {"runs", args.runs},
              {"workers", args.workers}}},
            {"master_seed", args.seed},
            {"selected_run", outcome.summary.selected_run},
            {"runs", run_seeds_json(args.seed, args.runs, outcome.summary.h2)},
        };
        write_json(args.out / "manifest.json", manifest);

        std::cout << "selected run " << outcome.summary.selected_run << " (delta "
                  << selected.clustering.delta_used << ")";
        if (truth) {
            std::cout << ", TA " << outcome.summary.ta_selected;
        }
        std::cout << "\n";
    });
}

int cmd_sweep(const SweepArgs& args) {
    return guarded([&] {
        if (args.h1_list.empty() || args.h2_list.empty() || args.l_list.empty()) {
            throw ParameterError("sweep: --h1-list, --h2-list, and --L-list must be non-empty");
        }
        if (args.truth.empty()) {
            throw ParameterError("sweep: --truth is required (accuracy statistics need ground "
                                 "truth)");
        }
        std::vector<H2Rule> h2_rules;
        for (const std::string& h2 : args.h2_list) {
            h2_rules.push_back(H2Rule::parse(h2));
        }
        const Stream stream = read_prices_csv(args.data);
        const auto truth = load_truth(args.truth, stream.n_points());
        ensure_out_dir(args.out);

        SweepReport report;
        json cell_manifest = json::array();
        std::size_t cell_idx = 0;
        for (std::size_t h1 : args.h1_list) {
            for (std::size_t i = 0; i < h2_rules.size(); ++i) {
                for (std::size_t l : args.l_list) {
                    CellSpec spec;
                    spec.h1 = h1;
                    spec.h2 = h2_rules[i];
                    spec.L = l;
                    spec.K = args.K;
                    spec.p = args.p;
                    spec.n_runs = args.runs;
                    spec.seed = splitmix64_at(args.seed, 0xC3110000ULL + cell_idx);

                    CellResult cell;
                    try {
                        cell = run_cell(stream, truth ? &*truth : nullptr, spec, args.workers);
                    } catch (const std::exception& e) {
                        cell.h1 = h1;
                        try {
                            cell.h2 = h2_rules[i].resolve(h1);
                        } catch (const ParameterError&) {
                        }
                        cell.L = l;
                        cell.K = args.K;
                        cell.n_runs = args.runs;
                        cell.failed = true;
                        cell.error = e.what();
                        std::cerr << "cell h1=" << h1 << " h2=" << args.h2_list[i] << " L=" << l
                                  << " failed: " << e.what() << "\n";
                    }
                    json entry{{"cell", cell_idx},
                               {"h1", h1},
                               {"h2", args.h2_list[i]},
                               {"L", l},
                               {"seed", spec.seed},
                               {"failed", cell.failed}};
                    if (!cell.failed) {
                        entry["h2_resolved"] = cell.h2;
                        entry["runs"] = run_seeds_json(spec.seed, args.runs, cell.h2);
                    } else {
                        entry["error"] = cell.error;
                    }
                    cell_manifest.push_back(entry);
                    report.cells.push_back(std::move(cell));
                    ++cell_idx;
                }
            }
        }
        write_sweep_csv(args.out / "sweep.csv", report);

        const json manifest{
            {"artifact_version", kVersion},
            {"command", "sweep"},
            {"config",
             {{"data", args.data.string()},
              {"truth", args.truth.string()},
              {"h1_list", args.h1_list},
              {"h2_list", args.h2_list},
              {"L_list", args.l_list},
              {"K", args.K},
              {"p", args.p},
              {"runs", args.runs},
              {"workers", args.workers}}},
            {"master_seed", args.seed},
            {"cells", cell_manifest},
        };
        write_json(args.out / "manifest.json", manifest);
    });
}

}  // namespace regime
