#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace regime {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitDataError = 3,
    kExitRuntimeError = 4,
};

struct GenerateArgs {
    std::string scenario = "1d";
    std::uint64_t seed = 42;
    std::size_t years = 20;
    std::filesystem::path out;
};

struct ClusterArgs {
    std::filesystem::path data;
    std::filesystem::path truth;  // optional, empty when absent
    std::filesystem::path out;
    std::size_t h1 = 35;
    std::string h2 = "20%";
    std::size_t L = 9;
    std::size_t K = 2;
    int p = 1;
    std::size_t runs = 100;
    std::uint64_t seed = 42;
    std::size_t workers = 0;
};

struct SweepArgs {
    std::filesystem::path data;
    std::filesystem::path truth;
    std::filesystem::path out;
    std::vector<std::size_t> h1_list;
    std::vector<std::string> h2_list;
    std::vector<std::size_t> l_list = {9};
    std::size_t K = 2;
    int p = 1;
    std::size_t runs = 100;
    std::uint64_t seed = 42;
    std::size_t workers = 0;
};

/// Writes prices.csv, truth.csv, and manifest.json. Returns an ExitCode.
int cmd_generate(const GenerateArgs& args);

/// Runs the multi-run clustering; writes diagnostics.csv, labels.csv (of the
/// selected run), regime_stats.json, accuracy.json (when truth is given), and
/// manifest.json.
int cmd_cluster(const ClusterArgs& args);

/// Runs the full (h1, h2, L) grid; writes sweep.csv and manifest.json.
/// Failed cells are recorded in the report and the sweep continues.
int cmd_sweep(const SweepArgs& args);

}  // namespace regime
