#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "regime/clustering.hpp"
#include "regime/labeling.hpp"
#include "regime/measures.hpp"

namespace regime {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// strtod with full-token validation; context names the file/field on error.
double parse_double(const std::string& s, const std::string& context);

/// Writes content to path via a temporary file and rename, so a failed write
/// leaves no partial file behind. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Prices CSV: header `timestamp,c0,...,c{d-1}`, one row per observation.
/// Streams without timestamps are written with the row index.
std::string prices_to_csv(const Stream& stream);
Stream read_prices_csv(const std::filesystem::path& path);
void write_prices_csv(const std::filesystem::path& path, const Stream& stream);

/// Truth CSV: header `timestamp,regime`, aligned with the prices rows.
std::string truth_to_csv(const std::vector<int>& truth,
                         const std::vector<std::string>* timestamps);
std::vector<int> read_truth_csv(const std::filesystem::path& path);
void write_truth_csv(const std::filesystem::path& path, const std::vector<int>& truth,
                     const std::vector<std::string>* timestamps);

/// Labels CSV: header `timestamp,label,votes_for,votes_total`, one row per
/// return point (return i is stamped with price point i+1). Uncovered points
/// keep the explicit -1 marker.
std::string labels_to_csv(const LabeledSeries& labeled,
                          const std::vector<std::string>* price_timestamps);
void write_labels_csv(const std::filesystem::path& path, const LabeledSeries& labeled,
                      const std::vector<std::string>* price_timestamps);

/// Diagnostics CSV: one row per (run, iteration).
std::string diagnostics_to_csv(const std::vector<ClusteringResult>& runs);
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<ClusteringResult>& runs);

}  // namespace regime
