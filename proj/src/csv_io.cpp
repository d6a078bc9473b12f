#include "regime/csv_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace regime {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    // %.17g is value-preserving for IEEE doubles; try shorter forms first so
    // files stay readable where possible.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            return buf;
        }
    }
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    if (s.empty()) {
        throw IoError(context + ": empty numeric field");
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (*end != '\0' || errno == ERANGE) {
        throw IoError(context + ": cannot parse '" + s + "' as a number");
    }
    return v;
}

void write_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw IoError("read failed for " + path.string());
    }
    return ss.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& content,
                                                const std::string& context) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) {
        throw IoError(context + ": file is empty");
    }
    return rows;
}

long parse_int(const std::string& s, const std::string& context) {
    if (s.empty()) {
        throw IoError(context + ": empty integer field");
    }
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (*end != '\0') {
        throw IoError(context + ": cannot parse '" + s + "' as an integer");
    }
    return v;
}

}  // namespace

std::string prices_to_csv(const Stream& stream) {
    const Matrix& values = stream.values();
    std::string out = "timestamp";
    for (std::size_t j = 0; j < values.cols(); ++j) {
        out += ",c" + std::to_string(j);
    }
    out += "\n";
    for (std::size_t i = 0; i < values.rows(); ++i) {
        if (stream.timestamps()) {
            out += (*stream.timestamps())[i];
        } else {
            out += std::to_string(i);
        }
        for (std::size_t j = 0; j < values.cols(); ++j) {
            out += ",";
            out += format_double(values(i, j));
        }
        out += "\n";
    }
    return out;
}

Stream read_prices_csv(const fs::path& path) {
    const std::string context = "prices csv " + path.string();
    const auto rows = parse_csv(read_file(path), context);
    const std::size_t n_cols = rows[0].size();
    if (n_cols < 2 || rows[0][0] != "timestamp") {
        throw IoError(context + ": expected header 'timestamp,c0,...'");
    }
    const std::size_t d = n_cols - 1;
    const std::size_t n = rows.size() - 1;
    if (n < 2) {
        throw IoError(context + ": need at least 2 data rows");
    }
    Matrix values(n, d);
    std::vector<std::string> timestamps(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + 1];
        if (row.size() != n_cols) {
            throw IoError(context + ": row " + std::to_string(i + 1) + " has " +
                          std::to_string(row.size()) + " fields, expected " +
                          std::to_string(n_cols));
        }
        timestamps[i] = row[0];
        for (std::size_t j = 0; j < d; ++j) {
            values(i, j) = parse_double(row[j + 1], context);
        }
    }
    try {
        return Stream(std::move(values), std::move(timestamps));
    } catch (const Error& e) {
        throw IoError(context + ": " + e.what());
    }
}

void write_prices_csv(const fs::path& path, const Stream& stream) {
    write_file(path, prices_to_csv(stream));
}

std::string truth_to_csv(const std::vector<int>& truth,
                         const std::vector<std::string>* timestamps) {
    std::string out = "timestamp,regime\n";
    for (std::size_t i = 0; i < truth.size(); ++i) {
        out += timestamps ? (*timestamps)[i] : std::to_string(i);
        out += "," + std::to_string(truth[i]) + "\n";
    }
    return out;
}

std::vector<int> read_truth_csv(const fs::path& path) {
    const std::string context = "truth csv " + path.string();
    const auto rows = parse_csv(read_file(path), context);
    if (rows[0].size() != 2 || rows[0][0] != "timestamp" || rows[0][1] != "regime") {
        throw IoError(context + ": expected header 'timestamp,regime'");
    }
    std::vector<int> truth;
    truth.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2) {
            throw IoError(context + ": row " + std::to_string(i) + " malformed");
        }
        truth.push_back(static_cast<int>(parse_int(rows[i][1], context)));
    }
    return truth;
}

void write_truth_csv(const fs::path& path, const std::vector<int>& truth,
                     const std::vector<std::string>* timestamps) {
    write_file(path, truth_to_csv(truth, timestamps));
}

std::string labels_to_csv(const LabeledSeries& labeled,
                          const std::vector<std::string>* price_timestamps) {
    std::string out = "timestamp,label,votes_for,votes_total\n";
    for (std::size_t i = 0; i < labeled.length(); ++i) {
        out += price_timestamps ? (*price_timestamps)[i + 1] : std::to_string(i + 1);
        out += "," + std::to_string(labeled.labels[i]);
        out += "," + std::to_string(labeled.votes_for[i]);
        out += "," + std::to_string(labeled.votes_total[i]) + "\n";
    }
    return out;
}

void write_labels_csv(const fs::path& path, const LabeledSeries& labeled,
                      const std::vector<std::string>* price_timestamps) {
    write_file(path, labels_to_csv(labeled, price_timestamps));
}

std::string diagnostics_to_csv(const std::vector<ClusteringResult>& runs) {
    std::string out =
        "run,iteration,mean_sq_point_centroid,mean_centroid_centroid,centroid_shift,"
        "assignments_changed\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
        for (const IterationDiagnostics& d : runs[r].diagnostics) {
            out += std::to_string(r);
            out += "," + std::to_string(d.iteration);
            out += "," + format_double(d.mean_sq_point_centroid);
            out += "," + format_double(d.mean_centroid_centroid);
            out += "," + format_double(d.centroid_shift);
            out += "," + std::to_string(d.assignments_changed) + "\n";
        }
    }
    return out;
}

void write_diagnostics_csv(const fs::path& path, const std::vector<ClusteringResult>& runs) {
    write_file(path, diagnostics_to_csv(runs));
}

}  // namespace regime
