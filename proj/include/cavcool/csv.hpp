// Manifest-stamped CSV output. Every file starts with `#`-prefixed manifest
// comments (subcommand, resolved parameters, version, seed, wall clock), so a
// run is reproducible from its own output. Floats are written with 17
// significant digits, rows in fixed order, LF line endings; a file that is not
// committed is removed on destruction so failures leave no partial artifacts.
#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cavcool {

inline const char* version_string() { return "0.1.0"; }

struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> resolved; // key, value lines
    std::string out_path;
    std::string seed; // empty when not applicable

    static std::string timestamp_utc() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }
};

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const RunManifest& manifest,
              const std::vector<std::string>& columns)
        : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
        out_ << "# cavcool " << version_string() << "  subcommand=" << manifest.subcommand
             << "  generated=" << RunManifest::timestamp_utc() << "\n";
        if (!manifest.seed.empty()) out_ << "# seed = " << manifest.seed << "\n";
        for (const auto& [key, value] : manifest.resolved)
            out_ << "# " << key << " = " << value << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    ~CsvWriter() {
        if (!committed_) {
            out_.close();
            std::remove(path_.c_str());
        }
    }

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    void commit() {
        out_.flush();
        if (!out_) throw std::runtime_error("write failure on '" + path_ + "'");
        out_.close();
        committed_ = true;
    }

  private:
    std::string path_;
    std::ofstream out_;
    bool committed_ = false;
};

} // namespace cavcool
