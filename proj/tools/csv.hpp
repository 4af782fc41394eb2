#pragma once

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "config.hpp"

namespace cli {

/// CSV file: a "# config_hash" comment, optional "# key=value" lines, the
/// header row, then rows. Floats use %.17g so doubles round-trip exactly.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::uint64_t hash,
            const std::vector<std::string>& columns,
            const std::vector<std::string>& comments = {})
      : path_(path.string()) {
    f_ = std::fopen(path_.c_str(), "w");
    if (f_ == nullptr) throw ConfigError("cannot write '" + path_ + "'");
    std::fprintf(f_, "# config_hash=%016" PRIx64 "\n", hash);
    for (const auto& c : comments) std::fprintf(f_, "# %s\n", c.c_str());
    for (std::size_t i = 0; i < columns.size(); ++i) {
      std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
    }
    std::fputc('\n', f_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  ~CsvWriter() {
    if (f_) std::fclose(f_);
  }

  void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

  void row(const std::vector<double>& values, const std::string& label = {}) {
    bool first = true;
    if (!label.empty()) {
      std::fputs(label.c_str(), f_);
      first = false;
    }
    for (double v : values) {
      std::fprintf(f_, first ? "%.17g" : ",%.17g", v);
      first = false;
    }
    std::fputc('\n', f_);
  }

 private:
  std::string path_;
  std::FILE* f_ = nullptr;
};

}  // namespace cli
