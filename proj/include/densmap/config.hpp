// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value run configuration ('#' comments, UTF-8) with a published
// per-subcommand schema; unknown keys are hard errors. Also the deterministic
// CSV writer shared by all pipelines ('.' decimal separator, '\n' line ends).

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace densmap::io {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
  public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }
    void validate(const std::set<std::string>& allowed) const;

  private:
    std::map<std::string, std::string> kv_;
};

Config parse_config_file(const std::string& path);
// "key=value" command-line override.
void apply_override(Config& cfg, const std::string& assignment);

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);

    ~CsvWriter();

  private:
    std::string path_;
    std::string buffer_;
    bool done_ = false;
    void flush();
};

std::string format_double(double v);

}  // namespace densmap::io
