// SPDX-License-Identifier: Apache-2.0

#include "densmap/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace densmap::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing required key: " + key);
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("key " + key + " is not a number: " + it->second);
    }
}

long Config::get_int(const std::string& key, long fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("key " + key + " is not an integer: " + it->second);
    }
}

void Config::validate(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : kv_)
        if (allowed.count(key) == 0) throw ConfigError("unknown configuration key: " + key);
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Config cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        cfg.set(key, value);
    }
    return cfg;
}

void apply_override(Config& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + assignment);
    cfg.set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += format_double(values[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::raw_row(const std::string& line) {
    buffer_ += line;
    buffer_ += '\n';
}

void CsvWriter::flush() {
    if (done_) return;
    std::ofstream out(path_, std::ios::binary);  // '\n' endings on every platform
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_);
    out << buffer_;
    done_ = true;
}

CsvWriter::~CsvWriter() {
    try {
        flush();
    } catch (...) {
    }
}

}  // namespace densmap::io
