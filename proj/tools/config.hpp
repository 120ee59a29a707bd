#pragma once

// Flat key=value experiment configuration. Every subcommand declares its keys
// with defaults; a config file, --set overrides and per-key flags are applied
// in that order, and unknown keys are rejected.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace growth::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    Config(std::string command, std::vector<std::pair<std::string, std::string>> defaults);

    const std::string& command() const { return command_; }
    const std::vector<std::string>& keys() const { return order_; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    // Lines "key = value"; blank lines and lines starting with '#' are skipped.
    void load(std::istream& in, const std::string& origin);
    void load_file(const std::string& path);
    void assign(const std::string& assignment);  // "key=value"
    void set(const std::string& key, const std::string& value);

    const std::string& str(const std::string& key) const;
    double num(const std::string& key) const;
    std::uint64_t count(const std::string& key) const;  // nonnegative integer
    std::vector<double> list(const std::string& key) const;  // comma separated; empty string gives {}

    // Range checks that raise ConfigError naming the key.
    double num_in(const std::string& key, double lo, double hi) const;
    double positive(const std::string& key) const;
    std::uint64_t at_least(const std::string& key, std::uint64_t lo) const;
    const std::string& choice(const std::string& key, const std::vector<std::string>& allowed) const;

    // Command line that regenerates the run.
    std::string echo() const;
    nlohmann::json to_json() const;

private:
    std::string command_;
    std::vector<std::string> order_;
    std::map<std::string, std::string> values_;
};

}  // namespace growth::cli
