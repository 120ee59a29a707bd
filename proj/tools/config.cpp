#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace growth::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError("config key '" + key + "': '" + text + "' is not a finite number");
    }
    return v;
}

}  // namespace

Config::Config(std::string command, std::vector<std::pair<std::string, std::string>> defaults)
    : command_(std::move(command)) {
    for (auto& [k, v] : defaults) {
        order_.push_back(k);
        values_[k] = std::move(v);
    }
}

void Config::load(std::istream& in, const std::string& origin) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": expected key=value");
        }
        set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    load(in, path);
}

void Config::assign(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "' for '" + command_ + "'");
    it->second = value;
}

const std::string& Config::str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double Config::num(const std::string& key) const { return parse_double(key, str(key)); }

std::uint64_t Config::count(const std::string& key) const {
    const std::string t = trim(str(key));
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
        throw ConfigError("config key '" + key + "': '" + t + "' is not a nonnegative integer");
    }
    return v;
}

std::vector<double> Config::list(const std::string& key) const {
    std::vector<double> out;
    const std::string& s = str(key);
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(parse_double(key, s.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double Config::num_in(const std::string& key, double lo, double hi) const {
    const double v = num(key);
    if (v < lo || v > hi) {
        throw ConfigError("config key '" + key + "' = " + str(key) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
    return v;
}

double Config::positive(const std::string& key) const {
    const double v = num(key);
    if (!(v > 0.0)) throw ConfigError("config key '" + key + "' must be positive");
    return v;
}

std::uint64_t Config::at_least(const std::string& key, std::uint64_t lo) const {
    const auto v = count(key);
    if (v < lo) throw ConfigError("config key '" + key + "' must be at least " + std::to_string(lo));
    return v;
}

const std::string& Config::choice(const std::string& key, const std::vector<std::string>& allowed) const {
    const auto& v = str(key);
    for (const auto& a : allowed) {
        if (v == a) return v;
    }
    std::string opts;
    for (const auto& a : allowed) opts += (opts.empty() ? "" : "|") + a;
    throw ConfigError("config key '" + key + "' = '" + v + "' not in " + opts);
}

std::string Config::echo() const {
    std::string out = "growthlab " + command_;
    for (const auto& k : order_) out += " --set '" + k + "=" + values_.at(k) + "'";
    return out;
}

nlohmann::json Config::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    j["command"] = command_;
    for (const auto& k : order_) j[k] = values_.at(k);
    return j;
}

}  // namespace growth::cli
