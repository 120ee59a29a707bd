#include <sstream>

#include "config.hpp"
#include "doctest.h"

using growth::cli::Config;
using growth::cli::ConfigError;

namespace {

Config sample() { return Config("shape", {{"n", "1000"}, {"law", "exp"}, {"ns", "4,8"}, {"seed", "1"}}); }

}  // namespace

TEST_CASE("defaults, file, overrides") {
    auto c = sample();
    CHECK(c.num("n") == 1000.0);
    std::istringstream file("# comment\n\n n = 50 \nlaw=geom\n");
    c.load(file, "test.cfg");
    CHECK(c.num("n") == 50.0);
    CHECK(c.str("law") == "geom");
    c.assign("n=7");
    CHECK(c.num("n") == 7.0);
    CHECK(c.list("ns") == std::vector<double>{4.0, 8.0});
    c.set("ns", "");
    CHECK(c.list("ns").empty());
}

TEST_CASE("invalid configs are rejected") {
    auto c = sample();
    CHECK_THROWS_AS(c.set("bogus", "1"), ConfigError);
    CHECK_THROWS_AS(c.assign("n"), ConfigError);
    std::istringstream bad("n 50\n");
    CHECK_THROWS_AS(c.load(bad, "bad.cfg"), ConfigError);
    CHECK_THROWS_AS(c.load_file("/nonexistent/growthlab.cfg"), ConfigError);

    c.set("n", "abc");
    CHECK_THROWS_AS(c.num("n"), ConfigError);
    c.set("n", "5x");
    CHECK_THROWS_AS(c.num("n"), ConfigError);
    c.set("n", "inf");
    CHECK_THROWS_AS(c.num("n"), ConfigError);
    c.set("n", "-2");
    CHECK_THROWS_AS(c.positive("n"), ConfigError);
    CHECK_THROWS_AS(c.count("n"), ConfigError);
    CHECK_THROWS_AS(c.num_in("n", 0.0, 1.0), ConfigError);
    c.set("seed", "0");
    CHECK_THROWS_AS(c.at_least("seed", 1), ConfigError);
    CHECK_THROWS_AS(c.choice("law", {"geom"}), ConfigError);
    CHECK(c.choice("law", {"exp", "geom"}) == "exp");
    c.set("ns", "1,,2");
    CHECK_THROWS_AS(c.list("ns"), ConfigError);
}

TEST_CASE("echo regenerates the configuration") {
    auto c = sample();
    c.assign("n=12");
    CHECK(c.echo() == "growthlab shape --set 'n=12' --set 'law=exp' --set 'ns=4,8' --set 'seed=1'");
    const auto j = c.to_json();
    CHECK(j["command"] == "shape");
    CHECK(j["n"] == "12");

    auto d = sample();
    const std::string echo = c.echo();
    for (auto pos = echo.find("--set '"); pos != std::string::npos; pos = echo.find("--set '", pos + 1)) {
        const auto end = echo.find('\'', pos + 7);
        d.assign(echo.substr(pos + 7, end - pos - 7));
    }
    CHECK(d.to_json() == j);
}
