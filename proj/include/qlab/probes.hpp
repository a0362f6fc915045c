#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>
#include "qlab/rational.hpp"

namespace qlab {

struct ProbeConfig {
    std::string kind = "levelset";  // levelset | lp | conditional
    i64 N = 1 << 12;
    i64 c_t = 4;
    i64 t_cap = 1 << 16;
    std::string scheme = "constant";  // constant | unimodular | single | prime_cubic
    double theta = 0.3;
    double p = 6.0;
    std::vector<i64> N_ladder = {1 << 8, 1 << 9, 1 << 10, 1 << 11, 1 << 12};
    std::vector<i64> Q_ladder = {8, 16};  // levelset: lambda = sqrt(N/Q)
    i64 Q = 32;
    int l = 3;
    i64 alpha_cap = 1;
    i64 samples = 20;
    double slack = 8.0;
    double log_power = 1.0;
    double median_constant = 16.0;
    std::uint64_t seed = 1;

    std::string serialize() const;               // canonical JSON
    static ProbeConfig parse(const std::string&);  // throws std::invalid_argument
};

struct ProbeAssertion {
    std::string name;
    std::string anchor;  // formula the bound instantiates
    double measured = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

struct ProbeReport {
    std::string kind;
    std::string config_echo;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<ProbeAssertion> assertions;
    double wall_seconds = 0.0;  // reported to stderr only, never serialized

    bool passed() const;
    std::string to_json() const;  // deterministic, excludes wall_seconds
    std::string to_csv() const;
};

ProbeReport probe_levelset(const ProbeConfig& config);
ProbeReport probe_lp(const ProbeConfig& config);
ProbeReport probe_conditional(const ProbeConfig& config);
ProbeReport run_probe(const ProbeConfig& config);  // dispatch on kind

}  // namespace qlab
