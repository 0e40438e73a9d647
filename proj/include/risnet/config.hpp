#pragma once

#include "risnet/coverage.hpp"
#include "risnet/model.hpp"
#include "risnet/quadrature.hpp"
#include "risnet/simulate.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace risnet
{

/// Everything a config file can set. Thresholds stay in dB here and are
/// converted where they are consumed.
struct AppConfig
{
    NetworkParams network;
    Deployment deployment;
    IntegrationSpec quadrature = IntegrationSpec::standard();
    SimConfig simulation;
    CoverageMode mode = CoverageMode::Exact;
    double gamma_db = 0.0;                         ///< threshold for non-gamma sweeps
    std::vector<double> gammas_db{-10.0, 0.0, 10.0, 20.0}; ///< thresholds for compare
};

/**
 * Reads an INI-style file: `key = value` lines grouped in [network], [ris],
 * [radio], [deployment], [quadrature], [simulation] and [experiment]
 * sections. Unknown keys are rejected so typos do not pass silently.
 * Throws ConfigError with the offending key.
 */
AppConfig load_config(const std::string& path);
AppConfig parse_config(std::istream& in);

/// Comma-separated list of numbers.
std::vector<double> parse_number_list(const std::string& text);

} // namespace risnet
