#pragma once

#include "risnet/coverage.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace risnet::cli
{

/// min:max:points[:log]
struct Grid
{
    double min = 0.0;
    double max = 1.0;
    int points = 2;
    bool log = false;

    static Grid parse(const std::string& text);
    std::vector<double> values() const;
};

enum class Axis
{
    RisDistance, ///< r_s
    CellFraction, ///< f
    RisHeight,   ///< h_s
    Gamma,       ///< threshold in dB
    IntersectionDistance, ///< d_bi
};

Axis parse_axis(const std::string& name);
std::string axis_column(Axis a);

struct Command
{
    std::string verb;
    std::string config_path; ///< empty: built-in defaults
    std::string out_path;    ///< empty or "-": standard output
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<Grid> grid;
    std::optional<CoverageMode> mode;
    std::optional<Axis> axis;
    std::optional<double> gamma_db;
    std::string metric = "snr";
    bool with_simulation = false;
};

/// Executes one command and writes its CSV to `out`. Throws on failure.
void run(const Command& cmd, std::ostream& out);

/// Argument parsing plus run(); returns the process exit status and prints
/// a single-line diagnostic to stderr on failure.
int main_entry(int argc, char** argv);

} // namespace risnet::cli
