#include "risnet/cli.hpp"

#include "risnet/blockage.hpp"
#include "risnet/config.hpp"
#include "risnet/coverage.hpp"
#include "risnet/interference.hpp"
#include "risnet/simulate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace risnet::cli
{

Grid
Grid::parse(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
    {
        parts.push_back(item);
    }
    if (parts.size() != 3 && parts.size() != 4)
    {
        throw ConfigError("grid must look like min:max:points[:log], got '" + text + "'");
    }
    Grid g;
    try
    {
        std::size_t used = 0;
        g.min = std::stod(parts[0], &used);
        g.max = std::stod(parts[1], &used);
        g.points = std::stoi(parts[2], &used);
    }
    catch (const std::exception&)
    {
        throw ConfigError("grid must look like min:max:points[:log], got '" + text + "'");
    }
    if (parts.size() == 4)
    {
        if (parts[3] == "log")
        {
            g.log = true;
        }
        else if (parts[3] != "linear")
        {
            throw ConfigError("grid spacing must be log or linear, got '" + parts[3] + "'");
        }
    }
    if (!(g.min < g.max) || g.points < 2)
    {
        throw ConfigError("grid needs min < max and at least 2 points");
    }
    if (g.log && !(g.min > 0.0))
    {
        throw ConfigError("log grid needs a positive minimum");
    }
    return g;
}

std::vector<double>
Grid::values() const
{
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
    {
        const double t = static_cast<double>(i) / (points - 1);
        out[i] = log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                     : min + t * (max - min);
    }
    out.back() = max;
    return out;
}

Axis
parse_axis(const std::string& name)
{
    if (name == "r_s")
    {
        return Axis::RisDistance;
    }
    if (name == "f")
    {
        return Axis::CellFraction;
    }
    if (name == "h_s")
    {
        return Axis::RisHeight;
    }
    if (name == "gamma")
    {
        return Axis::Gamma;
    }
    if (name == "d_bi")
    {
        return Axis::IntersectionDistance;
    }
    throw ConfigError("unknown axis '" + name + "' (expected r_s|f|h_s|gamma|d_bi)");
}

std::string
axis_column(Axis a)
{
    switch (a)
    {
    case Axis::RisDistance:
        return "r_s";
    case Axis::CellFraction:
        return "f";
    case Axis::RisHeight:
        return "h_s";
    case Axis::Gamma:
        return "gamma_db";
    case Axis::IntersectionDistance:
        return "d_bi";
    }
    return "x";
}

namespace
{

std::string
num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

class CsvWriter
{
  public:
    explicit CsvWriter(std::ostream& out) : m_out(out) {}

    void header(const std::vector<std::string>& cols) { row(cols); }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            m_out << (i ? "," : "") << cells[i];
        }
        m_out << '\n';
    }

  private:
    std::ostream& m_out;
};

double
fromDb(double db)
{
    return db_to_linear(db);
}

std::vector<std::string>
with(std::vector<std::string> base, const std::vector<std::string>& extra)
{
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

struct Context
{
    AppConfig cfg;
    const Command& cmd;

    double gammaDb() const { return cmd.gamma_db.value_or(cfg.gamma_db); }
    CoverageMode mode() const { return cmd.mode.value_or(cfg.mode); }

    std::vector<double> grid(const Grid& fallback) const { return cmd.grid.value_or(fallback).values(); }
};

Context
makeContext(const Command& cmd)
{
    Context ctx{cmd.config_path.empty() ? AppConfig{} : load_config(cmd.config_path), cmd};
    if (cmd.seed)
    {
        ctx.cfg.simulation.seed = *cmd.seed;
    }
    if (cmd.trials)
    {
        ctx.cfg.simulation.trials = *cmd.trials;
    }
    ctx.cfg.network.validate();
    ctx.cfg.simulation.validate(ctx.cfg.network);
    return ctx;
}

// Network and deployment at one point of a sweep axis.
struct Point
{
    NetworkParams params;
    Deployment deployment;
    double gamma_db;
};

Point
pointAt(const Context& ctx, Axis axis, double x)
{
    Point pt{ctx.cfg.network, ctx.cfg.deployment, ctx.gammaDb()};
    const bool inter = pt.deployment.with_intersection_ris;
    switch (axis)
    {
    case Axis::RisDistance:
        pt.deployment = Deployment::fixed(x, inter);
        break;
    case Axis::CellFraction:
        pt.deployment = Deployment::cell(x, inter);
        break;
    case Axis::RisHeight:
        pt.params.h_s = x;
        break;
    case Axis::Gamma:
        pt.gamma_db = x;
        break;
    case Axis::IntersectionDistance:
        break;
    }
    pt.params.validate();
    pt.deployment.validate();
    return pt;
}

Grid
defaultGrid(Axis axis, const NetworkParams& p)
{
    switch (axis)
    {
    case Axis::RisDistance:
        return {1e-3 / p.lambda_b, 1e2 / p.lambda_b, 2000, true};
    case Axis::CellFraction:
        return {0.05, 1.0, 20, false};
    case Axis::RisHeight:
        return {15.0, 150.0, 28, false};
    case Axis::Gamma:
        return {-20.0, 30.0, 26, false};
    case Axis::IntersectionDistance:
        return {0.0, 100.0, 21, false};
    }
    return {};
}

Metric
simMetric(const std::string& name)
{
    try
    {
        return parse_metric(name);
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
}

std::vector<std::string>
mcCells(const SimReport& r)
{
    return {num(r.estimate), num(r.half_width_95)};
}

void
failureSweep(const Context& ctx, std::ostream& out)
{
    const Axis axis = ctx.cmd.axis.value_or(Axis::RisDistance);
    if (axis != Axis::RisDistance && axis != Axis::CellFraction)
    {
        throw ConfigError("failure-sweep supports the r_s and f axes");
    }
    const auto xs = ctx.grid(defaultGrid(axis, ctx.cfg.network));
    std::vector<double> values;
    for (double x : xs)
    {
        const Point pt = pointAt(ctx, axis, x);
        values.push_back(pt.deployment.is_fixed() ? connection_failure_fixed(x, pt.params)
                                                  : connection_failure_cell(x, pt.params));
    }
    const auto best = std::min_element(values.begin(), values.end()) - values.begin();

    CsvWriter csv(out);
    std::vector<std::string> cols{axis_column(axis), "failure"};
    if (axis == Axis::RisDistance)
    {
        cols.insert(cols.end(), {"lower_bound", "upper_bound"});
    }
    cols.push_back("argmin");
    if (ctx.cmd.with_simulation)
    {
        cols.insert(cols.end(), {"mc", "mc_half_width"});
    }
    csv.header(cols);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const Point pt = pointAt(ctx, axis, xs[i]);
        std::vector<std::string> row{num(xs[i]), num(values[i])};
        if (axis == Axis::RisDistance)
        {
            const auto b = connection_failure_bounds(xs[i], pt.params);
            row.insert(row.end(), {num(b.lower), num(b.upper)});
        }
        row.push_back(static_cast<std::ptrdiff_t>(i) == best ? "1" : "0");
        if (ctx.cmd.with_simulation)
        {
            const auto r = estimate(pt.params, pt.deployment, Metric::ConnectionFailure, {},
                                    ctx.cfg.simulation);
            row = with(row, mcCells(r.front()));
        }
        csv.row(row);
    }
}

double
analyticSnr(const Point& pt, const Context& ctx, CoverageMode mode)
{
    const double gamma = fromDb(pt.gamma_db);
    if (ctx.cmd.metric == "intersection-user")
    {
        if (!pt.deployment.is_fixed())
        {
            throw ConfigError("intersection user needs a fixed r_s deployment");
        }
        return snr_coverage_intersection_user(gamma, pt.deployment.r_s(), pt.params, mode,
                                              ctx.cfg.quadrature);
    }
    return snr_coverage(gamma, pt.deployment, pt.params, mode, ctx.cfg.quadrature);
}

Metric
snrMetric(const Context& ctx)
{
    if (ctx.cmd.metric == "snr" || ctx.cmd.metric == "intersection-user")
    {
        return simMetric(ctx.cmd.metric);
    }
    throw ConfigError("coverage-sweep supports the snr and intersection-user metrics");
}

void
coverageSweep(const Context& ctx, std::ostream& out)
{
    const Axis axis = ctx.cmd.axis.value_or(Axis::Gamma);
    if (axis == Axis::IntersectionDistance)
    {
        throw ConfigError("coverage-sweep does not support the d_bi axis");
    }
    const Metric metric = snrMetric(ctx);
    const auto xs = ctx.grid(axis == Axis::RisDistance ? Grid{1.0, 100.0, 100, false}
                                                       : defaultGrid(axis, ctx.cfg.network));
    CsvWriter csv(out);
    std::vector<std::string> cols{axis_column(axis), "coverage_exact", "coverage_alzer"};
    if (ctx.cmd.with_simulation)
    {
        cols.insert(cols.end(), {"mc", "mc_half_width"});
    }
    csv.header(cols);
    for (double x : xs)
    {
        const Point pt = pointAt(ctx, axis, x);
        std::vector<std::string> row{num(x), num(analyticSnr(pt, ctx, CoverageMode::Exact)),
                                     num(analyticSnr(pt, ctx, CoverageMode::Alzer))};
        if (ctx.cmd.with_simulation)
        {
            const auto r = estimate(pt.params, pt.deployment, metric, {fromDb(pt.gamma_db)},
                                    ctx.cfg.simulation);
            row = with(row, mcCells(r.front()));
        }
        csv.row(row);
    }
}

double
analyticSinr(const Point& pt, const Context& ctx)
{
    return sinr_coverage(fromDb(pt.gamma_db), pt.deployment, pt.params, ctx.cfg.quadrature);
}

void
sinrSweep(const Context& ctx, std::ostream& out)
{
    const Axis axis = ctx.cmd.axis.value_or(Axis::Gamma);
    if (axis == Axis::IntersectionDistance)
    {
        throw ConfigError("sinr-sweep does not support the d_bi axis");
    }
    const auto xs = ctx.grid(axis == Axis::RisDistance ? Grid{1.0, 100.0, 34, false}
                                                       : defaultGrid(axis, ctx.cfg.network));
    CsvWriter csv(out);
    std::vector<std::string> cols{axis_column(axis), "sinr_coverage"};
    if (ctx.cmd.with_simulation)
    {
        cols.insert(cols.end(), {"mc", "mc_half_width"});
    }
    csv.header(cols);
    for (double x : xs)
    {
        const Point pt = pointAt(ctx, axis, x);
        std::vector<std::string> row{num(x), num(analyticSinr(pt, ctx))};
        if (ctx.cmd.with_simulation)
        {
            const auto r = estimate(pt.params, pt.deployment, Metric::SinrCoverage,
                                    {fromDb(pt.gamma_db)}, ctx.cfg.simulation);
            row = with(row, mcCells(r.front()));
        }
        csv.row(row);
    }
}

// Index of the best value; first one on ties.
template <class Better>
std::size_t
bestIndex(const std::vector<double>& v, Better better)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
    {
        if (better(v[i], v[best]))
        {
            best = i;
        }
    }
    return best;
}

void
optimizeRs(const Context& ctx, std::ostream& out)
{
    const NetworkParams& p = ctx.cfg.network;
    const bool inter = ctx.cfg.deployment.with_intersection_ris;
    CsvWriter csv(out);
    csv.header({"quantity", "r_s", "objective", "note"});

    const auto failGrid = defaultGrid(Axis::RisDistance, p).values();
    std::vector<double> fail;
    for (double x : failGrid)
    {
        fail.push_back(connection_failure_fixed(x, p));
    }
    const bool degenerate = !(p.lambda_v > 0.0);
    if (degenerate)
    {
        csv.row({"placement_root", "nan", "0", "degenerate: no blockages"});
        csv.row({"placement_approx", "nan", "0", "degenerate: no blockages"});
        csv.row({"failure_grid_argmin", num(failGrid.front()), "0", "degenerate: no blockages"});
    }
    else
    {
        const auto sol = optimal_rs(p);
        csv.row({"placement_root", num(sol.r_s_opt), num(connection_failure_fixed(sol.r_s_opt, p)),
                 ""});
        csv.row({"placement_approx", num(sol.r_s_approx),
                 num(connection_failure_fixed(sol.r_s_approx, p)), ""});
        const std::size_t i = bestIndex(fail, std::less<>());
        csv.row({"failure_grid_argmin", num(failGrid[i]), num(fail[i]), ""});
    }

    const double gamma = fromDb(ctx.gammaDb());
    const auto covGrid = ctx.grid({1.0, 3.0 / p.lambda_b, 60, false});
    std::vector<double> snr;
    std::vector<double> sinr;
    for (double x : covGrid)
    {
        const auto d = Deployment::fixed(x, inter);
        snr.push_back(snr_coverage(gamma, d, p, ctx.mode(), ctx.cfg.quadrature));
        sinr.push_back(sinr_coverage(gamma, d, p, ctx.cfg.quadrature));
    }
    const std::size_t is = bestIndex(snr, std::greater<>());
    const std::size_t ii = bestIndex(sinr, std::greater<>());
    csv.row({"snr_grid_argmax", num(covGrid[is]), num(snr[is]), ""});
    csv.row({"sinr_grid_argmax", num(covGrid[ii]), num(sinr[ii]), ""});
}

std::vector<double>
gammaList(const Context& ctx)
{
    return ctx.cmd.grid ? ctx.cmd.grid->values() : ctx.cfg.gammas_db;
}

void
simulateCmd(const Context& ctx, std::ostream& out)
{
    const Metric metric = simMetric(ctx.cmd.metric);
    const auto gdb = gammaList(ctx);
    std::vector<double> gammas;
    for (double g : gdb)
    {
        gammas.push_back(fromDb(g));
    }
    const auto reports =
        estimate(ctx.cfg.network, ctx.cfg.deployment, metric, gammas, ctx.cfg.simulation);
    CsvWriter csv(out);
    csv.header({"metric", "gamma_db", "estimate", "half_width_95", "trials"});
    for (std::size_t i = 0; i < reports.size(); ++i)
    {
        const std::string g = metric == Metric::ConnectionFailure ? "" : num(gdb[i]);
        csv.row({to_string(metric), g, num(reports[i].estimate), num(reports[i].half_width_95),
                 std::to_string(reports[i].trials_used)});
    }
}

void
compareCmd(const Context& ctx, std::ostream& out)
{
    const Metric metric = simMetric(ctx.cmd.metric);
    const auto& p = ctx.cfg.network;
    const auto& d = ctx.cfg.deployment;
    std::vector<double> gdb = gammaList(ctx);
    std::vector<double> analytic;
    std::vector<double> gammas;
    if (metric == Metric::ConnectionFailure)
    {
        gdb.clear();
        analytic.push_back(d.is_fixed() ? connection_failure_fixed(d.r_s(), p)
                                        : connection_failure_cell(d.f(), p));
    }
    for (double g : gdb)
    {
        gammas.push_back(fromDb(g));
        const Point pt{p, d, g};
        analytic.push_back(metric == Metric::SinrCoverage ? analyticSinr(pt, ctx)
                                                          : analyticSnr(pt, ctx, ctx.mode()));
    }
    const auto mc = estimate(p, d, metric, gammas, ctx.cfg.simulation);
    double maxDiff = 0.0;
    for (std::size_t i = 0; i < mc.size(); ++i)
    {
        maxDiff = std::max(maxDiff, std::abs(analytic[i] - mc[i].estimate));
    }
    CsvWriter csv(out);
    csv.header({"metric", "gamma_db", "analytic", "mc", "mc_half_width", "abs_diff",
                "max_abs_diff"});
    for (std::size_t i = 0; i < mc.size(); ++i)
    {
        const std::string g = metric == Metric::ConnectionFailure ? "" : num(gdb[i]);
        csv.row({to_string(metric), g, num(analytic[i]), num(mc[i].estimate),
                 num(mc[i].half_width_95), num(std::abs(analytic[i] - mc[i].estimate)),
                 num(maxDiff)});
    }
}

void
outageCompare(const Context& ctx, std::ostream& out)
{
    const Axis axis = ctx.cmd.axis.value_or(Axis::IntersectionDistance);
    if (axis != Axis::IntersectionDistance)
    {
        throw ConfigError("outage-compare sweeps the d_bi axis");
    }
    const auto xs = ctx.grid(defaultGrid(axis, ctx.cfg.network));
    const double gamma = fromDb(ctx.gammaDb());
    CsvWriter csv(out);
    csv.header({"d_bi", "outage_selection", "selection_half_width", "outage_baseline",
                "baseline_half_width"});
    for (double x : xs)
    {
        const auto r =
            outage_comparison(ctx.cfg.network, ctx.cfg.deployment, x, gamma, ctx.cfg.simulation);
        csv.row({num(x), num(r.selection.estimate), num(r.selection.half_width_95),
                 num(r.baseline.estimate), num(r.baseline.half_width_95)});
    }
}

} // namespace

void
run(const Command& cmd, std::ostream& out)
{
    const Context ctx = makeContext(cmd);
    std::ostringstream buffer;
    if (cmd.verb == "failure-sweep")
    {
        failureSweep(ctx, buffer);
    }
    else if (cmd.verb == "coverage-sweep")
    {
        coverageSweep(ctx, buffer);
    }
    else if (cmd.verb == "sinr-sweep")
    {
        sinrSweep(ctx, buffer);
    }
    else if (cmd.verb == "optimize-rs")
    {
        optimizeRs(ctx, buffer);
    }
    else if (cmd.verb == "simulate")
    {
        simulateCmd(ctx, buffer);
    }
    else if (cmd.verb == "compare")
    {
        compareCmd(ctx, buffer);
    }
    else if (cmd.verb == "outage-compare")
    {
        outageCompare(ctx, buffer);
    }
    else
    {
        throw ConfigError("unknown command '" + cmd.verb + "'");
    }
    // Output is written only once the whole table succeeded.
    out << buffer.str();
}

int
main_entry(int argc, char** argv)
{
    CLI::App app{"RIS street-network coverage and blockage toolkit"};
    app.require_subcommand(1);

    Command cmd;
    std::string grid;
    std::string mode;
    std::string axis;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    double gammaDb = 0.0;

    const std::vector<std::pair<std::string, std::string>> verbs{
        {"failure-sweep", "connection failure over r_s or f"},
        {"coverage-sweep", "SNR coverage over gamma, r_s, f or h_s"},
        {"sinr-sweep", "SINR coverage over gamma, r_s, f or h_s"},
        {"optimize-rs", "optimal RIS distance by every criterion"},
        {"simulate", "Monte Carlo estimates of one metric"},
        {"compare", "analytic values next to Monte Carlo estimates"},
        {"outage-compare", "outage with and without intersection RIS selection"},
    };
    std::vector<CLI::Option*> seedOpts;
    std::vector<CLI::Option*> trialOpts;
    std::vector<CLI::Option*> gammaOpts;
    for (const auto& [name, help] : verbs)
    {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", cmd.config_path, "INI config file");
        sub->add_option("--out", cmd.out_path, "CSV output path (default stdout)");
        seedOpts.push_back(sub->add_option("--seed", seed, "simulation seed"));
        trialOpts.push_back(sub->add_option("--trials", trials, "Monte Carlo trials"));
        sub->add_option("--grid", grid, "sweep grid min:max:points[:log]");
        sub->add_option("--mode", mode, "coverage mode exact|alzer");
        sub->add_option("--axis", axis, "sweep axis r_s|f|h_s|gamma|d_bi");
        gammaOpts.push_back(sub->add_option("--gamma-db", gammaDb, "threshold for non-gamma axes"));
        sub->add_option("--metric", cmd.metric, "failure|snr|sinr|intersection-user");
        sub->add_flag("--simulate", cmd.with_simulation, "add Monte Carlo columns to sweeps");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e);
    }

    try
    {
        cmd.verb = app.get_subcommands().front()->get_name();
        auto given = [](const std::vector<CLI::Option*>& opts) {
            return std::any_of(opts.begin(), opts.end(), [](auto* o) { return o->count() > 0; });
        };
        if (given(seedOpts))
        {
            cmd.seed = seed;
        }
        if (given(trialOpts))
        {
            cmd.trials = trials;
        }
        if (given(gammaOpts))
        {
            cmd.gamma_db = gammaDb;
        }
        if (!grid.empty())
        {
            cmd.grid = Grid::parse(grid);
        }
        if (!mode.empty())
        {
            try
            {
                cmd.mode = parse_mode(mode);
            }
            catch (const std::invalid_argument& e)
            {
                throw ConfigError(e.what());
            }
        }
        if (!axis.empty())
        {
            cmd.axis = parse_axis(axis);
        }
        if (cmd.out_path.empty() || cmd.out_path == "-")
        {
            run(cmd, std::cout);
        }
        else
        {
            std::ostringstream buffer;
            run(cmd, buffer);
            std::ofstream file(cmd.out_path);
            if (!(file << buffer.str()))
            {
                throw std::runtime_error("cannot write '" + cmd.out_path + "'");
            }
        }
    }
    catch (const std::exception& e)
    {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        std::cerr << "error: " << msg << '\n';
        return 1;
    }
    return 0;
}

} // namespace risnet::cli
