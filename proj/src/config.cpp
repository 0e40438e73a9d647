#include "risnet/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace risnet
{

namespace pt = boost::property_tree;

namespace
{

const std::map<std::string, std::set<std::string>>&
knownKeys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"network", {"lambda_b", "lambda_v", "lambda_r", "h_b", "h_s", "h_v"}},
        {"ris", {"N", "theta_s"}},
        {"radio",
         {"p_t_dbm", "p_t_w", "noise_psd_dbm_hz", "noise_psd_w_hz", "bandwidth_hz",
          "noise_figure_db", "noise_figure", "f_c_hz", "alpha", "n0", "u_m", "u_s", "v_m", "v_s"}},
        {"deployment", {"mode", "r_s", "f", "intersection"}},
        {"quadrature", {"rel_tol", "abs_tol", "max_depth", "truncation_epsilon"}},
        {"simulation", {"trials", "window_half_length", "seed", "parallel_chunks"}},
        {"experiment", {"coverage_mode", "gamma_db", "gammas_db"}},
    };
    return keys;
}

class Reader
{
  public:
    explicit Reader(const pt::ptree& tree) : m_tree(tree) {}

    template <class T>
    void get(const std::string& key, T& out) const
    {
        const auto node = m_tree.get_child_optional(pt::ptree::path_type(key, '.'));
        if (!node)
        {
            return;
        }
        try
        {
            out = node->get_value<T>();
        }
        catch (const pt::ptree_error&)
        {
            throw ConfigError("invalid value for " + key + ": '" + node->data() + "'");
        }
        if constexpr (std::is_floating_point_v<T>)
        {
            if (!std::isfinite(out))
            {
                throw ConfigError("non-finite value for " + key);
            }
        }
    }

    bool has(const std::string& key) const
    {
        return static_cast<bool>(m_tree.get_child_optional(pt::ptree::path_type(key, '.')));
    }

    std::string text(const std::string& key, const std::string& fallback) const
    {
        return m_tree.get<std::string>(pt::ptree::path_type(key, '.'), fallback);
    }

  private:
    const pt::ptree& m_tree;
};

void
checkKeys(const pt::ptree& tree)
{
    for (const auto& [section, body] : tree)
    {
        const auto it = knownKeys().find(section);
        if (it == knownKeys().end())
        {
            throw ConfigError("unknown config section [" + section + "]");
        }
        for (const auto& entry : body)
        {
            if (!it->second.count(entry.first))
            {
                throw ConfigError("unknown key '" + entry.first + "' in [" + section + "]");
            }
        }
    }
}

void
exclusive(const Reader& r, const std::string& a, const std::string& b)
{
    if (r.has(a) && r.has(b))
    {
        throw ConfigError("set only one of " + a + " and " + b);
    }
}

bool
parseBool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes")
    {
        return true;
    }
    if (text == "false" || text == "0" || text == "no")
    {
        return false;
    }
    throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
}

} // namespace

std::vector<double>
parse_number_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception&)
        {
            throw ConfigError("invalid number '" + item + "' in list '" + text + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v))
        {
            throw ConfigError("invalid number '" + item + "' in list '" + text + "'");
        }
        out.push_back(v);
    }
    if (out.empty())
    {
        throw ConfigError("empty number list");
    }
    return out;
}

AppConfig
parse_config(std::istream& in)
{
    pt::ptree tree;
    try
    {
        pt::ini_parser::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ConfigError(std::string("malformed config: ") + e.message() + " at line " +
                          std::to_string(e.line()));
    }
    checkKeys(tree);
    const Reader r(tree);

    RawConfig raw;
    r.get("network.lambda_b", raw.lambda_b);
    r.get("network.lambda_v", raw.lambda_v);
    r.get("network.lambda_r", raw.lambda_r);
    r.get("network.h_b", raw.h_b);
    r.get("network.h_s", raw.h_s);
    r.get("network.h_v", raw.h_v);
    r.get("ris.N", raw.N);
    r.get("ris.theta_s", raw.theta_s);

    exclusive(r, "radio.p_t_dbm", "radio.p_t_w");
    exclusive(r, "radio.noise_psd_dbm_hz", "radio.noise_psd_w_hz");
    exclusive(r, "radio.noise_figure_db", "radio.noise_figure");
    if (r.has("radio.p_t_w"))
    {
        r.get("radio.p_t_w", raw.p_t);
        raw.p_t_unit = PowerUnit::Watt;
    }
    r.get("radio.p_t_dbm", raw.p_t);
    if (r.has("radio.noise_psd_w_hz"))
    {
        r.get("radio.noise_psd_w_hz", raw.noise_psd);
        raw.noise_psd_unit = PowerUnit::Watt;
    }
    r.get("radio.noise_psd_dbm_hz", raw.noise_psd);
    if (r.has("radio.noise_figure"))
    {
        r.get("radio.noise_figure", raw.noise_figure);
        raw.noise_figure_unit = RatioUnit::Linear;
    }
    r.get("radio.noise_figure_db", raw.noise_figure);
    r.get("radio.bandwidth_hz", raw.bandwidth);
    r.get("radio.f_c_hz", raw.f_c);
    r.get("radio.alpha", raw.alpha);
    r.get("radio.n0", raw.n0);
    r.get("radio.u_m", raw.u_m);
    r.get("radio.u_s", raw.u_s);
    r.get("radio.v_m", raw.v_m);
    r.get("radio.v_s", raw.v_s);

    AppConfig cfg;
    cfg.network = normalize(raw);

    const std::string mode = r.text("deployment.mode", "fixed");
    const bool intersection =
        parseBool("deployment.intersection", r.text("deployment.intersection", "false"));
    if (mode == "fixed")
    {
        double r_s = FixedDistance{}.r_s;
        r.get("deployment.r_s", r_s);
        cfg.deployment = Deployment::fixed(r_s, intersection);
    }
    else if (mode == "cell")
    {
        double f = CellFraction{}.f;
        r.get("deployment.f", f);
        cfg.deployment = Deployment::cell(f, intersection);
    }
    else
    {
        throw ConfigError("deployment.mode must be fixed or cell, got '" + mode + "'");
    }
    cfg.deployment.validate();

    r.get("quadrature.rel_tol", cfg.quadrature.rel_tol);
    r.get("quadrature.abs_tol", cfg.quadrature.abs_tol);
    r.get("quadrature.max_depth", cfg.quadrature.max_depth);
    r.get("quadrature.truncation_epsilon", cfg.quadrature.truncation_epsilon);
    cfg.quadrature.validate();

    r.get("simulation.trials", cfg.simulation.trials);
    r.get("simulation.window_half_length", cfg.simulation.window_half_length);
    r.get("simulation.seed", cfg.simulation.seed);
    r.get("simulation.parallel_chunks", cfg.simulation.parallel_chunks);
    cfg.simulation.validate(cfg.network);

    try
    {
        cfg.mode = parse_mode(r.text("experiment.coverage_mode", "exact"));
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
    r.get("experiment.gamma_db", cfg.gamma_db);
    if (r.has("experiment.gammas_db"))
    {
        cfg.gammas_db = parse_number_list(r.text("experiment.gammas_db", ""));
    }
    return cfg;
}

AppConfig
load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    return parse_config(in);
}

} // namespace risnet
