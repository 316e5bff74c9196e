#include "mautner/config.hpp"

#include "mautner/dstar.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mautner {

FourierProfile make_profile(const SymbolSpec& spec) {
    if (spec.family == "bump")
        return make_bump_profile(spec.center_s, spec.width_s, spec.center_l, spec.width_l,
                                 spec.amplitude);
    if (spec.family == "tent")
        return make_tent_profile(spec.center_s, spec.width_s, spec.center_l, spec.width_l,
                                 spec.amplitude);
    if (spec.family == "gauss")
        return make_gauss_profile(spec.center_s, spec.width_s, spec.center_l, spec.width_l,
                                  spec.amplitude);
    throw std::domain_error("unknown symbol family: " + spec.family);
}

SpaceProfile make_space_profile(const SpaceSpec& spec) {
    std::function<double(double)> shape;
    double reach = 1.0;
    if (spec.time_family == "bump") {
        shape = [](double x) {
            const double x2 = x * x;
            return x2 >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - x2));
        };
    } else if (spec.time_family == "tent") {
        shape = [](double x) { return std::max(0.0, 1.0 - std::abs(x)); };
    } else if (spec.time_family == "gauss") {
        shape = [](double x) { return std::abs(x) > 4.0 ? 0.0 : std::exp(-0.5 * x * x); };
        reach = 4.0;
    } else {
        throw std::domain_error("unknown space profile family: " + spec.time_family);
    }
    const double cs = spec.center_s, ws = spec.width_s, cw = spec.c_width;
    auto g = [shape, cs, ws](double s) -> cplx { return shape((s - cs) / ws); };
    auto q = [cw](double x) -> cplx {
        return std::abs(x) > 6.0 * cw ? 0.0 : std::exp(-0.5 * (x / cw) * (x / cw));
    };
    std::function<cplx(double)> q1x = q;
    if (spec.c_family == "tentx")
        q1x = [cw](double x) -> cplx { return std::max(0.0, 1.0 - std::abs(x) / cw); };
    else if (spec.c_family != "gauss")
        throw std::domain_error("unknown fiber family: " + spec.c_family);
    SpaceProfile p;
    p.c_time = std::abs(cs) + reach * ws;
    p.c_box = 6.0 * cw;
    p.sep = SpaceProfile::Separable{g, q1x, q, q, q};
    p.eval = [g, q1x, q](double s, const CPair& c) -> cplx {
        return g(s) * q1x(c.z.real()) * q(c.z.imag()) * q(c.w.real()) * q(c.w.imag());
    };
    return p;
}

GroupContext RunConfig::context() const {
    return GroupContext(theta,
                        convention == "column" ? DualArgument::Column : DualArgument::Row,
                        1.0 / std::pow(2.0 * std::numbers::pi, 4.0));
}

namespace {

class KeyTable {
public:
    explicit KeyTable(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": expected key = value");
            table_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    bool has(const std::string& key) const { return table_.count(key) > 0; }

    std::string str(const std::string& key) const {
        const auto it = table_.find(key);
        if (it == table_.end()) throw std::runtime_error("config key missing: " + key);
        return it->second;
    }

    std::string str_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? str(key) : fallback;
    }

    double num(const std::string& key) const {
        const std::string v = str(key);
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used != v.size()) throw std::runtime_error("config key " + key + ": bad number");
        return out;
    }

    double num_or(const std::string& key, double fallback) const {
        return has(key) ? num(key) : fallback;
    }

    int integer(const std::string& key) const { return static_cast<int>(num(key)); }

    int integer_or(const std::string& key, int fallback) const {
        return has(key) ? integer(key) : fallback;
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(str(key));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stod(item));
        return out;
    }

    std::vector<double> list_or(const std::string& key, std::vector<double> fallback) const {
        return has(key) ? list(key) : fallback;
    }

private:
    std::map<std::string, std::string> table_;
};

SymbolSpec read_symbol(const KeyTable& t, const std::string& prefix) {
    SymbolSpec s;
    s.family = t.str_or(prefix + ".family", "bump");
    s.amplitude = cplx(t.num_or(prefix + ".amplitude_re", 1.0),
                       t.num_or(prefix + ".amplitude_im", 0.0));
    s.center_s = t.num_or(prefix + ".center_s", 0.0);
    s.width_s = t.num(prefix + ".width_s");
    s.center_l = DualVector{cplx(t.num_or(prefix + ".center_l1_re", 0.0),
                                 t.num_or(prefix + ".center_l1_im", 0.0)),
                            cplx(t.num_or(prefix + ".center_l2_re", 0.0),
                                 t.num_or(prefix + ".center_l2_im", 0.0))};
    s.width_l = t.num(prefix + ".width_l");
    s.p_modulation = t.num_or(prefix + ".p_modulation", 0.0);
    return s;
}

SpaceSpec read_space(const KeyTable& t, const std::string& prefix) {
    SpaceSpec s;
    s.time_family = t.str_or(prefix + ".family", "gauss");
    s.center_s = t.num_or(prefix + ".center_s", 0.0);
    s.width_s = t.num(prefix + ".width_s");
    s.c_width = t.num(prefix + ".c_width");
    s.c_family = t.str_or(prefix + ".c_family", "gauss");
    return s;
}

} // namespace

RunConfig parse_config(const std::string& path) {
    KeyTable t(path);
    RunConfig cfg;
    cfg.theta = t.num("theta");
    cfg.convention = t.str_or("convention", "row");
    cfg.grid_T = t.num("grid.T");
    cfg.grid_n = t.integer("grid.n");
    cfg.dual_L = t.num_or("dual.L", 0.0);
    cfg.dual_per_dim = t.integer_or("dual.per_dim", 0);
    if (t.has("symbol.width_s")) cfg.symbol = read_symbol(t, "symbol");
    cfg.sweep_deltas = t.list_or("sweep.deltas", {});
    cfg.sweep_p_factors = t.list_or("sweep.p_factors", {1.0});
    if (t.str_or("certify.p_grid", "") == "default")
        cfg.certify_p_grid = default_certify_p_grid();
    else
        cfg.certify_p_grid = t.list_or("certify.p_grid", {});
    cfg.certify_tol_rel = t.num_or("certify.tol_rel", 1e-3);
    cfg.certify_probes = t.integer_or("certify.probes", 8);
    cfg.certify_p0 = t.list_or("certify.p0", {0.5});
    cfg.pl_c_box = t.num_or("plancherel.c_box", 0.0);
    cfg.pl_c_per_dim = t.integer_or("plancherel.c_per_dim", 0);
    cfg.pl_dual_box = t.num_or("plancherel.dual_box", 0.0);
    cfg.pl_dual_per_dim = t.integer_or("plancherel.dual_per_dim", 0);
    if (t.has("plancherel.xi.width_s")) cfg.pl_xi = read_space(t, "plancherel.xi");
    if (t.has("plancherel.eta.width_s")) cfg.pl_eta = read_space(t, "plancherel.eta");
    cfg.pl_tolerance = t.num_or("plancherel.tolerance", -1.0);
    cfg.out_dir = t.str_or("out", "out");
    cfg.workers = t.integer_or("workers", 1);
    cfg.seed = static_cast<std::uint64_t>(t.num_or("seed", 1.0));
    return cfg;
}

std::vector<std::string> validate_config(const RunConfig& cfg, const std::string& command) {
    std::vector<std::string> errs;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) errs.push_back(msg);
    };
    need(std::isfinite(cfg.theta) && cfg.theta != 0.0, "theta must be finite and nonzero");
    need(cfg.convention == "row" || cfg.convention == "column",
         "convention must be 'row' or 'column'");
    need(cfg.grid_T > 0.0, "grid.T must be positive");
    need(cfg.grid_n >= 2, "grid.n must be at least 2");
    need(cfg.workers >= 1, "workers must be at least 1");

    const bool needs_symbol =
        command == "kernel" || command == "sweep" || command == "certify";
    if (needs_symbol) {
        try {
            const FourierProfile a = make_profile(cfg.symbol);
            need(cfg.grid_T >= a.c_time,
                 "grid.T must cover the symbol's time support (induced kernel precondition)");
            if (command == "sweep") {
                need(!cfg.sweep_deltas.empty(), "sweep.deltas must be nonempty");
                for (std::size_t i = 0; i < cfg.sweep_deltas.size(); ++i) {
                    const double d = cfg.sweep_deltas[i];
                    need(d > 0.0 && d <= 1.0, "sweep deltas must lie in (0, 1]");
                    if (i > 0)
                        need(d < cfg.sweep_deltas[i - 1],
                             "sweep.deltas must be strictly decreasing");
                    need(a.c_time <= std::pow(d, -0.25) + 1e-12,
                         "symbol time support exceeds r(delta) for delta = " +
                             std::to_string(d) + " (sigma support condition)");
                }
                for (double f : cfg.sweep_p_factors)
                    need(std::abs(f) <= 1.0, "sweep p factors must satisfy |f| <= 1");
                need(cfg.dual_per_dim >= 1 && cfg.dual_L > 0.0,
                     "sweep needs dual.L and dual.per_dim");
            }
            if (command == "certify") {
                need(!cfg.certify_p_grid.empty(), "certify.p_grid must be nonempty");
                bool has_zero = false;
                double max_small = 0.0;
                for (double p : cfg.certify_p_grid) {
                    need(std::abs(p) <= 1.0, "certify p-grid values must lie in [-1, 1]");
                    if (p == 0.0) has_zero = true;
                    if (p != 0.0 && std::abs(p) <= 0.5)
                        max_small = std::max(max_small, std::abs(p));
                }
                need(has_zero, "certify.p_grid must contain 0");
                if (max_small > 0.0)
                    need(a.c_time <= std::pow(max_small, -0.25) + 1e-12,
                         "symbol time support exceeds r(delta) at the coarsest sigma sample");
                for (double p0 : cfg.certify_p0) {
                    need(p0 != 0.0, "certify.p0 entries must be nonzero");
                    bool on_grid = false;
                    for (double p : cfg.certify_p_grid)
                        if (std::abs(p - p0) <= 1e-12) on_grid = true;
                    need(on_grid, "certify.p0 entries must be on certify.p_grid");
                }
                need(cfg.dual_per_dim >= 1 && cfg.dual_L > 0.0,
                     "certify needs dual.L and dual.per_dim");
                need(cfg.certify_tol_rel > 0.0, "certify.tol_rel must be positive");
            }
        } catch (const std::exception& e) {
            errs.push_back(std::string("symbol: ") + e.what());
        }
    }
    if (command == "plancherel") {
        need(cfg.pl_c_box > 0.0 && cfg.pl_c_per_dim >= 2,
             "plancherel needs c_box and c_per_dim");
        need(cfg.pl_dual_box > 0.0 && cfg.pl_dual_per_dim >= 2,
             "plancherel needs dual_box and dual_per_dim");
        try {
            const SpaceProfile xi = make_space_profile(cfg.pl_xi);
            const SpaceProfile eta = make_space_profile(cfg.pl_eta);
            need(xi.c_time <= cfg.grid_T && eta.c_time <= cfg.grid_T,
                 "plancherel profiles must fit the time grid");
        } catch (const std::exception& e) {
            errs.push_back(std::string("plancherel profiles: ") + e.what());
        }
    }
    return errs;
}

} // namespace mautner
