// Flat key = value configuration with dotted section names; every physical
// parameter is explicit and validated against the preconditions of the
// command that will consume it.
#ifndef MAUTNER_CONFIG_HPP
#define MAUTNER_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mautner/group.hpp"
#include "mautner/symbols.hpp"

namespace mautner {

struct SymbolSpec {
    std::string family = "bump"; // bump | tent | gauss
    cplx amplitude{1.0, 0.0};
    double center_s = 0.0;
    double width_s = 1.0;
    DualVector center_l;
    double width_l = 1.0;
    double p_modulation = 0.0; // family(p) = (1 + p_modulation * p) * profile
};

FourierProfile make_profile(const SymbolSpec& spec);

struct SpaceSpec {
    std::string time_family = "gauss"; // bump | tent | gauss
    double center_s = 0.0;
    double width_s = 1.0;
    double c_width = 1.0;              // fiber factor width per real coordinate
    std::string c_family = "gauss";    // gauss | tentx (tent in Re c1 only)
};

/// Separable space-side profile; Gaussian fiber factors are truncated at six
/// widths, the tentx variant replaces the Re c1 factor by a tent.
SpaceProfile make_space_profile(const SpaceSpec& spec);

struct RunConfig {
    double theta = std::numbers::sqrt2;
    std::string convention = "row";
    double grid_T = 0.0;
    int grid_n = 0;
    double dual_L = 0.0;
    int dual_per_dim = 0;
    SymbolSpec symbol;

    std::vector<double> sweep_deltas;
    std::vector<double> sweep_p_factors = {1.0};

    std::vector<double> certify_p_grid;
    double certify_tol_rel = 1e-3;
    int certify_probes = 8;
    std::vector<double> certify_p0 = {0.5};

    double pl_c_box = 0.0;
    int pl_c_per_dim = 0;
    double pl_dual_box = 0.0;
    int pl_dual_per_dim = 0;
    SpaceSpec pl_xi;
    SpaceSpec pl_eta;
    double pl_tolerance = -1.0; // negative: report only

    std::string out_dir = "out";
    int workers = 1;
    std::uint64_t seed = 1;

    GroupContext context() const;
};

RunConfig parse_config(const std::string& path);

/// All precondition failures for the given subcommand, empty when runnable.
std::vector<std::string> validate_config(const RunConfig& cfg, const std::string& command);

} // namespace mautner

#endif
