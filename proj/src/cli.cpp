#include "mautner/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mautner/checks.hpp"
#include "mautner/config.hpp"
#include "mautner/csv.hpp"
#include "mautner/dstar.hpp"
#include "mautner/sigma.hpp"

namespace mautner {

namespace {

namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

// The tiny multiplicativity instance that pins the convention; run before
// every command so a corrupted convention flag dies loudly.
bool startup_convention_ok(const GroupContext& ctx) {
    const double defect = convention_probe(ctx);
    if (defect > 0.02) {
        std::cerr << "startup check failed: kernel multiplicativity defect " << defect
                  << " exceeds 0.02; the dual-action convention is inconsistent\n";
        return false;
    }
    return true;
}

std::vector<double> parse_reals(const std::string& text, std::size_t expect,
                                const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.size() != expect)
        throw std::runtime_error(what + ": expected " + std::to_string(expect) +
                                 " comma-separated reals");
    return out;
}

int cmd_group_selftest(const RunConfig& cfg) {
    const GroupContext ctx = cfg.context();
    Rng rng(cfg.seed);
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, double measure) {
        std::cout << (ok ? "[pass] " : "[FAIL] ") << name << " (measure " << measure << ")\n";
        if (!ok) ++failures;
    };

    auto random_element = [&] {
        return GroupElement{rng.uniform(-1.5, 1.5), rng.complex_in_box(1.0),
                            rng.complex_in_box(1.0)};
    };
    const std::vector<double> ps = {-1.0, -0.3, 0.0, 0.7};

    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double p = ps[k % ps.size()];
        const GroupElement g = random_element(), h = random_element(), r = random_element();
        const GroupElement lhs = multiply(ctx, p, multiply(ctx, p, g, h), r);
        const GroupElement rhs = multiply(ctx, p, g, multiply(ctx, p, h, r));
        worst = std::max({worst, std::abs(lhs.t - rhs.t), std::abs(lhs.z - rhs.z),
                          std::abs(lhs.w - rhs.w)});
    }
    report("associativity", worst <= 1e-12, worst);

    worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double p = ps[k % ps.size()];
        const GroupElement g = random_element();
        const GroupElement li = multiply(ctx, p, inverse(ctx, p, g), g);
        const GroupElement ri = multiply(ctx, p, g, inverse(ctx, p, g));
        worst = std::max({worst, std::abs(li.t), std::abs(li.z), std::abs(li.w), std::abs(ri.t),
                          std::abs(ri.z), std::abs(ri.w)});
    }
    report("two-sided inverses", worst <= 1e-12, worst);

    worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double p = rng.uniform(-1.0, 1.0);
        const double t = rng.uniform(-2.0, 2.0);
        const CPair c{rng.complex_in_box(1.0), rng.complex_in_box(1.0)};
        const DualVector l{rng.complex_in_box(1.0), rng.complex_in_box(1.0)};
        const double lhs = pairing(automorphism_alpha(ctx, p, t, c), l);
        const double rhs = pairing(c, dual_action(ctx, p, t, l));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    report("pairing duality", worst <= 1e-12, worst);

    worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double p = rng.uniform(-1.0, 1.0);
        const double t = rng.uniform(-2.0, 2.0);
        const double det = std::exp(2.0 * p * t) * std::exp(-2.0 * p * t);
        worst = std::max(worst, std::abs(det - 1.0));
        const double exponent = 2.0 * p * t + (-2.0 * p * t);
        worst = std::max(worst, std::abs(exponent));
    }
    report("twist Jacobian is exactly 1", worst <= 1e-14, worst);

    {
        const GroupElement g0{0.8 / 3.0, cplx(0.27, -0.18), cplx(-0.21, 0.13)};
        const TranslationInvariance coarse = haar_translation_check(ctx, 0.3, g0, 9);
        const TranslationInvariance fine = haar_translation_check(ctx, 0.3, g0, 17);
        const double ratio_l = coarse.left_error / fine.left_error;
        const double ratio_r = coarse.right_error / fine.right_error;
        const bool ok = ratio_l > 2.5 && ratio_l < 6.0 && ratio_r > 2.5 && ratio_r < 6.0;
        report("Haar translation invariance refines at order 2", ok,
               std::min(ratio_l, ratio_r));
    }

    worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        double p0 = rng.uniform(-1.0, 1.0), p = rng.uniform(-1.0, 1.0);
        if (std::abs(p0) < 0.05) p0 = 0.4;
        if (std::abs(p) < 0.05) p = -0.6;
        const GroupElement g = random_element(), h = random_element();
        // iso_h intertwines the rotation-free model product
        // (s,c)(s',c') = (s+s', e^{-p s'}c + c').
        auto model = [](double q, const GroupElement& x, const GroupElement& y) {
            const double scale = std::exp(-q * y.t);
            return GroupElement{x.t + y.t, scale * x.z + y.z, scale * x.w + y.w};
        };
        const GroupElement lhs = iso_h(p0, p, model(p0, g, h));
        const GroupElement rhs = model(p, iso_h(p0, p, g), iso_h(p0, p, h));
        worst = std::max({worst, std::abs(lhs.t - rhs.t), std::abs(lhs.z - rhs.z),
                          std::abs(lhs.w - rhs.w)});
    }
    report("cross-parameter map intertwines the model product", worst <= 1e-12, worst);

    const double probe = convention_probe(ctx);
    report("kernel multiplicativity oracle", probe <= 0.02, probe);

    return failures == 0 ? kExitPass : kExitCheckFailure;
}

int cmd_kernel(const RunConfig& cfg, double p, const DualVector& l) {
    const GroupContext ctx = cfg.context();
    const FourierProfile a = make_profile(cfg.symbol);
    const TimeGrid grid = TimeGrid::make(cfg.grid_T, cfg.grid_n);
    const KernelOperator k = induced_kernel(ctx, p, l, a, grid);

    fs::create_directories(cfg.out_dir);
    const fs::path path = fs::path(cfg.out_dir) / "kernel.csv";
    std::ofstream out(path);
    out << "s_index,t_index,re,im\n";
    for (int i = 0; i < k.n(); ++i)
        for (int j = 0; j < k.n(); ++j)
            out << i << "," << j << "," << g17(k.at(i, j).real()) << ","
                << g17(k.at(i, j).imag()) << "\n";
    const double nrm = operator_norm(k);
    std::ofstream norm_out(fs::path(cfg.out_dir) / "norm.csv");
    norm_out << "p,l1_re,l1_im,l2_re,l2_im,norm\n";
    norm_out << g17(p) << "," << g17(l.l1.real()) << "," << g17(l.l1.imag()) << ","
             << g17(l.l2.real()) << "," << g17(l.l2.imag()) << "," << g17(nrm) << "\n";
    std::cout << "kernel written to " << path.string() << "\n";
    std::cout << "operator norm = " << g17(nrm) << "\n";
    return kExitPass;
}

int cmd_sweep(const RunConfig& cfg) {
    const GroupContext ctx = cfg.context();
    const FourierProfile a = make_profile(cfg.symbol);
    const TimeGrid grid = TimeGrid::make(cfg.grid_T, cfg.grid_n);
    const DualGrid duals = DualGrid::tensor(cfg.dual_L, cfg.dual_per_dim);

    const SweepResult res = defect_sweep(ctx, a, cfg.sweep_deltas, cfg.sweep_p_factors,
                                         duals.points, grid, cfg.workers);

    fs::create_directories(cfg.out_dir);
    {
        std::ofstream out(fs::path(cfg.out_dir) / "sweep.csv");
        out << "delta,epsilon,r,ratio,p,l1_re,l1_im,l2_re,l2_im,defect\n";
        for (const SweepCell& c : res.cells)
            out << g17(c.delta) << "," << g17(c.epsilon) << "," << g17(c.r) << ","
                << g17(c.ratio) << "," << g17(c.p) << "," << g17(c.l.l1.real()) << ","
                << g17(c.l.l1.imag()) << "," << g17(c.l.l2.real()) << ","
                << g17(c.l.l2.imag()) << "," << g17(c.defect) << "\n";
    }
    {
        std::ofstream out(fs::path(cfg.out_dir) / "regression.csv");
        out << "slope,intercept,points\n";
        if (res.slope_defined)
            out << g17(res.fit.slope) << "," << g17(res.fit.intercept) << "," << res.fit.points
                << "\n";
        else
            out << "nan,nan,0\n";
    }
    std::size_t errors = 0;
    for (const SweepCell& c : res.cells)
        if (!c.ok) {
            ++errors;
            std::cerr << "cell delta=" << c.delta << " p=" << c.p << ": " << c.error << "\n";
        }
    if (res.slope_defined)
        std::cout << "defect slope against delta/epsilon: " << g17(res.fit.slope) << "\n";
    else
        std::cout << "defect slope undefined (zero or failed cells)\n";
    return errors == 0 ? kExitPass : kExitCheckFailure;
}

std::string slug(const std::string& name) {
    std::string s;
    for (char c : name)
        s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return s;
}

int cmd_certify(const RunConfig& cfg, const std::string& field_dir,
                const std::string& fixture, const std::string& save_dir) {
    const GroupContext ctx = cfg.context();
    OperatorField field;
    if (!field_dir.empty()) {
        field = load_field(field_dir);
    } else {
        const SymbolSpec spec = cfg.symbol;
        const FourierProfile base = make_profile(spec);
        auto family = [spec, base](double p) {
            return scale_profile(base, cplx(1.0 + spec.p_modulation * p, 0.0));
        };
        const TimeGrid grid = TimeGrid::make(cfg.grid_T, cfg.grid_n);
        const DualGrid duals = DualGrid::tensor(cfg.dual_L, cfg.dual_per_dim);
        field = field_from_symbol(ctx, family, grid, cfg.certify_p_grid, duals);
        if (fixture == "jump-at-zero")
            field = with_zeroed_slice(field, 0.0);
        else if (!fixture.empty())
            throw std::runtime_error("unknown fixture: " + fixture);
    }
    if (!save_dir.empty()) {
        save_field(field, save_dir);
        std::cout << "field written to " << save_dir << "\n";
    }

    CertifyOptions opt;
    opt.tol_rel = cfg.certify_tol_rel;
    opt.probes = cfg.certify_probes;
    opt.probe_seed = cfg.seed;
    opt.p0_list = cfg.certify_p0;
    const CertificationReport rep = certify(field, opt);

    fs::create_directories(cfg.out_dir);
    std::ofstream report(fs::path(cfg.out_dir) / "report.txt");
    report << "provenance: " << to_string(field.provenance) << "\n" << rep.summary();
    for (const ConditionResult& c : rep.conditions) {
        if (c.moduli.empty() && c.trace.empty()) continue;
        std::ofstream out(fs::path(cfg.out_dir) / (slug(c.name) + ".csv"));
        if (!c.moduli.empty()) {
            out << "p_lo,p_hi,modulus\n";
            for (const auto& m : c.moduli)
                out << g17(m.p_lo) << "," << g17(m.p_hi) << "," << g17(m.modulus) << "\n";
        } else {
            out << "p,delta,value\n";
            for (const auto& t : c.trace)
                out << g17(t.p) << "," << g17(t.delta) << "," << g17(t.value) << "\n";
        }
    }
    std::cout << rep.summary();
    return rep.pass ? kExitPass : kExitCheckFailure;
}

int cmd_plancherel(const RunConfig& cfg, double p, const GroupElement& m) {
    const GroupContext ctx = cfg.context();
    PlancherelGrids grids;
    grids.time = TimeGrid::make(cfg.grid_T, cfg.grid_n);
    grids.fiber = CGridSpec{cfg.pl_c_box, cfg.pl_c_per_dim};
    grids.dual_box = cfg.pl_dual_box;
    grids.dual_per_dim = cfg.pl_dual_per_dim;
    const SpaceProfile xi = make_space_profile(cfg.pl_xi);
    const SpaceProfile eta = make_space_profile(cfg.pl_eta);
    const PlancherelResult res = plancherel_defect(ctx, p, m, xi, eta, grids);
    std::cout << "space side    = " << g17(res.space_side.real()) << " + "
              << g17(res.space_side.imag()) << "i\n";
    std::cout << "fourier side  = " << g17(res.fourier_side.real()) << " + "
              << g17(res.fourier_side.imag()) << "i\n";
    std::cout << "defect        = " << g17(res.defect) << "\n";
    if (cfg.pl_tolerance >= 0.0 && res.defect > cfg.pl_tolerance) return kExitCheckFailure;
    return kExitPass;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"numerical laboratory for the variable Mautner group"};
    app.require_subcommand(1);

    std::string config_path, out_dir, field_dir, fixture, save_dir, l_text = "0,0,0,0",
                                                          m_text = "0,0,0,0,0";
    int workers = -1;
    long long seed = -1;
    double p_value = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--workers", workers, "worker count override");
        cmd->add_option("--seed", seed, "seed override");
    };

    CLI::App* selftest = app.add_subcommand("group-selftest", "group axioms and conventions");
    add_common(selftest);
    CLI::App* kernel = app.add_subcommand("kernel", "build one induced kernel, dump CSV");
    add_common(kernel);
    kernel->add_option("--p", p_value, "group parameter");
    kernel->add_option("--l", l_text, "dual vector re1,im1,re2,im2");
    CLI::App* sweep = app.add_subcommand("sweep", "sigma defect sweep and rate regression");
    add_common(sweep);
    CLI::App* certify = app.add_subcommand("certify", "operator-field membership test");
    add_common(certify);
    certify->add_option("--field", field_dir, "load a serialized field directory");
    certify->add_option("--fixture", fixture, "built-in counterexample (jump-at-zero)");
    certify->add_option("--save-field", save_dir, "serialize the field before certifying");
    CLI::App* plancherel = app.add_subcommand("plancherel", "direct-integral pairing check");
    add_common(plancherel);
    plancherel->add_option("--p", p_value, "group parameter");
    plancherel->add_option("--m", m_text, "group element t,z_re,z_im,w_re,w_im");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream dump;
        const int code = app.exit(e, dump, dump);
        std::cerr << dump.str();
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        RunConfig cfg = parse_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (workers > 0) cfg.workers = workers;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

        const std::string command = app.get_subcommands().front()->get_name();
        const auto errors = validate_config(cfg, command);
        if (!errors.empty()) {
            for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
            return kExitUsage;
        }
        if (!startup_convention_ok(cfg.context())) return kExitCheckFailure;

        if (command == "group-selftest") return cmd_group_selftest(cfg);
        if (command == "kernel") {
            const auto lv = parse_reals(l_text, 4, "--l");
            return cmd_kernel(cfg, p_value, {cplx(lv[0], lv[1]), cplx(lv[2], lv[3])});
        }
        if (command == "sweep") return cmd_sweep(cfg);
        if (command == "certify") return cmd_certify(cfg, field_dir, fixture, save_dir);
        if (command == "plancherel") {
            const auto mv = parse_reals(m_text, 5, "--m");
            return cmd_plancherel(cfg, p_value,
                                  {mv[0], cplx(mv[1], mv[2]), cplx(mv[3], mv[4])});
        }
        std::cerr << "unknown command\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace mautner
