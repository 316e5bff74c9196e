#include "mautner/dstar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mautner {

namespace {

constexpr double kPMatchTol = 1e-12;

bool p_equal(double a, double b) { return std::abs(a - b) <= kPMatchTol; }

double canon(double x) { return x == 0.0 ? 0.0 : x; }

struct FiberKey {
    double p, a, b, c, d;

    bool operator<(const FiberKey& o) const {
        const double lhs[5] = {canon(p), canon(a), canon(b), canon(c), canon(d)};
        const double rhs[5] = {canon(o.p), canon(o.a), canon(o.b), canon(o.c), canon(o.d)};
        for (int i = 0; i < 5; ++i) {
            if (lhs[i] < rhs[i]) return true;
            if (lhs[i] > rhs[i]) return false;
        }
        return false;
    }
};

FiberKey make_key(double p, const DualVector& l) {
    return {p, l.l1.real(), l.l1.imag(), l.l2.real(), l.l2.imag()};
}

/// Frozen translate per ACTIVE cell (cells with rows on the grid), in row
/// order. Shared by the sigma assemblies and the field serializer so a saved
/// field contains bitwise-identical dual samples.
std::vector<std::pair<int, DualVector>> sigma_translates(const GroupContext& ctx,
                                                         const IntervalScheme& scheme,
                                                         const TimeGrid& grid, double p,
                                                         const DualVector& l) {
    std::vector<std::pair<int, DualVector>> out;
    int prev_cell = scheme.j_min - 1;
    for (int i = 0; i < grid.n; ++i) {
        const int j = scheme.cell_index(grid.points[i]);
        if (j != prev_cell) {
            out.emplace_back(j, orbit_action(ctx, p, cplx(-scheme.breakpoint(j), 0.0), l));
            prev_cell = j;
        }
    }
    return out;
}

KernelOperator masked_block_sum(const OperatorField& field, double fiber_p, double p,
                                const DualVector& l, const IntervalScheme& scheme) {
    const TimeGrid& grid = field.grid;
    KernelOperator out = KernelOperator::zero(grid);
    const auto translates = sigma_translates(field.ctx, scheme, grid, p, l);
    std::size_t which = 0;
    KernelOperator cell_fiber;
    int loaded_cell = scheme.j_min - 1;
    for (int i = 0; i < grid.n; ++i) {
        const double s = grid.points[i];
        const int j = scheme.cell_index(s);
        if (j != loaded_cell) {
            while (which < translates.size() && translates[which].first != j) ++which;
            cell_fiber = field.fiber(fiber_p, translates[which].second);
            loaded_cell = j;
        }
        const double lo = scheme.breakpoint(j) - scheme.r - 1e-9;
        const double hi = scheme.breakpoint(j + 1) + scheme.r + 1e-9;
        for (int t = 0; t < grid.n; ++t) {
            const double x = grid.points[t];
            if (x < lo || x > hi) continue;
            out.at(i, t) = cell_fiber.at(i, t);
        }
    }
    return out;
}

/// Trace entries are (scale, value) pairs ordered by shrinking scale after
/// sorting; values sharing a scale are collapsed to their max. Pass requires
/// the collapsed trace to be monotone throughout (a re-increase is a jump,
/// wherever it sits) and to end below tolerance.
bool graded_trace_passes(const std::vector<std::pair<double, double>>& scale_value,
                         double tol) {
    if (scale_value.empty()) return false;
    std::vector<std::pair<double, double>> graded = scale_value;
    std::sort(graded.begin(), graded.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<double> trace;
    std::size_t i = 0;
    while (i < graded.size()) {
        const double scale = graded[i].first;
        double value = graded[i].second;
        std::size_t j = i + 1;
        while (j < graded.size() &&
               std::abs(graded[j].first - scale) <= 1e-9 * std::max(scale, 1e-12)) {
            value = std::max(value, graded[j].second);
            ++j;
        }
        trace.push_back(value);
        i = j;
    }
    if (!(trace.back() <= tol)) return false;
    const double slack = std::max(1e-12, 0.05 * tol);
    for (std::size_t k = 1; k < trace.size(); ++k)
        if (trace[k] > trace[k - 1] + slack) return false;
    return true;
}

std::vector<std::vector<cplx>> make_probes(const TimeGrid& grid, int count,
                                           std::uint64_t seed) {
    std::vector<std::vector<cplx>> probes;
    for (int k = 0; k < count; ++k) {
        Rng rng(seed + static_cast<std::uint64_t>(k) * 977u);
        std::vector<cplx> v(grid.n);
        for (int i = 0; i < grid.n; ++i)
            v[i] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        probes.push_back(std::move(v));
    }
    return probes;
}

double weighted_norm(const TimeGrid& grid, const std::vector<cplx>& v) {
    double s = 0.0;
    for (int i = 0; i < grid.n; ++i) s += grid.weights[i] * std::norm(v[i]);
    return std::sqrt(s);
}

} // namespace

std::vector<double> default_certify_p_grid() {
    std::vector<double> p = {0.0, 0.5, -0.5, 0.75, -0.75, 1.0, -1.0};
    for (int k = 1; k <= 19; ++k) {
        p.push_back(std::pow(2.0, -k));
        p.push_back(-std::pow(2.0, -k));
    }
    for (int j : {7, 9, 11, 13}) {
        p.push_back(0.5 + std::pow(2.0, -j));
        p.push_back(0.5 - std::pow(2.0, -j));
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::FromSymbol: return "from-symbol";
        case Provenance::Synthetic: return "synthetic";
        case Provenance::Perturbed: return "perturbed";
        case Provenance::Loaded: return "loaded";
    }
    return "unknown";
}

bool OperatorField::has_p(double p) const {
    for (double q : p_grid)
        if (p_equal(p, q)) return true;
    return false;
}

OperatorField field_from_symbol(const GroupContext& ctx,
                                std::function<FourierProfile(double)> family,
                                const TimeGrid& grid, std::vector<double> p_grid,
                                const DualGrid& duals) {
    std::sort(p_grid.begin(), p_grid.end());
    OperatorField field;
    field.ctx = ctx;
    field.grid = grid;
    field.p_grid = std::move(p_grid);
    field.duals = duals;
    field.provenance = Provenance::FromSymbol;
    if (!field.has_p(0.0))
        throw std::invalid_argument("field_from_symbol: p-grid must contain 0");
    field.source = [ctx, family, grid](double p, const DualVector& l) {
        return induced_kernel(ctx, p, l, family(p), grid);
    };
    return field;
}

std::vector<KernelOperator> evaluate_at_p(const OperatorField& field, double p) {
    if (!field.has_p(p))
        throw std::invalid_argument("evaluate_at_p: p is not a grid sample");
    std::vector<KernelOperator> out;
    out.reserve(field.duals.points.size());
    for (const DualVector& l : field.duals.points) out.push_back(field.fiber(p, l));
    return out;
}

double field_sup_norm(const OperatorField& field) {
    double best = 0.0;
    for (double p : field.p_grid)
        for (const DualVector& l : field.duals.points)
            best = std::max(best, operator_norm(field.fiber(p, l)));
    return best;
}

OperatorField multiplier_apply(std::function<cplx(double)> phi, const OperatorField& field) {
    OperatorField out = field;
    auto base = field.source;
    out.source = [base, phi](double p, const DualVector& l) {
        return phi(p) * base(p, l);
    };
    return out;
}

OperatorField adjoint_field(const OperatorField& field) {
    OperatorField out = field;
    auto base = field.source;
    out.source = [base](double p, const DualVector& l) { return adjoint(base(p, l)); };
    return out;
}

OperatorField with_zeroed_slice(const OperatorField& field, double p_zero) {
    OperatorField out = field;
    out.provenance = Provenance::Perturbed;
    auto base = field.source;
    const TimeGrid grid = field.grid;
    out.source = [base, grid, p_zero](double p, const DualVector& l) {
        if (p_equal(p, p_zero)) return KernelOperator::zero(grid);
        return base(p, l);
    };
    return out;
}

OperatorField with_scaled_slice(const OperatorField& field, double p_at, cplx factor) {
    OperatorField out = field;
    out.provenance = Provenance::Perturbed;
    auto base = field.source;
    out.source = [base, p_at, factor](double p, const DualVector& l) {
        const KernelOperator k = base(p, l);
        return p_equal(p, p_at) ? factor * k : k;
    };
    return out;
}

KernelOperator sigma_same_p(const OperatorField& field, double p, const DualVector& l,
                            const IntervalScheme& scheme) {
    return masked_block_sum(field, p, p, l, scheme);
}

KernelOperator sigma_from_zero_fibers(const OperatorField& field, double p,
                                      const DualVector& l, const IntervalScheme& scheme) {
    return masked_block_sum(field, 0.0, p, l, scheme);
}

ConditionResult check_strong_continuity(const OperatorField& field, const CertifyOptions& opt,
                                        double sup_norm) {
    ConditionResult res;
    res.name = "strong continuity";
    const double tol = opt.tol_rel * std::max(sup_norm, 1e-30);
    const auto probes = make_probes(field.grid, opt.probes, opt.probe_seed);

    std::vector<ModulusRow> rows;
    std::vector<std::vector<KernelOperator>> slice(2);
    for (std::size_t k = 0; k + 1 < field.p_grid.size(); ++k) {
        const double pa = field.p_grid[k];
        const double pb = field.p_grid[k + 1];
        if (k == 0) slice[0] = evaluate_at_p(field, pa);
        slice[1] = evaluate_at_p(field, pb);
        double modulus = 0.0;
        for (std::size_t li = 0; li < field.duals.points.size(); ++li) {
            const KernelOperator diff = slice[1][li] - slice[0][li];
            for (const auto& xi : probes) {
                const double num = weighted_norm(field.grid, diff.apply(xi));
                const double den = weighted_norm(field.grid, xi);
                modulus = std::max(modulus, num / den);
            }
        }
        rows.push_back({pa, pb, modulus});
        slice[0] = std::move(slice[1]);
    }
    res.moduli = rows;

    // Refinement traces toward 0 and toward each p0: moduli ordered by
    // shrinking distance to the target must settle below tolerance.
    std::vector<double> targets = {0.0};
    for (double p0 : opt.p0_list) targets.push_back(p0);
    bool pass = true;
    for (double target : targets) {
        std::vector<std::pair<double, double>> graded; // (distance, modulus)
        for (const auto& row : rows) {
            const double da = std::abs(row.p_lo - target);
            const double db = std::abs(row.p_hi - target);
            const double dist = std::max(da, db);
            if (dist <= 0.3) graded.emplace_back(dist, row.modulus);
        }
        if (graded.size() < 2) continue;
        if (!graded_trace_passes(graded, tol)) pass = false;
    }
    res.pass = pass;
    std::ostringstream note;
    note << "tolerance " << tol << ", " << rows.size() << " adjacent pairs";
    res.note = note.str();
    return res;
}

ConditionResult check_condition_sigma(const OperatorField& field, const CertifyOptions& opt,
                                      double sup_norm) {
    ConditionResult res;
    res.name = "sigma limit at p -> 0";
    const double tol = opt.tol_rel * std::max(sup_norm, 1e-30);
    std::vector<double> samples;
    for (double p : field.p_grid)
        if (p != 0.0 && std::abs(p) <= opt.sigma_p_max) samples.push_back(p);
    std::sort(samples.begin(), samples.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    if (samples.empty()) {
        res.note = "no p-grid samples below sigma_p_max; nothing to check";
        res.pass = false;
        return res;
    }
    std::vector<std::pair<double, double>> graded;
    for (double p : samples) {
        const double delta = std::abs(p);
        const IntervalScheme scheme = scheme_default(delta, field.grid.half_width);
        double worst = 0.0;
        for (const DualVector& l : field.duals.points) {
            const KernelOperator sig = sigma_from_zero_fibers(field, p, l, scheme);
            const KernelOperator phi = field.fiber(p, l);
            worst = std::max(worst, operator_norm(sig - phi));
        }
        res.trace.push_back({p, delta, worst});
        graded.emplace_back(delta, worst);
    }
    res.pass = graded_trace_passes(graded, tol);
    std::ostringstream note;
    note << "tolerance " << tol << ", finest |p| = " << std::abs(samples.back())
         << ", final trace " << res.trace.back().value;
    res.note = note.str();
    return res;
}

ConditionResult check_condition_continuity(const OperatorField& field,
                                           const CertifyOptions& opt, double sup_norm) {
    ConditionResult res;
    res.name = "norm continuity at p0 != 0";
    const double tol = opt.tol_rel * std::max(sup_norm, 1e-30);
    bool pass = true;
    for (double p0 : opt.p0_list) {
        if (!field.has_p(p0))
            throw std::invalid_argument("check_condition_continuity: p0 not on the p-grid");
        std::vector<double> samples;
        for (double p : field.p_grid)
            if (!p_equal(p, p0) && std::abs(p - p0) <= 0.3) samples.push_back(p);
        std::sort(samples.begin(), samples.end(),
                  [p0](double a, double b) { return std::abs(a - p0) > std::abs(b - p0); });
        if (samples.size() < 2) {
            pass = false;
            continue;
        }
        const auto base = evaluate_at_p(field, p0);
        std::vector<std::pair<double, double>> graded;
        for (double p : samples) {
            const auto slice = evaluate_at_p(field, p);
            double worst = 0.0;
            for (std::size_t li = 0; li < slice.size(); ++li)
                worst = std::max(worst, operator_norm(slice[li] - base[li]));
            res.trace.push_back({p, std::abs(p - p0), worst});
            graded.emplace_back(std::abs(p - p0), worst);
        }
        if (!graded_trace_passes(graded, tol)) pass = false;
    }
    res.pass = pass;
    std::ostringstream note;
    note << "tolerance " << tol;
    res.note = note.str();
    return res;
}

std::vector<ConditionResult> check_adjoint_conditions(const OperatorField& field,
                                                      const CertifyOptions& opt,
                                                      double sup_norm) {
    const OperatorField adj = adjoint_field(field);
    std::vector<ConditionResult> out;
    out.push_back(check_strong_continuity(adj, opt, sup_norm));
    out.push_back(check_condition_sigma(adj, opt, sup_norm));
    out.push_back(check_condition_continuity(adj, opt, sup_norm));
    for (auto& c : out) c.name = "adjoint field: " + c.name;
    return out;
}

CertificationReport certify(const OperatorField& field, const CertifyOptions& opt) {
    CertificationReport rep;
    rep.sup_norm = field_sup_norm(field);
    rep.tolerance = opt.tol_rel * std::max(rep.sup_norm, 1e-30);

    ConditionResult c1;
    c1.name = "membership in the fiber algebras (partial)";
    c1.pass = std::isfinite(rep.sup_norm);
    c1.note = "only the necessary, finitely-checkable part: finite sup-norm plus the strong "
              "continuity check below";
    rep.conditions.push_back(c1);
    rep.conditions.push_back(check_strong_continuity(field, opt, rep.sup_norm));
    rep.conditions.push_back(check_condition_sigma(field, opt, rep.sup_norm));
    rep.conditions.push_back(check_condition_continuity(field, opt, rep.sup_norm));
    for (auto& c : check_adjoint_conditions(field, opt, rep.sup_norm))
        rep.conditions.push_back(std::move(c));

    rep.pass = true;
    for (const auto& c : rep.conditions) rep.pass = rep.pass && c.pass;
    return rep;
}

std::string CertificationReport::summary() const {
    std::ostringstream out;
    out << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    out << "field sup-norm: " << sup_norm << ", tolerance: " << tolerance << "\n";
    for (const auto& c : conditions)
        out << (c.pass ? "  [pass] " : "  [FAIL] ") << c.name << " (" << c.note << ")\n";
    return out.str();
}

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_kernel_csv(const fs::path& path, const KernelOperator& k) {
    std::ofstream out(path);
    out << "s_index,t_index,re,im\n";
    for (int i = 0; i < k.n(); ++i)
        for (int j = 0; j < k.n(); ++j)
            out << i << "," << j << "," << fmt17(k.at(i, j).real()) << ","
                << fmt17(k.at(i, j).imag()) << "\n";
}

KernelOperator read_kernel_csv(const fs::path& path, const TimeGrid& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fiber file " + path.string());
    std::string line;
    std::getline(in, line); // header
    KernelOperator k = KernelOperator::zero(grid);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int i = 0, j = 0;
        double re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &i, &j, &re, &im) != 4)
            throw std::runtime_error("malformed fiber row in " + path.string());
        k.at(i, j) = {re, im};
    }
    return k;
}

} // namespace

void save_field(const OperatorField& field, const std::string& dir) {
    fs::create_directories(dir);
    json manifest;
    manifest["format"] = 1;
    manifest["theta"] = field.ctx.theta;
    manifest["dual_argument"] =
        field.ctx.dual_argument == DualArgument::Row ? "row" : "column";
    manifest["fourier_norm"] = field.ctx.fourier_norm;
    manifest["grid"] = {{"half_width", field.grid.half_width}, {"n", field.grid.n}};
    manifest["p_grid"] = field.p_grid;
    manifest["dual"] = {{"box", field.duals.box}, {"per_dim", field.duals.per_dim}};
    manifest["provenance"] = to_string(field.provenance);

    json fibers = json::array();
    int counter = 0;
    auto store = [&](double p, const DualVector& l) {
        char name[32];
        std::snprintf(name, sizeof(name), "kernel_%05d.csv", counter++);
        write_kernel_csv(fs::path(dir) / name, field.fiber(p, l));
        fibers.push_back({{"p", p},
                          {"l", {l.l1.real(), l.l1.imag(), l.l2.real(), l.l2.imag()}},
                          {"file", name}});
    };
    for (double p : field.p_grid)
        for (const DualVector& l : field.duals.points) store(p, l);
    // Orbit-translated p = 0 fibers consumed by the sigma condition.
    for (double p : field.p_grid) {
        if (p == 0.0 || std::abs(p) > 0.26) continue;
        const IntervalScheme scheme = scheme_default(std::abs(p), field.grid.half_width);
        for (const DualVector& l : field.duals.points)
            for (const auto& [j, lt] : sigma_translates(field.ctx, scheme, field.grid, p, l))
                store(0.0, lt);
    }
    manifest["fibers"] = std::move(fibers);
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
}

OperatorField load_field(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw std::runtime_error("cannot open manifest in " + dir);
    json manifest = json::parse(in);

    OperatorField field;
    field.ctx = GroupContext(manifest.at("theta").get<double>(),
                             manifest.at("dual_argument").get<std::string>() == "row"
                                 ? DualArgument::Row
                                 : DualArgument::Column,
                             manifest.at("fourier_norm").get<double>());
    field.grid = TimeGrid::make(manifest.at("grid").at("half_width").get<double>(),
                                manifest.at("grid").at("n").get<int>());
    field.p_grid = manifest.at("p_grid").get<std::vector<double>>();
    field.duals = DualGrid::tensor(manifest.at("dual").at("box").get<double>(),
                                   manifest.at("dual").at("per_dim").get<int>());
    field.provenance = Provenance::Loaded;

    auto table = std::make_shared<std::map<FiberKey, KernelOperator>>();
    for (const auto& f : manifest.at("fibers")) {
        const auto lv = f.at("l").get<std::vector<double>>();
        const DualVector l{cplx(lv[0], lv[1]), cplx(lv[2], lv[3])};
        (*table)[make_key(f.at("p").get<double>(), l)] =
            read_kernel_csv(fs::path(dir) / f.at("file").get<std::string>(), field.grid);
    }
    field.source = [table](double p, const DualVector& l) -> KernelOperator {
        const auto it = table->find(make_key(p, l));
        if (it == table->end()) {
            std::ostringstream msg;
            msg << "loaded field has no fiber at p=" << fmt17(p) << " l=(" << fmt17(l.l1.real())
                << "," << fmt17(l.l1.imag()) << "," << fmt17(l.l2.real()) << ","
                << fmt17(l.l2.imag()) << ")";
            throw std::out_of_range(msg.str());
        }
        return it->second;
    };
    return field;
}

} // namespace mautner
