// Sampled operator fields over P x C^2 and the executable membership test
// for the limit-condition algebra: strong continuity, the sigma condition at
// p -> 0, norm continuity away from 0, closure under adjoints, and the
// multiplier action of C(P).
#ifndef MAUTNER_DSTAR_HPP
#define MAUTNER_DSTAR_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mautner/operators.hpp"
#include "mautner/sigma.hpp"

namespace mautner {

enum class Provenance { FromSymbol, Synthetic, Perturbed, Loaded };

std::string to_string(Provenance p);

/// Operator field (p, l) -> bounded operator, sampled lazily: `source` must
/// be pure so fibers are reproducible under any evaluation order.
struct OperatorField {
    GroupContext ctx;
    TimeGrid grid;
    std::vector<double> p_grid; // sorted, contains 0
    DualGrid duals;
    Provenance provenance = Provenance::Synthetic;
    std::function<KernelOperator(double, const DualVector&)> source;

    KernelOperator fiber(double p, const DualVector& l) const { return source(p, l); }
    bool has_p(double p) const;
};

/// Fibers pi^p_l(family(p)); the family must be continuous in p.
OperatorField field_from_symbol(const GroupContext& ctx,
                                std::function<FourierProfile(double)> family,
                                const TimeGrid& grid, std::vector<double> p_grid,
                                const DualGrid& duals);

/// The fiber slice at one p-grid sample (no interpolation off the grid).
std::vector<KernelOperator> evaluate_at_p(const OperatorField& field, double p);

/// sup over p-grid x dual-grid of the fiber norm.
double field_sup_norm(const OperatorField& field);

/// Scales every fiber at parameter p by phi(p).
OperatorField multiplier_apply(std::function<cplx(double)> phi, const OperatorField& field);

/// Fiberwise adjoint field.
OperatorField adjoint_field(const OperatorField& field);

/// Counterexample helpers.
OperatorField with_zeroed_slice(const OperatorField& field, double p_zero);
OperatorField with_scaled_slice(const OperatorField& field, double p_at, cplx factor);

/// Block sum over fibers at the same parameter: sum_j M_j Phi(p, translate) N_j.
/// This is the flavor for which the multiplier identity factors exactly.
KernelOperator sigma_same_p(const OperatorField& field, double p, const DualVector& l,
                            const IntervalScheme& scheme);

/// Limit-condition sigma: consumes the field's own p = 0 fibers at
/// orbit-translated duals.
KernelOperator sigma_from_zero_fibers(const OperatorField& field, double p,
                                      const DualVector& l, const IntervalScheme& scheme);

struct CertifyOptions {
    double tol_rel = 1e-3; // pass threshold = tol_rel * field sup-norm
    int probes = 8;
    std::uint64_t probe_seed = 2024;
    std::vector<double> p0_list = {0.5};
    double sigma_p_max = 0.26; // largest |p| fed to the sigma condition
};

/// p-grid refining dyadically into 0 (down to 2^-19; the sigma trace decays
/// like sqrt(p), so the tail must reach deep to clear the tolerance) and
/// into 0.5 for the norm-continuity condition.
std::vector<double> default_certify_p_grid();

struct ModulusRow {
    double p_lo = 0.0, p_hi = 0.0;
    double modulus = 0.0;
};

struct TraceRow {
    double p = 0.0, delta = 0.0;
    double value = 0.0;
};

struct ConditionResult {
    std::string name;
    bool pass = false;
    std::string note;
    std::vector<ModulusRow> moduli;
    std::vector<TraceRow> trace;
};

struct CertificationReport {
    bool pass = false;
    double sup_norm = 0.0;
    double tolerance = 0.0;
    std::vector<ConditionResult> conditions;

    std::string summary() const;
};

ConditionResult check_strong_continuity(const OperatorField& field, const CertifyOptions& opt,
                                        double sup_norm);
ConditionResult check_condition_sigma(const OperatorField& field, const CertifyOptions& opt,
                                      double sup_norm);
ConditionResult check_condition_continuity(const OperatorField& field,
                                           const CertifyOptions& opt, double sup_norm);
/// Re-runs the other conditions on the fiberwise-adjoint field.
std::vector<ConditionResult> check_adjoint_conditions(const OperatorField& field,
                                                      const CertifyOptions& opt,
                                                      double sup_norm);

CertificationReport certify(const OperatorField& field, const CertifyOptions& opt = {});

/// Directory layout: manifest.json plus one kernel CSV per stored fiber.
void save_field(const OperatorField& field, const std::string& dir);
OperatorField load_field(const std::string& dir);

} // namespace mautner

#endif
