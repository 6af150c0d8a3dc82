#ifndef FLUXTUNE_SCHEDULE_HPP
#define FLUXTUNE_SCHEDULE_HPP

#include "fluxtune/atom_solver.hpp"
#include "fluxtune/coupling.hpp"
#include "fluxtune/hilbert.hpp"
#include "fluxtune/params.hpp"
#include "fluxtune/perturb.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fluxtune {

/// Root-finding engine for the constant-splitting curve f'(f): closed-form
/// perturbative splitting (fast) or exact diagonalization (authoritative).
enum class Engine { perturbative, exact };

enum class Regime { negligible, weak_to_strong, ultrastrong };

struct RegimeThresholds {
    double negligible = 1e-4;
    double ultrastrong = 0.1;
};

Regime regime(double g_over_wc, const RegimeThresholds& t = {});
std::string regime_name(Regime r);

struct UnreachableTargetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lower end of the admissible f' branch: 2 pi - arccos((3 l^4 - 11)/(11 + 3 l^4)).
double min_fprime(const DerivedScales& s);

struct SolveOptions {
    perturb::Variant variant = perturb::Variant::full;
    AtomForm form = AtomForm::exact;
    double tol_ghz = 1e-10; ///< target |delta_e - target| residual
};

/// Solves delta_e(f, f') = target for f' on the branch (min_fprime, 2 pi).
/// The perturbative engine scans 64 steps for a sign change and bisects; the
/// exact engine (requires `solver`) brackets around the perturbative root and
/// bisects the exact-diagonalization splitting.
double solve_fprime(const DerivedScales& s, double f, double delta_e_target,
                    Engine engine, const AtomSolver* solver = nullptr,
                    const SolveOptions& opts = {});

struct ScheduleRow {
    double f = 0.0;
    double f_prime = 0.0;
    double delta = 0.0;
    double delta_e_exact = 0.0;
    double delta_e_pert = 0.0;
    CouplingSet pert;  ///< closed-form coupling path
    CouplingSet exact; ///< exact matrix-element coupling path
    Regime regime = Regime::negligible;
};

struct Schedule {
    std::vector<ScheduleRow> rows;
};

/// Builds the constant-splitting schedule over the given f grid (radians,
/// ascending or any order; row order follows the grid). Rows always carry
/// both the perturbative and the exact coupling sets and both splittings.
/// Rows are evaluated concurrently with `threads` workers (<= 1 for serial).
Schedule build_schedule(const DerivedScales& s, const AtomSolver& solver,
                        const std::vector<double>& f_grid,
                        double delta_e_target, Engine engine, int threads = 1,
                        const SolveOptions& opts = {},
                        const RegimeThresholds& regimes = {});

/// Relative residual of the tuning identity linking g, delta_e and the flux
/// point (zero when all three expressions vanish). Inputs are expected from
/// the perturbative (simplified-variant) path; exact-path inputs measure the
/// higher-order content instead.
double identity_residual(const DerivedScales& s, const FluxPoint& flux,
                         double g, double delta_e);

} // namespace fluxtune

#endif
