#include "fluxtune/schedule.hpp"

#include "fluxtune/constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace fluxtune {

using constants::pi;

Regime regime(double g_over_wc, const RegimeThresholds& t)
{
    if (g_over_wc < 0.0) {
        throw std::invalid_argument("regime: ratio must be >= 0");
    }
    if (g_over_wc < t.negligible) {
        return Regime::negligible;
    }
    if (g_over_wc >= t.ultrastrong) {
        return Regime::ultrastrong;
    }
    return Regime::weak_to_strong;
}

std::string regime_name(Regime r)
{
    switch (r) {
    case Regime::negligible:
        return "negligible";
    case Regime::weak_to_strong:
        return "weak_to_strong";
    case Regime::ultrastrong:
        return "ultrastrong";
    }
    return "unknown";
}

double min_fprime(const DerivedScales& s)
{
    const double l4 = std::pow(s.lambda, 4);
    return 2.0 * pi - std::acos((3.0 * l4 - 11.0) / (11.0 + 3.0 * l4));
}

namespace {

double bisect(const std::function<double(double)>& residual, double lo,
              double hi, double r_lo, int max_iter, double stop_residual = 0.0)
{
    for (int i = 0; i < max_iter && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double r_mid = residual(mid);
        if (std::abs(r_mid) <= stop_residual) {
            return mid;
        }
        if ((r_mid < 0.0) == (r_lo < 0.0)) {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double solve_perturbative(const DerivedScales& s, double f, double target,
                          const SolveOptions& opts)
{
    auto residual = [&](double fp) {
        return perturb::splitting(s, FluxPoint::from_f(f, fp), opts.variant) -
               target;
    };

    // Scan the admissible branch for a sign change, then bisect.
    const double lo_end = min_fprime(s) + 1e-9;
    const double hi_end = 2.0 * pi - 1e-9;
    const int n_scan = 64;
    double prev_fp = lo_end;
    double prev_r = residual(prev_fp);
    for (int i = 1; i <= n_scan; ++i) {
        const double fp = lo_end + (hi_end - lo_end) * i / n_scan;
        const double r = residual(fp);
        if ((prev_r < 0.0) != (r < 0.0)) {
            return bisect(residual, prev_fp, fp, prev_r, 100);
        }
        prev_fp = fp;
        prev_r = r;
    }
    std::ostringstream os;
    os << "solve_fprime: target splitting " << target
       << " GHz unreachable at f = " << f
       << " rad (no sign change on the f' branch; f may be too close to pi "
          "for the requested delta_e - E_c)";
    throw UnreachableTargetError(os.str());
}

} // namespace

double solve_fprime(const DerivedScales& s, double f, double delta_e_target,
                    Engine engine, const AtomSolver* solver,
                    const SolveOptions& opts)
{
    if (!(f < pi)) {
        throw std::invalid_argument("solve_fprime: require f < pi strictly");
    }
    if (!(delta_e_target > s.ec)) {
        throw std::invalid_argument(
            "solve_fprime: target splitting must exceed E_c");
    }

    const double fp_pert = solve_perturbative(s, f, delta_e_target, opts);
    if (engine == Engine::perturbative) {
        return fp_pert;
    }
    if (solver == nullptr) {
        throw std::invalid_argument(
            "solve_fprime: exact engine requires an AtomSolver");
    }

    auto residual = [&](double fp) {
        return solver->delta_e(FluxPoint::from_f(f, fp), opts.form) -
               delta_e_target;
    };

    // Bracket around the perturbative root (the exact root is O(Delta) away)
    // by doubling the half-width until the residual changes sign.
    const double lo_end = min_fprime(s) + 1e-9;
    const double hi_end = 2.0 * pi - 1e-9;
    double w = 1e-4;
    for (int i = 0; i < 16; ++i) {
        const double lo = std::max(lo_end, fp_pert - w);
        const double hi = std::min(hi_end, fp_pert + w);
        const double r_lo = residual(lo);
        const double r_hi = residual(hi);
        if ((r_lo < 0.0) != (r_hi < 0.0)) {
            const double root =
                bisect(residual, lo, hi, r_lo, 100, 0.1 * opts.tol_ghz);
            if (std::abs(residual(root)) > 10.0 * opts.tol_ghz) {
                std::ostringstream os;
                os << "solve_fprime: exact-engine residual "
                   << residual(root) << " GHz exceeds tolerance at f = " << f;
                throw UnreachableTargetError(os.str());
            }
            return root;
        }
        if (lo == lo_end && hi == hi_end) {
            break;
        }
        w *= 2.0;
    }
    std::ostringstream os;
    os << "solve_fprime: target splitting " << delta_e_target
       << " GHz unreachable with exact engine at f = " << f << " rad";
    throw UnreachableTargetError(os.str());
}

Schedule build_schedule(const DerivedScales& s, const AtomSolver& solver,
                        const std::vector<double>& f_grid,
                        double delta_e_target, Engine engine, int threads,
                        const SolveOptions& opts,
                        const RegimeThresholds& regimes)
{
    Schedule out;
    out.rows.resize(f_grid.size());

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::string error_context;

    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < f_grid.size();
             i = next.fetch_add(1)) {
            try {
                const double f = f_grid[i];
                const double fp = solve_fprime(s, f, delta_e_target, engine,
                                               &solver, opts);
                const FluxPoint flux = FluxPoint::from_f(f, fp);

                ScheduleRow row;
                row.f = f;
                row.f_prime = fp;
                row.delta = flux.delta;
                row.delta_e_exact = solver.delta_e(flux, opts.form);
                row.delta_e_pert = perturb::splitting(s, flux, opts.variant);
                row.pert = perturb::couplings(s, flux, opts.variant);
                row.exact = solver.couplings(flux, opts.form);
                row.regime = regime(row.pert.g_over_wc, regimes);
                out.rows[i] = row;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    std::ostringstream os;
                    os << "schedule row " << i << " (f = " << f_grid[i]
                       << " rad)";
                    error_context = os.str();
                }
                return;
            }
        }
    };

    const int n_workers =
        std::max(1, std::min<int>(threads, static_cast<int>(f_grid.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int t = 0; t < n_workers; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& e) {
            throw std::runtime_error(error_context + ": " + e.what());
        }
    }
    return out;
}

double identity_residual(const DerivedScales& s, const FluxPoint& flux,
                         double g, double delta_e)
{
    const double l2 = s.lambda * s.lambda;
    const double l4 = l2 * l2;
    const double exp_l2 = std::exp(-l2);
    const double sin_half = std::sin(flux.f_prime / 2.0);
    const double d2 = flux.delta * flux.delta;
    const double denom = 11.0 * s.eb + 3.0 * l2 * s.ec;

    const double lhs = g * g * s.eb * s.eb /
                       (8.0 * s.omega0_ghz * s.cavity_ghz * l4 * s.ej * s.ej);
    const double mid = d2 * exp_l2 * sin_half * sin_half;
    const double rhs = 11.0 * s.eb * d2 * exp_l2 / denom -
                       3.0 * s.eb * s.ec * (delta_e - s.ec) /
                           (denom * s.ej * s.ej);

    const double scale =
        std::max({std::abs(lhs), std::abs(mid), std::abs(rhs)});
    if (scale < 1e-300) {
        return 0.0;
    }
    const double spread = std::max({std::abs(lhs - mid), std::abs(mid - rhs),
                                    std::abs(lhs - rhs)});
    return spread / scale;
}

} // namespace fluxtune
