#include "fluxtune/runner.hpp"

#include "fluxtune/atom_solver.hpp"
#include "fluxtune/noise.hpp"
#include "fluxtune/perturb.hpp"
#include "fluxtune/schedule.hpp"
#include "fluxtune/version.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace fluxtune {

namespace {

/// Evaluates fn(i) for i in [0, n) on `threads` workers; the first failure
/// wins and is rethrown with its row index and f value attached.
void parallel_rows(std::size_t n, int threads,
                   const std::vector<double>& f_grid,
                   const std::function<void(std::size_t)>& fn)
{
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::string error_context;

    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n;
             i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    std::ostringstream os;
                    os << "row " << i << " (f = " << f_grid[i] << " rad)";
                    error_context = os.str();
                }
                return;
            }
        }
    };

    const int n_workers =
        std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
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
}

std::vector<std::pair<std::string, std::string>>
provenance(const RunConfig& c, const std::string& subcommand)
{
    std::ostringstream hash;
    hash << std::hex << fnv1a64(dump_config(c));
    return {{"tool", "fluxtune"},
            {"version", version},
            {"subcommand", subcommand},
            {"engine", c.engine == Engine::exact ? "exact" : "perturbative"},
            {"config_fnv1a64", hash.str()}};
}

SolveOptions solve_options(const RunConfig& c)
{
    SolveOptions opts;
    opts.variant = c.variant;
    opts.form = c.form;
    opts.tol_ghz = c.solve_tol_ghz;
    return opts;
}

ResultTable run_derive(const RunConfig& c)
{
    const DerivedScales s = derive_scales(c.device);
    const ValidationReport report =
        validate_params(c.device, s, c.validation_margin, c.lambda_max);
    ResultTable t;
    t.columns = {"ec_ghz",     "ej_ghz",          "eb_ghz",
                 "lambda",     "lr_prime_nh",     "omega0_ghz",
                 "omegar_ghz", "omegar_prime_ghz", "omegaj_ghz",
                 "cavity_ghz", "c0_pf",           "cj_ff",
                 "bound_uh"};
    t.add_row({s.ec, s.ej, s.eb, s.lambda, s.lr_prime_nH, s.omega0_ghz,
               s.omegar_ghz, s.omegar_prime_ghz, s.omegaJ_ghz, s.cavity_ghz,
               s.c0_pF, s.cj_fF, report.bound_uH});
    return t;
}

ResultTable run_validate(const RunConfig& c)
{
    const DerivedScales s = derive_scales(c.device);
    const ValidationReport r =
        validate_params(c.device, s, c.validation_margin, c.lambda_max);
    ResultTable t;
    t.columns = {"bound_uh", "margin",           "l0_ok",
                 "lr_ok",    "lambda",           "lambda_threshold",
                 "lambda_ok", "beta_l_checked",  "beta_l",
                 "beta_l_ok", "all_ok"};
    t.add_row({r.bound_uH, r.margin, r.l0_ok, r.lr_ok, s.lambda,
               r.lambda_threshold, r.lambda_ok, r.beta_l.has_value(),
               r.beta_l.value_or(std::nan("")), r.beta_l_ok.value_or(false),
               r.all_ok});
    return t;
}

ResultTable run_schedule(const RunConfig& c)
{
    const DerivedScales s = derive_scales(c.device);
    const AtomSolver solver(s, BasisSpec(c.n_fock, c.n_charge));
    const Schedule sched = build_schedule(
        s, solver, c.grid_radians(), c.target_delta_e_ghz, c.engine,
        worker_count(), solve_options(c));
    ResultTable t;
    t.columns = {"f",  "f_prime",       "delta", "delta_e_exact",
                 "delta_e_pert", "g",   "g0",    "gz",
                 "g_over_wc",    "regime"};
    for (const ScheduleRow& row : sched.rows) {
        t.add_row({row.f, row.f_prime, row.delta, row.delta_e_exact,
                   row.delta_e_pert, row.pert.g, row.pert.g0, row.pert.gz,
                   row.pert.g_over_wc, regime_name(row.regime)});
    }
    return t;
}

ResultTable run_spectrum(const RunConfig& c)
{
    const DerivedScales s = derive_scales(c.device);
    const AtomSolver solver(s, BasisSpec(c.n_fock, c.n_charge));
    const std::vector<double> grid = c.grid_radians();
    const SolveOptions opts = solve_options(c);

    std::vector<std::vector<Cell>> rows(grid.size());
    parallel_rows(grid.size(), worker_count(), grid, [&](std::size_t i) {
        const double fp = solve_fprime(s, grid[i], c.target_delta_e_ghz,
                                       c.engine, &solver, opts);
        const FluxPoint flux = FluxPoint::from_f(grid[i], fp);
        const std::vector<double> levels =
            solver.lowest_levels(flux, c.form, 5);
        const perturb::PerturbativeLevels pl =
            perturb::energies(s, flux, c.variant);
        rows[i] = {flux.f,    flux.f_prime, flux.delta, levels[0],
                   levels[1], levels[2],    levels[3],  levels[4],
                   pl.e_g,    pl.e_e};
    });

    ResultTable t;
    t.columns = {"f",  "f_prime", "delta", "e1",       "e2",
                 "e3", "e4",      "e5",    "e_g_pert", "e_e_pert"};
    for (auto& row : rows) {
        t.add_row(std::move(row));
    }
    return t;
}

ResultTable run_couplings(const RunConfig& c)
{
    const DerivedScales s = derive_scales(c.device);
    const AtomSolver solver(s, BasisSpec(c.n_fock, c.n_charge));
    const std::vector<double> grid = c.grid_radians();
    const SolveOptions opts = solve_options(c);

    std::vector<std::vector<Cell>> rows(grid.size());
    parallel_rows(grid.size(), worker_count(), grid, [&](std::size_t i) {
        const double fp = solve_fprime(s, grid[i], c.target_delta_e_ghz,
                                       c.engine, &solver, opts);
        const FluxPoint flux = FluxPoint::from_f(grid[i], fp);
        const CouplingSet ex = solver.couplings(flux, c.form);
        const CouplingSet pt = perturb::couplings(s, flux, c.variant);
        rows[i] = {flux.f, flux.f_prime,    flux.delta, ex.g,
                   ex.g0,  ex.gz,           ex.gx,      ex.g_over_wc,
                   pt.g,   pt.g0,           pt.gz,      pt.g_over_wc};
    });

    ResultTable t;
    t.columns = {"f",        "f_prime",        "delta",    "g_exact",
                 "g0_exact", "gz_exact",       "gx_exact", "g_over_wc_exact",
                 "g_pert",   "g0_pert",        "gz_pert",  "g_over_wc_pert"};
    for (auto& row : rows) {
        t.add_row(std::move(row));
    }
    return t;
}

ResultTable run_noise(const RunConfig& c)
{
    const DerivedScales s = derive_scales(c.device);
    const AtomSolver solver(s, BasisSpec(c.n_fock, c.n_charge));
    const NoiseEnv env = NoiseEnv::from_params(c.device);
    const std::vector<double> grid = c.grid_radians();
    const SolveOptions opts = solve_options(c);

    std::vector<std::vector<Cell>> rows(grid.size());
    parallel_rows(grid.size(), worker_count(), grid, [&](std::size_t i) {
        const double fp = solve_fprime(s, grid[i], c.target_delta_e_ghz,
                                       c.engine, &solver, opts);
        const FluxPoint flux = FluxPoint::from_f(grid[i], fp);
        const NoiseBudget b = budget(s, flux, env, solver, c.form);
        rows[i] = {flux.f,
                   flux.f_prime,
                   flux.delta,
                   solver.delta_e(flux, c.form),
                   b.t1_flux_s,
                   b.tphi_flux_s,
                   b.tphi_ic_s,
                   b.tphi_charge_s,
                   b.charge_detail.t_closed_s,
                   b.charge_detail.guard,
                   b.charge_detail.gap_ghz};
    });

    ResultTable t;
    t.columns = {"f",
                 "f_prime",
                 "delta",
                 "delta_e_ghz",
                 "t1_flux_s",
                 "tphi_flux_s",
                 "tphi_ic_s",
                 "tphi_charge_s",
                 "tphi_charge_closed_s",
                 "tphi_charge_guard",
                 "gap_e2_e_ghz"};
    for (auto& row : rows) {
        t.add_row(std::move(row));
    }
    return t;
}

} // namespace

int worker_count()
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) {
        n = 1;
    }
    if (const char* cap = std::getenv("FLUXTUNE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end != cap && v >= 1) {
            n = std::min<long>(n, v);
        }
    }
    return n;
}

ResultTable run_subcommand(const std::string& name, const RunConfig& config)
{
    ResultTable t;
    if (name == "derive") {
        t = run_derive(config);
    } else if (name == "validate") {
        t = run_validate(config);
    } else if (name == "schedule") {
        t = run_schedule(config);
    } else if (name == "spectrum") {
        t = run_spectrum(config);
    } else if (name == "couplings") {
        t = run_couplings(config);
    } else if (name == "noise") {
        t = run_noise(config);
    } else {
        throw std::invalid_argument(
            "unknown subcommand '" + name +
            "' (expected derive | validate | schedule | spectrum | "
            "couplings | noise)");
    }
    t.provenance = provenance(config, name);
    return t;
}

} // namespace fluxtune
