#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxtune/atom_solver.hpp"
#include "fluxtune/constants.hpp"
#include "fluxtune/noise.hpp"
#include "fluxtune/params.hpp"
#include "fluxtune/schedule.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace fluxtune;
using constants::pi;

namespace {

const DerivedScales& scales()
{
    static const DerivedScales s = derive_scales(testutil::reference_device());
    return s;
}

AtomSolver& solver()
{
    static AtomSolver as(scales(), BasisSpec{15, 20});
    return as;
}

FluxPoint schedule_point(double f, Engine engine = Engine::exact)
{
    const double fp = solve_fprime(scales(), f, testutil::target_ghz, engine,
                                   &solver());
    return FluxPoint::from_f(f, fp);
}

} // namespace

TEST_CASE("flux-noise spectral density")
{
    // Hand SI value for M = 40 Phi0/A, Z = 50 Ohm, omega/2pi = 2 GHz:
    // S = 2 M^2 hbar omega / Z = 3.6270e-52 Wb^2 s / rad.
    const double omega = 2.0 * pi * 2.0e9;
    CHECK(flux_noise_psd(40.0, omega, 50.0) ==
          doctest::Approx(3.6270e-52).epsilon(1e-3));

    CHECK(flux_noise_psd(40.0, -omega, 50.0) == 0.0);
    CHECK(flux_noise_psd(40.0, 0.0, 50.0) == 0.0);

    // Quadratic in M, linear in omega, inverse in Z.
    CHECK(flux_noise_psd(80.0, omega, 50.0) ==
          doctest::Approx(4.0 * flux_noise_psd(40.0, omega, 50.0))
              .epsilon(1e-12));
    CHECK(flux_noise_psd(40.0, 2.0 * omega, 50.0) ==
          doctest::Approx(2.0 * flux_noise_psd(40.0, omega, 50.0))
              .epsilon(1e-12));
    CHECK(flux_noise_psd(40.0, omega, 100.0) ==
          doctest::Approx(0.5 * flux_noise_psd(40.0, omega, 50.0))
              .epsilon(1e-12));
}

TEST_CASE("flux-noise relaxation, closed form")
{
    const FluxPoint flux = schedule_point(0.998 * pi);
    NoiseEnv env;

    const double t1 = t1_flux(scales(), flux, env);
    CHECK(t1 > 0.0);
    CHECK(std::isfinite(t1));

    SUBCASE("scales linearly with the impedance")
    {
        NoiseEnv hi = env;
        hi.zr = 100.0;
        CHECK(t1_flux(scales(), flux, hi) ==
              doctest::Approx(2.0 * t1).epsilon(1e-12));
    }

    SUBCASE("single-channel inverse-square mutual-inductance scaling")
    {
        NoiseEnv only3 = env;
        only3.m1 = 0.0;
        only3.m2 = 0.0;
        const double base = t1_flux(scales(), flux, only3);
        only3.m3 *= 2.0;
        CHECK(t1_flux(scales(), flux, only3) ==
              doctest::Approx(base / 4.0).epsilon(1e-12));
    }

    SUBCASE("loop 1 <-> loop 2 exchange compensated by f' reflection")
    {
        NoiseEnv a = env;
        a.m1 = 55.0;
        a.m2 = 40.0;
        NoiseEnv b = env;
        b.m1 = 40.0;
        b.m2 = 55.0;
        const FluxPoint mirror =
            FluxPoint::from_f(flux.f, 2.0 * pi - flux.f_prime);
        // The channel weights swap under f' -> -f' (mod 2pi) together with
        // M1 <-> M2; the splitting entering the rate is even in f'.
        CHECK(t1_flux(scales(), flux, a) ==
              doctest::Approx(t1_flux(scales(), mirror, b)).epsilon(1e-9));
    }

    SUBCASE("no coupling channels means no relaxation")
    {
        NoiseEnv off = env;
        off.m1 = off.m2 = off.m3 = 0.0;
        CHECK(std::isinf(t1_flux(scales(), flux, off)));
    }
}

TEST_CASE("third-loop relaxation channel: golden rule vs closed form")
{
    NoiseEnv env;
    for (double fpi : {0.995, 0.998}) {
        const FluxPoint flux = schedule_point(fpi * pi);
        const double closed = t1_flux_closed_phi3(scales(), flux, env);
        const double numeric =
            t1_flux_numeric_phi3(solver(), flux, env, AtomForm::exact);
        CHECK(std::abs(numeric - closed) / closed < 0.10);
    }
}

TEST_CASE("charge relaxation element vanishes by parity")
{
    const FluxPoint flux = schedule_point(0.997 * pi);
    const AtomLevels levels = solver().levels(flux, AtomForm::exact);
    const double mag =
        charge_relaxation_check(levels, solver().ops().n_minus());
    CHECK(mag <= 1e-10);

    SUBCASE("negative control: a parity-breaking term revives the element")
    {
        // Add epsilon * n_minus to the Hamiltonian; parity is broken and the
        // e-g charge element becomes first order in epsilon. Run far from
        // the e / psi_2 degeneracy so the states stay classifiable.
        const FluxPoint wide = schedule_point(0.96 * pi, Engine::perturbative);
        const Matrix h =
            assemble_atom_hamiltonian(solver().ops(), scales(), wide,
                                      AtomForm::exact) +
            1e-3 * solver().ops().n_minus();
        const Spectrum spec = eigensolve(h, 8);
        const Matrix p = parity_operator(solver().basis(), wide.delta);
        const AtomLevels broken =
            classify_levels(spec, p, solver().basis(), wide.delta);
        const double broken_mag = charge_relaxation_check(
            broken, solver().ops().n_minus(), /*require_zero=*/false);
        CHECK(broken_mag > 1e-8);
        CHECK_THROWS_AS(charge_relaxation_check(
                            broken, solver().ops().n_minus(), true),
                        std::runtime_error);
    }
}

TEST_CASE("flux dephasing: closed vs numeric derivatives")
{
    NoiseEnv env;
    for (double fpi : {0.995, 0.9975, 0.999}) {
        const FluxPoint flux = schedule_point(fpi * pi);
        const TphiFluxResult closed =
            tphi_flux(scales(), flux, env, DerivMethod::closed);
        const TphiFluxResult numeric = tphi_flux(
            scales(), flux, env, DerivMethod::numeric, &solver());
        CHECK(numeric.fd_ok);
        CHECK(closed.t_s > 0.0);
        CHECK(numeric.t_s > 0.0);
        CHECK(std::abs(numeric.t_s - closed.t_s) / closed.t_s < 0.10);
    }

    SUBCASE("inverse amplitude scaling and the zero-noise limit")
    {
        const FluxPoint flux = schedule_point(0.998 * pi);
        const double base =
            tphi_flux(scales(), flux, env, DerivMethod::closed).t_s;
        NoiseEnv loud = env;
        loud.a_phi *= 10.0;
        CHECK(tphi_flux(scales(), flux, loud, DerivMethod::closed).t_s ==
              doctest::Approx(base / 10.0).epsilon(1e-12));
        NoiseEnv quiet = env;
        quiet.a_phi = 0.0;
        CHECK(std::isinf(
            tphi_flux(scales(), flux, quiet, DerivMethod::closed).t_s));
    }

    SUBCASE("numeric method requires a solver")
    {
        const FluxPoint flux = schedule_point(0.998 * pi);
        CHECK_THROWS_AS(
            tphi_flux(scales(), flux, env, DerivMethod::numeric, nullptr),
            std::invalid_argument);
    }
}

TEST_CASE("critical-current dephasing")
{
    NoiseEnv env;
    // Anchor: at delta_e = 2.00005254655 GHz and E_c = 2 GHz with relative
    // amplitude 1e-6, T = hbar / (2e-6 h (delta_e - E_c) 1e9) = 1.51442 s.
    CHECK(tphi_ic(scales(), testutil::target_ghz, env) ==
          doctest::Approx(1.51442).epsilon(1e-3));

    const double t = tphi_ic(scales(), 2.001, env);
    CHECK(tphi_ic(scales(), 2.002, env) ==
          doctest::Approx(0.5 * t).epsilon(1e-12));

    NoiseEnv loud = env;
    loud.a_ic_rel *= 100.0;
    CHECK(tphi_ic(scales(), 2.001, loud) ==
          doctest::Approx(t / 100.0).epsilon(1e-12));

    CHECK_THROWS_AS(tphi_ic(scales(), scales().ec, env), std::domain_error);
}

TEST_CASE("charge dephasing")
{
    NoiseEnv env;

    SUBCASE("closed vs numeric away from the level degeneracy")
    {
        // Near f = 0.96..0.98 pi the gap E_2 - E_e is ~0.1 GHz and the
        // guard stays off, so both derivative paths must agree.
        for (double fpi : {0.96, 0.98}) {
            const FluxPoint flux =
                schedule_point(fpi * pi, Engine::perturbative);
            const TphiChargeResult closed = tphi_charge(
                scales(), flux, env, DerivMethod::closed, solver());
            const TphiChargeResult numeric = tphi_charge(
                scales(), flux, env, DerivMethod::numeric, solver());
            CHECK_FALSE(closed.guard);
            CHECK_FALSE(numeric.guard);
            CHECK(numeric.fd_ok);
            CHECK(closed.t_s > 0.0);
            CHECK(std::abs(numeric.t_s - closed.t_s) / closed.t_s < 0.10);
        }
    }

    SUBCASE("guard engages near the e / psi_2 degeneracy")
    {
        const FluxPoint flux = schedule_point(0.999 * pi);
        const TphiChargeResult r = tphi_charge(
            scales(), flux, env, DerivMethod::closed, solver());
        CHECK(r.guard);
        CHECK(std::abs(r.gap_ghz) < 0.04);
        CHECK(r.t_s > 0.0);
        CHECK(std::isfinite(r.t_s));
        // The unguarded closed value is still reported separately.
        CHECK(r.t_closed_s > 0.0);
    }

    SUBCASE("amplitude scaling of the second-order form")
    {
        const FluxPoint flux = schedule_point(0.97 * pi, Engine::perturbative);
        const double base =
            tphi_charge(scales(), flux, env, DerivMethod::closed, solver())
                .t_s;
        NoiseEnv loud = env;
        loud.a_c *= 2.0;
        CHECK(tphi_charge(scales(), flux, loud, DerivMethod::closed, solver())
                  .t_s == doctest::Approx(base / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("budget aggregation")
{
    NoiseEnv env;
    const FluxPoint flux = schedule_point(0.998 * pi);

    const NoiseBudget a = budget(scales(), flux, env, solver());
    CHECK(a.t1_flux_s > 0.0);
    CHECK(a.tphi_flux_s > 0.0);
    CHECK(a.tphi_ic_s > 0.0);
    CHECK(a.tphi_charge_s > 0.0);
    CHECK(std::isfinite(a.t1_flux_s));
    CHECK(std::isfinite(a.tphi_flux_s));
    CHECK(std::isfinite(a.tphi_ic_s));
    CHECK(std::isfinite(a.tphi_charge_s));

    // The critical-current channel matches the standalone function on the
    // exact splitting.
    CHECK(a.tphi_ic_s ==
          doctest::Approx(tphi_ic(scales(),
                                  solver().delta_e(flux, AtomForm::exact),
                                  env))
              .epsilon(1e-12));

    const NoiseBudget b = budget(scales(), flux, env, solver());
    CHECK(a.t1_flux_s == b.t1_flux_s);
    CHECK(a.tphi_flux_s == b.tphi_flux_s);
    CHECK(a.tphi_charge_s == b.tphi_charge_s);
}
