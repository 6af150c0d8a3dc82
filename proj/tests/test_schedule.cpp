#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxtune/atom_solver.hpp"
#include "fluxtune/constants.hpp"
#include "fluxtune/params.hpp"
#include "fluxtune/perturb.hpp"
#include "fluxtune/schedule.hpp"
#include "test_util.hpp"

#include <cmath>
#include <vector>

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

} // namespace

TEST_CASE("minimum admissible f'")
{
    DerivedScales s = scales();

    // lambda -> 0 pushes the branch start to 2 pi - arccos(-1) = pi.
    s.lambda = 1e-9;
    CHECK(min_fprime(s) == doctest::Approx(pi).epsilon(1e-12));

    // Monotonically increasing in lambda.
    double prev = min_fprime(s);
    for (double l : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        s.lambda = l;
        const double cur = min_fprime(s);
        CHECK(cur > prev);
        prev = cur;
    }

    // Frozen value for the reference device (hand evaluation of
    // 2 pi - arccos((3 l^4 - 11)/(11 + 3 l^4)) with l^2 = 0.0136944961).
    CHECK(min_fprime(scales()) == doctest::Approx(3.155895850).epsilon(1e-8));
}

TEST_CASE("perturbative root finding")
{
    const DerivedScales& s = scales();
    const double f = 0.999 * pi;
    const double fp =
        solve_fprime(s, f, testutil::target_ghz, Engine::perturbative);

    CHECK(fp > min_fprime(s));
    CHECK(fp < 2.0 * pi);
    const double res =
        perturb::splitting(s, FluxPoint::from_f(f, fp),
                           perturb::Variant::full) -
        testutil::target_ghz;
    CHECK(std::abs(res) < 1e-10);

    SUBCASE("domain errors")
    {
        CHECK_THROWS_AS(
            solve_fprime(s, pi, testutil::target_ghz, Engine::perturbative),
            std::invalid_argument);
        CHECK_THROWS_AS(solve_fprime(s, f, s.ec, Engine::perturbative),
                        std::invalid_argument);
        // A splitting far above anything the branch can produce at this f.
        CHECK_THROWS_AS(solve_fprime(s, f, s.ec + 50.0, Engine::perturbative),
                        UnreachableTargetError);
    }
}

TEST_CASE("exact root finding agrees with perturbative to O(delta)")
{
    const DerivedScales& s = scales();
    const double f = 0.998 * pi;
    const double fp_p =
        solve_fprime(s, f, testutil::target_ghz, Engine::perturbative);
    const double fp_e = solve_fprime(s, f, testutil::target_ghz, Engine::exact,
                                     &solver());

    const double delta = pi - f;
    CHECK(std::abs(fp_e - fp_p) < 10.0 * delta * delta);

    const double res =
        solver().delta_e(FluxPoint::from_f(f, fp_e), AtomForm::exact) -
        testutil::target_ghz;
    CHECK(std::abs(res) < 1e-9);

    CHECK_THROWS_AS(
        solve_fprime(s, f, testutil::target_ghz, Engine::exact, nullptr),
        std::invalid_argument);
}

TEST_CASE("schedule construction, exact engine")
{
    const DerivedScales& s = scales();
    std::vector<double> grid;
    for (int i = 0; i < 6; ++i) {
        grid.push_back((0.995 + 0.0045 * i / 5.0) * pi);
    }

    const Schedule sched = build_schedule(s, solver(), grid,
                                          testutil::target_ghz, Engine::exact);
    REQUIRE(sched.rows.size() == grid.size());

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ScheduleRow& row = sched.rows[i];
        CHECK(row.f == grid[i]); // row order follows the grid
        CHECK(std::abs(row.delta_e_exact - testutil::target_ghz) < 1e-9);
        CHECK(row.f_prime > min_fprime(s));
        CHECK(row.pert.g > 0.0);
        CHECK(row.exact.g > 0.0);
        CHECK(std::abs(row.pert.g - row.exact.g) / row.exact.g < 0.05);
    }
    // g shrinks toward f = pi while delta_e stays pinned.
    CHECK(sched.rows.front().pert.g > 5.0 * sched.rows.back().pert.g);

    SUBCASE("serial and threaded runs agree bit for bit")
    {
        const Schedule threaded =
            build_schedule(s, solver(), grid, testutil::target_ghz,
                           Engine::exact, 4);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(threaded.rows[i].f_prime == sched.rows[i].f_prime);
            CHECK(threaded.rows[i].delta_e_exact ==
                  sched.rows[i].delta_e_exact);
            CHECK(threaded.rows[i].exact.g == sched.rows[i].exact.g);
        }
    }

    SUBCASE("row context is reported on failure")
    {
        std::vector<double> bad = grid;
        bad[2] = 0.90 * pi; // target splitting unreachable this far from pi
        CHECK_THROWS_WITH_AS(
            build_schedule(s, solver(), bad, testutil::target_ghz,
                           Engine::exact),
            doctest::Contains("schedule row 2"), std::runtime_error);
    }
}

TEST_CASE("regime classification")
{
    CHECK(regime(0.36) == Regime::ultrastrong);
    CHECK(regime(0.10) == Regime::ultrastrong);
    CHECK(regime(0.05) == Regime::weak_to_strong);
    CHECK(regime(1e-4) == Regime::weak_to_strong);
    CHECK(regime(0.0) == Regime::negligible);
    CHECK(regime(9e-5) == Regime::negligible);
    CHECK_THROWS_AS(regime(-1e-3), std::invalid_argument);
    CHECK(regime_name(Regime::ultrastrong) == "ultrastrong");
}

TEST_CASE("tuning identity residual")
{
    const DerivedScales& s = scales();

    SUBCASE("closed under the simplified-variant inputs")
    {
        SolveOptions opts;
        opts.variant = perturb::Variant::simplified;
        for (double fpi : {0.96, 0.98, 0.995, 0.999}) {
            const double f = fpi * pi;
            const double fp = solve_fprime(s, f, testutil::target_ghz,
                                           Engine::perturbative, nullptr, opts);
            const FluxPoint flux = FluxPoint::from_f(f, fp);
            const double g =
                perturb::couplings(s, flux, perturb::Variant::simplified).g;
            const double de =
                perturb::splitting(s, flux, perturb::Variant::simplified);
            CHECK(identity_residual(s, flux, g, de) <= 1e-12);
        }
    }

    SUBCASE("degenerate point gives zero residual")
    {
        const FluxPoint flux = FluxPoint::from_delta(0.0, 1.2 * pi);
        CHECK(identity_residual(s, flux, 0.0, s.ec) == 0.0);
    }

    SUBCASE("exact inputs leave only higher-order content")
    {
        const double f = 0.998 * pi;
        const double fp = solve_fprime(s, f, testutil::target_ghz,
                                       Engine::exact, &solver());
        const FluxPoint flux = FluxPoint::from_f(f, fp);
        const CouplingSet c = solver().couplings(flux, AtomForm::exact);
        const double de = solver().delta_e(flux, AtomForm::exact);
        const double r = identity_residual(s, flux, c.g, de);
        CHECK(r > 1e-12);  // not an identity for exact inputs
        CHECK(r < 0.05);   // but close: the residual is O(delta, lambda^2)
    }
}
