#include "fluxtune/perturb.hpp"

#include <cmath>

namespace fluxtune::perturb {

using std::complex;

double zero_order_energy(int n, int n_minus, const DerivedScales& s)
{
    if (n < 0) {
        throw std::invalid_argument("zero_order_energy: n must be >= 0");
    }
    return s.eb * (n + 0.5) +
           s.ec * static_cast<double>(n_minus) * n_minus + 4.0 * s.ej;
}

namespace {

struct Trig {
    double c2; // cos^2(f'/2)
    double s2; // sin^2(f'/2)
    double kappa; // E_J^2 e^{-lambda^2}
    double l2;    // lambda^2
};

Trig trig(const DerivedScales& s, const FluxPoint& flux)
{
    const double c = std::cos(flux.f_prime / 2.0);
    const double sn = std::sin(flux.f_prime / 2.0);
    const double l2 = s.lambda * s.lambda;
    return {c * c, sn * sn, s.ej * s.ej * std::exp(-l2), l2};
}

} // namespace

PerturbativeLevels energies(const DerivedScales& s, const FluxPoint& flux,
                            Variant variant)
{
    const auto [c2, s2, kappa, l2] = trig(s, flux);
    const double d2k = flux.delta * flux.delta * kappa;
    const double base_g = 0.5 * s.eb + 4.0 * s.ej;
    const double base_x = base_g + s.ec;

    PerturbativeLevels out;
    if (variant == Variant::full) {
        out.e_g = base_g - 2.0 * d2k * (c2 / s.ec + l2 * s2 / (s.eb + s.ec));
        out.e_e = base_x + d2k * ((5.0 / 3.0) * c2 / s.ec -
                                  2.0 * l2 * s2 / (s.eb - s.ec) -
                                  l2 * s2 / (s.eb + 3.0 * s.ec));
        out.e_2 = base_x - d2k * (c2 / (3.0 * s.ec) +
                                  l2 * s2 / (s.eb + 3.0 * s.ec));
    } else {
        out.e_g = base_g - 2.0 * d2k * (c2 / s.ec + l2 * s2 / s.eb);
        out.e_e = base_x +
                  d2k * ((5.0 / 3.0) * c2 / s.ec - 3.0 * l2 * s2 / s.eb);
        out.e_2 = base_x - d2k * (c2 / (3.0 * s.ec) + l2 * s2 / s.eb);
    }
    out.delta_e = out.e_e - out.e_g;
    return out;
}

double splitting(const DerivedScales& s, const FluxPoint& flux,
                 Variant variant)
{
    return energies(s, flux, variant).delta_e;
}

PhiElements phi_elements(const DerivedScales& s, const FluxPoint& flux,
                         Variant variant)
{
    const auto [c2, s2, kappa, l2] = trig(s, flux);
    const double sin_half = std::sin(flux.f_prime / 2.0);
    const double sin_full = std::sin(flux.f_prime);
    const double cos_full = std::cos(flux.f_prime);
    const double d = flux.delta;
    const double d2k = d * d * kappa;
    const double root_k = s.ej * std::exp(-l2 / 2.0); // E_J e^{-lambda^2/2}

    PhiElements out;
    if (variant == Variant::full) {
        out.eg = complex<double>(0.0, 2.0 * std::sqrt(2.0) * d * l2 *
                                          root_k * s.eb /
                                          (s.eb * s.eb - s.ec * s.ec) *
                                          sin_half);
        out.gg = -2.0 * d2k * l2 *
                 (2.0 * s.eb + (2.0 - l2) * s.ec) /
                 (s.eb * s.ec * (s.eb + s.ec)) * sin_full;
        out.ee = 2.0 * d2k * l2 *
                 (s.lambda * (cos_full - 1.0) / (s.eb * (s.eb - s.ec)) +
                  (10.0 * s.eb * s.eb + (26.0 + 3.0 * l2) * s.eb * s.ec -
                   3.0 * (4.0 + l2) * s.ec * s.ec) /
                      (6.0 * s.eb * s.ec * (s.eb + 3.0 * s.ec) *
                       (s.eb - s.ec)) *
                      sin_full);
    } else {
        out.eg = complex<double>(
            0.0, 2.0 * std::sqrt(2.0) * d * l2 * root_k / s.eb * sin_half);
        out.gg = -4.0 * d2k * l2 / (s.eb * s.ec) * sin_full;
        out.ee = (10.0 / 3.0) * d2k * l2 / (s.eb * s.ec) * sin_full;
    }
    return out;
}

CouplingSet couplings(const DerivedScales& s, const FluxPoint& flux,
                      Variant variant)
{
    const PhiElements el = phi_elements(s, flux, variant);
    const double root = std::sqrt(s.omega0_ghz * s.cavity_ghz);

    CouplingSet c;
    c.g = root * std::imag(el.eg);
    c.gx = 0.0; // identically, by parity
    c.g0 = -root * (std::real(el.ee) + std::real(el.gg)) / 2.0;
    c.gz = -root * (std::real(el.ee) - std::real(el.gg)) / 2.0;
    c.g_over_wc = c.g / s.cavity_ghz;
    if (c.g != 0.0) {
        c.g0_over_g = c.g0 / c.g;
        c.gz_over_g = c.gz / c.g;
    }
    return c;
}

double g_over_wc_scaling(const DerivedScales& s, const FluxPoint& flux)
{
    const double l2 = s.lambda * s.lambda;
    return std::sqrt(8.0 * s.omega0_ghz / s.cavity_ghz) * flux.delta * l2 *
           l2 * (s.ej / s.ec) * std::exp(-l2 / 2.0) *
           std::sin(flux.f_prime / 2.0);
}

ChargeElements charge_elements(const DerivedScales& s, const FluxPoint& flux)
{
    const auto [c2, s2, kappa, l2] = trig(s, flux);
    const double d = flux.delta;
    const double eb3 = s.eb + 3.0 * s.ec;

    ChargeElements out;
    out.mg = complex<double>(0.0, -std::sqrt(2.0) * d * s.ej *
                                      std::exp(-l2 / 2.0) *
                                      std::cos(flux.f_prime / 2.0) / s.ec);
    out.me = 1.0 + 2.0 * d * d * kappa *
                       (c2 / (9.0 * s.ec * s.ec) - l2 * s2 / (eb3 * eb3));
    return out;
}

} // namespace fluxtune::perturb
