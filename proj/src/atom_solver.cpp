#include "fluxtune/atom_solver.hpp"

#include "fluxtune/constants.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace fluxtune {

using std::complex;
using namespace std::complex_literals;

AtomSolver::AtomSolver(const DerivedScales& scales, const BasisSpec& basis)
    : scales_(scales), basis_(basis), ops_(basis, scales)
{
}

Eigen::MatrixXd AtomSolver::block(const FluxPoint& flux, AtomForm form,
                                  bool even) const
{
    if (!(std::abs(flux.delta) < constants::pi / 2.0)) {
        throw std::domain_error(
            "flux point outside domain: require |pi - f| < pi/2");
    }
    const int nb = basis_.n_fock;
    const int m_max = basis_.n_charge;
    const int k_min = even ? 0 : 1;
    const int n_rows = even ? m_max + 1 : m_max;
    const int dim = n_rows * nb;

    const double prefactor =
        (form == AtomForm::exact) ? 4.0 * scales_.ej * std::sin(flux.delta / 2.0)
                                  : 2.0 * flux.delta * scales_.ej;
    const Eigen::MatrixXd cos_osc = ops_.cos_phi_plus_osc(flux.f_prime / 2.0);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int row = 0; row < n_rows; ++row) {
        const int k = k_min + row;
        for (int n = 0; n < nb; ++n) {
            h(row * nb + n, row * nb + n) = scales_.eb * (n + 0.5) +
                                            scales_.ec * k * k +
                                            4.0 * scales_.ej;
        }
        if (row + 1 < n_rows) {
            // Twisted parity-chain element of sin(phi_minus + delta/2):
            // -1/sqrt(2) on the even-sector 0-1 link, -1/2 elsewhere.
            const double t = (even && k == 0) ? -1.0 / std::sqrt(2.0) : -0.5;
            const Eigen::MatrixXd v = (-prefactor * t) * cos_osc;
            h.block((row + 1) * nb, row * nb, nb, nb) = v;
            h.block(row * nb, (row + 1) * nb, nb, nb) = v.transpose();
        }
    }
    return h;
}

Eigen::MatrixXd AtomSolver::even_block(const FluxPoint& flux,
                                       AtomForm form) const
{
    return block(flux, form, true);
}

Eigen::MatrixXd AtomSolver::odd_block(const FluxPoint& flux,
                                      AtomForm form) const
{
    return block(flux, form, false);
}

Eigen::VectorXd AtomSolver::even_eigenvalues(const FluxPoint& flux,
                                             AtomForm form) const
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(even_block(flux, form),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Eigen::VectorXd AtomSolver::odd_eigenvalues(const FluxPoint& flux,
                                            AtomForm form) const
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(odd_block(flux, form),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double AtomSolver::delta_e(const FluxPoint& flux, AtomForm form) const
{
    const Eigen::VectorXd ev = even_eigenvalues(flux, form);
    return ev(1) - ev(0);
}

std::vector<double> AtomSolver::lowest_levels(const FluxPoint& flux,
                                              AtomForm form, int k) const
{
    const Eigen::VectorXd even = even_eigenvalues(flux, form);
    const Eigen::VectorXd odd = odd_eigenvalues(flux, form);
    std::vector<double> merged;
    merged.reserve(even.size() + odd.size());
    merged.insert(merged.end(), even.data(), even.data() + even.size());
    merged.insert(merged.end(), odd.data(), odd.data() + odd.size());
    std::sort(merged.begin(), merged.end());
    if (k > static_cast<int>(merged.size())) {
        throw std::invalid_argument("lowest_levels: k out of range");
    }
    merged.resize(k);
    return merged;
}

Vector AtomSolver::map_to_flat(const Eigen::VectorXd& v, double delta,
                               bool even) const
{
    const int nb = basis_.n_fock;
    const int k_min = even ? 0 : 1;
    const int n_rows = even ? basis_.n_charge + 1 : basis_.n_charge;
    const double parity_sign = even ? 1.0 : -1.0;

    static constexpr complex<double> twists[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

    Vector out = Vector::Zero(basis_.dim());
    for (int row = 0; row < n_rows; ++row) {
        const int k = k_min + row;
        // i^k twist undone when mapping back to the flat basis.
        const complex<double> twist = twists[k % 4];
        for (int n = 0; n < nb; ++n) {
            const double c = v(row * nb + n);
            if (k == 0) {
                out(basis_.flat(n, 0)) += twist * c;
                continue;
            }
            const complex<double> phase = std::exp(1i * (k * delta / 2.0));
            const double alt = (k % 2 == 0) ? 1.0 : -1.0;
            out(basis_.flat(n, k)) += twist * phase * c / std::sqrt(2.0);
            out(basis_.flat(n, -k)) += twist * parity_sign * alt *
                                       std::conj(phase) * c / std::sqrt(2.0);
        }
    }
    return out;
}

AtomLevels AtomSolver::levels(const FluxPoint& flux, AtomForm form) const
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> even(even_block(flux, form));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> odd(odd_block(flux, form));

    AtomLevels out;
    out.e_g = even.eigenvalues()(0);
    out.e_e = even.eigenvalues()(1);
    out.e_2 = odd.eigenvalues()(0);
    out.g = map_to_flat(even.eigenvectors().col(0), flux.delta, true);
    out.e = map_to_flat(even.eigenvectors().col(1), flux.delta, true);
    out.psi_minus = map_to_flat(odd.eigenvectors().col(0), flux.delta, false);
    out.parity_g = 1.0;
    out.parity_e = 1.0;
    out.parity_minus = -1.0;

    // Same phase convention as classify_levels: real positive overlap with
    // the zero-order parity state.
    auto fix = [&](Vector& v, int k, int sign) {
        Vector ref = Vector::Zero(basis_.dim());
        if (k == 0) {
            ref(basis_.flat(0, 0)) = 1.0;
        } else {
            const complex<double> phase =
                std::exp(1i * (k * flux.delta / 2.0));
            ref(basis_.flat(0, k)) = phase / std::sqrt(2.0);
            ref(basis_.flat(0, -k)) =
                -static_cast<double>(sign) * std::conj(phase) / std::sqrt(2.0);
        }
        complex<double> overlap = ref.dot(v);
        if (std::abs(overlap) < 1e-6) {
            int idx = 0;
            v.cwiseAbs().maxCoeff(&idx);
            overlap = v(idx);
        }
        v *= std::conj(overlap) / std::abs(overlap);
    };
    fix(out.g, 0, +1);
    fix(out.e, 1, +1);
    fix(out.psi_minus, 1, -1);
    return out;
}

CouplingSet AtomSolver::couplings(const FluxPoint& flux, AtomForm form) const
{
    return exact_couplings(levels(flux, form), ops_.phi_plus(), scales_);
}

double AtomSolver::delta_e_offset_charge(const FluxPoint& flux, AtomForm form,
                                         double n_g,
                                         const AtomLevels& reference) const
{
    Matrix h = assemble_atom_hamiltonian(ops_, scales_, flux, form);
    h += scales_.ec * (2.0 * n_g * ops_.n_minus() +
                       n_g * n_g * Matrix::Identity(basis_.dim(), basis_.dim()));

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const int track = std::min<int>(12, basis_.dim());
    auto best_overlap = [&](const Vector& ref) {
        int best = 0;
        double best_val = -1.0;
        for (int c = 0; c < track; ++c) {
            const double o = std::abs(ref.dot(es.eigenvectors().col(c)));
            if (o > best_val) {
                best_val = o;
                best = c;
            }
        }
        return best;
    };
    const int ig = best_overlap(reference.g);
    const int ie = best_overlap(reference.e);
    if (ig == ie) {
        throw std::runtime_error(
            "delta_e_offset_charge: branch tracking collapsed");
    }
    return es.eigenvalues()(ie) - es.eigenvalues()(ig);
}

} // namespace fluxtune
