#include "fluxtune/hilbert.hpp"

#include "fluxtune/constants.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace fluxtune {

using std::complex;
using namespace std::complex_literals;

FluxPoint FluxPoint::from_f(double f, double f_prime)
{
    return FluxPoint{f, f_prime, constants::pi - f};
}

FluxPoint FluxPoint::from_delta(double delta, double f_prime)
{
    return FluxPoint{constants::pi - delta, f_prime, delta};
}

bool is_hermitian(const Matrix& h, double rel_tol)
{
    const double scale = h.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return true;
    }
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

OperatorSet::OperatorSet(const BasisSpec& basis, const DerivedScales& scales)
    : basis_(basis), lambda_(scales.lambda)
{
    const int nb = basis_.n_fock;
    const int nc = basis_.charge_dim();

    // phi_plus = lambda (b + b^dag): tridiagonal on the oscillator factor.
    Eigen::MatrixXd phi_osc = Eigen::MatrixXd::Zero(nb, nb);
    for (int n = 0; n + 1 < nb; ++n) {
        phi_osc(n, n + 1) = phi_osc(n + 1, n) = lambda_ * std::sqrt(n + 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi_osc);
    osc_q_ = es.eigenvectors();
    osc_d_ = es.eigenvalues();
    phi_plus_ = lift_osc(phi_osc);

    Matrix n_charge = Matrix::Zero(nc, nc);
    Matrix raise_charge = Matrix::Zero(nc, nc);
    for (int m = -basis_.n_charge; m <= basis_.n_charge; ++m) {
        const int i = m + basis_.n_charge;
        n_charge(i, i) = m;
        if (m + 1 <= basis_.n_charge) {
            raise_charge(i + 1, i) = 1.0; // truncated, no wrap-around
        }
    }
    n_minus_ = lift_charge(n_charge);
    raise_ = lift_charge(raise_charge);
}

Eigen::MatrixXd OperatorSet::cos_phi_plus_osc(double theta) const
{
    return osc_q_ * (osc_d_.array() + theta).cos().matrix().asDiagonal() *
           osc_q_.transpose();
}

Eigen::MatrixXd OperatorSet::sin_phi_plus_osc(double theta) const
{
    return osc_q_ * (osc_d_.array() + theta).sin().matrix().asDiagonal() *
           osc_q_.transpose();
}

Matrix OperatorSet::cos_phi_plus(double theta) const
{
    return lift_osc(cos_phi_plus_osc(theta));
}

Matrix OperatorSet::sin_phi_plus(double theta) const
{
    return lift_osc(sin_phi_plus_osc(theta));
}

Matrix OperatorSet::sin_phi_minus(double alpha) const
{
    const complex<double> phase = std::exp(1i * alpha);
    const int nc = basis_.charge_dim();
    Matrix s = raise_.topLeftCorner(nc, nc); // charge-factor block of S
    Matrix chain =
        (phase * s - std::conj(phase) * s.adjoint()) / complex<double>(0, 2);
    return lift_charge(chain);
}

Matrix OperatorSet::cos_phi_minus(double alpha) const
{
    const complex<double> phase = std::exp(1i * alpha);
    const int nc = basis_.charge_dim();
    Matrix s = raise_.topLeftCorner(nc, nc);
    Matrix chain = (phase * s + std::conj(phase) * s.adjoint()) / 2.0;
    return lift_charge(chain);
}

Matrix OperatorSet::lift_osc(const Eigen::MatrixXd& a) const
{
    const int nb = basis_.n_fock;
    const int nc = basis_.charge_dim();
    Matrix out = Matrix::Zero(basis_.dim(), basis_.dim());
    for (int n = 0; n < nb; ++n) {
        for (int np = 0; np < nb; ++np) {
            if (a(n, np) == 0.0) {
                continue;
            }
            for (int i = 0; i < nc; ++i) {
                out(n * nc + i, np * nc + i) = a(n, np);
            }
        }
    }
    return out;
}

Matrix OperatorSet::lift_charge(const Matrix& b) const
{
    const int nb = basis_.n_fock;
    const int nc = basis_.charge_dim();
    Matrix out = Matrix::Zero(basis_.dim(), basis_.dim());
    for (int n = 0; n < nb; ++n) {
        out.block(n * nc, n * nc, nc, nc) = b;
    }
    return out;
}

namespace {

// H0 = E_b (b^dag b + 1/2) + E_c n_minus^2 + 4 E_J, diagonal in the product
// basis.
Matrix zero_order_hamiltonian(const BasisSpec& basis,
                              const DerivedScales& scales)
{
    Matrix h = Matrix::Zero(basis.dim(), basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
        const double n = basis.n_of(i);
        const double m = basis.m_of(i);
        h(i, i) = scales.eb * (n + 0.5) + scales.ec * m * m + 4.0 * scales.ej;
    }
    return h;
}

// Kron-style product of an oscillator-factor operator with a charge-factor
// operator, matching the row-major (n, n_minus) flat ordering.
Matrix product_op(const BasisSpec& basis, const Eigen::MatrixXd& osc,
                  const Matrix& charge)
{
    const int nb = basis.n_fock;
    const int nc = basis.charge_dim();
    Matrix out = Matrix::Zero(basis.dim(), basis.dim());
    for (int n = 0; n < nb; ++n) {
        for (int np = 0; np < nb; ++np) {
            if (osc(n, np) == 0.0) {
                continue;
            }
            out.block(n * nc, np * nc, nc, nc) = osc(n, np) * charge;
        }
    }
    return out;
}

Matrix charge_block(const Matrix& lifted, const BasisSpec& basis)
{
    return lifted.topLeftCorner(basis.charge_dim(), basis.charge_dim());
}

} // namespace

Matrix assemble_atom_hamiltonian(const OperatorSet& ops,
                                 const DerivedScales& scales,
                                 const FluxPoint& flux, AtomForm form)
{
    if (!(std::abs(flux.delta) < constants::pi / 2.0)) {
        throw std::domain_error(
            "flux point outside domain: require |pi - f| < pi/2");
    }
    const BasisSpec& basis = ops.basis();
    const double prefactor = (form == AtomForm::exact)
                                 ? 4.0 * scales.ej * std::sin(flux.delta / 2.0)
                                 : 2.0 * flux.delta * scales.ej;

    Matrix h = zero_order_hamiltonian(basis, scales);
    const Eigen::MatrixXd cos_osc = ops.cos_phi_plus_osc(flux.f_prime / 2.0);
    const Matrix sin_chain =
        charge_block(ops.sin_phi_minus(flux.delta / 2.0), basis);
    h.noalias() -= prefactor * product_op(basis, cos_osc, sin_chain);
    return h;
}

Matrix assemble_two_loop_hamiltonian(const OperatorSet& ops,
                                     const DerivedScales& scales, double f1,
                                     double f2, double f_prime)
{
    const BasisSpec& basis = ops.basis();
    Matrix h = zero_order_hamiltonian(basis, scales);

    const Matrix cos_chain = charge_block(ops.cos_phi_minus(0.0), basis);
    const Matrix sin_chain = charge_block(ops.sin_phi_minus(0.0), basis);

    // cos(phi+ + phi- + theta1) = cos(phi+ + theta1) cos(phi-)
    //                           - sin(phi+ + theta1) sin(phi-), and the
    // second loop carries phi- with the opposite sign.
    const double theta1 = (f_prime - f1) / 2.0;
    const double theta2 = (f_prime + f2) / 2.0;
    const double a1 = 2.0 * scales.ej * std::cos(f1 / 2.0);
    const double a2 = 2.0 * scales.ej * std::cos(f2 / 2.0);

    h.noalias() -=
        a1 * (product_op(basis, ops.cos_phi_plus_osc(theta1), cos_chain) -
              product_op(basis, ops.sin_phi_plus_osc(theta1), sin_chain));
    h.noalias() -=
        a2 * (product_op(basis, ops.cos_phi_plus_osc(theta2), cos_chain) +
              product_op(basis, ops.sin_phi_plus_osc(theta2), sin_chain));
    return h;
}

Matrix parity_operator(const BasisSpec& basis, double delta)
{
    const int nc = basis.charge_dim();
    Matrix p_charge = Matrix::Zero(nc, nc);
    for (int m = -basis.n_charge; m <= basis.n_charge; ++m) {
        // P |m> = e^{i m (pi - delta)} |-m>
        p_charge(-m + basis.n_charge, m + basis.n_charge) =
            std::exp(1i * (static_cast<double>(m) * (constants::pi - delta)));
    }
    Matrix out = Matrix::Zero(basis.dim(), basis.dim());
    for (int n = 0; n < basis.n_fock; ++n) {
        out.block(n * nc, n * nc, nc, nc) = p_charge;
    }
    return out;
}

Spectrum eigensolve(const Matrix& h, int k)
{
    if (!is_hermitian(h)) {
        throw std::invalid_argument("eigensolve: input is not Hermitian");
    }
    if (k < 1 || k > h.rows()) {
        throw std::invalid_argument("eigensolve: k out of range");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigensolve: solver failed to converge");
    }
    Spectrum s;
    s.values = es.eigenvalues().head(k);
    s.vectors = es.eigenvectors().leftCols(k);
    return s;
}

namespace {

// Fixes the global phase of v so that <ref|v> is real positive; falls back to
// making the largest-magnitude component real positive when the reference
// overlap is negligible.
void fix_phase(Vector& v, const Vector& ref)
{
    complex<double> overlap = ref.dot(v);
    if (std::abs(overlap) < 1e-6) {
        int idx = 0;
        v.cwiseAbs().maxCoeff(&idx);
        overlap = v(idx);
    }
    v *= std::conj(overlap) / std::abs(overlap);
}

Vector zero_order_state(const BasisSpec& basis, double delta, int k, int sign)
{
    Vector v = Vector::Zero(basis.dim());
    if (k == 0) {
        v(basis.flat(0, 0)) = 1.0;
        return v;
    }
    const complex<double> phase = std::exp(1i * (k * delta / 2.0));
    const double parity_sign = (k % 2 == 0) ? 1.0 : -1.0;
    v(basis.flat(0, k)) = phase / std::sqrt(2.0);
    v(basis.flat(0, -k)) =
        static_cast<double>(sign) * parity_sign * std::conj(phase) /
        std::sqrt(2.0);
    return v;
}

} // namespace

AtomLevels classify_levels(const Spectrum& spec, const Matrix& parity,
                           const BasisSpec& basis, double delta)
{
    const int k = static_cast<int>(spec.values.size());
    if (k < 3) {
        throw std::invalid_argument("classify_levels: need >= 3 eigenpairs");
    }

    Matrix vectors = spec.vectors;
    std::vector<double> parities(k);
    auto parity_of = [&](int i) {
        return std::real(
            complex<double>(vectors.col(i).dot(parity * vectors.col(i))));
    };
    for (int i = 0; i < k; ++i) {
        parities[i] = parity_of(i);
    }

    // Within numerically degenerate clusters eigenvectors may mix the parity
    // sectors; re-diagonalize P there (energies reassigned as <H> of the
    // rotated vectors, which stay inside the cluster's eigenspace).
    const double cluster_tol = 1e-8;
    int i = 0;
    while (i < k) {
        int j = i;
        while (j + 1 < k && spec.values(j + 1) - spec.values(j) < cluster_tol) {
            ++j;
        }
        const int width = j - i + 1;
        bool mixed = false;
        for (int c = i; c <= j; ++c) {
            mixed = mixed || std::abs(parities[c]) < 0.999999;
        }
        if (width > 1 && mixed) {
            Matrix sub = vectors.middleCols(i, width);
            Matrix p_sub = sub.adjoint() * parity * sub;
            Eigen::SelfAdjointEigenSolver<Matrix> es((p_sub + p_sub.adjoint()) /
                                                     2.0);
            // Cluster eigenvalues agree to cluster_tol, so the original
            // values can be kept for the rotated vectors.
            vectors.middleCols(i, width) = sub * es.eigenvectors();
            for (int c = i; c <= j; ++c) {
                parities[c] = parity_of(c);
            }
        }
        i = j + 1;
    }

    auto fail = [&](const char* what) {
        std::ostringstream os;
        os << "classify_levels: " << what << "; (energy, <P>) pairs:";
        for (int c = 0; c < k; ++c) {
            os << " (" << spec.values(c) << ", " << parities[c] << ")";
        }
        throw ClassificationError(os.str());
    };

    int idx_e = -1;
    int idx_m = -1;
    for (int c = 1; c < k && (idx_e < 0 || idx_m < 0); ++c) {
        if (std::abs(parities[c]) < 0.5) {
            fail("ambiguous parity expectation |<P>| < 0.5");
        }
        if (idx_e < 0 && parities[c] > 0.5) {
            idx_e = c;
        } else if (idx_m < 0 && parities[c] < -0.5) {
            idx_m = c;
        }
    }
    if (parities[0] < 0.5) {
        fail("ground state is not even-parity");
    }
    if (idx_e < 0 || idx_m < 0) {
        fail("could not locate both excited parity sectors");
    }

    AtomLevels out;
    out.e_g = spec.values(0);
    out.e_e = spec.values(idx_e);
    out.e_2 = spec.values(idx_m);
    out.g = vectors.col(0);
    out.e = vectors.col(idx_e);
    out.psi_minus = vectors.col(idx_m);
    out.parity_g = parities[0];
    out.parity_e = parities[idx_e];
    out.parity_minus = parities[idx_m];

    fix_phase(out.g, zero_order_state(basis, delta, 0, +1));
    fix_phase(out.e, zero_order_state(basis, delta, 1, +1));
    fix_phase(out.psi_minus, zero_order_state(basis, delta, 1, -1));
    return out;
}

std::complex<double> transition_element(const Matrix& op, const Vector& bra,
                                        const Vector& ket)
{
    if (bra.size() != op.rows() || ket.size() != op.cols()) {
        throw std::invalid_argument("transition_element: dimension mismatch");
    }
    return bra.dot(op * ket);
}

CouplingSet exact_couplings(const AtomLevels& levels, const Matrix& phi_plus,
                            const DerivedScales& scales)
{
    const complex<double> eg =
        transition_element(phi_plus, levels.e, levels.g);
    const complex<double> dg =
        transition_element(phi_plus, levels.g, levels.g);
    const complex<double> de =
        transition_element(phi_plus, levels.e, levels.e);

    const double root = std::sqrt(scales.omega0_ghz * scales.cavity_ghz);
    CouplingSet c;
    c.g = root * std::imag(eg);
    c.gx = -root * std::real(eg);
    c.g0 = -root * (std::real(de) + std::real(dg)) / 2.0;
    c.gz = -root * (std::real(de) - std::real(dg)) / 2.0;
    c.g_over_wc = c.g / scales.cavity_ghz;
    if (c.g != 0.0) {
        c.g0_over_g = c.g0 / c.g;
        c.gz_over_g = c.gz / c.g;
    }
    return c;
}

} // namespace fluxtune
