#ifndef FLUXTUNE_HILBERT_HPP
#define FLUXTUNE_HILBERT_HPP

#include "fluxtune/coupling.hpp"
#include "fluxtune/params.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace fluxtune {

/// Truncated product basis |n; n_minus> with n = 0..n_fock-1 oscillator
/// states and n_minus = -n_charge..n_charge relative-charge states.
/// Flat ordering is row-major in (n, n_minus) with n_minus ascending.
struct BasisSpec {
    int n_fock = 0;
    int n_charge = 0;

    BasisSpec(int nf, int nc) : n_fock(nf), n_charge(nc)
    {
        if (nf < 2 || nc < 1) {
            throw std::invalid_argument(
                "basis cutoffs must satisfy n_fock >= 2, n_charge >= 1");
        }
    }

    int charge_dim() const { return 2 * n_charge + 1; }
    int dim() const { return n_fock * charge_dim(); }

    int flat(int n, int m) const { return n * charge_dim() + (m + n_charge); }
    int n_of(int i) const { return i / charge_dim(); }
    int m_of(int i) const { return i % charge_dim() - n_charge; }
};

/// A flux bias point; f and f_prime are reduced fluxes in radians and
/// delta = pi - f.
struct FluxPoint {
    double f = 0.0;
    double f_prime = 0.0;
    double delta = 0.0;

    static FluxPoint from_f(double f, double f_prime);
    static FluxPoint from_delta(double delta, double f_prime);
};

/// Selects the interaction form: `exact` keeps the sin(delta/2) prefactor of
/// the cosine potential, `linearized` replaces it by delta/2.
enum class AtomForm { exact, linearized };

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Checks near-Hermiticity of a dense operator.
bool is_hermitian(const Matrix& h, double rel_tol = 1e-12);

/// Dense operators on the product basis plus trig-function factories for the
/// oscillator quadrature phi_plus = lambda (b + b^dag).
class OperatorSet {
public:
    OperatorSet(const BasisSpec& basis, const DerivedScales& scales);

    const BasisSpec& basis() const { return basis_; }
    double lambda() const { return lambda_; }

    /// phi_plus on the full product space.
    const Matrix& phi_plus() const { return phi_plus_; }
    /// Relative Cooper-pair number n_minus on the full product space.
    const Matrix& n_minus() const { return n_minus_; }
    /// Charge raising operator S |n_minus> = |n_minus + 1> (truncated).
    const Matrix& raise_charge() const { return raise_; }

    /// cos(phi_plus + theta) / sin(phi_plus + theta) on the oscillator factor
    /// (n_fock x n_fock, real symmetric), via the spectral decomposition of
    /// the tridiagonal phi_plus matrix.
    Eigen::MatrixXd cos_phi_plus_osc(double theta) const;
    Eigen::MatrixXd sin_phi_plus_osc(double theta) const;

    /// Same trig functions lifted to the full product space.
    Matrix cos_phi_plus(double theta) const;
    Matrix sin_phi_plus(double theta) const;

    /// sin(phi_minus + alpha) = (e^{i alpha} S - e^{-i alpha} S^dag)/(2i) on
    /// the full product space; cos analogously.
    Matrix sin_phi_minus(double alpha) const;
    Matrix cos_phi_minus(double alpha) const;

    /// Lift an oscillator-factor operator A to A (x) 1_charge.
    Matrix lift_osc(const Eigen::MatrixXd& a) const;
    /// Lift a charge-factor operator B to 1_osc (x) B.
    Matrix lift_charge(const Matrix& b) const;

private:
    BasisSpec basis_;
    double lambda_ = 0.0;
    Matrix phi_plus_;
    Matrix n_minus_;
    Matrix raise_;
    // Eigendecomposition of the oscillator phi_plus matrix, cached for the
    // trig factories.
    Eigen::MatrixXd osc_q_;
    Eigen::VectorXd osc_d_;
};

/// Atom Hamiltonian H0 + V at a flux point, on the full product basis, in
/// E/h GHz. H0 = E_b (b^dag b + 1/2) + E_c n_minus^2 + 4 E_J and
/// V = -4 E_J sin(delta/2) cos(phi_plus + f'/2) sin(phi_minus + delta/2)
/// (prefactor 2 delta E_J for the linearized form).
Matrix assemble_atom_hamiltonian(const OperatorSet& ops,
                                 const DerivedScales& scales,
                                 const FluxPoint& flux, AtomForm form);

/// Generalized two-loop Hamiltonian with independent loop fluxes f1, f2:
/// H = H0 - 2 E_J [cos(f1/2) cos(phi_plus + phi_minus + (f' - f1)/2)
///               + cos(f2/2) cos(phi_plus - phi_minus + (f' + f2)/2)].
/// Reduces to the exact-form atom Hamiltonian at f1 = f2 = f.
Matrix assemble_two_loop_hamiltonian(const OperatorSet& ops,
                                     const DerivedScales& scales, double f1,
                                     double f2, double f_prime);

/// Parity operator P = sum_m |m> e^{-i m (pi - delta)} <-m|, identity on the
/// oscillator factor.
Matrix parity_operator(const BasisSpec& basis, double delta);

/// Eigenpairs in ascending order.
struct Spectrum {
    Eigen::VectorXd values; ///< k lowest eigenvalues (GHz)
    Matrix vectors;         ///< corresponding orthonormal columns
};

/// Dense Hermitian eigensolve returning the k lowest pairs; deterministic.
Spectrum eigensolve(const Matrix& h, int k);

/// Classified atom levels: |g>, the even excited state |e> = |psi_+> and the
/// odd excited state |psi_->, with energies and parity expectations.
struct AtomLevels {
    double e_g = 0.0;
    double e_e = 0.0;
    double e_2 = 0.0;
    Vector g, e, psi_minus;
    double parity_g = 0.0;
    double parity_e = 0.0;
    double parity_minus = 0.0;

    double delta_e() const { return e_e - e_g; }
};

struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Classifies eigenstates by parity expectation (threshold 0.5), never by
/// energy order; re-diagonalizes P inside numerically degenerate subspaces.
/// Phases are fixed so the overlap with the zero-order parity state
/// (|0;0>, |0;+1>, |0;-1>) is real positive.
AtomLevels classify_levels(const Spectrum& spec, const Matrix& parity,
                           const BasisSpec& basis, double delta);

/// Sesquilinear form <bra| op |ket>.
std::complex<double> transition_element(const Matrix& op, const Vector& bra,
                                        const Vector& ket);

/// Coupling coefficients from exact matrix elements of phi_plus:
/// g   =  sqrt(w0 wc) Im<e|phi+|g>          (sigma_y)
/// g0  = -sqrt(w0 wc) (<e|phi+|e> + <g|phi+|g>)/2
/// gz  = -sqrt(w0 wc) (<e|phi+|e> - <g|phi+|g>)/2
/// gx  = -sqrt(w0 wc) Re<e|phi+|g>          (expected 0 by parity)
/// reported as omega/2pi in GHz.
CouplingSet exact_couplings(const AtomLevels& levels, const Matrix& phi_plus,
                            const DerivedScales& scales);

} // namespace fluxtune

#endif
