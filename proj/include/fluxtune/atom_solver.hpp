#ifndef FLUXTUNE_ATOM_SOLVER_HPP
#define FLUXTUNE_ATOM_SOLVER_HPP

#include "fluxtune/hilbert.hpp"
#include "fluxtune/params.hpp"

#include <vector>

namespace fluxtune {

/// Fast exact-diagonalization engine exploiting the parity symmetry: the atom
/// Hamiltonian is assembled directly in the parity-adapted basis
/// |n> (x) |+-_k> (with an i^k twist that makes the charge chain real),
/// where it splits into two real-symmetric blocks. |g> and |e> live in the
/// even block, |psi_-> in the odd one, so level classification is exact and
/// an energy-splitting evaluation costs one real-symmetric eigensolve of
/// size n_fock*(n_charge+1).
class AtomSolver {
public:
    AtomSolver(const DerivedScales& scales, const BasisSpec& basis);

    const BasisSpec& basis() const { return basis_; }
    const OperatorSet& ops() const { return ops_; }
    const DerivedScales& scales() const { return scales_; }

    /// Even-parity-sector Hamiltonian block (real symmetric).
    Eigen::MatrixXd even_block(const FluxPoint& flux, AtomForm form) const;
    /// Odd-parity-sector Hamiltonian block (real symmetric).
    Eigen::MatrixXd odd_block(const FluxPoint& flux, AtomForm form) const;

    Eigen::VectorXd even_eigenvalues(const FluxPoint& flux,
                                     AtomForm form) const;
    Eigen::VectorXd odd_eigenvalues(const FluxPoint& flux,
                                    AtomForm form) const;

    /// Exact splitting E_e - E_g (both even-sector levels) in GHz.
    double delta_e(const FluxPoint& flux, AtomForm form) const;

    /// k lowest eigenvalues of the full Hamiltonian (both sectors merged).
    std::vector<double> lowest_levels(const FluxPoint& flux, AtomForm form,
                                      int k) const;

    /// Classified levels with eigenvectors mapped back to the flat product
    /// basis and phases fixed against the zero-order parity states.
    AtomLevels levels(const FluxPoint& flux, AtomForm form) const;

    /// Exact coupling coefficients at a flux point.
    CouplingSet couplings(const FluxPoint& flux, AtomForm form) const;

    /// Splitting with an offset charge n_g (charge term E_c (n_minus+n_g)^2).
    /// Parity is broken, so the solve is a dense complex one and the g-like /
    /// e-like branches are tracked by overlap with the n_g = 0 levels.
    double delta_e_offset_charge(const FluxPoint& flux, AtomForm form,
                                 double n_g, const AtomLevels& reference) const;

private:
    DerivedScales scales_;
    BasisSpec basis_;
    OperatorSet ops_;

    Eigen::MatrixXd block(const FluxPoint& flux, AtomForm form,
                          bool even) const;
    Vector map_to_flat(const Eigen::VectorXd& v, double delta,
                       bool even) const;
};

} // namespace fluxtune

#endif
