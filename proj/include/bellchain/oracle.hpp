#pragma once

// Brute-force verification backends: dense Hilbert-space operators kept as
// Pauli-string sums (materialized on demand, applied matrix-free for large n)
// and exhaustive classical enumeration.  Everything here is deliberately
// simple and independent of the production solvers it cross-checks.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bellchain/model.hpp"

namespace bellchain {
namespace oracle {

// Basis convention: computational basis index s, bit i of s is site i;
// bit 0 = spin up (sigma_z eigenvalue +1), bit 1 = down (-1).
struct PauliTerm {
    double w = 0.0;
    std::vector<uint8_t> ops;  // per site: 0 = I, 1 = X, 2 = Y, 3 = Z
};

struct DenseOperator {
    int n = 0;
    std::vector<PauliTerm> terms;

    Eigen::MatrixXcd materialize() const;       // n <= 12
    double hermiticity_residual() const;        // max |M - M^dagger|
    void apply(const std::complex<double>* x, std::complex<double>* y) const;
};

// Direct Kronecker expansion of the inequality under planar observables
// M_k = cos(phi_k) X + sin(phi_k) Y and the distinguished Z row; does not
// go through compile_hamiltonian.
DenseOperator dense_bell_operator(const BellInequality& ineq,
                                  const MeasurementSettings& settings);

// Spin image of a compiled Hamiltonian (one-body Z plus X/Y-endpoint
// Z-bridged strings), wraps under PBC.
DenseOperator dense_operator_from(const SpinHamiltonian& h);

// Inequality under arbitrary per-site 2x2 Hermitian observables
// obs[site][setting]; used for non-planar measurement checks.
DenseOperator dense_with_observables(
    const BellInequality& ineq,
    const std::vector<std::vector<Eigen::Matrix2cd>>& obs);

// Minimum eigenvalue.  Full Hermitian solve for n <= 10, Lanczos with the
// deterministic all-ones start vector above that; throws std::runtime_error
// with the residual on convergence failure.  n <= 14.
double dense_ground_energy(const DenseOperator& op);

// Minimum eigenvalue restricted to each spin-flip parity block.  The block
// with (-1)^popcount(s) = p is the fermion-parity-p sector of the
// Jordan-Wigner image (parity operator = prod_i sigma_z^(i)).
// Returns {p = +1 minimum, p = -1 minimum}.  n <= 10.
std::pair<double, double> dense_sector_energies(const DenseOperator& op);

// Expectation in the product sigma_z eigenstate selected by the z row of a
// strategy (label 0 -> up, 1 -> down); only diagonal terms survive.
double dense_zbasis_expectation(const DenseOperator& op, const DeterministicStrategy& s);

// Full enumeration of deterministic strategies, exact integer arithmetic
// when the coefficients are integral.  Ties resolved toward the
// lexicographically smallest column assignment.  d^(rows*n) <= 2^24.
struct ExhaustiveResult {
    double classical_minimum = 0.0;
    double beta_c = 0.0;
    DeterministicStrategy witness;
};
ExhaustiveResult exhaustive_classical_bound(const BellInequality& ineq);

// Fock-space parity-covariance check: builds a random orthogonal O from
// `reflection_count` Householder reflections, rotates the dense Majorana
// images, and returns the max-norm residual of
//   prod_k (i d_{k,0} d_{k,1})  -  det(O) * prod_k (i c_{k,0} c_{k,1}).
// n <= 4.
double dense_parity_transform_check(int n, int reflection_count, uint64_t seed);

}  // namespace oracle
}  // namespace bellchain
