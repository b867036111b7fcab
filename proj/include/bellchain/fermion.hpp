#pragma once

// Free-fermion solver for compiled chain Hamiltonians.
//
// The spin Hamiltonian maps to quadratic Majorana form H_hat = (i/2) c^T H c
// with two Majorana flavors per site.  On a ring the seam terms pick up a
// factor -p in the spin-parity sector p, so the ground energy is the minimum
// over both sectors of the parity-constrained quadratic minimum; open chains
// (or rings whose terms never cross the seam) need no constraint at all.

#include <Eigen/Dense>
#include <vector>

#include "bellchain/classical_dp.hpp"
#include "bellchain/model.hpp"

namespace bellchain {

struct MajoranaMatrix {
    int n = 0;        // sites; the matrix is 2n x 2n
    int parity = -1;  // spin-parity sector the seam signs were compiled for
    Eigen::MatrixXd H;
};

MajoranaMatrix assemble_majorana(const SpinHamiltonian& h, int parity);

// Real orthogonal O with O^T H O = diag blocks [[0, eps_k], [-eps_k, 0]],
// eps_k >= 0 ascending.  Throws if H is not antisymmetric or the computed
// transform fails its orthogonality check.
struct WilliamsonForm {
    Eigen::MatrixXd O;
    std::vector<double> eps;
    double det_o = 1.0;
};

WilliamsonForm williamson(const Eigen::MatrixXd& H);

// Sign of the Pfaffian of an antisymmetric matrix (+1, -1, or 0 when it
// vanishes), by skew-symmetric tridiagonalization with pivoting.
int pfaffian_sign(Eigen::MatrixXd A);

struct SectorReport {
    int parity = -1;
    bool constrained = true;  // false when both spin sectors share this solve
    double e_raw = 0.0;       // -sum eps
    double min_eps = 0.0;
    bool zero_mode = false;   // parity constraint vacuous
    double det_o = 0.0;
    double parity_product = 0.0;
    bool consistent = true;
    bool corrected = false;
    double e0 = 0.0;
};

struct GroundEnergyReport {
    double e0 = 0.0;
    int parity = 0;  // sector attaining e0; 0 when the sectors coincide
    bool sectors_coincide = false;
    std::vector<SectorReport> sectors;
};

GroundEnergyReport ground_energy(const SpinHamiltonian& h);

struct ViolationReport {
    double beta_c = 0.0;
    double e0 = 0.0;
    double violation = 0.0;  // beta_c + e0; negative certifies nonlocality
};

ViolationReport violation(const BellInequality& ineq, const MeasurementSettings& settings);

}  // namespace bellchain
