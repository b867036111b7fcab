#pragma once

// Closed-form mode spectra for translation-invariant chains.
//
// A site-independent quadratic chain diagonalizes per momentum: each sector
// admits momenta theta (antiperiodic for spin parity +1, periodic for -1),
// every paired theta contributing two signed mode energies and the theta in
// {0, pi} singletons one each, n values per sector in total.  The sector
// ground energy is -sum |eps| with a 2 min|eps| penalty when the filled-mode
// parity contradicts the sector.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bellchain/model.hpp"

namespace bellchain {

struct TiBlocks {
    int n = 0;
    int R = 1;
    std::vector<Eigen::Matrix2d> h;  // h[0] one-body block, h[1..R] range blocks
};

// Requires a closed ring with site-independent coefficients.
TiBlocks ti_blocks(const SpinHamiltonian& h);

// The n signed mode energies of one spin-parity sector.
std::vector<double> ti_spectrum(const TiBlocks& blocks, int parity);

struct TiSector {
    int parity = -1;
    double e_raw = 0.0;  // -sum |eps|
    double min_abs_eps = 0.0;
    bool zero_mode = false;
    bool consistent = true;
    bool corrected = false;
    double e0 = 0.0;
};

struct TiGround {
    double e0 = 0.0;
    int parity = +1;
    std::array<TiSector, 2> sectors;  // [0] parity -1, [1] parity +1
};

TiGround ti_ground_energy(const SpinHamiltonian& h);

// Thermodynamic quantum value per particle of the chained-inequality family
// with alternating link weights 1 +- eps (adaptive quadrature, abs tol 1e-10).
double chained_beta_q_per_particle(int m, double eps);

// The (eps_low, eps_high) interval on which the chained family violates its
// classical bound in the thermodynamic limit, or nullopt when it never does.
std::optional<std::pair<double, double>> chained_violation_window(int m);

}  // namespace bellchain
