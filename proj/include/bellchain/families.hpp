#pragma once

// Bundled inequality families:
//   - tight8: the 8-party, range-2 tight inequality with classical bound 32
//   - chained: alternating-weight chains of m-setting chained Bell blocks
//   - spin_glass: chained CHSH blocks with per-link Gaussian couplings
//   - xxz_elegant: four-vs-three setting blocks whose quantum image is an
//     XXZ chain; closed-form classical bounds per (delta, eps) region
//   - catalog: small tight inequalities with known bounds and violations

#include <array>
#include <vector>

#include "bellchain/model.hpp"

namespace bellchain {

BellInequality tight8_inequality();
MeasurementSettings tight8_settings();

// Two-site chained block coefficients, flattened gamma[k*m + l]; the block's
// classical bound is -2(m-1).  m = 2 gives CHSH.
std::vector<double> chained_block(int m);

// 2*pairs sites on a ring; link i carries weight 1 + (-1)^i * eps.
BellInequality chained_inequality(int m, int pairs, double eps);
MeasurementSettings chained_settings(int m);
double chained_classical_bound(int m, int pairs, double eps);  // beta_c, positive

// One CHSH block per link, scaled by couplings[i]; n = couplings.size().
BellInequality spin_glass_inequality(const std::vector<double>& couplings);
MeasurementSettings spin_glass_settings();

// Four A-settings against three B-settings on alternating links, weights
// (1 +- eps); the B menu reuses rows 0..2 of the shared 4-row strategy.
BellInequality xxz_elegant_inequality(int n, double delta, double eps);
int xxz_region(double delta, double eps);                           // 1..8
double xxz_classical_formula(int n, double delta, double eps);      // minimum (<= 0)

struct CatalogRow {
    int n;
    double gamma_z;
    std::array<double, 4> r1;  // gamma_{kl}, (k,l) = (0,0),(0,1),(1,0),(1,1)
    std::array<double, 4> r2;  // same order, z-bridged distance-2 terms
    double beta_c;
    double qv;
    double phi1_minus_phi0;  // optimal planar angle difference
    double qv_tol;
};

const std::vector<CatalogRow>& catalog_rows();
BellInequality catalog_inequality(const CatalogRow& row);
MeasurementSettings catalog_settings(const CatalogRow& row);

}  // namespace bellchain
