#pragma once

// Exact classical-bound solvers.
//
//   classical_bound_obc  sweep DP over deterministic strategies, O(n K^{R+1})
//                        with K = d^rows; witness via suffix tables, ties
//                        resolved to the lexicographically smallest columns
//   classical_bound_pbc  reduction to open chains by fixing the strategies of
//                        R consecutive parties, O(n K^{2R+1})
//   classical_bound_ti   logarithmic-depth min-plus doubling for periodic
//                        instances, bound only, O(log n |S|^3)
//
// All solvers run in exact 64-bit integer arithmetic when every coefficient
// is integral (and n * sum|gamma| < 2^60), in doubles otherwise.

#include <vector>

#include "bellchain/model.hpp"

namespace bellchain {

struct BoundResult {
    double classical_minimum = 0.0;
    double beta_c = 0.0;
    DeterministicStrategy witness;
    bool has_witness = false;
};

// Square min-plus transfer table; entries at or above the sentinel behave
// as +infinity.  `t` counts how many times the table has been squared.
struct TransferTable {
    int size = 0;
    std::vector<double> f;  // size*size, row-major
    int t = 0;

    static constexpr double kSentinel = 1e300;
    double at(int x, int y) const { return f[static_cast<size_t>(x) * size + y]; }
    double& at(int x, int y) { return f[static_cast<size_t>(x) * size + y]; }
};

BoundResult classical_bound_obc(const BellInequality& ineq);
BoundResult classical_bound_pbc(const BellInequality& ineq);

// Accepts instances whose coefficients repeat with any period q dividing n
// (stored-once instances have q = 1); throws when no usable period exists.
BoundResult classical_bound_ti(const BellInequality& ineq);

// Dispatch on the boundary flag.
BoundResult classical_bound(const BellInequality& ineq);

TransferTable min_plus_square(const TransferTable& t);

}  // namespace bellchain
