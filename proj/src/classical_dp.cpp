// ---------------------------------------------------------------------------
// Exact classical bounds by transfer-style dynamic programming.
//
// A deterministic strategy assigns one outcome label per (row, site); a site's
// assignment is a single "column" code in [0, d^rows).  Every term is
// attributed to its rightmost site, so a left-to-right sweep whose state is
// the last R columns sees each term exactly once.
// ---------------------------------------------------------------------------

#include "bellchain/classical_dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace bellchain {

namespace {

// A term anchored at some site: factors reach `offset` sites to the left of
// the anchor.  Sign terms contribute gamma * prod_f sign(row_f at site-offset_f);
// indicator terms contribute gamma when every factor's label matches.
struct Factor {
    int offset = 0;
    int row = 0;
};

struct LocalTerm {
    double gamma = 0.0;
    bool indicator = false;
    std::vector<Factor> factors;
    std::vector<int> outcomes;  // parallel to factors when indicator
};

using TermList = std::vector<LocalTerm>;

struct Expanded {
    int n = 0;
    int R = 1;
    int rows = 1;
    int d = 2;
    int K = 2;  // d^rows
    std::vector<TermList> at;  // anchored term lists, one per site
};

int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

int column_digit(int code, int row, const std::vector<int>& pow_d, int d) {
    return (code / pow_d[row]) % d;
}

// Expand a validated inequality into per-site anchored term lists.  For PBC
// the anchor of a term starting at i with range r is (i + r) mod n.
Expanded expand_inequality(const BellInequality& ineq) {
    const BellScenario& sc = ineq.scenario;
    Expanded ex;
    ex.n = sc.n;
    ex.R = sc.R;
    ex.rows = sc.rows();
    ex.d = sc.d;
    const int64_t K = ipow(sc.d, ex.rows);
    if (K > (1 << 20)) throw std::invalid_argument("per-site state space too large");
    ex.K = static_cast<int>(K);
    ex.at.assign(sc.n, {});

    const bool pbc = sc.boundary == Boundary::pbc;
    auto anchor_of = [&](int i, int r) {
        int a = i + r;
        if (pbc) a %= sc.n;
        return a;
    };

    if (ineq.structured()) {
        for (int site = 0; site < sc.n; ++site) {
            double g1 = ineq.one_body_at(site);
            if (g1 != 0.0) {
                LocalTerm t;
                t.gamma = g1;
                t.factors.push_back({0, sc.z_row()});
                ex.at[site].push_back(std::move(t));
            }
        }
        auto add_structured = [&](int i, const StructuredTerm& st) {
            LocalTerm t;
            t.gamma = st.gamma;
            t.factors.push_back({st.r, st.k});
            for (int u = 1; u < st.r; ++u) t.factors.push_back({st.r - u, sc.z_row()});
            t.factors.push_back({0, st.l});
            ex.at[anchor_of(i, st.r)].push_back(std::move(t));
        };
        if (sc.ti) {
            for (int i = 0; i < sc.n; ++i)
                for (const StructuredTerm& st : ineq.terms) add_structured(i, st);
        } else {
            for (const StructuredTerm& st : ineq.terms) add_structured(st.i, st);
        }
    } else {
        for (const GeneralTerm& gt : ineq.general_terms) {
            LocalTerm t;
            t.gamma = gt.gamma;
            t.indicator = true;
            for (size_t q = 0; q < gt.settings.size(); ++q) {
                t.factors.push_back({gt.r - static_cast<int>(q), gt.settings[q]});
                t.outcomes.push_back(gt.outcomes[q]);
            }
            ex.at[anchor_of(gt.i, gt.r)].push_back(std::move(t));
        }
    }
    return ex;
}

template <typename V>
V to_value(double g);

template <>
int64_t to_value<int64_t>(double g) {
    return std::llround(g);
}

template <>
double to_value<double>(double g) {
    return g;
}

template <>
long double to_value<long double>(double g) {
    return static_cast<long double>(g);
}

template <typename V>
constexpr V sentinel_value() {
    if constexpr (std::is_same_v<V, int64_t>)
        return std::numeric_limits<int64_t>::max() / 4;
    else
        return TransferTable::kSentinel;
}

// Evaluate the terms anchored at one site.  `col_of(offset)` returns the
// column code `offset` sites to the left of the anchor.
template <typename V, typename ColOf>
V eval_anchor(const TermList& terms, const ColOf& col_of, const std::vector<int>& pow_d, int d) {
    V total = 0;
    for (const LocalTerm& t : terms) {
        if (t.indicator) {
            bool match = true;
            for (size_t f = 0; f < t.factors.size(); ++f) {
                int lab = column_digit(col_of(t.factors[f].offset), t.factors[f].row, pow_d, d);
                if (lab != t.outcomes[f]) {
                    match = false;
                    break;
                }
            }
            if (match) total += to_value<V>(t.gamma);
        } else {
            int par = 0;
            for (const Factor& f : t.factors)
                par ^= column_digit(col_of(f.offset), f.row, pow_d, d);
            V v = to_value<V>(t.gamma);
            total += par ? -v : v;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Open-chain sweep.
//
// State before site j: the columns of sites j-R .. j-1, encoded little-endian
// with the oldest column in the lowest digit.  Sites left of the chain count
// as virtual columns with code 0; no term ever reads them.  The backward
// table G[j][s] is the optimal cost of sites j..n-1 given state s, so
// G[0][0] is the minimum and a forward greedy walk that always takes the
// smallest column preserving optimality reconstructs the lexicographically
// smallest minimizer.
// ---------------------------------------------------------------------------

template <typename V>
struct ObcOutcome {
    V minimum = 0;
    std::vector<int> columns;
};

template <typename V>
ObcOutcome<V> dp_obc(const Expanded& ex, bool want_witness) {
    const int n = ex.n;
    const int R = ex.R;
    const int K = ex.K;
    const int64_t S64 = ipow(K, R);
    if (S64 > (1 << 22)) throw std::invalid_argument("DP state space too large");
    const int S = static_cast<int>(S64);
    const int64_t top = S64 / K;  // weight of the newest column digit

    std::vector<int> pow_d(ex.rows);
    for (int r = 0; r < ex.rows; ++r) pow_d[r] = static_cast<int>(ipow(ex.d, r));
    std::vector<int> pow_K(R + 1);
    for (int t = 0; t <= R; ++t) pow_K[t] = static_cast<int>(ipow(K, t));

    // h(j, s, c): terms anchored at site j, with site j-o read from digit R-o
    // of the state (o >= 1) or from the new column c (o = 0).
    auto h = [&](int j, int s, int c) -> V {
        auto col_of = [&](int o) { return o == 0 ? c : (s / pow_K[R - o]) % K; };
        return eval_anchor<V>(ex.at[j], col_of, pow_d, ex.d);
    };

    std::vector<std::vector<V>> G(want_witness ? n + 1 : 2, std::vector<V>(S, 0));
    auto layer = [&](int j) -> std::vector<V>& { return G[want_witness ? j : (j & 1)]; };

    std::fill(layer(n).begin(), layer(n).end(), V(0));
    for (int j = n - 1; j >= 0; --j) {
        std::vector<V>& cur = layer(j);
        const std::vector<V>& nxt = layer(j + 1);
        for (int s = 0; s < S; ++s) {
            V best = sentinel_value<V>();
            for (int c = 0; c < K; ++c) {
                int ns = static_cast<int>(s / K + static_cast<int64_t>(c) * top);
                V v = h(j, s, c) + nxt[ns];
                if (v < best) best = v;
            }
            cur[s] = best;
        }
    }

    ObcOutcome<V> out;
    out.minimum = layer(0)[0];
    if (want_witness) {
        out.columns.resize(n);
        int s = 0;
        for (int j = 0; j < n; ++j) {
            const V target = G[j][s];
            for (int c = 0; c < K; ++c) {
                int ns = static_cast<int>(s / K + static_cast<int64_t>(c) * top);
                if (h(j, s, c) + G[j + 1][ns] == target) {
                    out.columns[j] = c;
                    s = ns;
                    break;
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Periodic chains: fix the columns of sites 0..R-1, cut the ring open.
//
// Every term's free support is one contiguous run of sites R..n-1 (two arcs
// on a ring of length n intersect in one piece whenever their lengths sum to
// at most n+1, which R+1 and n-R do), so each term either becomes a constant
// of the fixing or an anchored term of the open chain with gamma rescaled by
// the signs (or indicator matches) of its fixed factors.
// ---------------------------------------------------------------------------

struct ChainReduction {
    double constant = 0.0;
    Expanded chain;
    bool feasible = true;  // indicator terms cannot make a fixing infeasible, kept for clarity
};

ChainReduction reduce_to_chain(const Expanded& ex, const std::vector<int>& fix,
                               const std::vector<int>& pow_d) {
    const int n = ex.n;
    const int R = ex.R;
    ChainReduction red;
    red.chain.n = n - R;
    red.chain.R = ex.R;
    red.chain.rows = ex.rows;
    red.chain.d = ex.d;
    red.chain.K = ex.K;
    red.chain.at.assign(n - R, {});

    for (int a = 0; a < n; ++a) {
        for (const LocalTerm& t : ex.at[a]) {
            // Split factors into fixed ones and free ones; track the free
            // anchor (largest free site in chain coordinates).
            double scale = 1.0;
            bool dead = false;
            int chain_anchor = -1;
            LocalTerm ct;
            ct.gamma = t.gamma;
            ct.indicator = t.indicator;
            std::vector<std::pair<int, size_t>> free_sites;  // (site, factor index)
            for (size_t f = 0; f < t.factors.size(); ++f) {
                int site = a - t.factors[f].offset;
                if (site < 0) site += n;
                if (site < R) {
                    int lab = column_digit(fix[site], t.factors[f].row, pow_d, ex.d);
                    if (t.indicator) {
                        if (lab != t.outcomes[f]) {
                            dead = true;
                            break;
                        }
                    } else if (lab & 1) {
                        scale = -scale;
                    }
                } else {
                    free_sites.push_back({site, f});
                    chain_anchor = std::max(chain_anchor, site);
                }
            }
            if (dead) continue;
            if (free_sites.empty()) {
                // Fully determined by the fixing.
                red.constant += t.gamma * scale;
                continue;
            }
            ct.gamma = t.gamma * scale;
            for (auto [site, f] : free_sites) {
                ct.factors.push_back({chain_anchor - site, t.factors[f].row});
                if (t.indicator) ct.outcomes.push_back(t.outcomes[f]);
            }
            red.chain.at[chain_anchor - R].push_back(std::move(ct));
        }
    }
    return red;
}

template <typename V>
BoundResult pbc_impl(const BellInequality& ineq) {
    Expanded ex = expand_inequality(ineq);
    const int R = ex.R;
    const int K = ex.K;
    std::vector<int> pow_d(ex.rows);
    for (int r = 0; r < ex.rows; ++r) pow_d[r] = static_cast<int>(ipow(ex.d, r));

    const int64_t F = ipow(K, R);
    if (F * ipow(K, R + 1) > (1ll << 27))
        throw std::invalid_argument("PBC reduction too large for exact DP");

    V best = sentinel_value<V>();
    int64_t best_fix = -1;
    std::vector<int> fix(R);
    for (int64_t code = 0; code < F; ++code) {
        // Big-endian decode: site 0 in the highest digit, so ascending codes
        // enumerate fixings in lexicographic column order.
        int64_t c = code;
        for (int t = R - 1; t >= 0; --t) {
            fix[t] = static_cast<int>(c % K);
            c /= K;
        }
        ChainReduction red = reduce_to_chain(ex, fix, pow_d);
        V v = to_value<V>(red.constant) + dp_obc<V>(red.chain, false).minimum;
        if (v < best) {
            best = v;
            best_fix = code;
        }
    }

    // Rebuild the winning fixing once more to extract the witness.
    {
        int64_t c = best_fix;
        for (int t = R - 1; t >= 0; --t) {
            fix[t] = static_cast<int>(c % K);
            c /= K;
        }
    }
    ChainReduction red = reduce_to_chain(ex, fix, pow_d);
    ObcOutcome<V> chain_out = dp_obc<V>(red.chain, true);

    BoundResult result;
    result.classical_minimum = static_cast<double>(best);
    result.beta_c = -result.classical_minimum;
    result.has_witness = true;
    result.witness = DeterministicStrategy::filled(ex.n, ex.rows, ex.d);
    std::vector<int> columns(ex.n);
    for (int t = 0; t < R; ++t) columns[t] = fix[t];
    for (int t = 0; t < ex.n - R; ++t) columns[R + t] = chain_out.columns[t];
    for (int site = 0; site < ex.n; ++site)
        for (int row = 0; row < ex.rows; ++row)
            result.witness.labels[static_cast<size_t>(row) * ex.n + site] =
                column_digit(columns[site], row, pow_d, ex.d);
    return result;
}

template <typename V>
BoundResult obc_impl(const BellInequality& ineq) {
    Expanded ex = expand_inequality(ineq);
    ObcOutcome<V> out = dp_obc<V>(ex, true);
    std::vector<int> pow_d(ex.rows);
    for (int r = 0; r < ex.rows; ++r) pow_d[r] = static_cast<int>(ipow(ex.d, r));

    BoundResult result;
    result.classical_minimum = static_cast<double>(out.minimum);
    result.beta_c = -result.classical_minimum;
    result.has_witness = true;
    result.witness = DeterministicStrategy::filled(ex.n, ex.rows, ex.d);
    for (int site = 0; site < ex.n; ++site)
        for (int row = 0; row < ex.rows; ++row)
            result.witness.labels[static_cast<size_t>(row) * ex.n + site] =
                column_digit(out.columns[site], row, pow_d, ex.d);
    return result;
}

// Integral instances run in int64 and are exact outright.  Everything else
// accumulates in long double: the extra mantissa bits absorb the rounding of
// intermediate partial sums, so totals whose exact value is representable in
// a double (dyadic grids, complementary-rounding weight pairs) come back
// bit-exact after the final narrowing cast.
bool use_integer_path(const BellInequality& ineq) {
    if (!ineq.integral_coefficients()) return false;
    double budget = static_cast<double>(ineq.scenario.n) * ineq.coeff_abs_sum();
    return budget < std::ldexp(1.0, 60);
}

// ---------------------------------------------------------------------------
// Translation-invariant solver.
//
// Let q be the smallest period of the anchored term lists dividing n and R'
// the smallest window >= R with q | (R'+1).  Group sites into blocks of
// R'+1: block j carries columns x_j (R' sites) plus one free middle column.
// f0(x, y) = min over the middle of all terms anchored in (block j, block
// j+1's x part]; chaining w = floor(n/(R'+1)) copies by min-plus doubling
// and closing the ring with a tail table over the L = n - w(R'+1) leftover
// sites gives the minimum in O(log n) squarings.
// ---------------------------------------------------------------------------

std::string canonical_key(const TermList& terms) {
    std::vector<std::string> parts;
    for (const LocalTerm& t : terms) {
        std::string p = t.indicator ? "I" : "S";
        p += std::to_string(t.gamma) + "|";
        std::vector<std::string> fs;
        for (size_t f = 0; f < t.factors.size(); ++f) {
            std::string s = std::to_string(t.factors[f].offset) + "," + std::to_string(t.factors[f].row);
            if (t.indicator) s += "," + std::to_string(t.outcomes[f]);
            fs.push_back(std::move(s));
        }
        std::sort(fs.begin(), fs.end());
        for (auto& s : fs) p += s + ";";
        parts.push_back(std::move(p));
    }
    std::sort(parts.begin(), parts.end());
    std::string key;
    for (auto& p : parts) key += p + "#";
    return key;
}

int detect_period(const Expanded& ex) {
    std::vector<std::string> keys(ex.n);
    for (int a = 0; a < ex.n; ++a) keys[a] = canonical_key(ex.at[a]);
    for (int q = 1; q <= ex.n; ++q) {
        if (ex.n % q != 0) continue;
        bool ok = true;
        for (int a = q; a < ex.n && ok; ++a)
            if (keys[a] != keys[a % q]) ok = false;
        if (ok) return q;
    }
    return ex.n;
}

template <typename V>
std::vector<V> min_plus_product(const std::vector<V>& A, const std::vector<V>& B, int S) {
    const V inf = sentinel_value<V>();
    std::vector<V> C(static_cast<size_t>(S) * S, inf);
    for (int x = 0; x < S; ++x) {
        for (int z = 0; z < S; ++z) {
            V a = A[static_cast<size_t>(x) * S + z];
            if (a >= inf) continue;
            const V* brow = &B[static_cast<size_t>(z) * S];
            V* crow = &C[static_cast<size_t>(x) * S];
            for (int y = 0; y < S; ++y) {
                if (brow[y] >= inf) continue;
                V v = a + brow[y];
                if (v < crow[y]) crow[y] = v;
            }
        }
    }
    return C;
}

template <typename V>
BoundResult ti_impl(const BellInequality& ineq) {
    Expanded ex = expand_inequality(ineq);
    const int n = ex.n;
    const int K = ex.K;
    std::vector<int> pow_d(ex.rows);
    for (int r = 0; r < ex.rows; ++r) pow_d[r] = static_cast<int>(ipow(ex.d, r));

    const int q = ineq.scenario.ti ? 1 : detect_period(ex);
    int Rp = std::max(ex.R, 1);
    while ((Rp + 1) % q != 0) ++Rp;
    if (Rp + 1 > n) throw std::invalid_argument("instance is not translation invariant");

    const int64_t S64 = ipow(K, Rp);
    if (S64 * S64 > (1ll << 26))
        throw std::invalid_argument("instance is not translation invariant at a tractable period");
    const int S = static_cast<int>(S64);

    // Term lists by anchor residue (block-local anchors are R'+u with block
    // starts at multiples of R'+1, themselves multiples of q).
    std::vector<const TermList*> by_res(q);
    for (int r = 0; r < q; ++r) by_res[r] = &ex.at[r];

    std::vector<int> pow_K(Rp + 1);
    for (int t = 0; t <= Rp; ++t) pow_K[t] = static_cast<int>(ipow(K, t));

    const V inf = sentinel_value<V>();
    std::vector<V> f0(static_cast<size_t>(S) * S, inf);
    for (int x = 0; x < S; ++x) {
        for (int y = 0; y < S; ++y) {
            V best = inf;
            for (int z = 0; z < K; ++z) {
                V sum = 0;
                for (int u = 0; u <= Rp; ++u) {
                    // Window coordinate: 0..R'-1 -> x, R' -> z, R'+1.. -> y.
                    auto col_of = [&](int o) {
                        int pos = Rp + u - o;
                        if (pos < Rp) return (x / pow_K[pos]) % K;
                        if (pos == Rp) return z;
                        return (y / pow_K[pos - Rp - 1]) % K;
                    };
                    sum += eval_anchor<V>(*by_res[(Rp + u) % q], col_of, pow_d, ex.d);
                }
                if (sum < best) best = sum;
            }
            f0[static_cast<size_t>(x) * S + y] = best;
        }
    }

    const int w = n / (Rp + 1);
    const int L = n - w * (Rp + 1);

    // Chain w copies of f0 via the binary expansion of w.
    std::vector<V> G;
    {
        std::vector<V> P = f0;  // f0^(2^bit)
        int64_t rem = w;
        bool have = false;
        while (rem > 0) {
            if (rem & 1) {
                G = have ? min_plus_product(G, P, S) : P;
                have = true;
            }
            rem >>= 1;
            if (rem > 0) P = min_plus_product(P, P, S);
        }
    }

    V answer = inf;
    if (L == 0) {
        for (int x = 0; x < S; ++x) {
            V v = G[static_cast<size_t>(x) * S + x];
            if (v < answer) answer = v;
        }
    } else {
        // x_w's digits 0..L-1 are the real leftover sites w(R'+1)..n-1; its
        // digits L..R'-1 must agree with x_0's digits 0..R'-1-L.  The tail
        // covers the anchors R'-L..R'-1 (real ring sites), reading negative
        // window sites -k from leftover digit L-k.
        for (int x0 = 0; x0 < S; ++x0) {
            for (int xw = 0; xw < S; ++xw) {
                V g = G[static_cast<size_t>(x0) * S + xw];
                if (g >= inf) continue;
                bool ok = true;
                for (int t = L; t < Rp && ok; ++t)
                    if ((xw / pow_K[t]) % K != (x0 / pow_K[t - L]) % K) ok = false;
                if (!ok) continue;
                V tail = 0;
                for (int s = Rp - L; s <= Rp - 1; ++s) {
                    auto col_of = [&](int o) {
                        int site = s - o;
                        if (site >= 0) return (x0 / pow_K[site]) % K;
                        return (xw / pow_K[L + site]) % K;
                    };
                    int res = ((s % q) + q) % q;
                    tail += eval_anchor<V>(*by_res[res], col_of, pow_d, ex.d);
                }
                V v = g + tail;
                if (v < answer) answer = v;
            }
        }
    }

    BoundResult result;
    result.classical_minimum = static_cast<double>(answer);
    result.beta_c = -result.classical_minimum;
    result.has_witness = false;
    return result;
}

}  // namespace

BoundResult classical_bound_obc(const BellInequality& ineq) {
    ineq.validate();
    if (ineq.scenario.boundary != Boundary::obc)
        throw std::invalid_argument("classical_bound_obc: instance is not an open chain");
    return use_integer_path(ineq) ? obc_impl<int64_t>(ineq) : obc_impl<long double>(ineq);
}

BoundResult classical_bound_pbc(const BellInequality& ineq) {
    ineq.validate();
    if (ineq.scenario.boundary != Boundary::pbc)
        throw std::invalid_argument("classical_bound_pbc: instance is not a closed ring");
    return use_integer_path(ineq) ? pbc_impl<int64_t>(ineq) : pbc_impl<long double>(ineq);
}

BoundResult classical_bound_ti(const BellInequality& ineq) {
    ineq.validate();
    if (ineq.scenario.boundary != Boundary::pbc)
        throw std::invalid_argument("classical_bound_ti: instance is not a closed ring");
    return use_integer_path(ineq) ? ti_impl<int64_t>(ineq) : ti_impl<long double>(ineq);
}

BoundResult classical_bound(const BellInequality& ineq) {
    ineq.validate();
    return ineq.scenario.boundary == Boundary::obc ? classical_bound_obc(ineq)
                                                   : classical_bound_pbc(ineq);
}

TransferTable min_plus_square(const TransferTable& t) {
    TransferTable out;
    out.size = t.size;
    out.t = t.t + 1;
    out.f = min_plus_product<double>(t.f, t.f, t.size);
    return out;
}

}  // namespace bellchain
