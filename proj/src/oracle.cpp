#include "bellchain/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bellchain/rng.hpp"

namespace bellchain {
namespace oracle {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Per-term bitmask form: target = s ^ flip; amplitude = w * i^{#Y} * parity
// of s on the Y|Z sites.  One Pauli factor per site keeps Y and Z disjoint.
struct MaskTerm {
    uint64_t flip = 0, yz = 0;
    cd w{};
};

MaskTerm mask_of(const PauliTerm& t) {
    MaskTerm m;
    int ycount = 0;
    for (size_t i = 0; i < t.ops.size(); ++i) {
        const uint64_t bit = 1ULL << i;
        switch (t.ops[i]) {
            case 1: m.flip |= bit; break;
            case 2: m.flip |= bit; m.yz |= bit; ++ycount; break;
            case 3: m.yz |= bit; break;
            default: break;
        }
    }
    static const cd ipow[4] = {cd{1, 0}, cd{0, 1}, cd{-1, 0}, cd{0, -1}};
    m.w = t.w * ipow[ycount % 4];
    return m;
}

std::vector<MaskTerm> masks_of(const DenseOperator& op) {
    std::vector<MaskTerm> ms;
    ms.reserve(op.terms.size());
    for (const auto& t : op.terms) ms.push_back(mask_of(t));
    return ms;
}

int parity_of(uint64_t x) { return (std::popcount(x) & 1) ? -1 : 1; }

}  // namespace

Eigen::MatrixXcd DenseOperator::materialize() const {
    if (n > 12) throw std::invalid_argument("dense materialize: n > 12");
    const size_t dim = size_t{1} << n;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<long>(dim), static_cast<long>(dim));
    for (const auto& t : terms) {
        const MaskTerm m = mask_of(t);
        for (size_t s = 0; s < dim; ++s)
            M(static_cast<long>(s ^ m.flip), static_cast<long>(s)) +=
                m.w * static_cast<double>(parity_of(s & m.yz));
    }
    return M;
}

double DenseOperator::hermiticity_residual() const {
    const Eigen::MatrixXcd M = materialize();
    return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

void DenseOperator::apply(const cd* x, cd* y) const {
    const size_t dim = size_t{1} << n;
    const auto ms = masks_of(*this);
    for (const auto& m : ms)
        for (size_t s = 0; s < dim; ++s)
            y[s ^ m.flip] += m.w * static_cast<double>(parity_of(s & m.yz)) * x[s];
}

namespace {

void check_dense_n(int n) {
    if (n < 1 || n > 14) throw std::invalid_argument("dense oracle: need 1 <= n <= 14");
}

void add_planar_string(DenseOperator& op, int n, int i, int r, int j,
                       double gamma, double phi_left, double phi_right) {
    // (cos X + sin Y)_i  Z...Z  (cos X + sin Y)_j, wrapped middle sites.
    const double cl[2] = {std::cos(phi_left), std::sin(phi_left)};
    const double cr[2] = {std::cos(phi_right), std::sin(phi_right)};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double w = gamma * cl[a] * cr[b];
            if (w == 0.0) continue;
            PauliTerm t;
            t.w = w;
            t.ops.assign(static_cast<size_t>(n), 0);
            t.ops[static_cast<size_t>(i)] = static_cast<uint8_t>(a ? 2 : 1);
            t.ops[static_cast<size_t>(j)] = static_cast<uint8_t>(b ? 2 : 1);
            for (int q = 1; q < r; ++q) t.ops[static_cast<size_t>((i + q) % n)] = 3;
            op.terms.push_back(t);
        }
}

}  // namespace

DenseOperator dense_bell_operator(const BellInequality& ineq,
                                  const MeasurementSettings& settings) {
    ineq.validate();
    if (!ineq.structured())
        throw std::invalid_argument("dense bell operator: structured form required");
    settings.validate(ineq.scenario);
    const auto& sc = ineq.scenario;
    check_dense_n(sc.n);

    DenseOperator op;
    op.n = sc.n;
    for (int i = 0; i < sc.n; ++i) {
        const double g = ineq.one_body_at(i);
        if (g == 0.0) continue;
        PauliTerm t;
        t.w = g;
        t.ops.assign(static_cast<size_t>(sc.n), 0);
        t.ops[static_cast<size_t>(i)] = 3;
        op.terms.push_back(t);
    }
    auto add = [&](int i, const StructuredTerm& t) {
        const int j = (i + t.r) % sc.n;
        add_planar_string(op, sc.n, i, t.r, j, t.gamma, settings.angle(i, t.k),
                          settings.angle(j, t.l));
    };
    if (sc.ti) {
        for (const auto& t : ineq.terms)
            for (int i = 0; i < sc.n; ++i) add(i, t);
    } else {
        for (const auto& t : ineq.terms) add(t.i, t);
    }
    return op;
}

DenseOperator dense_operator_from(const SpinHamiltonian& h) {
    check_dense_n(h.n);
    DenseOperator op;
    op.n = h.n;
    for (int i = 0; i < h.n; ++i) {
        const double g = h.one_body[static_cast<size_t>(i)];
        if (g == 0.0) continue;
        PauliTerm t;
        t.w = g;
        t.ops.assign(static_cast<size_t>(h.n), 0);
        t.ops[static_cast<size_t>(i)] = 3;
        op.terms.push_back(t);
    }
    for (int i = 0; i < h.n; ++i)
        for (int r = 1; r <= h.R; ++r) {
            if (h.boundary == Boundary::obc && i + r >= h.n) continue;
            const int j = (i + r) % h.n;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double w = h.t(i, r, a, b);
                    if (w == 0.0) continue;
                    PauliTerm t;
                    t.w = w;
                    t.ops.assign(static_cast<size_t>(h.n), 0);
                    t.ops[static_cast<size_t>(i)] = static_cast<uint8_t>(a ? 2 : 1);
                    t.ops[static_cast<size_t>(j)] = static_cast<uint8_t>(b ? 2 : 1);
                    for (int q = 1; q < r; ++q)
                        t.ops[static_cast<size_t>((i + q) % h.n)] = 3;
                    op.terms.push_back(t);
                }
        }
    return op;
}

DenseOperator dense_with_observables(
    const BellInequality& ineq,
    const std::vector<std::vector<Eigen::Matrix2cd>>& obs) {
    ineq.validate();
    if (!ineq.structured())
        throw std::invalid_argument("dense with observables: structured form required");
    const auto& sc = ineq.scenario;
    check_dense_n(sc.n);
    if (obs.size() != static_cast<size_t>(sc.n))
        throw std::invalid_argument("dense with observables: need one observable list per site");

    // Pauli split of a Hermitian 2x2: v = (wI, wX, wY, wZ), all real.
    auto split = [](const Eigen::Matrix2cd& A) {
        std::array<double, 4> v{};
        v[0] = 0.5 * std::real(A(0, 0) + A(1, 1));
        v[1] = 0.5 * std::real(A(0, 1) + A(1, 0));
        v[2] = 0.5 * std::imag(A(1, 0) - A(0, 1));
        v[3] = 0.5 * std::real(A(0, 0) - A(1, 1));
        return v;
    };

    DenseOperator op;
    op.n = sc.n;
    for (int i = 0; i < sc.n; ++i) {
        const double g = ineq.one_body_at(i);
        if (g == 0.0) continue;
        PauliTerm t;
        t.w = g;
        t.ops.assign(static_cast<size_t>(sc.n), 0);
        t.ops[static_cast<size_t>(i)] = 3;
        op.terms.push_back(t);
    }
    auto add = [&](int i, const StructuredTerm& t) {
        const int j = (i + t.r) % sc.n;
        const auto va = split(obs[static_cast<size_t>(i)][static_cast<size_t>(t.k)]);
        const auto vb = split(obs[static_cast<size_t>(j)][static_cast<size_t>(t.l)]);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double w = t.gamma * va[static_cast<size_t>(a)] * vb[static_cast<size_t>(b)];
                if (w == 0.0) continue;
                PauliTerm pt;
                pt.w = w;
                pt.ops.assign(static_cast<size_t>(sc.n), 0);
                pt.ops[static_cast<size_t>(i)] = static_cast<uint8_t>(a);
                pt.ops[static_cast<size_t>(j)] = static_cast<uint8_t>(b);
                for (int q = 1; q < t.r; ++q)
                    pt.ops[static_cast<size_t>((i + q) % sc.n)] = 3;
                op.terms.push_back(pt);
            }
    };
    if (sc.ti) {
        for (const auto& t : ineq.terms)
            for (int i = 0; i < sc.n; ++i) add(i, t);
    } else {
        for (const auto& t : ineq.terms) add(t.i, t);
    }
    return op;
}

namespace {

double lanczos_ground(const DenseOperator& op) {
    const size_t dim = size_t{1} << op.n;
    const int kmax = std::min<int>(static_cast<int>(dim), 400);
    const double tol = 1e-9;

    Eigen::MatrixXcd V(static_cast<long>(dim), kmax);
    Eigen::VectorXcd w(static_cast<long>(dim));
    std::vector<double> alpha, beta;  // beta[k] couples k and k+1

    // Deterministic full-support start.  A symmetric start (all ones) can be
    // orthogonal to the ground state's momentum or parity sector, in which
    // case the Krylov space exhausts an invariant subspace above the true
    // minimum; counter-keyed pseudo-random components avoid every such
    // alignment in practice while keeping runs reproducible.
    const uint64_t key = make_key(0x6c616e637a6f73ULL, static_cast<uint64_t>(op.n));
    for (size_t i = 0; i < dim; ++i)
        V(static_cast<long>(i), 0) =
            cd{counter_uniform(key, 2 * i) - 0.5, counter_uniform(key, 2 * i + 1) - 0.5};
    V.col(0) /= V.col(0).norm();

    double theta = 0.0, residual = 0.0;
    for (int k = 0; k < kmax; ++k) {
        w.setZero();
        op.apply(V.col(k).data(), w.data());
        if (k > 0) w -= beta[static_cast<size_t>(k - 1)] * V.col(k - 1);
        const double a = std::real(V.col(k).dot(w));
        alpha.push_back(a);
        w -= a * V.col(k);
        // full reorthogonalization, twice for safety
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j <= k; ++j) w -= V.col(j).dot(w) * V.col(j);

        const double b = w.norm();

        // Ritz estimate from the k+1 dimensional tridiagonal section.
        const int kk = k + 1;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(kk, kk);
        for (int j = 0; j < kk; ++j) T(j, j) = alpha[static_cast<size_t>(j)];
        for (int j = 0; j + 1 < kk; ++j)
            T(j, j + 1) = T(j + 1, j) = beta[static_cast<size_t>(j)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        int lo;
        es.eigenvalues().minCoeff(&lo);
        theta = es.eigenvalues()(lo);
        residual = b * std::abs(es.eigenvectors()(kk - 1, lo));
        if (residual <= tol * std::max(1.0, std::abs(theta))) return theta;
        if (b < 1e-13) return theta;  // exact invariant subspace
        beta.push_back(b);
        if (k + 1 < kmax) V.col(k + 1) = w / b;
    }
    throw std::runtime_error("lanczos did not converge; residual = " + std::to_string(residual));
}

}  // namespace

double dense_ground_energy(const DenseOperator& op) {
    check_dense_n(op.n);
    if (op.terms.empty()) return 0.0;
    if (op.n > 10) return lanczos_ground(op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.materialize(),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::pair<double, double> dense_sector_energies(const DenseOperator& op) {
    if (op.n > 10) throw std::invalid_argument("sector energies: n > 10");
    const size_t dim = size_t{1} << op.n;
    const Eigen::MatrixXcd M = op.materialize();

    std::array<std::vector<size_t>, 2> idx;  // [0]: even popcount (p=+1)
    for (size_t s = 0; s < dim; ++s) idx[static_cast<size_t>(std::popcount(s) & 1)].push_back(s);

    std::array<double, 2> e{};
    for (int blk = 0; blk < 2; ++blk) {
        const auto& ix = idx[static_cast<size_t>(blk)];
        Eigen::MatrixXcd B(static_cast<long>(ix.size()), static_cast<long>(ix.size()));
        for (size_t r = 0; r < ix.size(); ++r)
            for (size_t c = 0; c < ix.size(); ++c)
                B(static_cast<long>(r), static_cast<long>(c)) =
                    M(static_cast<long>(ix[r]), static_cast<long>(ix[c]));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B, Eigen::EigenvaluesOnly);
        e[static_cast<size_t>(blk)] = es.eigenvalues().minCoeff();
    }
    return {e[0], e[1]};
}

double dense_zbasis_expectation(const DenseOperator& op, const DeterministicStrategy& s) {
    // basis state: site i spin down iff z-row label is 1
    uint64_t state = 0;
    const int zrow = s.rows - 1;
    for (int i = 0; i < s.n; ++i)
        if (s.label(zrow, i) == 1) state |= (1ULL << i);
    double v = 0.0;
    for (const auto& t : op.terms) {
        const MaskTerm m = mask_of(t);
        if (m.flip != 0) continue;  // off-diagonal
        v += std::real(m.w) * parity_of(state & m.yz);
    }
    return v;
}

namespace {

// Flattened term view: signed product over (site,row) factors for d = 2
// correlators, outcome indicator for general terms.
struct FlatTerm {
    double gamma = 0.0;
    bool indicator = false;
    std::vector<std::pair<int, int>> factors;          // (site, row)
    std::vector<int> outcomes;                         // indicator only
};

std::vector<FlatTerm> flatten_terms(const BellInequality& ineq) {
    const auto& sc = ineq.scenario;
    std::vector<FlatTerm> flat;
    for (int i = 0; i < sc.n; ++i) {
        const double g = ineq.one_body_at(i);
        if (g == 0.0) continue;
        FlatTerm f;
        f.gamma = g;
        f.factors = {{i, sc.z_row()}};
        flat.push_back(std::move(f));
    }
    auto add_structured = [&](int i, const StructuredTerm& t) {
        FlatTerm f;
        f.gamma = t.gamma;
        f.factors.push_back({i % sc.n, t.k});
        for (int q = 1; q < t.r; ++q) f.factors.push_back({(i + q) % sc.n, sc.z_row()});
        f.factors.push_back({(i + t.r) % sc.n, t.l});
        flat.push_back(std::move(f));
    };
    auto add_general = [&](int i, const GeneralTerm& t) {
        FlatTerm f;
        f.gamma = t.gamma;
        f.indicator = true;
        for (int q = 0; q <= t.r; ++q) {
            f.factors.push_back({(i + q) % sc.n, t.settings[static_cast<size_t>(q)]});
            f.outcomes.push_back(t.outcomes[static_cast<size_t>(q)]);
        }
        flat.push_back(std::move(f));
    };
    for (const auto& t : ineq.terms) {
        if (sc.ti)
            for (int i = 0; i < sc.n; ++i) add_structured(i, t);
        else
            add_structured(t.i, t);
    }
    for (const auto& t : ineq.general_terms) {
        if (sc.ti)
            for (int i = 0; i < sc.n; ++i) add_general(i, t);
        else
            add_general(t.i, t);
    }
    return flat;
}

template <typename V>
ExhaustiveResult exhaustive_impl(const BellInequality& ineq) {
    const auto& sc = ineq.scenario;
    const int rows = sc.rows();
    int K = 1;
    for (int r = 0; r < rows; ++r) K *= sc.d;

    const auto flat = flatten_terms(ineq);
    std::vector<std::vector<int>> touch(static_cast<size_t>(sc.n));
    for (size_t t = 0; t < flat.size(); ++t)
        for (const auto& [site, row] : flat[t].factors)
            touch[static_cast<size_t>(site)].push_back(static_cast<int>(t));
    for (auto& v : touch) {  // a term may touch a site through several factors
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    DeterministicStrategy s = DeterministicStrategy::filled(sc.n, rows, sc.d, 0);
    std::vector<int> code(static_cast<size_t>(sc.n), 0);

    auto eval_term = [&](const FlatTerm& f) -> V {
        if (f.indicator) {
            for (size_t q = 0; q < f.factors.size(); ++q)
                if (s.label(f.factors[q].second, f.factors[q].first) != f.outcomes[q])
                    return V(0);
            return V(f.gamma);
        }
        int prod = 1;
        for (const auto& [site, row] : f.factors) prod *= s.sign(row, site);
        return V(f.gamma) * V(prod);
    };

    std::vector<V> cache(flat.size());
    V total = V(0);
    for (size_t t = 0; t < flat.size(); ++t) {
        cache[t] = eval_term(flat[t]);
        total += cache[t];
    }

    auto set_site = [&](int site, int c) {
        for (int t : touch[static_cast<size_t>(site)]) total -= cache[static_cast<size_t>(t)];
        code[static_cast<size_t>(site)] = c;
        for (int r = 0; r < rows; ++r) {
            s.label(r, site) = c % sc.d;
            c /= sc.d;
        }
        for (int t : touch[static_cast<size_t>(site)]) {
            cache[static_cast<size_t>(t)] = eval_term(flat[static_cast<size_t>(t)]);
            total += cache[static_cast<size_t>(t)];
        }
    };

    ExhaustiveResult best;
    best.classical_minimum = static_cast<double>(total);
    best.witness = s;
    V best_v = total;

    // Odometer over column codes, site n-1 fastest, so the first strategy
    // attaining the minimum is the lexicographically smallest one.
    while (true) {
        int pos = sc.n - 1;
        while (pos >= 0 && code[static_cast<size_t>(pos)] == K - 1) {
            set_site(pos, 0);
            --pos;
        }
        if (pos < 0) break;
        set_site(pos, code[static_cast<size_t>(pos)] + 1);
        if (total < best_v) {
            // refresh the running sum on improvement so float drift from the
            // incremental updates never contaminates the reported minimum
            total = V(0);
            for (const V& cv : cache) total += cv;
            if (total < best_v) {
                best_v = total;
                best.witness = s;
            }
        }
    }
    best.classical_minimum = static_cast<double>(best_v);
    best.beta_c = -best.classical_minimum;
    return best;
}

}  // namespace

ExhaustiveResult exhaustive_classical_bound(const BellInequality& ineq) {
    ineq.validate();
    const auto& sc = ineq.scenario;
    const int rows = sc.rows();
    double total = 1.0;
    for (int i = 0; i < sc.n; ++i) total *= std::pow(static_cast<double>(sc.d), rows);
    if (total > static_cast<double>(1 << 24))
        throw std::invalid_argument("exhaustive: strategy space exceeds 2^24");
    if (ineq.integral_coefficients()) return exhaustive_impl<int64_t>(ineq);
    return exhaustive_impl<double>(ineq);
}

double dense_parity_transform_check(int n, int reflection_count, uint64_t seed) {
    if (n < 1 || n > 4) throw std::invalid_argument("parity check: need 1 <= n <= 4");
    const size_t dim = size_t{1} << n;

    // Dense Majorana images, convention:
    //   c_{j,0} = (prod_{k<j} Z_k) X_j,   c_{j,1} = -(prod_{k<j} Z_k) Y_j
    // under which prod_j (i c_{j,0} c_{j,1}) = prod_j Z_j.
    auto pauli = [&](int site, int which) {  // 1=X, 2=Y, 3=Z as dense matrix
        DenseOperator op;
        op.n = n;
        PauliTerm t;
        t.w = 1.0;
        t.ops.assign(static_cast<size_t>(n), 0);
        t.ops[static_cast<size_t>(site)] = static_cast<uint8_t>(which);
        op.terms.push_back(t);
        return op.materialize();
    };

    std::vector<Eigen::MatrixXcd> c(static_cast<size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXcd string = Eigen::MatrixXcd::Identity(static_cast<long>(dim),
                                                             static_cast<long>(dim));
        for (int k = 0; k < j; ++k) string = string * pauli(k, 3);
        c[static_cast<size_t>(2 * j)] = string * pauli(j, 1);
        c[static_cast<size_t>(2 * j + 1)] = -string * pauli(j, 2);
    }

    const int N = 2 * n;
    Eigen::MatrixXd O = Eigen::MatrixXd::Identity(N, N);
    const uint64_t key = make_key(seed, 0x5eedULL);
    for (int rf = 0; rf < reflection_count; ++rf) {
        Eigen::VectorXd v(N);
        for (int i = 0; i < N; ++i)
            v(i) = 2.0 * counter_uniform(key, static_cast<uint64_t>(rf * N + i)) - 1.0;
        const double nv = v.norm();
        if (nv < 1e-12) continue;
        v /= nv;
        O = O - 2.0 * (O * v) * v.transpose();  // O <- O (1 - 2 v v^T)
    }
    const double detO = O.determinant();

    // d_a = sum_b O_{ba} c_b
    std::vector<Eigen::MatrixXcd> dmats(static_cast<size_t>(N));
    for (int a = 0; a < N; ++a) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(static_cast<long>(dim),
                                                      static_cast<long>(dim));
        for (int b = 0; b < N; ++b) acc += O(b, a) * c[static_cast<size_t>(b)];
        dmats[static_cast<size_t>(a)] = acc;
    }

    Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(static_cast<long>(dim),
                                                      static_cast<long>(dim));
    Eigen::MatrixXcd rhs = lhs;
    for (int k = 0; k < n; ++k) {
        lhs = lhs * (kI * dmats[static_cast<size_t>(2 * k)] * dmats[static_cast<size_t>(2 * k + 1)]);
        rhs = rhs * (kI * c[static_cast<size_t>(2 * k)] * c[static_cast<size_t>(2 * k + 1)]);
    }
    rhs *= detO;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace oracle
}  // namespace bellchain
