// ---------------------------------------------------------------------------
// Quadratic Majorana solver.
//
// Majorana convention: c_{j,0} = (prod_{k<j} Z_k) X_j and
// c_{j,1} = -(prod_{k<j} Z_k) Y_j, index a = 2j + flavor, so the total spin
// parity is prod_j Z_j = prod_j (i c_{j,0} c_{j,1}).  Under H_hat =
// (i/2) c^T H c the compiled images are
//   t Z_i                 ->  H[(i,0),(i,1)] += t
//   t (string term i,r,a,b) ->  H[(i,1-a),((i+r)%n,b)] += t (-1)^b (seam: -p)
// plus antisymmetric partners.
// ---------------------------------------------------------------------------

#include "bellchain/fermion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellchain {

namespace {

bool has_seam_terms(const SpinHamiltonian& h) {
    if (h.boundary != Boundary::pbc) return false;
    for (int i = 0; i < h.n; ++i)
        for (int r = 1; r <= h.R; ++r) {
            if (i + r < h.n) continue;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (h.t(i, r, a, b) != 0.0) return true;
        }
    return false;
}

bool all_zero_one_body(const SpinHamiltonian& h) {
    for (double v : h.one_body)
        if (v != 0.0) return false;
    return true;
}

void add_pair(Eigen::MatrixXd& H, int row, int col, double v) {
    H(row, col) += v;
    H(col, row) -= v;
}

}  // namespace

MajoranaMatrix assemble_majorana(const SpinHamiltonian& h, int parity) {
    if (parity != 1 && parity != -1) throw std::invalid_argument("parity must be +1 or -1");
    MajoranaMatrix m;
    m.n = h.n;
    m.parity = parity;
    m.H = Eigen::MatrixXd::Zero(2 * h.n, 2 * h.n);
    for (int i = 0; i < h.n; ++i)
        if (h.one_body[i] != 0.0) add_pair(m.H, 2 * i, 2 * i + 1, h.one_body[i]);
    for (int i = 0; i < h.n; ++i) {
        for (int r = 1; r <= h.R; ++r) {
            const int j = i + r;
            if (j >= h.n && h.boundary == Boundary::obc) continue;
            const bool seam = j >= h.n;
            const int jj = j % h.n;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    double t = h.t(i, r, a, b);
                    if (t == 0.0) continue;
                    double v = t * (b ? -1.0 : 1.0) * (seam ? -static_cast<double>(parity) : 1.0);
                    add_pair(m.H, 2 * i + (1 - a), 2 * jj + b, v);
                }
            }
        }
    }
    return m;
}

int pfaffian_sign(Eigen::MatrixXd A) {
    const int N = static_cast<int>(A.rows());
    if (N % 2) return 0;
    const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
    int sgn = 1;
    for (int k = 0; k + 2 < N; ++k) {
        int jm = k + 1;
        double best = std::abs(A(k + 1, k));
        for (int j = k + 2; j < N; ++j)
            if (std::abs(A(j, k)) > best) {
                best = std::abs(A(j, k));
                jm = j;
            }
        if (best <= tol) {
            if (k % 2 == 0) return 0;
            continue;
        }
        if (jm != k + 1) {
            A.row(jm).swap(A.row(k + 1));
            A.col(jm).swap(A.col(k + 1));
            sgn = -sgn;
        }
        const double pv = A(k + 1, k);
        for (int j = k + 2; j < N; ++j) {
            const double f = A(j, k) / pv;
            if (f != 0.0) {
                A.row(j) -= f * A.row(k + 1);
                A.col(j) -= f * A.col(k + 1);
            }
        }
    }
    for (int k = 0; k + 1 < N; k += 2) {
        const double v = A(k, k + 1);
        if (std::abs(v) <= tol) return 0;
        if (v < 0) sgn = -sgn;
    }
    return sgn;
}

WilliamsonForm williamson(const Eigen::MatrixXd& H) {
    const int N = static_cast<int>(H.rows());
    if (N % 2 || H.cols() != N) throw std::invalid_argument("williamson: need even square matrix");
    const double hmax = H.cwiseAbs().maxCoeff();
    if ((H + H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, hmax))
        throw std::invalid_argument("williamson: matrix is not antisymmetric");

    Eigen::MatrixXd A = -(H * H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw std::runtime_error("williamson: eigensolver failed");
    Eigen::VectorXd mu = es.eigenvalues();
    Eigen::MatrixXd V = es.eigenvectors();

    const double cluster_tol = 1e-8 * std::max(1.0, mu.cwiseAbs().maxCoeff());
    const double zero_tol = 1e-10 * std::max(1.0, H.norm());

    WilliamsonForm w;
    w.O = Eigen::MatrixXd(N, N);
    int out = 0;

    int lo = 0;
    while (lo < N) {
        int hi = lo + 1;
        while (hi < N && std::abs(mu(hi) - mu(lo)) <= cluster_tol) ++hi;
        const int width = hi - lo;
        if (width % 2) throw std::runtime_error("williamson: odd eigenvalue cluster");
        const double eps = std::sqrt(std::max(0.0, mu.segment(lo, width).mean()));

        Eigen::MatrixXd W = V.middleCols(lo, width);
        int pairs = width / 2;
        if (eps <= zero_tol) {
            // Kernel of H: any orthonormal pairing works.
            for (int p = 0; p < pairs; ++p) {
                w.O.col(out++) = W.col(2 * p);
                w.O.col(out++) = W.col(2 * p + 1);
                w.eps.push_back(0.0);
            }
        } else {
            while (pairs > 0) {
                Eigen::VectorXd e1 = W.col(0);
                Eigen::VectorXd e2 = -(H * e1) / eps;
                e2 -= e1 * e1.dot(e2);
                e2.normalize();
                w.O.col(out++) = e1;
                w.O.col(out++) = e2;
                w.eps.push_back(eps);
                --pairs;
                if (pairs > 0) {
                    Eigen::MatrixXd P =
                        W - e1 * (e1.transpose() * W) - e2 * (e2.transpose() * W);
                    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
                    W = qr.householderQ() * Eigen::MatrixXd::Identity(N, 2 * pairs);
                }
            }
        }
        lo = hi;
    }

    const double det = w.O.partialPivLu().determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-6)
        throw std::runtime_error("williamson: transform failed orthogonality check");
    w.det_o = det > 0 ? 1.0 : -1.0;
    return w;
}

namespace {

// Permutation sign by cycle decomposition; perm[p] = source index.
int permutation_sign(const std::vector<int>& perm) {
    const int N = static_cast<int>(perm.size());
    std::vector<bool> seen(N, false);
    int sgn = 1;
    for (int i = 0; i < N; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = perm[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sgn = -sgn;
    }
    return sgn;
}

SectorReport solve_sector_generic(const SpinHamiltonian& h, int parity, bool constrained) {
    const MajoranaMatrix m = assemble_majorana(h, parity);
    const int n = h.n;
    SectorReport rep;
    rep.parity = parity;
    rep.constrained = constrained;

    // Mode energies are the singular values of H, each appearing twice.
    // Eigendecomposing -H^2 would cost half the significant digits on
    // near-zero modes, which rings at special couplings do hit.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m.H);
    const Eigen::VectorXd sv = svd.singularValues();  // descending
    double sum = 0.0;
    for (int j = 0; j < 2 * n; ++j) sum += sv(j);
    rep.e_raw = -0.5 * sum;
    rep.min_eps = sv(2 * n - 1);

    const double zero_tol = 1e-10 * std::max(1.0, m.H.norm());
    rep.zero_mode = rep.min_eps <= zero_tol;
    if (!constrained || rep.zero_mode) {
        rep.e0 = rep.e_raw;
        return rep;
    }
    rep.det_o = static_cast<double>(pfaffian_sign(m.H));
    rep.parity_product = (n % 2) ? -1.0 : 1.0;  // all modes filled with eps > 0
    rep.consistent = rep.det_o * rep.parity_product == static_cast<double>(parity);
    rep.e0 = rep.consistent ? rep.e_raw : rep.e_raw + 2.0 * rep.min_eps;
    rep.corrected = !rep.consistent;
    return rep;
}

// Nearest-neighbor rings with no field couple even sites only to odd sites:
// in that ordering H = [[0, M], [-M^T, 0]], the mode energies are the
// singular values of M and sign Pf H = sgn(perm) (-1)^{n(n-1)/2} sign det M.
SectorReport solve_sector_bipartite(const SpinHamiltonian& h, int parity, bool constrained) {
    const MajoranaMatrix m = assemble_majorana(h, parity);
    const int n = h.n;
    SectorReport rep;
    rep.parity = parity;
    rep.constrained = constrained;

    std::vector<int> order;  // new position -> Majorana index
    order.reserve(2 * n);
    for (int s = 0; s < n; s += 2) {
        order.push_back(2 * s);
        order.push_back(2 * s + 1);
    }
    for (int s = 1; s < n; s += 2) {
        order.push_back(2 * s);
        order.push_back(2 * s + 1);
    }
    Eigen::MatrixXd M(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) M(a, b) = m.H(order[a], order[n + b]);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    const Eigen::VectorXd sv = svd.singularValues();  // descending, one per mode
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += sv(j);
    rep.e_raw = -sum;
    rep.min_eps = sv(n - 1);

    const double zero_tol = 1e-10 * std::max(1.0, m.H.norm());
    rep.zero_mode = rep.min_eps <= zero_tol;
    if (!constrained || rep.zero_mode) {
        rep.e0 = rep.e_raw;
        return rep;
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    int det_sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    const auto diag = lu.matrixLU().diagonal();
    for (int j = 0; j < n; ++j)
        if (diag(j) < 0) det_sign = -det_sign;
    int sgn = permutation_sign(order) * det_sign;
    if ((static_cast<int64_t>(n) * (n - 1) / 2) % 2) sgn = -sgn;

    rep.det_o = static_cast<double>(sgn);
    rep.parity_product = (n % 2) ? -1.0 : 1.0;
    rep.consistent = rep.det_o * rep.parity_product == static_cast<double>(parity);
    rep.e0 = rep.consistent ? rep.e_raw : rep.e_raw + 2.0 * rep.min_eps;
    rep.corrected = !rep.consistent;
    return rep;
}

SectorReport solve_sector(const SpinHamiltonian& h, int parity, bool constrained) {
    const bool bipartite = h.R == 1 && h.n % 2 == 0 && all_zero_one_body(h);
    return bipartite ? solve_sector_bipartite(h, parity, constrained)
                     : solve_sector_generic(h, parity, constrained);
}

}  // namespace

GroundEnergyReport ground_energy(const SpinHamiltonian& h) {
    GroundEnergyReport rep;
    if (!has_seam_terms(h)) {
        // The Jordan-Wigner image is faithful on the whole space.
        rep.sectors_coincide = true;
        rep.sectors.push_back(solve_sector(h, -1, false));
        rep.e0 = rep.sectors[0].e0;
        rep.parity = 0;
        return rep;
    }
    rep.sectors.push_back(solve_sector(h, -1, true));
    rep.sectors.push_back(solve_sector(h, +1, true));
    const double em = rep.sectors[0].e0;
    const double ep = rep.sectors[1].e0;
    if (ep <= em) {
        rep.e0 = ep;
        rep.parity = +1;
    } else {
        rep.e0 = em;
        rep.parity = -1;
    }
    return rep;
}

ViolationReport violation(const BellInequality& ineq, const MeasurementSettings& settings) {
    settings.validate(ineq.scenario);
    ViolationReport v;
    v.beta_c = classical_bound(ineq).beta_c;
    v.e0 = ground_energy(compile_hamiltonian(ineq, settings)).e0;
    v.violation = v.beta_c + v.e0;
    return v;
}

}  // namespace bellchain
