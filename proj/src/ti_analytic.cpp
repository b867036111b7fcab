// ---------------------------------------------------------------------------
// Momentum-space diagonalization of site-independent chains.
//
// Blocks are read off the compiled coefficients: with A_r, C_r the diagonal
// and X_r, Y_r the off-diagonal entries of h_r (and x0 the one-body entry),
// a paired momentum theta carries the 2x2 problem
//   a = -2 sum_r sin(r theta) A_r      b = -sum_r sin(r theta) (X_r + Y_r)
//   c = -2 sum_r sin(r theta) C_r      x = x0 + sum_r cos(r theta) (X_r - Y_r)
// with mode energies (a+c)/2 +- sqrt(((a-c)/2)^2 + b^2 + x^2); theta = 0 and
// theta = pi contribute the singletons x0 + sum_r (X_r - Y_r) and
// x0 + sum_r (-1)^r (X_r - Y_r).
// ---------------------------------------------------------------------------

#include "bellchain/ti_analytic.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace bellchain {

TiBlocks ti_blocks(const SpinHamiltonian& h) {
    if (h.boundary != Boundary::pbc)
        throw std::invalid_argument("ti_blocks: chain is not a closed ring");
    if (!h.site_independent())
        throw std::invalid_argument("ti_blocks: coefficients vary between sites");
    TiBlocks b;
    b.n = h.n;
    b.R = h.R;
    b.h.assign(h.R + 1, Eigen::Matrix2d::Zero());
    b.h[0](0, 1) = h.one_body[0];
    b.h[0](1, 0) = -h.one_body[0];
    for (int r = 1; r <= h.R; ++r)
        for (int a = 0; a < 2; ++a)
            for (int bb = 0; bb < 2; ++bb)
                b.h[r](1 - a, bb) += h.t(0, r, a, bb) * (bb ? -1.0 : 1.0);
    return b;
}

std::vector<double> ti_spectrum(const TiBlocks& blocks, int parity) {
    if (parity != 1 && parity != -1) throw std::invalid_argument("parity must be +1 or -1");
    const int n = blocks.n;
    const int R = blocks.R;
    const double pi = 3.14159265358979323846;

    auto push_pair = [&](std::vector<double>& out, double theta) {
        double a = 0.0, c = 0.0, bcoef = 0.0, x = blocks.h[0](0, 1);
        for (int r = 1; r <= R; ++r) {
            const double s = std::sin(r * theta), co = std::cos(r * theta);
            a -= 2.0 * s * blocks.h[r](0, 0);
            c -= 2.0 * s * blocks.h[r](1, 1);
            bcoef -= s * (blocks.h[r](0, 1) + blocks.h[r](1, 0));
            x += co * (blocks.h[r](0, 1) - blocks.h[r](1, 0));
        }
        const double mean = 0.5 * (a + c);
        const double rad = std::sqrt(0.25 * (a - c) * (a - c) + bcoef * bcoef + x * x);
        out.push_back(mean + rad);
        out.push_back(mean - rad);
    };

    double eps0_plus = blocks.h[0](0, 1), eps0_minus = blocks.h[0](0, 1);
    for (int r = 1; r <= R; ++r) {
        const double diff = blocks.h[r](0, 1) - blocks.h[r](1, 0);
        eps0_plus += diff;
        eps0_minus += (r % 2 ? -diff : diff);
    }

    std::vector<double> out;
    out.reserve(n);
    if (parity == -1) {
        out.push_back(eps0_plus);
        if (n % 2 == 0) out.push_back(eps0_minus);
        for (int k = 1; k <= (n - 1) / 2; ++k) push_pair(out, 2.0 * pi * k / n);
    } else {
        if (n % 2 == 1) out.push_back(eps0_minus);
        for (int k = 1; k <= n / 2; ++k) push_pair(out, (2.0 * k - 1.0) * pi / n);
    }
    if (static_cast<int>(out.size()) != n)
        throw std::runtime_error("ti_spectrum: mode count mismatch");
    return out;
}

namespace {

TiSector sector_from_spectrum(const std::vector<double>& eps, int parity, int n) {
    TiSector s;
    s.parity = parity;
    double sum = 0.0, mn = std::abs(eps[0]), mx = 0.0;
    int sign_product = 1;
    for (double e : eps) {
        sum += std::abs(e);
        mn = std::min(mn, std::abs(e));
        mx = std::max(mx, std::abs(e));
        if (!(e < 0.0)) sign_product = -sign_product;  // s_k = -sign(eps_k), sign(0) := +1
    }
    s.e_raw = -sum;
    s.min_abs_eps = mn;
    s.zero_mode = mn <= 1e-10 * std::max(1.0, mx);
    if (s.zero_mode) {
        s.e0 = s.e_raw;
        return s;
    }
    // Filled-mode parity: D(p, n) (-1)^{#filled}, D = (-1)^{floor(n/2)} for
    // p = +1 and (-1)^{floor((n-1)/2)} for p = -1.
    const int d_exp = (parity == 1) ? n / 2 : (n - 1) / 2;
    const int d_factor = (d_exp % 2) ? -1 : 1;
    s.consistent = d_factor * sign_product == parity;
    s.corrected = !s.consistent;
    s.e0 = s.consistent ? s.e_raw : s.e_raw + 2.0 * s.min_abs_eps;
    return s;
}

}  // namespace

TiGround ti_ground_energy(const SpinHamiltonian& h) {
    const TiBlocks blocks = ti_blocks(h);
    TiGround g;
    g.sectors[0] = sector_from_spectrum(ti_spectrum(blocks, -1), -1, blocks.n);
    g.sectors[1] = sector_from_spectrum(ti_spectrum(blocks, +1), +1, blocks.n);
    if (g.sectors[1].e0 <= g.sectors[0].e0) {
        g.e0 = g.sectors[1].e0;
        g.parity = +1;
    } else {
        g.e0 = g.sectors[0].e0;
        g.parity = -1;
    }
    return g;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace

double chained_beta_q_per_particle(int m, double eps) {
    if (m < 2) throw std::invalid_argument("chained family needs m >= 2");
    const double pi = 3.14159265358979323846;
    const double e2 = eps * eps;
    auto f = [&](double x) {
        return std::sqrt(std::max(0.0, 1.0 + e2 + (e2 - 1.0) * std::cos(2.0 * pi * x)));
    };
    const double integral = integrate(f, 0.0, 1.0, 1e-10);
    return std::sqrt(2.0) * m * std::cos(pi / (2.0 * m)) * integral;
}

std::optional<std::pair<double, double>> chained_violation_window(int m) {
    auto gap = [&](double eps) {
        return chained_beta_q_per_particle(m, eps) - 2.0 * (m - 1) * std::max(1.0, std::abs(eps));
    };
    if (gap(1.0) <= 0.0) return std::nullopt;  // no violation even at the best point

    auto bisect = [&](double lo, double hi) {
        // gap changes sign on [lo, hi]; refine to 1e-6.
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            if ((gap(lo) <= 0.0) == (gap(mid) <= 0.0))
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    double lower = 0.0;
    if (gap(0.0) < 0.0) lower = bisect(0.0, 1.0);
    double upper = 10.0;
    if (gap(10.0) < 0.0) upper = bisect(1.0, 10.0);
    return std::make_pair(lower, upper);
}

}  // namespace bellchain
