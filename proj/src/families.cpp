#include "bellchain/families.hpp"

#include <cmath>
#include <stdexcept>

namespace bellchain {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

BellInequality tight8_inequality() {
    BellInequality q;
    q.scenario = {8, 2, 2, 2, Boundary::pbc, true, true};
    q.one_body = {0.0};
    q.terms = {
        {0, 1, 0, 0, 2.0},  {0, 1, 0, 1, -2.0}, {0, 1, 1, 0, 2.0},  {0, 1, 1, 1, -2.0},
        {0, 2, 0, 0, -1.0}, {0, 2, 0, 1, -1.0}, {0, 2, 1, 0, 1.0},  {0, 2, 1, 1, 1.0},
    };
    q.validate();
    return q;
}

MeasurementSettings tight8_settings() {
    MeasurementSettings s;
    s.shared = true;
    s.angles = {{0.0, kPi / 2}};
    return s;
}

std::vector<double> chained_block(int m) {
    // Antidiagonal ladder with one flipped corner; m = 2 gives CHSH,
    // A0B0 + A0B1 + A1B0 - A1B1.
    std::vector<double> g(static_cast<size_t>(m) * m, 0.0);
    auto at = [&](int k, int l) -> double& { return g[static_cast<size_t>(k * m + l)]; };
    for (int j = 0; j < m; ++j) at(m - j - 1, j) += 1.0;
    for (int j = 0; j + 1 < m; ++j) at(m - j - 2, j) += 1.0;
    at(m - 1, m - 1) -= 1.0;
    return g;
}

BellInequality chained_inequality(int m, int pairs, double eps) {
    if (m < 2) throw std::invalid_argument("chained: need m >= 2");
    if (pairs < 1) throw std::invalid_argument("chained: need pairs >= 1");
    const int n = 2 * pairs;
    BellInequality q;
    q.scenario = {n, m, 2, 1, Boundary::pbc, false, false};
    const auto g = chained_block(m);
    for (int i = 0; i < n; ++i) {
        const double w = 1.0 + (i % 2 == 0 ? eps : -eps);
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                const double v = g[static_cast<size_t>(k * m + l)];
                if (v != 0.0) q.terms.push_back({i, 1, k, l, w * v});
            }
    }
    q.validate();
    return q;
}

MeasurementSettings chained_settings(int m) {
    MeasurementSettings s;
    s.shared = true;
    s.angles.resize(1);
    for (int k = 0; k < m; ++k) s.angles[0].push_back((k + 1) * kPi / m - kPi / 2);
    return s;
}

double chained_classical_bound(int m, int pairs, double eps) {
    return 4.0 * pairs * (m - 1) * std::max(1.0, std::abs(eps));
}

BellInequality spin_glass_inequality(const std::vector<double>& couplings) {
    const int n = static_cast<int>(couplings.size());
    if (n < 3) throw std::invalid_argument("spin glass: need at least 3 sites");
    BellInequality q;
    q.scenario = {n, 2, 2, 1, Boundary::pbc, false, false};
    for (int i = 0; i < n; ++i) {
        const double J = couplings[static_cast<size_t>(i)];
        q.terms.push_back({i, 1, 0, 0, J});
        q.terms.push_back({i, 1, 0, 1, J});
        q.terms.push_back({i, 1, 1, 0, J});
        q.terms.push_back({i, 1, 1, 1, -J});
    }
    q.validate();
    return q;
}

MeasurementSettings spin_glass_settings() { return chained_settings(2); }

BellInequality xxz_elegant_inequality(int n, double delta, double eps) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("xxz: need even n >= 4");
    // Block table S[k][l]: four A settings (rows) vs three B settings (cols).
    const double S[4][3] = {{1, 1, delta}, {1, -1, -delta}, {-1, 1, -delta}, {-1, -1, delta}};
    BellInequality q;
    q.scenario = {n, 4, 2, 1, Boundary::pbc, false, false};
    for (int i = 0; i < n; ++i) {
        const double w = 1.0 + (i % 2 == 0 ? eps : -eps);
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 3; ++l) {
                if (S[k][l] == 0.0) continue;
                if (i % 2 == 0)
                    q.terms.push_back({i, 1, k, l, w * S[k][l]});  // A on site i
                else
                    q.terms.push_back({i, 1, l, k, w * S[k][l]});  // B on site i
            }
    }
    q.validate();
    return q;
}

int xxz_region(double delta, double eps) {
    const double ad = std::abs(delta), ae = std::abs(eps);
    if (ae <= 1.0) return ad <= 2.0 ? 1 : 2;
    if (ad > 2.0) return ae <= ad / 2.0 ? 4 : 8;
    if (ad > 1.0) return ad * ae <= 2.0 ? 3 : 7;
    // |delta| <= 1
    if (ae <= ad + 1.0) return 3;
    if (ad == 1.0 || ae <= 1.0 / (1.0 - ad)) return 6;
    return 5;
}

double xxz_classical_formula(int n, double delta, double eps) {
    if (n % 2 != 0) throw std::invalid_argument("xxz formula: need even n");
    const double ad = std::abs(delta), ae = std::abs(eps);
    const int region = xxz_region(delta, eps);
    if (n % 4 == 0) {
        switch (region) {
            case 1: return -n * (4.0 + 2.0 * ad);
            case 2: return -4.0 * n * ad;
            case 4:
            case 8: return -4.0 * n * ae * ad;
            default: return -n * ae * (4.0 + 2.0 * ad);  // regions 3, 5, 6, 7
        }
    }
    switch (region) {
        case 1: return -n * (4.0 + 2.0 * ad);
        case 2: return -4.0 * n * ad;
        case 3: return -8.0 - 4.0 * ad - (4.0 * n - 8.0) * ae - (2.0 * n - 4.0) * ad * ae;
        case 4: return -8.0 * ad - (4.0 * n - 8.0) * ae * ad;
        case 5: return -4.0 * n * ae - (2.0 * n - 8.0) * ae * ad;
        case 6: return -4.0 - (4.0 * n - 4.0) * ae - (2.0 * n - 4.0) * ae * ad;
        case 7: return -4.0 * ad - (4.0 * n - 8.0) * ae - 2.0 * n * ae * ad;
        case 8: return -8.0 * ae - 4.0 * ad - (4.0 * n - 8.0) * ae * ad;
        default: throw std::logic_error("unreachable");
    }
}

const std::vector<CatalogRow>& catalog_rows() {
    static const std::vector<CatalogRow> rows = {
        {3, -2, {1, -1, 1, 1}, {-1, -1, 1, -1}, 6, -2.9282032303, kPi / 2, 1e-6},
        {3, 0, {1, -1, 3, -3}, {1, 1, 1, 1}, 12, -2.5830052443, kPi / 2, 1e-6},
        {3, 2, {-1, 1, 1, 1}, {-1, 1, 1, 1}, 6, -2.5830052443, kPi / 2, 1e-6},
        {4, 0, {0, 0, 0, 0}, {1, -2, 0, -1}, 8, -3.313708499, kPi / 2, 1e-6},
        {4, -2, {4, 2, 2, 0}, {5, -3, 1, -1}, 32, -0.5471047512, 0.3254696365 * kPi, 1e-6},
        {4, 0, {2, 2, 2, 2}, {5, -5, 1, -1}, 32, -0.5115214246, kPi / 2, 1e-6},
        {4, -1, {2, 5, 5, 6}, {-2, -10, 2, 11}, 72, -0.4999666746, 0.3188572387 * kPi, 1e-6},
        {4, -1, {-2, -3, -3, -4}, {-7, 7, -1, 2}, 48, -0.4670552431, 0.278787455 * kPi, 1e-6},
        {4, 2, {0, -2, -2, -4}, {3, 1, -3, -3}, 32, -0.218521874, 0.2029607403 * kPi, 1e-6},
        {5, 0, {1, 1, -1, -1}, {1, -1, 1, -1}, 12, -0.3107341487, kPi / 2, 1e-6},
        {8, 0, {2, -2, 2, -2}, {-1, -1, 1, 1}, 32, -0.2187, kPi / 2, 1e-3},
    };
    return rows;
}

BellInequality catalog_inequality(const CatalogRow& row) {
    BellInequality q;
    q.scenario = {row.n, 2, 2, 2, Boundary::pbc, true, true};
    q.one_body = {row.gamma_z};
    int idx = 0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l, ++idx) {
            if (row.r1[static_cast<size_t>(idx)] != 0.0)
                q.terms.push_back({0, 1, k, l, row.r1[static_cast<size_t>(idx)]});
        }
    idx = 0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l, ++idx) {
            if (row.r2[static_cast<size_t>(idx)] != 0.0)
                q.terms.push_back({0, 2, k, l, row.r2[static_cast<size_t>(idx)]});
        }
    q.validate();
    return q;
}

MeasurementSettings catalog_settings(const CatalogRow& row) {
    MeasurementSettings s;
    s.shared = true;
    s.angles = {{0.0, row.phi1_minus_phi0}};
    return s;
}

}  // namespace bellchain
