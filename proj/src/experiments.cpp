// ---------------------------------------------------------------------------
// End-to-end studies: tight8, chained sweeps, the disordered-coupling phase
// grid, XXZ formula verification, and the small-inequality catalog.
// ---------------------------------------------------------------------------

#include "bellchain/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bellchain/rng.hpp"
#include "bellchain/version.hpp"

namespace bellchain {

Tight8Report run_tight8() {
    const BellInequality ineq = tight8_inequality();
    const MeasurementSettings settings = tight8_settings();
    Tight8Report rep;
    rep.beta_c = classical_bound_pbc(ineq).beta_c;
    const SpinHamiltonian h = compile_hamiltonian(ineq, settings);
    rep.analytic = ti_ground_energy(h);
    rep.numeric = ground_energy(h);
    rep.violation = rep.beta_c + rep.numeric.e0;
    return rep;
}

ChainedPoint run_chained(int m, int pairs, double eps) {
    ChainedPoint p;
    p.m = m;
    p.pairs = pairs;
    p.eps = eps;
    const BellInequality ineq = chained_inequality(m, pairs, eps);
    p.beta_c_dp = classical_bound_pbc(ineq).beta_c;
    p.beta_c_formula = chained_classical_bound(m, pairs, eps);
    p.e0 = ground_energy(compile_hamiltonian(ineq, chained_settings(m))).e0;
    p.violation = p.beta_c_dp + p.e0;
    return p;
}

SpinGlassResult run_spin_glass(const SpinGlassSpec& spec) {
    SpinGlassResult result;
    result.spec = spec;
    const MeasurementSettings settings = spin_glass_settings();
    std::vector<double> couplings(static_cast<size_t>(spec.n));
    for (int iu = 0; iu < spec.n_mu; ++iu) {
        const double mu = spec.mu0 + spec.dmu * iu;
        for (int is = 0; is < spec.n_sigma; ++is) {
            const double sigma = spec.sigma0 + spec.dsigma * is;
            double sum = 0.0, sumsq = 0.0;
            for (int rep = 0; rep < spec.realizations; ++rep) {
                const uint64_t key = make_key(spec.seed, static_cast<uint64_t>(iu),
                                              static_cast<uint64_t>(is),
                                              static_cast<uint64_t>(rep));
                for (int i = 0; i < spec.n; ++i)
                    couplings[static_cast<size_t>(i)] =
                        mu + sigma * counter_normal(key, static_cast<uint64_t>(i));
                const BellInequality ineq = spin_glass_inequality(couplings);
                const double beta = classical_bound_pbc(ineq).beta_c;
                const double e0 =
                    ground_energy(compile_hamiltonian(ineq, settings)).e0;
                const double ratio = -e0 / beta;
                sum += ratio;
                sumsq += ratio * ratio;
            }
            const int nr = spec.realizations;
            SpinGlassCell cell;
            cell.mu = mu;
            cell.sigma = sigma;
            cell.mean_ratio = sum / nr;
            const double var =
                nr > 1 ? std::max(0.0, (sumsq - sum * sum / nr) / (nr - 1)) : 0.0;
            cell.stderr_ratio = nr > 1 ? std::sqrt(var / nr) : 0.0;
            result.cells.push_back(cell);
        }
    }
    return result;
}

FlatnessCheck spin_glass_flatness(const SpinGlassResult& r, double sigma_min) {
    FlatnessCheck chk;
    std::vector<const SpinGlassCell*> row;
    for (const SpinGlassCell& c : r.cells)
        if (c.mu == r.spec.mu0 && c.sigma >= sigma_min - 1e-12) row.push_back(&c);
    if (row.size() < 2) return chk;
    double mean = 0.0;
    for (auto* c : row) mean += c->mean_ratio;
    mean /= static_cast<double>(row.size());
    double var = 0.0, se = 0.0;
    for (auto* c : row) {
        var += (c->mean_ratio - mean) * (c->mean_ratio - mean);
        se += c->stderr_ratio;
    }
    chk.spread = std::sqrt(var / static_cast<double>(row.size() - 1));
    chk.mean_stderr = se / static_cast<double>(row.size());
    chk.flat = chk.spread < 2.0 * chk.mean_stderr;
    return chk;
}

const std::vector<double>& xxz_default_deltas() {
    static const std::vector<double> v = {0.0, 0.5, 1.0, 1.25, 1.5, 2.0, 2.5, 4.0, 8.0};
    return v;
}

const std::vector<double>& xxz_default_epss() {
    static const std::vector<double> v = {0.0, 0.25, 0.5, 1.0, 1.25, 1.5, 2.0, 3.0, 8.0};
    return v;
}

std::vector<XxzPoint> run_xxz_grid(int n, const std::vector<double>& deltas,
                                   const std::vector<double>& epss) {
    std::vector<XxzPoint> out;
    out.reserve(deltas.size() * epss.size());
    for (double delta : deltas) {
        for (double eps : epss) {
            XxzPoint p;
            p.delta = delta;
            p.eps = eps;
            p.region = xxz_region(delta, eps);
            p.dp = classical_bound_pbc(xxz_elegant_inequality(n, delta, eps))
                       .classical_minimum;
            p.formula = xxz_classical_formula(n, delta, eps);
            out.push_back(p);
        }
    }
    return out;
}

std::vector<CatalogCheck> verify_catalog() {
    std::vector<CatalogCheck> out;
    for (const CatalogRow& row : catalog_rows()) {
        CatalogCheck chk;
        chk.row = row;
        const BellInequality ineq = catalog_inequality(row);
        chk.beta_c = classical_bound_pbc(ineq).beta_c;
        const SpinHamiltonian h = compile_hamiltonian(ineq, catalog_settings(row));
        chk.qv = chk.beta_c + ground_energy(h).e0;
        chk.beta_ok = chk.beta_c == row.beta_c;
        chk.qv_ok = std::abs(chk.qv - row.qv) <= row.qv_tol;
        out.push_back(chk);
    }
    return out;
}

std::string format_g10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_csv(std::ostream& os, const CsvTable& table, bool no_meta) {
    if (!no_meta) {
        os << "# bellchain " << kVersion << "\n";
        for (const std::string& line : table.meta) os << "# " << line << "\n";
    }
    for (size_t c = 0; c < table.columns.size(); ++c)
        os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows)
        for (size_t c = 0; c < row.size(); ++c)
            os << format_g10(row[c]) << (c + 1 < row.size() ? "," : "\n");
}

void write_csv_file(const std::string& path, const CsvTable& table, bool no_meta) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(f, table, no_meta);
}

}  // namespace bellchain
