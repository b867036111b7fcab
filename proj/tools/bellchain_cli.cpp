// ---------------------------------------------------------------------------
// bellchain command-line driver.
//
// Exit codes: 0 success, 1 input error (bad file, bad flags, invalid
// instance), 2 verification failure (a computed value missed its target).
// Output is deterministic; timestamps appear only on "# ..." comment lines,
// which --no-meta suppresses.
// ---------------------------------------------------------------------------

#include <cmath>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bellchain/classical_dp.hpp"
#include "bellchain/experiments.hpp"
#include "bellchain/families.hpp"
#include "bellchain/fermion.hpp"
#include "bellchain/model.hpp"
#include "bellchain/oracle.hpp"
#include "bellchain/rng.hpp"
#include "bellchain/ti_analytic.hpp"
#include "bellchain/version.hpp"

namespace {

using bellchain::format_g10;
using nlohmann::json;

struct GlobalOpts {
    bool json_out = false;
    bool no_meta = false;
    int threads = 1;
};

void print_meta(const GlobalOpts& g, const std::string& command) {
    if (g.no_meta || g.json_out) return;
    std::cout << "# bellchain " << bellchain::kVersion << " " << command << "\n";
    char buf[64];
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    std::cout << "# generated " << buf << "\n";
}

void kv(const std::string& key, double v) {
    std::cout << key << " = " << format_g10(v) << "\n";
}

void kv(const std::string& key, const std::string& v) {
    std::cout << key << " = " << v << "\n";
}

std::string witness_row(const bellchain::DeterministicStrategy& w, int row) {
    std::string s;
    for (int site = 0; site < w.n; ++site) s += static_cast<char>('0' + w.label(row, site));
    return s;
}

int cmd_bound(const GlobalOpts& g, const std::string& ineq_path, bool force_ti,
              const std::string& csv_path) {
    const bellchain::BellInequality ineq = bellchain::load_inequality(ineq_path);
    const bellchain::BoundResult res =
        force_ti ? bellchain::classical_bound_ti(ineq) : bellchain::classical_bound(ineq);
    if (g.json_out) {
        json j;
        j["beta_c"] = res.beta_c;
        j["classical_minimum"] = res.classical_minimum;
        if (res.has_witness) {
            json w = json::array();
            for (int r = 0; r < res.witness.rows; ++r) w.push_back(witness_row(res.witness, r));
            j["witness"] = w;
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    print_meta(g, "bound");
    kv("beta_c", res.beta_c);
    kv("classical_minimum", res.classical_minimum);
    if (res.has_witness)
        for (int r = 0; r < res.witness.rows; ++r)
            kv("witness[" + std::to_string(r) + "]", witness_row(res.witness, r));
    if (!csv_path.empty()) {
        bellchain::CsvTable t;
        t.columns = {"beta_c", "classical_minimum"};
        t.rows = {{res.beta_c, res.classical_minimum}};
        bellchain::write_csv_file(csv_path, t, g.no_meta);
    }
    return 0;
}

int cmd_energy(const GlobalOpts& g, const std::string& ineq_path,
               const std::string& settings_path, bool cross_check) {
    const bellchain::BellInequality ineq = bellchain::load_inequality(ineq_path);
    const bellchain::MeasurementSettings settings =
        bellchain::load_settings(settings_path, ineq.scenario);
    const bellchain::SpinHamiltonian h = bellchain::compile_hamiltonian(ineq, settings);
    const bellchain::GroundEnergyReport rep = bellchain::ground_energy(h);

    if (g.json_out) {
        json j;
        j["e0"] = rep.e0;
        j["parity"] = rep.parity;
        j["sectors_coincide"] = rep.sectors_coincide;
        for (const auto& s : rep.sectors)
            j["sectors"].push_back({{"parity", s.parity},
                                    {"e0", s.e0},
                                    {"e_raw", s.e_raw},
                                    {"corrected", s.corrected},
                                    {"zero_mode", s.zero_mode}});
        std::cout << j.dump(2) << "\n";
    } else {
        print_meta(g, "energy");
        kv("e0", rep.e0);
        kv("parity", static_cast<double>(rep.parity));
        if (rep.sectors_coincide) {
            kv("sectors_coincide", 1.0);
        } else {
            for (const auto& s : rep.sectors)
                kv(s.parity < 0 ? "e0_minus" : "e0_plus", s.e0);
        }
    }

    if (cross_check) {
        if (h.boundary != bellchain::Boundary::pbc || !h.site_independent()) {
            std::cerr << "error: --cross-check needs a site-independent ring\n";
            return 1;
        }
        const bellchain::TiGround tg = bellchain::ti_ground_energy(h);
        const double scale = std::max(1.0, std::abs(rep.e0));
        bool ok = std::abs(tg.e0 - rep.e0) <= 1e-8 * scale;
        if (!rep.sectors_coincide)
            for (int s = 0; s < 2; ++s)
                ok = ok && std::abs(tg.sectors[static_cast<size_t>(s)].e0 -
                                    rep.sectors[static_cast<size_t>(s)].e0) <= 1e-8 * scale;
        if (!ok) {
            std::cerr << "cross-check failed: momentum-space and numeric energies disagree\n";
            return 2;
        }
        if (!g.json_out) kv("cross_check", "ok");
    }
    return 0;
}

int cmd_violation(const GlobalOpts& g, const std::string& ineq_path,
                  const std::string& settings_path) {
    const bellchain::BellInequality ineq = bellchain::load_inequality(ineq_path);
    const bellchain::MeasurementSettings settings =
        bellchain::load_settings(settings_path, ineq.scenario);
    const bellchain::ViolationReport rep = bellchain::violation(ineq, settings);
    if (g.json_out) {
        json j;
        j["beta_c"] = rep.beta_c;
        j["e0"] = rep.e0;
        j["violation"] = rep.violation;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    print_meta(g, "violation");
    kv("beta_c", rep.beta_c);
    kv("e0", rep.e0);
    kv("violation", rep.violation);
    return 0;
}

int cmd_chained(const GlobalOpts& g, int m, int pairs, double eps) {
    const bellchain::ChainedPoint p = bellchain::run_chained(m, pairs, eps);
    const double bq = bellchain::chained_beta_q_per_particle(m, eps);
    const auto window = bellchain::chained_violation_window(m);
    if (g.json_out) {
        json j;
        j["m"] = m;
        j["pairs"] = pairs;
        j["eps"] = eps;
        j["beta_c_dp"] = p.beta_c_dp;
        j["beta_c_formula"] = p.beta_c_formula;
        j["e0"] = p.e0;
        j["violation"] = p.violation;
        j["beta_q_per_particle"] = bq;
        if (window) j["window"] = {window->first, window->second};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    print_meta(g, "chained");
    kv("beta_c_dp", p.beta_c_dp);
    kv("beta_c_formula", p.beta_c_formula);
    kv("e0", p.e0);
    kv("violation", p.violation);
    kv("beta_q_per_particle", bq);
    if (window) {
        kv("window_low", window->first);
        kv("window_high", window->second);
    } else {
        kv("window", "none");
    }
    return 0;
}

int cmd_spinglass(const GlobalOpts& g, uint64_t seed, int realizations,
                  const std::string& grid, int n, const std::string& csv_path) {
    bellchain::SpinGlassSpec spec;
    spec.seed = seed;
    spec.realizations = realizations;
    spec.n = n;
    if (!grid.empty()) {
        int a = 0, b = 0;
        if (std::sscanf(grid.c_str(), "%dx%d", &a, &b) != 2 || a < 1 || b < 1)
            throw std::invalid_argument("bad --grid, expected like 20x20");
        spec.n_mu = a;
        spec.n_sigma = b;
    }
    const bellchain::SpinGlassResult res = bellchain::run_spin_glass(spec);
    const bellchain::FlatnessCheck flat = bellchain::spin_glass_flatness(res);

    bellchain::CsvTable t;
    t.meta = {"spinglass n=" + std::to_string(spec.n) +
              " realizations=" + std::to_string(spec.realizations) +
              " seed=" + std::to_string(spec.seed)};
    t.columns = {"mu", "sigma", "mean_ratio", "stderr_ratio"};
    for (const auto& c : res.cells)
        t.rows.push_back({c.mu, c.sigma, c.mean_ratio, c.stderr_ratio});

    if (g.json_out) {
        json j;
        j["n"] = spec.n;
        j["realizations"] = spec.realizations;
        j["seed"] = spec.seed;
        json cells = json::array();
        for (const auto& c : res.cells)
            cells.push_back({{"mu", c.mu},
                             {"sigma", c.sigma},
                             {"mean_ratio", c.mean_ratio},
                             {"stderr_ratio", c.stderr_ratio}});
        j["cells"] = cells;
        j["mu0_row_spread"] = flat.spread;
        j["mu0_row_mean_stderr"] = flat.mean_stderr;
        j["mu0_row_flat"] = flat.flat;
        std::cout << j.dump(2) << "\n";
    } else if (csv_path.empty()) {
        print_meta(g, "spinglass");
        bellchain::write_csv(std::cout, t, true);
        kv("mu0_row_spread", flat.spread);
        kv("mu0_row_mean_stderr", flat.mean_stderr);
        kv("mu0_row_flat", flat.flat ? 1.0 : 0.0);
    } else {
        print_meta(g, "spinglass");
        kv("mu0_row_spread", flat.spread);
        kv("mu0_row_mean_stderr", flat.mean_stderr);
        kv("mu0_row_flat", flat.flat ? 1.0 : 0.0);
    }
    if (!csv_path.empty()) bellchain::write_csv_file(csv_path, t, g.no_meta);
    return 0;
}

int cmd_xxz(const GlobalOpts& g, int n, const std::string& csv_path) {
    const std::vector<bellchain::XxzPoint> pts = bellchain::run_xxz_grid(
        n, bellchain::xxz_default_deltas(), bellchain::xxz_default_epss());
    int mismatch = 0;
    for (const auto& p : pts)
        if (p.dp != p.formula) ++mismatch;

    bellchain::CsvTable t;
    t.meta = {"xxz n=" + std::to_string(n)};
    t.columns = {"delta", "eps", "region", "dp_minimum", "formula_minimum"};
    for (const auto& p : pts)
        t.rows.push_back({p.delta, p.eps, static_cast<double>(p.region), p.dp, p.formula});
    if (!csv_path.empty()) bellchain::write_csv_file(csv_path, t, g.no_meta);

    if (g.json_out) {
        json j;
        j["n"] = n;
        j["points"] = pts.size();
        j["mismatches"] = mismatch;
        std::cout << j.dump(2) << "\n";
    } else {
        print_meta(g, "xxz");
        if (csv_path.empty()) bellchain::write_csv(std::cout, t, true);
        kv("points", static_cast<double>(pts.size()));
        kv("mismatches", static_cast<double>(mismatch));
    }
    if (mismatch > 0) {
        std::cerr << "xxz verification failed: " << mismatch << " grid points disagree\n";
        return 2;
    }
    return 0;
}

int cmd_tight8(const GlobalOpts& g) {
    const bellchain::Tight8Report rep = bellchain::run_tight8();
    const double root2 = std::sqrt(2.0);
    const double pi = 3.14159265358979323846;
    const double expect_minus = -16.0 - 8.0 * root2;
    const double expect_plus = -8.0 * (root2 + 2.0 * std::cos(pi / 8) + 2.0 * std::sin(pi / 8));
    const double e_minus = rep.numeric.sectors[0].e0;
    const double e_plus = rep.numeric.sectors[1].e0;

    if (g.json_out) {
        json j;
        j["beta_c"] = rep.beta_c;
        j["e0_minus"] = e_minus;
        j["e0_plus"] = e_plus;
        j["e0"] = rep.numeric.e0;
        j["violation"] = rep.violation;
        std::cout << j.dump(2) << "\n";
    } else {
        print_meta(g, "tight8");
        kv("beta_c", rep.beta_c);
        kv("e0_minus", e_minus);
        kv("e0_plus", e_plus);
        kv("e0", rep.numeric.e0);
        kv("violation", rep.violation);
    }

    bool ok = rep.beta_c == 32.0;
    ok = ok && std::abs(e_minus - expect_minus) <= 1e-9;
    ok = ok && std::abs(e_plus - expect_plus) <= 1e-9;
    ok = ok && std::abs(rep.analytic.e0 - rep.numeric.e0) <= 1e-9;
    ok = ok && std::abs(rep.violation - (-0.2187)) <= 1e-3;
    if (!ok) {
        std::cerr << "tight8 verification failed\n";
        return 2;
    }
    if (!g.json_out) kv("status", "ok");
    return 0;
}

int cmd_table2(const GlobalOpts& g) {
    const std::vector<bellchain::CatalogCheck> checks = bellchain::verify_catalog();
    bool all_ok = true;
    if (g.json_out) {
        json rows = json::array();
        for (const auto& c : checks) {
            rows.push_back({{"n", c.row.n},
                            {"beta_c", c.beta_c},
                            {"beta_c_expected", c.row.beta_c},
                            {"qv", c.qv},
                            {"qv_expected", c.row.qv},
                            {"ok", c.beta_ok && c.qv_ok}});
            all_ok = all_ok && c.beta_ok && c.qv_ok;
        }
        json j;
        j["rows"] = rows;
        j["pass"] = all_ok;
        std::cout << j.dump(2) << "\n";
    } else {
        print_meta(g, "table2");
        int idx = 1;
        for (const auto& c : checks) {
            std::cout << "row " << idx++ << " n = " << c.row.n
                      << " beta_c = " << format_g10(c.beta_c)
                      << " qv = " << format_g10(c.qv)
                      << " ok = " << ((c.beta_ok && c.qv_ok) ? 1 : 0) << "\n";
            all_ok = all_ok && c.beta_ok && c.qv_ok;
        }
        kv("table2", all_ok ? "PASS" : "FAIL");
    }
    return all_ok ? 0 : 2;
}

int cmd_oracle_check(const GlobalOpts& g, uint64_t seed) {
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok) {
        all_ok = all_ok && ok;
        if (!g.json_out) kv(name, ok ? "ok" : "FAIL");
    };
    if (!g.json_out) print_meta(g, "oracle-check");

    {
        const bellchain::BellInequality ineq = bellchain::chained_inequality(2, 2, 0.5);
        const auto ex = bellchain::oracle::exhaustive_classical_bound(ineq);
        const auto dp = bellchain::classical_bound_pbc(ineq);
        report("enumeration_vs_dp", ex.classical_minimum == dp.classical_minimum);
    }
    {
        const bellchain::BellInequality ineq = bellchain::tight8_inequality();
        const bellchain::MeasurementSettings s = bellchain::tight8_settings();
        const auto direct = bellchain::oracle::dense_bell_operator(ineq, s).materialize();
        const auto compiled =
            bellchain::oracle::dense_operator_from(bellchain::compile_hamiltonian(ineq, s))
                .materialize();
        report("compile_vs_direct", (direct - compiled).cwiseAbs().maxCoeff() <= 1e-12);
    }
    {
        const double resid = bellchain::oracle::dense_parity_transform_check(3, 24, seed);
        report("parity_covariance", resid <= 1e-9);
    }
    {
        bellchain::TransferTable t;
        t.size = 2;
        t.f = {1, 5, 2, 3};
        const bellchain::TransferTable sq = bellchain::min_plus_square(t);
        report("min_plus_square",
               sq.f == std::vector<double>({2, 6, 3, 6}) && sq.t == 1);
    }
    if (g.json_out) {
        json j;
        j["pass"] = all_ok;
        std::cout << j.dump(2) << "\n";
    } else {
        kv("oracle_check", all_ok ? "PASS" : "FAIL");
    }
    return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bellchain: Bell inequalities as ground-state problems on spin chains"};
    app.require_subcommand(1);
    // Let the global output flags appear after the subcommand too.
    app.fallthrough();

    GlobalOpts g;
    app.add_flag("--json", g.json_out, "machine-readable JSON output");
    app.add_flag("--no-meta", g.no_meta, "suppress # comment lines");
    app.add_option("--threads", g.threads, "worker threads (accepted for compatibility)");

    std::string ineq_path, settings_path, csv_path, grid;
    bool force_ti = false, cross_check = false;
    int m = 2, pairs = 4, n_chain = 100, n_xxz = 10;
    double eps = 1.0;
    uint64_t seed = 12345;
    int realizations = 100;

    CLI::App* bound = app.add_subcommand("bound", "classical bound of an inequality");
    bound->add_option("--ineq", ineq_path, "inequality JSON file")->required();
    bound->add_flag("--ti", force_ti, "use the translation-invariant solver");
    bound->add_option("--csv", csv_path, "also write a CSV file");

    CLI::App* energy = app.add_subcommand("energy", "ground energy of the compiled chain");
    energy->add_option("--ineq", ineq_path, "inequality JSON file")->required();
    energy->add_option("--settings", settings_path, "measurement settings JSON file")->required();
    energy->add_flag("--cross-check", cross_check,
                     "verify momentum-space against numeric diagonalization");

    CLI::App* viol = app.add_subcommand("violation", "classical bound plus ground energy");
    viol->add_option("--ineq", ineq_path, "inequality JSON file")->required();
    viol->add_option("--settings", settings_path, "measurement settings JSON file")->required();

    CLI::App* chained = app.add_subcommand("chained", "alternating-weight chained family");
    chained->add_option("--m", m, "settings per party");
    chained->add_option("--pairs", pairs, "two-site blocks on the ring");
    chained->add_option("--eps", eps, "link-weight modulation");

    CLI::App* spinglass = app.add_subcommand("spinglass", "disordered-coupling phase grid");
    spinglass->add_option("--seed", seed, "base RNG seed");
    spinglass->add_option("--realizations", realizations, "disorder realizations per cell");
    spinglass->add_option("--grid", grid, "grid size, e.g. 20x20");
    spinglass->add_option("--n", n_chain, "ring length");
    spinglass->add_option("--csv", csv_path, "write cells to a CSV file");

    CLI::App* xxz = app.add_subcommand("xxz", "XXZ-image family formula verification");
    xxz->add_option("--n", n_xxz, "ring length (even)");
    xxz->add_option("--csv", csv_path, "write grid points to a CSV file");

    app.add_subcommand("tight8", "verify the bundled 8-party tight inequality");
    app.add_subcommand("table2", "verify the small-inequality catalog");
    CLI::App* oracle_check = app.add_subcommand("oracle-check", "self-test of the verifiers");
    oracle_check->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand("bound")) return cmd_bound(g, ineq_path, force_ti, csv_path);
        if (app.got_subcommand("energy"))
            return cmd_energy(g, ineq_path, settings_path, cross_check);
        if (app.got_subcommand("violation")) return cmd_violation(g, ineq_path, settings_path);
        if (app.got_subcommand("chained")) return cmd_chained(g, m, pairs, eps);
        if (app.got_subcommand("spinglass"))
            return cmd_spinglass(g, seed, realizations, grid, n_chain, csv_path);
        if (app.got_subcommand("xxz")) return cmd_xxz(g, n_xxz, csv_path);
        if (app.got_subcommand("tight8")) return cmd_tight8(g);
        if (app.got_subcommand("table2")) return cmd_table2(g);
        if (app.got_subcommand("oracle-check")) return cmd_oracle_check(g, seed);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
