#pragma once

// Reproducible end-to-end studies over the bundled families, plus a small
// deterministic CSV writer.  Random draws are keyed counter-mode, so every
// (seed, grid index, realization) pair is independent of evaluation order.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bellchain/classical_dp.hpp"
#include "bellchain/families.hpp"
#include "bellchain/fermion.hpp"
#include "bellchain/ti_analytic.hpp"

namespace bellchain {

struct Tight8Report {
    double beta_c = 0.0;
    TiGround analytic;
    GroundEnergyReport numeric;
    double violation = 0.0;  // beta_c + numeric ground energy
};
Tight8Report run_tight8();

struct ChainedPoint {
    int m = 2;
    int pairs = 1;
    double eps = 0.0;
    double beta_c_dp = 0.0;
    double beta_c_formula = 0.0;
    double e0 = 0.0;
    double violation = 0.0;
};
ChainedPoint run_chained(int m, int pairs, double eps);

struct SpinGlassSpec {
    int n = 100;
    int realizations = 100;
    double mu0 = 0.0;
    double dmu = 0.1;
    int n_mu = 20;
    double sigma0 = 0.1;
    double dsigma = 0.1;
    int n_sigma = 20;
    uint64_t seed = 12345;
};

struct SpinGlassCell {
    double mu = 0.0;
    double sigma = 0.0;
    double mean_ratio = 0.0;    // mean of |e0| / beta_c over realizations
    double stderr_ratio = 0.0;  // standard error of that mean
};

struct SpinGlassResult {
    SpinGlassSpec spec;
    std::vector<SpinGlassCell> cells;  // mu-major, sigma minor
};
SpinGlassResult run_spin_glass(const SpinGlassSpec& spec);

// Flatness of the mu = 0 row for sigma >= sigma_min: the spread of the mean
// ratios against the typical per-cell uncertainty.
struct FlatnessCheck {
    double spread = 0.0;        // std dev of the mean ratios
    double mean_stderr = 0.0;   // average per-cell standard error
    bool flat = false;          // spread < 2 * mean_stderr
};
FlatnessCheck spin_glass_flatness(const SpinGlassResult& r, double sigma_min = 0.2);

struct XxzPoint {
    double delta = 0.0;
    double eps = 0.0;
    int region = 0;
    double dp = 0.0;       // DP classical minimum
    double formula = 0.0;  // closed-form classical minimum
};
std::vector<XxzPoint> run_xxz_grid(int n, const std::vector<double>& deltas,
                                   const std::vector<double>& epss);
const std::vector<double>& xxz_default_deltas();
const std::vector<double>& xxz_default_epss();

struct CatalogCheck {
    CatalogRow row;
    double beta_c = 0.0;
    double qv = 0.0;  // beta_c + ground energy at the row's angles
    bool beta_ok = false;
    bool qv_ok = false;
};
std::vector<CatalogCheck> verify_catalog();

// --- CSV -------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> meta;     // emitted as leading "# ..." lines
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Numbers printed with %.10g; meta lines dropped when no_meta.
void write_csv(std::ostream& os, const CsvTable& table, bool no_meta);
void write_csv_file(const std::string& path, const CsvTable& table, bool no_meta);

std::string format_g10(double v);

}  // namespace bellchain
