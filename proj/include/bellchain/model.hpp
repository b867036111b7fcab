#pragma once

// Domain types for Bell scenarios on 1D spin chains:
//   - BellInequality: finite-range correlator inequality, structured form
//     (planar endpoints, sigma_z mid-string) or general form (per-site
//     setting/outcome indicators, the only form allowed for d > 2 outcomes)
//   - MeasurementSettings: planar qubit observables M_k = cos(phi_k) sx +
//     sin(phi_k) sy, plus an optional distinguished sigma_z row
//   - SpinHamiltonian: one-body sigma_z weights and string-operator weights
//     t^(i,r)_{ab} on  s_{x+a}^(i) sz^(i+1) ... sz^(i+r-1) s_{x+b}^(i+r)
//   - DeterministicStrategy: one outcome label per (setting, site)
// plus the inequality -> Hamiltonian compilation and strategy evaluation.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bellchain {

enum class Boundary { obc, pbc };

struct BellScenario {
    int n = 0;         // parties
    int m = 0;         // planar measurements per party
    int d = 2;         // outcomes per measurement
    int R = 1;         // interaction range
    Boundary boundary = Boundary::pbc;
    bool ti = false;   // coefficients independent of site (stored once)
    bool has_z = false;  // extra distinguished sigma_z measurement, row index m

    int rows() const { return m + (has_z ? 1 : 0); }  // strategy rows
    int z_row() const { return m; }
};

// Correlator term gamma * < M_k^(i) Z^(i+1) ... Z^(i+r-1) M_l^(i+r) >.
// Endpoints k, l index planar settings; interior factors are the z row.
struct StructuredTerm {
    int i = 0;  // left site (ignored when scenario.ti)
    int r = 1;  // distance >= 1
    int k = 0;  // left setting, in [0, m)
    int l = 0;  // right setting, in [0, m)
    double gamma = 0.0;
};

// gamma * prod_j [ strategy outcome of setting k_j at site i+j equals a_j ].
// Supports d > 2; settings/outcomes span the r+1 sites i .. i+r.
struct GeneralTerm {
    int i = 0;
    int r = 0;  // distance >= 0 (single-site terms allowed)
    std::vector<int> settings;  // length r+1
    std::vector<int> outcomes;  // length r+1
    double gamma = 0.0;
};

struct BellInequality {
    BellScenario scenario;
    std::vector<double> one_body;  // weight on <Z^(i)>; size n, or 1 when ti
    std::vector<StructuredTerm> terms;
    std::vector<GeneralTerm> general_terms;

    bool structured() const { return general_terms.empty(); }
    double one_body_at(int site) const;
    // Throws std::invalid_argument on any broken invariant.
    void validate() const;
    bool integral_coefficients() const;
    double coeff_abs_sum() const;
};

struct MeasurementSettings {
    bool shared = true;  // one angle list for every site
    std::vector<std::vector<double>> angles;  // shared: 1 list; else n lists

    double angle(int site, int k) const {
        return angles[shared ? 0 : static_cast<size_t>(site)][static_cast<size_t>(k)];
    }
    void validate(const BellScenario& sc) const;
};

struct SpinHamiltonian {
    int n = 0;
    int R = 1;
    Boundary boundary = Boundary::pbc;
    std::vector<double> one_body;  // size n, weight of sigma_z^(i)
    // string weights t^(i,r)_{ab}, flattened as ((i*R + (r-1))*2 + a)*2 + b
    std::vector<double> strings;

    double t(int i, int r, int a, int b) const {
        return strings[static_cast<size_t>(((i * R + (r - 1)) * 2 + a) * 2 + b)];
    }
    double& t(int i, int r, int a, int b) {
        return strings[static_cast<size_t>(((i * R + (r - 1)) * 2 + a) * 2 + b)];
    }
    static SpinHamiltonian zero(int n, int R, Boundary bc);
    double max_abs_coeff() const;
    // True when every stored coefficient is site-independent (PBC) so the
    // translationally invariant solvers apply.
    bool site_independent(double tol = 0.0) const;
};

struct DeterministicStrategy {
    int n = 0;
    int rows = 0;
    int d = 2;
    std::vector<int> labels;  // rows x n, row-major; label in [0, d)

    int label(int row, int site) const { return labels[static_cast<size_t>(row * n + site)]; }
    int& label(int row, int site) { return labels[static_cast<size_t>(row * n + site)]; }
    // d == 2 outcome convention: label 0 -> +1, label 1 -> -1.
    int sign(int row, int site) const { return 1 - 2 * label(row, site); }
    static DeterministicStrategy filled(int n, int rows, int d, int lab = 0);
    bool complete() const;
};

// --- operations -----------------------------------------------------------

// Substitutes M_k -> cos(phi_k) sx + sin(phi_k) sy and the z row -> sigma_z;
// structured-form inequalities only.
SpinHamiltonian compile_hamiltonian(const BellInequality& ineq,
                                    const MeasurementSettings& settings);

// Value of the inequality under a deterministic strategy (factorized
// correlators).  Exact 64-bit integer arithmetic when all gamma are integral.
double evaluate_strategy(const BellInequality& ineq, const DeterministicStrategy& s);

// --- JSON I/O --------------------------------------------------------------

BellInequality inequality_from_json(const std::string& text);
BellInequality load_inequality(const std::string& path);
std::string inequality_to_json(const BellInequality& ineq);

MeasurementSettings settings_from_json(const std::string& text, const BellScenario& sc);
MeasurementSettings load_settings(const std::string& path, const BellScenario& sc);
std::string settings_to_json(const MeasurementSettings& s);

}  // namespace bellchain
