#include "bellchain/model.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bellchain {

namespace {

bool is_integral(double x) { return x == std::floor(x) && std::abs(x) < 0x1p53; }

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

double BellInequality::one_body_at(int site) const {
    if (one_body.empty()) return 0.0;
    return scenario.ti ? one_body[0] : one_body[static_cast<size_t>(site)];
}

void BellInequality::validate() const {
    const auto& sc = scenario;
    if (sc.n < 2) fail("scenario: need n >= 2 parties");
    if (sc.m < 1) fail("scenario: need m >= 1 settings");
    if (sc.d < 2) fail("scenario: need d >= 2 outcomes");
    if (sc.R < 1) fail("scenario: need R >= 1");
    if (sc.R >= sc.n) fail("scenario: range R must satisfy R < n");

    const bool has_structured = !terms.empty() || [&] {
        for (double g : one_body)
            if (g != 0.0) return true;
        return false;
    }();
    if (has_structured && !general_terms.empty())
        fail("inequality: structured terms and general terms are mutually exclusive");

    if (!general_terms.empty() && !one_body.empty())
        fail("inequality: general-form instances encode one-body weights as r=0 terms");
    if (structured() && sc.d != 2)
        fail("inequality: correlator (structured) form requires d = 2");

    const size_t expected_ob = sc.ti ? 1 : static_cast<size_t>(sc.n);
    if (!one_body.empty() && one_body.size() != expected_ob)
        fail("inequality: one_body has wrong length");
    if (!one_body.empty()) {
        bool nonzero = false;
        for (double g : one_body) nonzero |= (g != 0.0);
        if (nonzero && !sc.has_z)
            fail("inequality: one-body z weights require has_z");
    }

    for (const auto& t : terms) {
        if (t.r < 1 || t.r > sc.R) fail("term: distance r out of range");
        if (t.k < 0 || t.k >= sc.m || t.l < 0 || t.l >= sc.m)
            fail("term: setting index out of range");
        if (t.r >= 2 && !sc.has_z)
            fail("term: mid-string z factors require has_z");
        if (!sc.ti) {
            if (t.i < 0 || t.i >= sc.n) fail("term: site index out of range");
            if (sc.boundary == Boundary::obc && t.i + t.r >= sc.n)
                fail("term: reaches past the open boundary");
        }
    }
    if (sc.ti && sc.boundary != Boundary::pbc)
        fail("inequality: ti instances must be periodic");

    for (const auto& t : general_terms) {
        if (t.r < 0 || t.r > sc.R) fail("general term: distance r out of range");
        if (t.settings.size() != static_cast<size_t>(t.r + 1) ||
            t.outcomes.size() != static_cast<size_t>(t.r + 1))
            fail("general term: need r+1 settings and outcomes");
        for (int k : t.settings)
            if (k < 0 || k >= sc.rows()) fail("general term: setting index out of range");
        for (int a : t.outcomes)
            if (a < 0 || a >= sc.d) fail("general term: outcome label out of range");
        if (!sc.ti) {
            if (t.i < 0 || t.i >= sc.n) fail("general term: site index out of range");
            if (sc.boundary == Boundary::obc && t.i + t.r >= sc.n)
                fail("general term: reaches past the open boundary");
        }
    }
}

bool BellInequality::integral_coefficients() const {
    for (double g : one_body)
        if (!is_integral(g)) return false;
    for (const auto& t : terms)
        if (!is_integral(t.gamma)) return false;
    for (const auto& t : general_terms)
        if (!is_integral(t.gamma)) return false;
    return true;
}

double BellInequality::coeff_abs_sum() const {
    double s = 0.0;
    const double site_mult = scenario.ti ? static_cast<double>(scenario.n) : 1.0;
    for (double g : one_body) s += std::abs(g) * site_mult;
    for (const auto& t : terms) s += std::abs(t.gamma) * site_mult;
    for (const auto& t : general_terms) s += std::abs(t.gamma) * site_mult;
    return s;
}

void MeasurementSettings::validate(const BellScenario& sc) const {
    const size_t lists = shared ? 1 : static_cast<size_t>(sc.n);
    if (angles.size() != lists)
        throw std::invalid_argument("settings: expected " + std::to_string(lists) +
                                    " angle list(s), got " + std::to_string(angles.size()));
    for (const auto& a : angles)
        if (a.size() != static_cast<size_t>(sc.m))
            throw std::invalid_argument("settings: each site needs exactly m = " +
                                        std::to_string(sc.m) + " angles");
}

SpinHamiltonian SpinHamiltonian::zero(int n, int R, Boundary bc) {
    SpinHamiltonian h;
    h.n = n;
    h.R = R;
    h.boundary = bc;
    h.one_body.assign(static_cast<size_t>(n), 0.0);
    h.strings.assign(static_cast<size_t>(n) * R * 4, 0.0);
    return h;
}

double SpinHamiltonian::max_abs_coeff() const {
    double m = 0.0;
    for (double x : one_body) m = std::max(m, std::abs(x));
    for (double x : strings) m = std::max(m, std::abs(x));
    return m;
}

bool SpinHamiltonian::site_independent(double tol) const {
    if (boundary != Boundary::pbc) return false;
    for (int i = 1; i < n; ++i) {
        if (std::abs(one_body[static_cast<size_t>(i)] - one_body[0]) > tol) return false;
        for (int r = 1; r <= R; ++r)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (std::abs(t(i, r, a, b) - t(0, r, a, b)) > tol) return false;
    }
    return true;
}

DeterministicStrategy DeterministicStrategy::filled(int n, int rows, int d, int lab) {
    DeterministicStrategy s;
    s.n = n;
    s.rows = rows;
    s.d = d;
    s.labels.assign(static_cast<size_t>(rows) * n, lab);
    return s;
}

bool DeterministicStrategy::complete() const {
    if (labels.size() != static_cast<size_t>(rows) * n) return false;
    for (int lab : labels)
        if (lab < 0 || lab >= d) return false;
    return true;
}

SpinHamiltonian compile_hamiltonian(const BellInequality& ineq,
                                    const MeasurementSettings& settings) {
    ineq.validate();
    if (!ineq.structured())
        throw std::invalid_argument("compile: general-form inequalities have no string-operator image");
    settings.validate(ineq.scenario);

    const auto& sc = ineq.scenario;
    SpinHamiltonian h = SpinHamiltonian::zero(sc.n, sc.R, sc.boundary);

    for (int i = 0; i < sc.n; ++i) h.one_body[static_cast<size_t>(i)] = ineq.one_body_at(i);

    auto add_term = [&](int i, const StructuredTerm& t) {
        const int j = (i + t.r) % sc.n;  // right endpoint (wraps under PBC)
        const double ck[2] = {std::cos(settings.angle(i, t.k)), std::sin(settings.angle(i, t.k))};
        const double cl[2] = {std::cos(settings.angle(j, t.l)), std::sin(settings.angle(j, t.l))};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) h.t(i, t.r, a, b) += t.gamma * ck[a] * cl[b];
    };

    if (sc.ti) {
        for (const auto& t : ineq.terms)
            for (int i = 0; i < sc.n; ++i) add_term(i, t);
    } else {
        for (const auto& t : ineq.terms) add_term(t.i, t);
    }
    return h;
}

namespace {

// Factorized correlator products over +-1 outcomes, in exact integer
// arithmetic; gammas are folded in by the caller.
template <typename V>
V evaluate_with(const BellInequality& ineq, const DeterministicStrategy& s,
                V (*conv)(double)) {
    const auto& sc = ineq.scenario;
    V total = V(0);

    auto sign_at = [&](int row, int site) -> int { return s.sign(row, site % sc.n); };

    for (int i = 0; i < sc.n; ++i) {
        const double g = ineq.one_body_at(i);
        if (g != 0.0) total += conv(g) * V(sign_at(sc.z_row(), i));
    }

    auto add_structured = [&](int i, const StructuredTerm& t) {
        int prod = sign_at(t.k, i) * sign_at(t.l, i + t.r);
        for (int q = 1; q < t.r; ++q) prod *= sign_at(sc.z_row(), i + q);
        total += conv(t.gamma) * V(prod);
    };
    if (sc.ti) {
        for (const auto& t : ineq.terms)
            for (int i = 0; i < sc.n; ++i) add_structured(i, t);
    } else {
        for (const auto& t : ineq.terms) add_structured(t.i, t);
    }

    auto add_general = [&](int i, const GeneralTerm& t) {
        for (int q = 0; q <= t.r; ++q) {
            const int site = (i + q) % sc.n;
            if (s.label(t.settings[static_cast<size_t>(q)], site) !=
                t.outcomes[static_cast<size_t>(q)])
                return;
        }
        total += conv(t.gamma);
    };
    if (sc.ti) {
        for (const auto& t : ineq.general_terms)
            for (int i = 0; i < sc.n; ++i) add_general(i, t);
    } else {
        for (const auto& t : ineq.general_terms) add_general(t.i, t);
    }
    return total;
}

int64_t to_i64(double x) { return static_cast<int64_t>(x); }
double to_dbl(double x) { return x; }

}  // namespace

double evaluate_strategy(const BellInequality& ineq, const DeterministicStrategy& s) {
    ineq.validate();
    if (!s.complete() || s.n != ineq.scenario.n || s.rows != ineq.scenario.rows() ||
        s.d != ineq.scenario.d)
        throw std::invalid_argument("evaluate: strategy incomplete or mis-dimensioned");
    if (ineq.integral_coefficients())
        return static_cast<double>(evaluate_with<int64_t>(ineq, s, to_i64));
    return evaluate_with<double>(ineq, s, to_dbl);
}

// --- JSON ------------------------------------------------------------------

using nlohmann::json;

namespace {

Boundary boundary_from(const std::string& s) {
    if (s == "obc") return Boundary::obc;
    if (s == "pbc") return Boundary::pbc;
    throw std::invalid_argument("boundary must be \"obc\" or \"pbc\", got \"" + s + "\"");
}

}  // namespace

BellInequality inequality_from_json(const std::string& text) {
    json j = json::parse(text);  // throws with byte position on malformed input
    BellInequality q;
    q.scenario.n = j.at("n").get<int>();
    q.scenario.m = j.at("m").get<int>();
    q.scenario.d = j.value("d", 2);
    q.scenario.R = j.at("R").get<int>();
    q.scenario.boundary = boundary_from(j.at("boundary").get<std::string>());
    q.scenario.ti = j.value("ti", false);
    q.scenario.has_z = j.value("has_z", false);

    if (j.contains("one_body")) q.one_body = j["one_body"].get<std::vector<double>>();
    if (j.contains("terms")) {
        for (const auto& e : j["terms"]) {
            StructuredTerm t;
            t.i = q.scenario.ti ? 0 : e.at("i").get<int>();
            t.r = e.at("r").get<int>();
            t.k = e.at("k").get<int>();
            t.l = e.at("l").get<int>();
            t.gamma = e.at("gamma").get<double>();
            q.terms.push_back(t);
        }
    }
    if (j.contains("general_terms")) {
        for (const auto& e : j["general_terms"]) {
            GeneralTerm t;
            t.i = q.scenario.ti ? 0 : e.at("i").get<int>();
            t.r = e.at("r").get<int>();
            t.settings = e.at("settings").get<std::vector<int>>();
            t.outcomes = e.at("outcomes").get<std::vector<int>>();
            t.gamma = e.at("gamma").get<double>();
            q.general_terms.push_back(t);
        }
    }
    q.validate();
    return q;
}

BellInequality load_inequality(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open inequality file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return inequality_from_json(ss.str());
}

std::string inequality_to_json(const BellInequality& q) {
    json j;
    j["n"] = q.scenario.n;
    j["m"] = q.scenario.m;
    j["d"] = q.scenario.d;
    j["R"] = q.scenario.R;
    j["boundary"] = q.scenario.boundary == Boundary::obc ? "obc" : "pbc";
    j["ti"] = q.scenario.ti;
    j["has_z"] = q.scenario.has_z;
    if (!q.one_body.empty()) j["one_body"] = q.one_body;
    if (!q.terms.empty()) {
        json arr = json::array();
        for (const auto& t : q.terms) {
            json e;
            if (!q.scenario.ti) e["i"] = t.i;
            e["r"] = t.r;
            e["k"] = t.k;
            e["l"] = t.l;
            e["gamma"] = t.gamma;
            arr.push_back(e);
        }
        j["terms"] = arr;
    }
    if (!q.general_terms.empty()) {
        json arr = json::array();
        for (const auto& t : q.general_terms) {
            json e;
            if (!q.scenario.ti) e["i"] = t.i;
            e["r"] = t.r;
            e["settings"] = t.settings;
            e["outcomes"] = t.outcomes;
            e["gamma"] = t.gamma;
            arr.push_back(e);
        }
        j["general_terms"] = arr;
    }
    return j.dump(2);
}

MeasurementSettings settings_from_json(const std::string& text, const BellScenario& sc) {
    json j = json::parse(text);
    MeasurementSettings s;
    s.shared = j.value("shared", true);
    s.angles = j.at("angles").get<std::vector<std::vector<double>>>();
    s.validate(sc);
    return s;
}

MeasurementSettings load_settings(const std::string& path, const BellScenario& sc) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open settings file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return settings_from_json(ss.str(), sc);
}

std::string settings_to_json(const MeasurementSettings& s) {
    json j;
    j["shared"] = s.shared;
    j["angles"] = s.angles;
    return j.dump(2);
}

}  // namespace bellchain
