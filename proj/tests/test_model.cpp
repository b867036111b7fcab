#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bellchain/families.hpp"
#include "bellchain/model.hpp"

using namespace bellchain;

TEST_SUITE("model") {

TEST_CASE("validate rejects broken scenarios") {
    BellInequality q = tight8_inequality();
    CHECK_NOTHROW(q.validate());

    BellInequality bad = q;
    bad.scenario.n = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = q;
    bad.scenario.R = bad.scenario.n;  // range must stay below the ring size
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = q;
    bad.terms[0].k = bad.scenario.m;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = q;
    bad.scenario.has_z = false;  // r = 2 strings need the z row
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = q;
    bad.general_terms.push_back({0, 0, {0}, {0}, 1.0});  // mixed forms
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("validate rejects open-boundary overhang") {
    BellInequality q;
    q.scenario = {4, 2, 2, 2, Boundary::obc, false, true};
    q.one_body.assign(4, 0.0);
    q.terms.push_back({3, 2, 0, 0, 1.0});  // 3 + 2 > n - 1
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q.terms[0].i = 1;
    CHECK_NOTHROW(q.validate());
}

TEST_CASE("json round trip preserves the instance") {
    const BellInequality q = tight8_inequality();
    const BellInequality r = inequality_from_json(inequality_to_json(q));
    CHECK(r.scenario.n == q.scenario.n);
    CHECK(r.scenario.m == q.scenario.m);
    CHECK(r.scenario.R == q.scenario.R);
    CHECK(r.scenario.ti == q.scenario.ti);
    CHECK(r.scenario.has_z == q.scenario.has_z);
    CHECK(r.one_body == q.one_body);
    REQUIRE(r.terms.size() == q.terms.size());
    for (size_t t = 0; t < q.terms.size(); ++t) {
        CHECK(r.terms[t].r == q.terms[t].r);
        CHECK(r.terms[t].k == q.terms[t].k);
        CHECK(r.terms[t].l == q.terms[t].l);
        CHECK(r.terms[t].gamma == q.terms[t].gamma);
    }

    const MeasurementSettings s = tight8_settings();
    const MeasurementSettings s2 = settings_from_json(settings_to_json(s), q.scenario);
    CHECK(s2.shared == s.shared);
    CHECK(s2.angles == s.angles);
}

TEST_CASE("json loader reports parse position") {
    CHECK_THROWS_AS(inequality_from_json("{\"n\": 4,,}"), std::exception);
    CHECK_THROWS_AS(load_inequality("/nonexistent/file.json"), std::exception);
}

TEST_CASE("compile maps a CHSH block to the expected couplings") {
    // Settings {0, pi/2}: cos/sin products pick out the block entries.
    const BellInequality q = chained_inequality(2, 2, 0.0);
    const SpinHamiltonian h = compile_hamiltonian(q, chained_settings(2));
    for (int i = 0; i < h.n; ++i) {
        CHECK(h.t(i, 1, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(h.t(i, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(h.t(i, 1, 1, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(h.t(i, 1, 1, 1) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(h.one_body[static_cast<size_t>(i)] == 0.0);
    }
    CHECK(h.site_independent(1e-12));
}

TEST_CASE("compile expands translation-invariant instances per site") {
    const BellInequality q = tight8_inequality();
    const SpinHamiltonian h = compile_hamiltonian(q, tight8_settings());
    CHECK(h.n == 8);
    CHECK(h.R == 2);
    CHECK(h.site_independent());
    // gamma_z = 0 for tight8.
    for (double v : h.one_body) CHECK(v == 0.0);
    // r = 1 block at angles {0, pi/2}: t_ab = sum gamma_kl c_a(phi_k) c_b(phi_l).
    CHECK(h.t(0, 1, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(h.t(0, 1, 0, 1) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(h.t(0, 1, 1, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(h.t(0, 1, 1, 1) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(h.t(0, 2, 0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(h.t(0, 2, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evaluate_strategy on hand-checked assignments") {
    const BellInequality q = chained_inequality(2, 1, 0.0);  // two sites, two links
    DeterministicStrategy s = DeterministicStrategy::filled(2, 2, 2);
    // All outcomes +1: each link contributes 1 + 1 + 1 - 1 = 2.
    CHECK(evaluate_strategy(q, s) == 4.0);
    // Flip setting-1 outcome on site 1: per link, -gamma_01 and +gamma_11
    // offset, so the value is unchanged.
    s.label(1, 1) = 1;
    CHECK(evaluate_strategy(q, s) == 4.0);
    // Flipping setting-0 on site 1 instead drives both links to -2.
    DeterministicStrategy u = DeterministicStrategy::filled(2, 2, 2);
    u.label(0, 1) = 1;
    CHECK(evaluate_strategy(q, u) == -4.0);
}

TEST_CASE("evaluate_strategy covers z rows and general terms") {
    BellInequality q;
    q.scenario = {3, 1, 2, 1, Boundary::obc, false, true};
    q.one_body = {1.0, -2.0, 3.0};
    q.terms.push_back({0, 1, 0, 0, 1.0});
    DeterministicStrategy s = DeterministicStrategy::filled(3, 2, 2);
    s.label(1, 1) = 1;  // z row, site 1 -> -1
    CHECK(evaluate_strategy(q, s) == 1.0 + 2.0 + 3.0 + 1.0);

    BellInequality g;
    g.scenario = {2, 2, 3, 1, Boundary::obc, false, false};
    g.general_terms.push_back({0, 1, {0, 1}, {2, 1}, 5.0});
    DeterministicStrategy t = DeterministicStrategy::filled(2, 2, 3);
    CHECK(evaluate_strategy(g, t) == 0.0);
    t.label(0, 0) = 2;
    t.label(1, 1) = 1;
    CHECK(evaluate_strategy(g, t) == 5.0);
}

TEST_CASE("integral coefficient detection") {
    BellInequality q = tight8_inequality();
    CHECK(q.integral_coefficients());
    CHECK(q.coeff_abs_sum() == doctest::Approx(8.0 * 12.0));  // 8 sites x sum |gamma|
    q.terms[0].gamma = 0.5;
    CHECK_FALSE(q.integral_coefficients());
}

TEST_CASE("settings validation") {
    const BellInequality q = tight8_inequality();
    MeasurementSettings s = tight8_settings();
    CHECK_NOTHROW(s.validate(q.scenario));
    s.angles[0].pop_back();
    CHECK_THROWS_AS(s.validate(q.scenario), std::invalid_argument);
    MeasurementSettings per_site;
    per_site.shared = false;
    per_site.angles.assign(7, {0.0, 1.0});  // wrong site count
    CHECK_THROWS_AS(per_site.validate(q.scenario), std::invalid_argument);
}

TEST_CASE("compile rejects general-form instances") {
    BellInequality g;
    g.scenario = {2, 1, 3, 1, Boundary::obc, false, false};
    g.general_terms.push_back({0, 0, {0}, {0}, 1.0});
    g.validate();
    MeasurementSettings s;
    s.shared = true;
    s.angles = {{0.0}};
    CHECK_THROWS_AS(compile_hamiltonian(g, s), std::invalid_argument);
}

}  // TEST_SUITE
