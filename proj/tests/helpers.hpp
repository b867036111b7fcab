#pragma once

// Shared generators for randomized cross-checks.  Everything is keyed
// counter-mode so failures reproduce from the reported seed alone.

#include <Eigen/Dense>
#include <vector>

#include "bellchain/model.hpp"
#include "bellchain/rng.hpp"

namespace testgen {

// Random structured two-outcome inequality; exhaustive-enumeration sized.
inline bellchain::BellInequality random_structured(uint64_t key) {
    using namespace bellchain;
    uint64_t c = 0;
    BellInequality q;
    q.scenario.n = counter_int(key, c++, 2, 5);
    q.scenario.m = counter_int(key, c++, 1, 3);
    q.scenario.d = 2;
    q.scenario.R = counter_int(key, c++, 1, std::min(2, q.scenario.n - 1));
    q.scenario.boundary = counter_int(key, c++, 0, 1) ? Boundary::pbc : Boundary::obc;
    q.scenario.ti = false;
    q.scenario.has_z = counter_int(key, c++, 0, 1) == 1;
    q.one_body.assign(static_cast<size_t>(q.scenario.n), 0.0);
    if (q.scenario.has_z)
        for (int i = 0; i < q.scenario.n; ++i)
            q.one_body[static_cast<size_t>(i)] = counter_int(key, c++, -3, 3);
    const int terms = counter_int(key, c++, 1, 8);
    for (int t = 0; t < terms; ++t) {
        StructuredTerm st;
        st.r = q.scenario.has_z ? counter_int(key, c++, 1, q.scenario.R) : 1;
        const int max_i = q.scenario.boundary == Boundary::obc ? q.scenario.n - 1 - st.r
                                                               : q.scenario.n - 1;
        st.i = counter_int(key, c++, 0, max_i);
        st.k = counter_int(key, c++, 0, q.scenario.m - 1);
        st.l = counter_int(key, c++, 0, q.scenario.m - 1);
        st.gamma = counter_int(key, c++, -3, 3);
        if (st.gamma == 0.0) st.gamma = 1.0;
        q.terms.push_back(st);
    }
    q.validate();
    return q;
}

// Random general-form inequality with d in {2, 3}.
inline bellchain::BellInequality random_general(uint64_t key) {
    using namespace bellchain;
    uint64_t c = 0;
    BellInequality q;
    q.scenario.d = counter_int(key, c++, 2, 3);
    q.scenario.n = counter_int(key, c++, 2, q.scenario.d == 3 ? 4 : 5);
    q.scenario.m = counter_int(key, c++, 1, q.scenario.d == 3 ? 2 : 3);
    q.scenario.R = counter_int(key, c++, 1, std::min(2, q.scenario.n - 1));
    q.scenario.boundary = counter_int(key, c++, 0, 1) ? Boundary::pbc : Boundary::obc;
    const int terms = counter_int(key, c++, 1, 8);
    for (int t = 0; t < terms; ++t) {
        GeneralTerm gt;
        gt.r = counter_int(key, c++, 0, q.scenario.R);
        const int max_i = q.scenario.boundary == Boundary::obc ? q.scenario.n - 1 - gt.r
                                                               : q.scenario.n - 1;
        gt.i = counter_int(key, c++, 0, max_i);
        for (int u = 0; u <= gt.r; ++u) {
            gt.settings.push_back(counter_int(key, c++, 0, q.scenario.m - 1));
            gt.outcomes.push_back(counter_int(key, c++, 0, q.scenario.d - 1));
        }
        gt.gamma = counter_int(key, c++, -3, 3);
        if (gt.gamma == 0.0) gt.gamma = -1.0;
        q.general_terms.push_back(gt);
    }
    q.validate();
    return q;
}

// Random measurement settings for a scenario (shared planar angles).
inline bellchain::MeasurementSettings random_settings(uint64_t key,
                                                      const bellchain::BellScenario& sc) {
    bellchain::MeasurementSettings s;
    s.shared = true;
    s.angles.assign(1, {});
    for (int k = 0; k < sc.m; ++k)
        s.angles[0].push_back(6.283185307179586 * bellchain::counter_uniform(key, 100 + k));
    return s;
}

// Random compiled chain with dense couplings; ti = true makes every site
// share the same coefficients.
inline bellchain::SpinHamiltonian random_hamiltonian(uint64_t key, int n, int R,
                                                     bellchain::Boundary bc, bool ti) {
    using namespace bellchain;
    SpinHamiltonian h = SpinHamiltonian::zero(n, R, bc);
    uint64_t c = 0;
    auto draw = [&]() { return 2.0 * counter_uniform(key, c++) - 1.0; };
    if (ti) {
        const double z = draw();
        for (int i = 0; i < n; ++i) h.one_body[static_cast<size_t>(i)] = z;
        for (int r = 1; r <= R; ++r)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double v = draw();
                    for (int i = 0; i < n; ++i) h.t(i, r, a, b) = v;
                }
    } else {
        for (int i = 0; i < n; ++i) h.one_body[static_cast<size_t>(i)] = draw();
        for (int i = 0; i < n; ++i)
            for (int r = 1; r <= R; ++r) {
                if (bc == Boundary::obc && i + r >= n) continue;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) h.t(i, r, a, b) = draw();
            }
    }
    return h;
}

// Random orthogonal matrix as a product of Householder reflections.
inline Eigen::MatrixXd random_orthogonal(uint64_t key, int n, int reflections) {
    Eigen::MatrixXd O = Eigen::MatrixXd::Identity(n, n);
    uint64_t c = 0;
    for (int r = 0; r < reflections; ++r) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = 2.0 * bellchain::counter_uniform(key, c++) - 1.0;
        const double nv = v.norm();
        if (nv < 1e-12) continue;
        v /= nv;
        O = O - 2.0 * (O * v) * v.transpose();
    }
    return O;
}

}  // namespace testgen
