#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"

#include "bellchain/families.hpp"
#include "bellchain/model.hpp"
#include "bellchain/oracle.hpp"
#include "bellchain/rng.hpp"
#include "helpers.hpp"

using namespace bellchain;

namespace {

oracle::DenseOperator z_field_pair() {
    oracle::DenseOperator op;
    op.n = 2;
    oracle::PauliTerm a;
    a.w = 1.0;
    a.ops = {3, 0};
    oracle::PauliTerm b;
    b.w = 1.0;
    b.ops = {0, 3};
    op.terms = {a, b};
    return op;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("bell operator is hermitian") {
    const BellInequality q = tight8_inequality();
    const auto op = oracle::dense_bell_operator(q, tight8_settings());
    CHECK(op.hermiticity_residual() <= 1e-12);
}

TEST_CASE("materialize agrees with matrix-free apply") {
    const BellInequality q = chained_inequality(2, 2, 0.5);
    const auto op = oracle::dense_bell_operator(q, chained_settings(2));
    const auto mat = op.materialize();
    const size_t dim = size_t{1} << op.n;
    std::vector<std::complex<double>> v(dim), w(dim);
    const uint64_t key = make_key(11, 22);
    for (size_t i = 0; i < dim; ++i)
        v[i] = {counter_uniform(key, 2 * i) - 0.5, counter_uniform(key, 2 * i + 1) - 0.5};
    op.apply(v.data(), w.data());
    for (size_t i = 0; i < dim; ++i) {
        std::complex<double> acc = 0.0;
        for (size_t j = 0; j < dim; ++j) acc += mat(static_cast<long>(i), static_cast<long>(j)) * v[j];
        CHECK(std::abs(acc - w[i]) <= 1e-10);
    }
}

TEST_CASE("ground energy of a pure z field") {
    const auto op = z_field_pair();
    CHECK(oracle::dense_ground_energy(op) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("doubled CHSH ring reaches -4 sqrt 2") {
    // Two sites on a ring: both links carry the CHSH block, so the quantum
    // optimum doubles the single-link Tsirelson value.
    const BellInequality q = chained_inequality(2, 1, 1.0);
    const auto op = oracle::dense_bell_operator(q, chained_settings(2));
    CHECK(oracle::dense_ground_energy(op) == doctest::Approx(-4.0 * std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("sector-resolved minima of a pure z field") {
    const auto op = z_field_pair();
    const auto [even, odd] = oracle::dense_sector_energies(op);
    CHECK(even == doctest::Approx(-2.0).epsilon(1e-12));  // |00>
    CHECK(odd == doctest::Approx(0.0).epsilon(1e-12));    // |01>, |10>
}

TEST_CASE("lanczos path matches full diagonalization") {
    // Appending an uncoupled site forces the iterative branch at n = 11
    // without changing the ground energy.
    const BellInequality q = tight8_inequality();
    auto op = oracle::dense_bell_operator(q, tight8_settings());
    const double full = oracle::dense_ground_energy(op);
    oracle::DenseOperator wide = op;
    wide.n = 11;
    const double iterative = oracle::dense_ground_energy(wide);
    CHECK(iterative == doctest::Approx(full).epsilon(1e-9));
}

TEST_CASE("exhaustive classical bound on a single chained pair") {
    const BellInequality q = chained_inequality(2, 1, 0.0);
    const auto res = oracle::exhaustive_classical_bound(q);
    CHECK(res.classical_minimum == -4.0);
    CHECK(res.beta_c == 4.0);
    REQUIRE(res.witness.complete());
    CHECK(evaluate_strategy(q, res.witness) == -4.0);
}

TEST_CASE("exhaustive witness is lexicographically minimal") {
    // A zero inequality is minimized by every strategy; the reported witness
    // must be the all-zero labeling.
    BellInequality q;
    q.scenario = {3, 2, 2, 1, Boundary::obc, false, false};
    q.one_body.assign(3, 0.0);
    q.terms.push_back({0, 1, 0, 0, 0.0});
    q.validate();
    const auto res = oracle::exhaustive_classical_bound(q);
    for (int row = 0; row < q.scenario.rows(); ++row)
        for (int i = 0; i < q.scenario.n; ++i)
            CHECK(res.witness.label(row, i) == 0);
}

TEST_CASE("z-basis expectation of a product state") {
    const BellInequality q = tight8_inequality();
    const auto op = oracle::dense_bell_operator(q, tight8_settings());
    DeterministicStrategy s = DeterministicStrategy::filled(8, 3, 2);
    // The tight8 operator is purely off-diagonal in the z basis.
    CHECK(oracle::dense_zbasis_expectation(op, s) == doctest::Approx(0.0).epsilon(1e-12));

    oracle::DenseOperator zz;
    zz.n = 2;
    oracle::PauliTerm zzt;
    zzt.w = 3.0;
    zzt.ops = {3, 3};
    zz.terms.push_back(zzt);
    DeterministicStrategy t = DeterministicStrategy::filled(2, 1, 2);
    t.label(0, 1) = 1;
    CHECK(oracle::dense_zbasis_expectation(zz, t) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("observable override reproduces the planar operator") {
    const BellInequality q = chained_inequality(2, 2, 0.7);
    const MeasurementSettings s = chained_settings(2);
    const auto direct = oracle::dense_bell_operator(q, s);

    const std::complex<double> im(0.0, 1.0);
    Eigen::Matrix2cd sx, sy;
    sx << 0, 1, 1, 0;
    sy << 0, -im, im, 0;
    std::vector<std::vector<Eigen::Matrix2cd>> obs(4);
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 2; ++k) {
            const double phi = s.angle(i, k);
            obs[static_cast<size_t>(i)].push_back(std::cos(phi) * sx + std::sin(phi) * sy);
        }
    }
    const auto rebuilt = oracle::dense_with_observables(q, obs);
    const auto a = direct.materialize();
    const auto b = rebuilt.materialize();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("parity transform leaves dense operators invariant") {
    CHECK(oracle::dense_parity_transform_check(4, 10, make_key(5, 6)) <= 1e-9);
}

}  // TEST_SUITE
