#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "pa/errors.hpp"
#include "pa/optimizer.hpp"
#include "pa/rng.hpp"
#include "testutil.hpp"

using namespace pa;

namespace {

// Reference Adam on a single scalar, written independently of the library path.
struct ScalarAdam {
    double m = 0.0;
    double v = 0.0;
    int t = 0;

    double update(double grad, double lr, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8) {
        ++t;
        m = beta1 * m + (1.0 - beta1) * grad;
        v = beta2 * v + (1.0 - beta2) * grad * grad;
        const double m_hat = m / (1.0 - std::pow(beta1, t));
        const double v_hat = v / (1.0 - std::pow(beta2, t));
        return lr * m_hat / (std::sqrt(v_hat) + eps);
    }
};

} // namespace

TEST_CASE("zero gradient leaves parameters untouched") {
    Matrix p = Matrix::from_rows({{1.5, -2.0}, {0.25, 3.0}});
    const Matrix zero(2, 2, 0.0);
    AdamState state = AdamState::for_shape(2, 2);
    const auto [next, updated] = adam_step(std::move(state), p, zero, 0.001);
    CHECK(updated == p);
    CHECK(next.step_count == 1);
}

TEST_CASE("first Adam step moves a scalar by about lr") {
    Matrix p = Matrix::from_rows({{1.0}});
    Matrix grad = Matrix::from_rows({{1.0}});
    AdamState state = AdamState::for_shape(1, 1);
    const auto [next, updated] = adam_step(std::move(state), std::move(p), grad, 0.001);
    // bias-corrected first step: lr * 1 / (1 + eps)
    CHECK(std::abs((1.0 - updated(0, 0)) - 0.001) < 1e-9);
}

TEST_CASE("consecutive constant-gradient steps track a scalar reference") {
    Matrix p = Matrix::from_rows({{0.0}});
    const Matrix grad = Matrix::from_rows({{0.37}});
    AdamState state = AdamState::for_shape(1, 1);
    ScalarAdam reference;
    double reference_p = 0.0;
    for (int step = 0; step < 2; ++step) {
        const double before = p(0, 0);
        auto [next_state, next_p] = adam_step(std::move(state), std::move(p), grad, 0.01);
        state = std::move(next_state);
        p = std::move(next_p);
        const double moved = std::abs(p(0, 0) - before);

        const double reference_delta = reference.update(0.37, 0.01);
        reference_p -= reference_delta;
        CHECK(moved == doctest::Approx(std::abs(reference_delta)).epsilon(0.01));
    }
    CHECK(p(0, 0) == doctest::Approx(reference_p).epsilon(1e-12));
}

TEST_CASE("non-finite gradients are rejected") {
    Matrix p = Matrix::from_rows({{1.0}});
    Matrix grad = Matrix::from_rows({{std::numeric_limits<double>::quiet_NaN()}});
    CHECK_THROWS_AS(adam_step(AdamState::for_shape(1, 1), p, grad, 0.001), NonFiniteGradient);
    grad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(adam_step(AdamState::for_shape(1, 1), p, grad, 0.001), NonFiniteGradient);
}

TEST_CASE("zero iterations is a no-op") {
    Rng rng(1);
    const Matrix x = testutil::random_matrix(10, 2, rng);
    const auto anchors = testutil::anchors_from(testutil::random_matrix(4, 2, rng));
    PrototypeSet protos;
    protos.current = testutil::random_matrix(5, 2, rng);
    protos.start = protos.current;
    const PrototypeSet out =
        optimize_prototypes(x, anchors, protos, Gamma(0.5), 10.0, 0, 0.001);
    CHECK(out.current == protos.current);
    CHECK(out.start == protos.start);
}

TEST_CASE("start positions are bit-identical after optimization") {
    Rng rng(2);
    const Matrix x = testutil::random_matrix(20, 2, rng);
    const auto anchors = testutil::anchors_from(testutil::random_matrix(5, 2, rng));
    PrototypeSet protos;
    protos.start = testutil::random_matrix(6, 2, rng);
    protos.current = protos.start;
    const Matrix start_copy = protos.start;
    const PrototypeSet out =
        optimize_prototypes(x, anchors, std::move(protos), Gamma(0.5), 10.0, 50, 0.001);
    CHECK(out.start == start_copy);
    CHECK_FALSE(out.current == start_copy); // the regularizer pushed prototypes away
}

TEST_CASE("lambda = 0 never references the start positions") {
    Rng rng(3);
    const Matrix x = testutil::random_matrix(18, 2, rng);
    const auto anchors = testutil::anchors_from(testutil::random_matrix(5, 2, rng));
    PrototypeSet a;
    a.current = testutil::random_matrix(7, 2, rng);
    a.start = a.current;
    PrototypeSet b = a;
    for (double& v : b.start.data()) v += 123.456; // arbitrary perturbation

    const PrototypeSet out_a =
        optimize_prototypes(x, anchors, a, Gamma(0.5), 0.0, 40, 0.001);
    const PrototypeSet out_b =
        optimize_prototypes(x, anchors, b, Gamma(0.5), 0.0, 40, 0.001);
    CHECK(out_a.current == out_b.current);
}

TEST_CASE("identical inputs produce identical trajectories") {
    Rng rng(4);
    const Matrix x = testutil::random_matrix(15, 2, rng);
    const auto anchors = testutil::anchors_from(testutil::random_matrix(4, 2, rng));
    PrototypeSet protos;
    protos.current = testutil::random_matrix(5, 2, rng);
    protos.start = protos.current;
    const PrototypeSet a =
        optimize_prototypes(x, anchors, protos, Gamma(0.5), 10.0, 30, 0.001);
    const PrototypeSet b =
        optimize_prototypes(x, anchors, protos, Gamma(0.5), 10.0, 30, 0.001);
    CHECK(a.current == b.current);
}

TEST_CASE("stationary start stays stationary without regularization") {
    Rng rng(5);
    const Matrix x = testutil::random_matrix(12, 2, rng);
    const auto anchors = testutil::anchors_from(testutil::random_matrix(4, 2, rng));
    PrototypeSet protos;
    protos.current = x; // exact loss-0 configuration
    protos.start = x;
    std::vector<double> trace;
    optimize_prototypes(x, anchors, protos, Gamma(0.5), 0.0, 25, 0.001,
                        [&](std::size_t, double loss) { trace.push_back(loss); });
    REQUIRE(trace.size() == 26);
    for (double loss : trace) CHECK(loss < trace.front() + 1e-9);
    CHECK(trace.front() == 0.0);
}

TEST_CASE("default-parameter runs mostly descend") {
    std::size_t improved = 0;
    const std::size_t runs = 20;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        Rng rng(sub_seed(seed, "descent-test"));
        const Matrix x = testutil::random_matrix(30, 2, rng);
        const auto anchors = testutil::anchors_from(testutil::random_matrix(8, 2, rng));
        PrototypeSet protos;
        protos.start = testutil::random_matrix(10, 2, rng);
        protos.current = protos.start;
        std::vector<double> trace;
        optimize_prototypes(x, anchors, protos, Gamma(0.5), 10.0, 60, 0.001,
                            [&](std::size_t, double loss) { trace.push_back(loss); });
        if (trace.back() <= trace.front()) ++improved;
        for (double loss : trace) CHECK(std::isfinite(loss));
    }
    CHECK(improved >= runs - 1);
}

TEST_CASE("empty prototype sets pass through untouched") {
    Rng rng(6);
    const Matrix x = testutil::random_matrix(10, 2, rng);
    const auto anchors = testutil::anchors_from(testutil::random_matrix(3, 2, rng));
    PrototypeSet protos;
    protos.current = Matrix(0, 2);
    protos.start = Matrix(0, 2);
    const PrototypeSet out =
        optimize_prototypes(x, anchors, protos, Gamma(0.5), 10.0, 100, 0.001);
    CHECK(out.current.rows() == 0);
}
