#include <cmath>
#include <random>

#include "doctest.h"
#include "mmrx/dcd.hpp"
#include "mmrx/rng.hpp"
#include "oracles.hpp"

using namespace mmrx;
using namespace mmrx::dcd;

namespace {

// Random symmetric positive definite A = M^T M / n + I / 2 and b ~ N(0, 1).
DcdProblem random_spd(std::uint64_t seed, std::size_t n) {
    auto gen = make_stream(seed, Stream::kTest, {n});
    std::normal_distribution<double> nd;
    RMatrix m(n, n);
    for (double& v : m.flat()) v = nd(gen);
    DcdProblem p;
    p.a = RMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n; ++t) acc += m(t, i) * m(t, j);
            p.a(i, j) = acc / static_cast<double>(n) + (i == j ? 0.5 : 0.0);
        }
    p.b.resize(n);
    for (double& v : p.b) v = nd(gen);
    return p;
}

std::vector<double> dense_solve(const DcdProblem& p) {
    const std::size_t n = p.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = p.a(i, j);
    return oracle::gauss_jordan(a, p.b);
}

}  // namespace

TEST_CASE("hand-executed 2x2 trace") {
    DcdProblem p;
    p.a = RMatrix::identity(2);
    p.b = {0.5, 0.25};
    p.h_step = 0.5;
    p.bound = 1.0;
    p.max_halvings = 8;
    const auto res = dcd_bound(p, true);
    const auto& led = res.ledger;
    REQUIRE(led.trace.size() == 2);
    CHECK(led.trace[0].pass == 0);
    CHECK(led.trace[0].coord == 0);
    CHECK(led.trace[0].delta == 0.5);
    CHECK(led.trace[0].r_before == 0.5);
    CHECK(led.trace[0].r_after == 0.0);
    CHECK(led.trace[1].pass == 2);
    CHECK(led.trace[1].coord == 1);
    CHECK(led.trace[1].delta == 0.25);
    CHECK(led.trace[1].r_after == 0.0);
    CHECK(led.accepted_updates == 2);
    CHECK(led.passes == 10);
    CHECK(led.final_step == 0.001953125);
    CHECK(led.comparisons == 22);
    CHECK(led.additions == 6);
    CHECK(led.bit_shifts == 32);
    CHECK(led.multiplications == 0);
    CHECK(led.total_additions() == 28);
    CHECK(res.x == std::vector<double>{0.5, 0.25});
    CHECK(res.r == std::vector<double>{0.0, 0.0});
}

TEST_CASE("update budget stops after the pass that reaches it") {
    DcdProblem p;
    p.a = RMatrix::identity(3);
    p.b = {0.5, -0.5, 0.5};
    p.h_step = 0.5;
    p.max_updates = 1;
    const auto res = dcd_bound(p, true);
    // All three coordinates update in the first pass before the check.
    CHECK(res.ledger.accepted_updates == 3);
    CHECK(res.ledger.passes == 1);
    CHECK(res.ledger.final_step == 0.5);
    CHECK(res.x == std::vector<double>{0.5, -0.5, 0.5});
}

TEST_CASE("box rejects candidates outside the bound") {
    DcdProblem p;
    p.a = RMatrix::identity(1);
    p.b = {5.0};
    p.h_step = 1.0;
    p.bound = 1.5;
    const auto res = dcd_bound(p, true);
    for (double x : res.x) CHECK(std::fabs(x) <= 1.5);
    CHECK(res.x[0] == 1.5);
    // The halving passes still compare.
    CHECK(res.ledger.comparisons > res.ledger.passes);
}

TEST_CASE("problem validation") {
    DcdProblem p;
    p.a = RMatrix::identity(2);
    p.b = {1.0, 1.0};
    p.h_step = 0.75;
    CHECK_THROWS_AS(dcd_bound(p), std::invalid_argument);
    p.h_step = 0.5;
    p.bound = 0.25;
    CHECK_THROWS_AS(dcd_bound(p), std::invalid_argument);
    p.bound = INFINITY;
    p.a(0, 1) = 0.1;
    CHECK_THROWS_AS(dcd_bound(p), std::invalid_argument);
    p.a(1, 0) = 0.1;
    CHECK_NOTHROW(dcd_bound(p));
    p.a(0, 0) = -1.0;
    CHECK_THROWS_AS(dcd_bound(p), std::invalid_argument);
    p.a = RMatrix::identity(3);
    CHECK_THROWS_AS(dcd_bound(p), std::invalid_argument);
    p.b.clear();
    p.a = RMatrix();
    CHECK_THROWS_AS(dcd_bound(p), std::invalid_argument);

    CHECK(recommended_step(0.9486832980505139) == 0.5);
    CHECK(recommended_step(1.0) == 1.0);
    CHECK(recommended_step(3.5) == 2.0);
    CHECK_THROWS_AS(recommended_step(0.0), std::invalid_argument);
    CHECK_THROWS_AS(recommended_step(INFINITY), std::invalid_argument);
}

TEST_CASE("converges to the dense solution") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 2 + seed % 15;
        auto p = random_spd(seed, n);
        p.h_step = 1.0;
        p.max_halvings = 30;
        const auto res = dcd_bound(p);
        const auto want = dense_solve(p);
        CAPTURE(seed);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(res.x[i] - want[i]) <= std::ldexp(1.0, -29) * double(n));
        CHECK(res.ledger.multiplications == 0);
    }
}

TEST_CASE("residual, grid and monotone residual properties") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const std::size_t n = 3 + seed % 10;
        auto p = random_spd(seed, n);
        p.h_step = 0.25;
        p.bound = 0.9;
        p.max_halvings = 10;
        const auto res = dcd_bound(p, true);
        CAPTURE(seed);
        for (std::size_t i = 0; i < n; ++i) {
            double ax = 0.0;
            for (std::size_t j = 0; j < n; ++j) ax += p.a(i, j) * res.x[j];
            CHECK(std::fabs(res.r[i] - (p.b[i] - ax)) < 1e-9);
            CHECK(std::fabs(res.x[i]) <= p.bound);
            const double q = res.x[i] / res.ledger.final_step;
            CHECK(q == std::round(q));
        }
        // Each accepted step shrinks the updated residual entry.
        for (const auto& u : res.ledger.trace) CHECK(std::fabs(u.r_after) < std::fabs(u.r_before));
    }
}
