#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "mmrx/equalizer.hpp"
#include "mmrx/rng.hpp"
#include "oracles.hpp"

using namespace mmrx;
using namespace mmrx::equalizer;

namespace {

CMatrix random_h(std::uint64_t seed, std::size_t n, std::size_t u) {
    auto gen = make_stream(seed, Stream::kTest, {n, u});
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    CMatrix h(n, u);
    for (auto& v : h.flat()) v = {nd(gen), nd(gen)};
    return h;
}

std::vector<std::vector<cplx>> rows(const CMatrix& m) {
    std::vector<std::vector<cplx>> out(m.rows(), std::vector<cplx>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

}  // namespace

TEST_CASE("gram matrix and matched filter against the naive products") {
    const auto h = random_h(1, 64, 8);
    const auto g = gram(h);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            cplx want{};
            for (std::size_t r = 0; r < 64; ++r) want += std::conj(h(r, i)) * h(r, j);
            CHECK(std::abs(g.g(i, j) - want) < 1e-12);
        }
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(g.g(i, i).imag() == 0.0);
        for (std::size_t j = 0; j < 8; ++j) CHECK(g.g(i, j) == std::conj(g.g(j, i)));
    }
    CHECK(g.ops == OpCount{8128, 8192});

    std::vector<cplx> y(64);
    for (std::size_t r = 0; r < 64; ++r) y[r] = cplx(std::sin(double(r)), std::cos(3.0 * double(r)));
    const auto mf = matched_filter(h, y);
    for (std::size_t u = 0; u < 8; ++u) {
        cplx want{};
        for (std::size_t r = 0; r < 64; ++r) want += std::conj(h(r, u)) * y[r];
        CHECK(std::abs(mf.v[u] - want) < 1e-12);
    }
    CHECK(mf.ops == OpCount{2032, 2048});
    CHECK_THROWS_AS(matched_filter(h, std::vector<cplx>(63)), std::invalid_argument);
}

TEST_CASE("operation count formulas") {
    CHECK(gram_ops(1, 1) == OpCount{1, 2});
    CHECK(gram_ops(2, 2) == OpCount{12, 16});
    CHECK(matched_filter_ops(3, 2) == OpCount{20, 24});
    CHECK(diag_load_ops(8) == OpCount{16, 0});
    CHECK(matvec_ops(8) == OpCount{240, 256});
    CHECK(inverse_charge(8) == OpCount{1700, 1900});
    CHECK(inverse_charge(4).mults > 0);
}

TEST_CASE("real-valued expansion") {
    CMatrix g(2, 2);
    g(0, 0) = 2.0;
    g(0, 1) = cplx(1.0, 1.0);
    g(1, 0) = cplx(1.0, -1.0);
    g(1, 1) = 3.0;
    const std::vector<cplx> v{{1.0, 2.0}, {3.0, -1.0}};
    const auto sys = realify(g, v);
    const double want[4][4] = {{2, 1, 0, -1}, {1, 3, 1, 0}, {0, 1, 2, 1}, {-1, 0, 1, 3}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(sys.a(i, j) == want[i][j]);
    CHECK(sys.b == std::vector<double>{1, 3, 2, -1});

    // Solving the real system and recombining solves the complex one.
    std::vector<std::vector<double>> a(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = want[i][j];
    const auto xr = oracle::gauss_jordan(a, sys.b);
    const auto x = recombine(xr);
    const auto xc = oracle::gauss_jordan(rows(g), v);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(x[i] - xc[i]) < 1e-12);

    CMatrix bad = g;
    bad(1, 0) = cplx(1.0, 1.0);
    CHECK_THROWS_AS(realify(bad, v), std::invalid_argument);
    CHECK_THROWS_AS(recombine(std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("mmse detector against a dense solve") {
    const auto h = random_h(4, 16, 4);
    const auto g = gram(h).g;
    std::vector<cplx> v{{1, 0}, {0, -1}, {0.5, 0.5}, {-2, 0.1}};
    const double reg = 0.3;
    auto loaded = rows(g);
    for (int i = 0; i < 4; ++i) loaded[i][i] += reg;
    const auto want = oracle::gauss_jordan(loaded, v);
    const auto res = mmse_detect(g, v, reg);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(res.x[i] - want[i]) < 1e-10);
    CHECK(res.diag_load == OpCount{8, 0});
    CHECK(res.matvec == matvec_ops(4));
    CHECK(res.measured_factor.mults > 0);
    CHECK(res.measured_solve.adds > 0);

    // Unbiased: each output divided by diag((G + rI)^{-1} G).
    const auto inv = oracle::inverse(loaded);
    const auto ub = mmse_detect(g, v, reg, true);
    for (int i = 0; i < 4; ++i) {
        cplx d{};
        for (int j = 0; j < 4; ++j) d += inv[i][j] * g(j, i);
        CHECK(std::abs(ub.x[i] - want[i] / d.real()) < 1e-9);
    }
    CHECK_THROWS_AS(mmse_detect(g, v, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mmse_detect(g, std::vector<cplx>(3), 1.0), std::invalid_argument);
}

TEST_CASE("dcd detection solves the complex system") {
    const auto h = random_h(5, 32, 4);
    const auto g = gram(h).g;
    std::vector<cplx> x0{{0.3, -0.1}, {-0.2, 0.4}, {0.1, 0.1}, {-0.3, -0.3}};
    std::vector<cplx> v(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v[i] += g(i, j) * x0[j];
    const auto a = realify(g, v).a;
    const auto det = dcd_detect(a, v, {INFINITY, 1.0, dcd::kUnlimitedUpdates, 30});
    for (int i = 0; i < 4; ++i) CHECK(std::abs(det.x[i] - x0[i]) < 1e-6);
    CHECK(det.ledger.multiplications == 0);
}

TEST_CASE("16-QAM mapping") {
    const double s = kQam16Scale;
    CHECK(s == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-15));
    const auto corner = qam16_map(std::vector<std::uint8_t>{0, 0, 1, 1});
    CHECK(std::abs(corner[0] - cplx(3.0, 3.0) * s) < 1e-15);
    const auto inner = qam16_map(std::vector<std::uint8_t>{1, 0, 0, 0});
    CHECK(std::abs(inner[0] - cplx(-1.0, 1.0) * s) < 1e-15);

    std::vector<std::uint8_t> all;
    for (int m = 0; m < 16; ++m)
        for (int b = 0; b < 4; ++b) all.push_back((m >> b) & 1);
    const auto pts = qam16_map(all);
    double energy = 0.0;
    std::set<std::pair<double, double>> distinct;
    for (auto p : pts) {
        energy += std::norm(p);
        distinct.insert({p.real(), p.imag()});
        CHECK(std::fabs(p.real()) < qam16_bound());
        CHECK(std::fabs(p.imag()) < qam16_bound());
    }
    CHECK(energy / 16.0 == doctest::Approx(1.0));
    CHECK(distinct.size() == 16);
    CHECK(demap_qam16(pts) == all);

    // Gray labelling: horizontal neighbours differ in one bit.
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (pts[i].imag() != pts[j].imag()) continue;
            if (std::fabs(std::fabs(pts[i].real() - pts[j].real()) - 2.0 * s) > 1e-12) continue;
            int diff = 0;
            for (int b = 0; b < 4; ++b) diff += all[4 * i + b] != all[4 * j + b];
            CHECK(diff == 1);
        }

    CHECK(qam16_bound() > 3.0 * s);
    CHECK(std::nextafter(qam16_bound(), 0.0) == 3.0 * s);
    CHECK(dcd::recommended_step(qam16_bound()) == 0.5);
    CHECK_THROWS_AS(qam16_map(std::vector<std::uint8_t>{0, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(qam16_map(std::vector<std::uint8_t>{0, 2, 0, 0}), std::invalid_argument);
}
