#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mmrx/channel.hpp"

using namespace mmrx;
using namespace mmrx::channel;

TEST_CASE("frequency correlation closed form") {
    PdpConfig pdp;
    CHECK(freq_correlation(3, 3, pdp) == cplx(1.0, 0.0));
    const cplx r1 = freq_correlation(1, 0, pdp);
    const double x = 2.0 * std::numbers::pi * 0.01;
    CHECK(std::abs(r1 - 1.0 / cplx(1.0, -x)) < 1e-15);
    CHECK(std::abs(freq_correlation(0, 1, pdp) - std::conj(r1)) < 1e-15);
    CHECK(std::abs(freq_correlation(7, 3, pdp) - freq_correlation(4, 0, pdp)) < 1e-15);
    PdpConfig flat;
    flat.tau_rms = 0.0;
    CHECK(freq_correlation(5, 0, flat) == cplx(1.0, 0.0));
}

TEST_CASE("profile validation") {
    PdpConfig p;
    CHECK_NOTHROW(p.validate());
    p.tau_rms = -1e-9;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.num_taps = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.tau_rms = p.cp_duration();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.tau_rms = 0.0;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("channel generation is deterministic and seed dependent") {
    PdpConfig pdp;
    const auto a = gen_channel(pdp, 4, 3, 16, 11);
    const auto b = gen_channel(pdp, 4, 3, 16, 11);
    const auto c = gen_channel(pdp, 4, 3, 16, 12);
    bool same = true, differs = false;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t k = 0; k < 16; ++k) {
                same = same && a.at(r, u, k) == b.at(r, u, k);
                differs = differs || a.at(r, u, k) != c.at(r, u, k);
            }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("zero delay spread gives a flat response") {
    PdpConfig pdp;
    pdp.tau_rms = 0.0;
    const auto h = gen_channel(pdp, 2, 2, 8, 5);
    for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(h.at(1, 1, k) - h.at(1, 1, 0)) < 1e-12);
}

TEST_CASE("channel statistics at moderate sample size") {
    // Smaller version of the acceptance run: 2 x 10^4 links.
    PdpConfig pdp;
    pdp.tau_rms = 0.05 / pdp.delta_f;
    const auto h = gen_channel(pdp, 200, 100, 5, 3);
    const double n = 200.0 * 100.0;
    double p = 0.0;
    cplx c2{};
    for (std::size_t r = 0; r < 200; ++r)
        for (std::size_t u = 0; u < 100; ++u) {
            p += std::norm(h.at(r, u, 0));
            c2 += h.at(r, u, 2) * std::conj(h.at(r, u, 0));
        }
    p /= n;
    c2 /= n;
    // sd of |h|^2 is 1 for CN(0,1); sd of the product is about 1 per rail.
    CHECK(std::abs(p - 1.0) < 4.0 / std::sqrt(n));
    CHECK(std::abs(c2 - freq_correlation(2, 0, pdp)) < 4.0 / std::sqrt(n));
}

TEST_CASE("apply channel superposes users and scales unit noise") {
    PdpConfig pdp;
    const std::size_t K = 8, L = 3;
    const auto h = gen_channel(pdp, 3, 2, K, 9);
    std::vector<ResourceGrid> tx(2, ResourceGrid(K, L));
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t n = 0; n < K * L; ++n) tx[u].flat()[n] = cplx(static_cast<double>(n) + 1.0, static_cast<double>(u) - 0.5);

    const auto clean = apply_channel_noiseless(tx, h);
    REQUIRE(clean.size() == 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t k = 0; k < K; ++k) {
                const cplx want = h.at(r, 0, k) * tx[0](k, l) + h.at(r, 1, k) * tx[1](k, l);
                CHECK(std::abs(clean[r](k, l) - want) < 1e-12);
            }

    const auto y0 = apply_channel(tx, h, 0.0, 77);
    const auto y10 = apply_channel(tx, h, 10.0, 77);
    const double s0 = std::sqrt(noise_variance(0.0)), s10 = std::sqrt(noise_variance(10.0));
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t n = 0; n < K * L; ++n) {
            const cplx w0 = (y0[r].flat()[n] - clean[r].flat()[n]) / s0;
            const cplx w10 = (y10[r].flat()[n] - clean[r].flat()[n]) / s10;
            CHECK(std::abs(w0 - w10) < 1e-9);
        }
    CHECK(noise_variance(10.0) == doctest::Approx(0.1));
    CHECK(noise_variance(-20.0) == doctest::Approx(100.0));

    std::vector<ResourceGrid> wrong(2, ResourceGrid(K + 2, L));
    CHECK_THROWS_AS(apply_channel_noiseless(wrong, h), std::invalid_argument);
}

TEST_CASE("noise power matches the SNR definition") {
    PdpConfig pdp;
    const std::size_t K = 64, L = 14;
    const auto h = gen_channel(pdp, 16, 1, K, 1);
    std::vector<ResourceGrid> tx(1, ResourceGrid(K, L));
    const auto clean = apply_channel_noiseless(tx, h);
    const auto y = apply_channel(tx, h, 3.0, 5);
    double p = 0.0;
    std::size_t n = 0;
    for (const auto& g : y)
        for (cplx v : g.flat()) {
            p += std::norm(v);
            ++n;
        }
    p /= static_cast<double>(n);
    CHECK(p == doctest::Approx(noise_variance(3.0)).epsilon(0.05));
}
