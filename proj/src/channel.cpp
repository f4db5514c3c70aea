#include "mmrx/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mmrx/rng.hpp"
#include "mmrx/simd/kernels.hpp"

namespace mmrx::channel {

void PdpConfig::validate() const {
    if (!(tau_rms >= 0.0) || !std::isfinite(tau_rms)) throw std::invalid_argument("PdpConfig: tau_rms must be finite and >= 0");
    if (!(delta_f > 0.0)) throw std::invalid_argument("PdpConfig: delta_f must be positive");
    if (num_taps == 0) throw std::invalid_argument("PdpConfig: num_taps must be positive");
    if (fft_size == 0) throw std::invalid_argument("PdpConfig: fft_size must be positive");
    if (num_taps > cp_len) throw std::invalid_argument("PdpConfig: tap span exceeds the cyclic prefix");
    if (tau_rms >= cp_duration()) throw std::invalid_argument("PdpConfig: delay spread exceeds the cyclic prefix");
}

cplx freq_correlation(long i, long j, const PdpConfig& pdp) {
    const double d = static_cast<double>(i - j);
    return 1.0 / cplx(1.0, -2.0 * std::numbers::pi * pdp.tau_rms * pdp.delta_f * d);
}

ChannelRealization::ChannelRealization(std::size_t n_rx, std::size_t n_users, std::size_t num_subcarriers,
                                       PdpConfig pdp)
    : n_rx_(n_rx), n_users_(n_users), k_(num_subcarriers), pdp_(pdp), h_(n_rx * n_users * num_subcarriers) {}

ChannelRealization gen_channel(const PdpConfig& pdp, std::size_t n_rx, std::size_t n_users,
                               std::size_t num_subcarriers, std::uint64_t rng_seed) {
    pdp.validate();
    if (n_rx == 0 || n_users == 0 || num_subcarriers == 0) {
        throw std::invalid_argument("gen_channel: dimensions must be positive");
    }
    ChannelRealization out(n_rx, n_users, num_subcarriers, pdp);

    const std::size_t L = pdp.num_taps;
    const double gain_sigma = std::sqrt(0.5 / static_cast<double>(L));
    // P(delay <= cp) for the untruncated exponential.
    const double cp_mass = pdp.tau_rms > 0.0 ? -std::expm1(-pdp.cp_duration() / pdp.tau_rms) : 1.0;

    std::vector<cplx> gains(L);
    std::vector<double> omega(L);
    for (std::size_t r = 0; r < n_rx; ++r) {
        for (std::size_t u = 0; u < n_users; ++u) {
            auto rng = make_stream(rng_seed, Stream::kChannel, {r, u});
            std::normal_distribution<double> gauss(0.0, gain_sigma);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (std::size_t l = 0; l < L; ++l) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                gains[l] = {re, im};
                const double v = unif(rng);
                const double delay = pdp.tau_rms > 0.0 ? -pdp.tau_rms * std::log1p(-v * cp_mass) : 0.0;
                omega[l] = 2.0 * std::numbers::pi * pdp.delta_f * delay;
            }
            // Phase sign makes E[h_i h_j^*] = freq_correlation(i, j).
            auto resp = out.response(r, u);
            for (std::size_t k = 0; k < num_subcarriers; ++k) {
                cplx acc{0.0, 0.0};
                const double kk = static_cast<double>(k);
                for (std::size_t l = 0; l < L; ++l) acc += gains[l] * std::polar(1.0, omega[l] * kk);
                resp[k] = acc;
            }
        }
    }
    return out;
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

namespace {

std::vector<ResourceGrid> superpose(std::span<const ResourceGrid> tx, const ChannelRealization& h) {
    if (tx.size() != h.n_users()) throw std::invalid_argument("apply_channel: number of transmit grids != users");
    if (tx.empty()) throw std::invalid_argument("apply_channel: no users");
    const std::size_t K = tx.front().num_subcarriers();
    const std::size_t L = tx.front().num_symbols();
    if (K != h.num_subcarriers()) throw std::invalid_argument("apply_channel: subcarrier count mismatch");
    for (const auto& g : tx) {
        if (!g.same_shape(tx.front())) throw std::invalid_argument("apply_channel: transmit grids differ in shape");
    }
    const auto& kern = simd::active();
    std::vector<ResourceGrid> rx(h.n_rx(), ResourceGrid(K, L));
    for (std::size_t r = 0; r < h.n_rx(); ++r) {
        for (std::size_t u = 0; u < h.n_users(); ++u) {
            const auto resp = h.response(r, u);
            for (std::size_t l = 0; l < L; ++l) {
                kern.cmac(resp.data(), tx[u].symbol(l).data(), rx[r].symbol(l).data(), K);
            }
        }
    }
    return rx;
}

}  // namespace

std::vector<ResourceGrid> apply_channel_noiseless(std::span<const ResourceGrid> tx, const ChannelRealization& h) {
    return superpose(tx, h);
}

std::vector<ResourceGrid> apply_channel(std::span<const ResourceGrid> tx, const ChannelRealization& h,
                                        double snr_db, std::uint64_t noise_seed) {
    auto rx = superpose(tx, h);
    const double sigma = std::sqrt(noise_variance(snr_db) / 2.0);
    for (std::size_t r = 0; r < rx.size(); ++r) {
        auto rng = make_stream(noise_seed, Stream::kNoise, {r});
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (cplx& y : rx[r].flat()) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            y += cplx(sigma * re, sigma * im);
        }
    }
    return rx;
}

}  // namespace mmrx::channel
