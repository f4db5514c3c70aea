#pragma once

// Frequency-selective block-fading MIMO channel with an exponential power
// delay profile, and its application to per-user transmit grids.

#include <cstdint>
#include <span>
#include <vector>

#include "mmrx/types.hpp"

namespace mmrx::channel {

struct PdpConfig {
    double tau_rms = 0.01 / 120e3;  // s; tau_rms * delta_f = 0.01
    double delta_f = 120e3;         // Hz
    std::size_t num_taps = 16;      // propagation paths per antenna/user link
    std::size_t cp_len = 32;        // samples
    std::size_t fft_size = 128;

    double sample_period() const { return 1.0 / (static_cast<double>(fft_size) * delta_f); }
    double cp_duration() const { return static_cast<double>(cp_len) * sample_period(); }
    // Throws std::invalid_argument on an invalid profile.
    void validate() const;
};

// E[h_i h_j^*] for the exponential PDP: 1 / (1 - j 2 pi tau_rms delta_f (i - j)).
cplx freq_correlation(long i, long j, const PdpConfig& pdp);

class ChannelRealization {
public:
    ChannelRealization(std::size_t n_rx, std::size_t n_users, std::size_t num_subcarriers,
                       PdpConfig pdp);

    std::size_t n_rx() const { return n_rx_; }
    std::size_t n_users() const { return n_users_; }
    std::size_t num_subcarriers() const { return k_; }
    const PdpConfig& pdp() const { return pdp_; }

    cplx& at(std::size_t r, std::size_t u, std::size_t k) { return h_[(r * n_users_ + u) * k_ + k]; }
    cplx at(std::size_t r, std::size_t u, std::size_t k) const { return h_[(r * n_users_ + u) * k_ + k]; }

    // Frequency response of the (antenna r, user u) link over all subcarriers.
    std::span<cplx> response(std::size_t r, std::size_t u) { return {h_.data() + (r * n_users_ + u) * k_, k_}; }
    std::span<const cplx> response(std::size_t r, std::size_t u) const {
        return {h_.data() + (r * n_users_ + u) * k_, k_};
    }

private:
    std::size_t n_rx_, n_users_, k_;
    PdpConfig pdp_;
    std::vector<cplx> h_;
};

// Each link is a sum of pdp.num_taps paths with i.i.d. CN(0, 1/num_taps)
// gains and i.i.d. exponential delays (mean tau_rms, truncated at the CP).
// The expectation over delays is exactly freq_correlation(), and
// E|H|^2 = 1. Links use independent streams derived from rng_seed.
ChannelRealization gen_channel(const PdpConfig& pdp, std::size_t n_rx, std::size_t n_users,
                               std::size_t num_subcarriers, std::uint64_t rng_seed);

// Y_r = sum_u H_{r,u} . X_u + noise, noise CN(0, 10^(-snr_db/10)) so that the
// average per-user per-antenna SNR equals snr_db for unit-power X. Noise for
// antenna r comes from its own stream of noise_seed; it is drawn at unit
// variance and scaled, so different SNRs reuse the same noise shape.
std::vector<ResourceGrid> apply_channel(std::span<const ResourceGrid> tx, const ChannelRealization& h,
                                        double snr_db, std::uint64_t noise_seed);

// Same, without noise.
std::vector<ResourceGrid> apply_channel_noiseless(std::span<const ResourceGrid> tx,
                                                  const ChannelRealization& h);

double noise_variance(double snr_db);

}  // namespace mmrx::channel
