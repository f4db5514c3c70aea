#pragma once

// Per-user 2x1D channel estimation: least-squares despreading on the pilot
// resource elements, MMSE smoothing/interpolation across frequency, then
// averaging across the DMRS symbols.

#include <span>
#include <vector>

#include "mmrx/channel.hpp"
#include "mmrx/refsig.hpp"
#include "mmrx/types.hpp"

namespace mmrx::chest {

// Banded frequency interpolator: output subcarrier k is a weighted sum of the
// band_size pilots nearest to it, starting at pilot index start(k).
class FreqInterpolator {
public:
    FreqInterpolator(std::size_t num_subcarriers, std::size_t num_pilots, std::size_t band_size);

    std::size_t num_subcarriers() const { return k_; }
    std::size_t num_pilots() const { return kp_; }
    std::size_t band_size() const { return kc_; }

    std::size_t start(std::size_t k) const { return start_[k]; }
    // Weight of pilot start(k) + j in output k.
    cplx weight(std::size_t k, std::size_t j) const { return std::conj(conj_w_[k * kc_ + j]); }

    // Applies the interpolator to one symbol's pilot values (length num_pilots).
    void apply(std::span<const cplx> pilots, std::span<cplx> out) const;

    // Dense K x K_p matrix with zeros outside each band.
    CMatrix dense() const;

private:
    friend FreqInterpolator build_Af(const refsig::PilotPattern&, const channel::PdpConfig&, double,
                                     std::size_t);
    std::size_t k_, kp_, kc_;
    std::vector<std::size_t> start_;
    std::vector<cplx> conj_w_;  // conjugated so apply() is a conjugate dot product
};

// Row k of the result is r_k (R_WW + sigma^2 I)^{-1}, where W is the band of
// pilots nearest to k, [r_k]_m = E[h_k h_{p_m}^*] and R_WW the pilot
// autocorrelation, both from channel::freq_correlation. sigma^2 = 1/snr.
// snr = +inf is accepted when R_WW is well conditioned; otherwise throws.
FreqInterpolator build_Af(const refsig::PilotPattern& pattern, const channel::PdpConfig& model,
                          double snr_linear, std::size_t band_size);

// L x L_d averaging matrix, every row 1/L_d (no Doppler).
RMatrix build_At(const refsig::PilotPattern& pattern);

struct InterpolatorBank {
    refsig::PilotPattern pattern;
    FreqInterpolator freq;
    RMatrix time;

    // The same operators embedded in the full K x K and L x L index spaces
    // (columns of non-pilot subcarriers / non-DMRS symbols are zero), so the
    // full estimator is kron(time_full, freq_full).
    CMatrix freq_full() const;
    RMatrix time_full() const;
};

InterpolatorBank make_bank(const refsig::PilotPattern& pattern, const channel::PdpConfig& model,
                           double snr_linear, std::size_t band_size);

// h_r[p] = Y[p] * conj(a[p]) on the pilot indices, zero elsewhere (vectorized
// grid, l * K + k). Throws if a pilot is not unit-modulus.
std::vector<cplx> ls_pilot_estimate(const ResourceGrid& y, const ResourceGrid& dmrs,
                                    const refsig::PilotPattern& pattern);

// (A_t kron A_f) h_r, evaluated as a frequency pass per DMRS symbol followed
// by a time pass.
ResourceGrid interpolate(std::span<const cplx> raw, const InterpolatorBank& bank);

// Baseline: copy the nearest pilot's raw estimate, then the same time pass.
ResourceGrid interpolate_zoh(std::span<const cplx> raw, const InterpolatorBank& bank);

struct ChannelEstimate {
    std::vector<cplx> raw;
    ResourceGrid h;
};

ChannelEstimate estimate_link(const ResourceGrid& y, const ResourceGrid& dmrs, const InterpolatorBank& bank);

}  // namespace mmrx::chest
