#include "mmrx/chest.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

#include "mmrx/linalg.hpp"
#include "mmrx/simd/kernels.hpp"

namespace mmrx::chest {

FreqInterpolator::FreqInterpolator(std::size_t num_subcarriers, std::size_t num_pilots, std::size_t band_size)
    : k_(num_subcarriers), kp_(num_pilots), kc_(band_size), start_(num_subcarriers, 0),
      conj_w_(num_subcarriers * band_size) {}

void FreqInterpolator::apply(std::span<const cplx> pilots, std::span<cplx> out) const {
    if (pilots.size() != kp_ || out.size() != k_) throw std::invalid_argument("FreqInterpolator::apply: dimension mismatch");
    const auto& kern = simd::active();
    for (std::size_t k = 0; k < k_; ++k) {
        out[k] = kern.cdot_conj(conj_w_.data() + k * kc_, pilots.data() + start_[k], kc_);
    }
}

CMatrix FreqInterpolator::dense() const {
    CMatrix m(k_, kp_);
    for (std::size_t k = 0; k < k_; ++k)
        for (std::size_t j = 0; j < kc_; ++j) m(k, start_[k] + j) = weight(k, j);
    return m;
}

namespace {

// Start of the contiguous band of band_size pilots closest to subcarrier k
// (smallest worst-case distance, lower start on ties).
std::size_t nearest_band(const std::vector<std::size_t>& pilots, std::size_t band_size, std::size_t k) {
    const long kk = static_cast<long>(k);
    std::size_t best = 0;
    long best_cost = std::numeric_limits<long>::max();
    for (std::size_t s = 0; s + band_size <= pilots.size(); ++s) {
        const long lo = std::labs(static_cast<long>(pilots[s]) - kk);
        const long hi = std::labs(static_cast<long>(pilots[s + band_size - 1]) - kk);
        const long cost = std::max(lo, hi);
        if (cost < best_cost) {
            best_cost = cost;
            best = s;
        }
    }
    return best;
}

}  // namespace

FreqInterpolator build_Af(const refsig::PilotPattern& pattern, const channel::PdpConfig& model,
                          double snr_linear, std::size_t band_size) {
    const auto& pilots = pattern.pilot_subcarriers;
    const std::size_t K = pattern.num_subcarriers;
    const std::size_t Kp = pilots.size();
    if (Kp == 0) throw std::invalid_argument("build_Af: pattern has no pilots");
    if (band_size == 0 || band_size > Kp) throw std::invalid_argument("build_Af: band size must be in 1..pilots per symbol");
    if (!(snr_linear > 0.0)) throw std::invalid_argument("build_Af: snr must be positive");

    const double noise_var = std::isinf(snr_linear) ? 0.0 : 1.0 / snr_linear;
    // Without noise loading the correlation block has to be safely invertible.
    const double min_pivot = noise_var > 0.0 ? 0.0 : 1e-12;

    FreqInterpolator af(K, Kp, band_size);
    std::map<std::size_t, linalg::Cholesky> factors;
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t s = nearest_band(pilots, band_size, k);
        af.start_[k] = s;
        auto it = factors.find(s);
        if (it == factors.end()) {
            CMatrix r(band_size, band_size);
            for (std::size_t i = 0; i < band_size; ++i) {
                for (std::size_t j = 0; j < band_size; ++j) {
                    r(i, j) = channel::freq_correlation(static_cast<long>(pilots[s + i]),
                                                        static_cast<long>(pilots[s + j]), model);
                }
                r(i, i) += noise_var;
            }
            try {
                it = factors.emplace(s, linalg::Cholesky(r, nullptr, min_pivot)).first;
            } catch (const std::domain_error&) {
                throw std::domain_error("build_Af: pilot correlation matrix is singular without noise loading");
            }
        }
        // w (R + s2 I) = r_k  <=>  (R + s2 I) w^H = r_k^H
        std::vector<cplx> rhs(band_size);
        for (std::size_t j = 0; j < band_size; ++j) {
            rhs[j] = std::conj(channel::freq_correlation(static_cast<long>(k), static_cast<long>(pilots[s + j]), model));
        }
        const auto wh = it->second.solve(rhs);
        std::copy(wh.begin(), wh.end(), af.conj_w_.begin() + static_cast<long>(k * band_size));
    }
    return af;
}

RMatrix build_At(const refsig::PilotPattern& pattern) {
    const std::size_t ld = pattern.dmrs_symbols.size();
    if (ld == 0) throw std::invalid_argument("build_At: pattern has no DMRS symbols");
    RMatrix at(pattern.num_symbols, ld);
    const double w = 1.0 / static_cast<double>(ld);
    for (std::size_t l = 0; l < pattern.num_symbols; ++l)
        for (std::size_t d = 0; d < ld; ++d) at(l, d) = w;
    return at;
}

CMatrix InterpolatorBank::freq_full() const {
    const CMatrix d = freq.dense();
    CMatrix full(pattern.num_subcarriers, pattern.num_subcarriers);
    for (std::size_t m = 0; m < pattern.pilot_subcarriers.size(); ++m)
        for (std::size_t k = 0; k < pattern.num_subcarriers; ++k) full(k, pattern.pilot_subcarriers[m]) = d(k, m);
    return full;
}

RMatrix InterpolatorBank::time_full() const {
    RMatrix full(pattern.num_symbols, pattern.num_symbols);
    for (std::size_t d = 0; d < pattern.dmrs_symbols.size(); ++d)
        for (std::size_t l = 0; l < pattern.num_symbols; ++l) full(l, pattern.dmrs_symbols[d]) = time(l, d);
    return full;
}

InterpolatorBank make_bank(const refsig::PilotPattern& pattern, const channel::PdpConfig& model,
                           double snr_linear, std::size_t band_size) {
    return InterpolatorBank{pattern, build_Af(pattern, model, snr_linear, band_size), build_At(pattern)};
}

std::vector<cplx> ls_pilot_estimate(const ResourceGrid& y, const ResourceGrid& dmrs,
                                    const refsig::PilotPattern& pattern) {
    if (!y.same_shape(dmrs) || y.num_subcarriers() != pattern.num_subcarriers ||
        y.num_symbols() != pattern.num_symbols) {
        throw std::invalid_argument("ls_pilot_estimate: grid shape does not match pattern");
    }
    std::vector<cplx> raw(y.size());
    const auto yf = y.flat();
    const auto af = dmrs.flat();
    for (std::size_t p : pattern.indices) {
        if (std::abs(std::abs(af[p]) - 1.0) > 1e-9) throw std::invalid_argument("ls_pilot_estimate: pilot is not unit-modulus");
        raw[p] = yf[p] * std::conj(af[p]);
    }
    return raw;
}

namespace {

template <typename FreqPass>
ResourceGrid separable(std::span<const cplx> raw, const InterpolatorBank& bank, FreqPass&& freq_pass) {
    const auto& pat = bank.pattern;
    const std::size_t K = pat.num_subcarriers;
    if (raw.size() != K * pat.num_symbols) throw std::invalid_argument("interpolate: raw estimate has wrong length");
    const std::size_t ld = pat.dmrs_symbols.size();
    if (bank.time.rows() != pat.num_symbols || bank.time.cols() != ld) throw std::invalid_argument("interpolate: time matrix does not match pattern");

    std::vector<cplx> pilots(pat.pilot_subcarriers.size());
    std::vector<std::vector<cplx>> per_symbol(ld, std::vector<cplx>(K));
    for (std::size_t d = 0; d < ld; ++d) {
        const std::size_t base = pat.dmrs_symbols[d] * K;
        for (std::size_t m = 0; m < pilots.size(); ++m) pilots[m] = raw[base + pat.pilot_subcarriers[m]];
        freq_pass(pilots, per_symbol[d]);
    }
    ResourceGrid out(K, pat.num_symbols);
    for (std::size_t l = 0; l < pat.num_symbols; ++l) {
        auto row = out.symbol(l);
        for (std::size_t d = 0; d < ld; ++d) {
            const double w = bank.time(l, d);
            for (std::size_t k = 0; k < K; ++k) row[k] += w * per_symbol[d][k];
        }
    }
    return out;
}

}  // namespace

ResourceGrid interpolate(std::span<const cplx> raw, const InterpolatorBank& bank) {
    if (bank.freq.num_subcarriers() != bank.pattern.num_subcarriers ||
        bank.freq.num_pilots() != bank.pattern.pilot_subcarriers.size()) {
        throw std::invalid_argument("interpolate: frequency interpolator does not match pattern");
    }
    return separable(raw, bank, [&](std::span<const cplx> p, std::span<cplx> out) { bank.freq.apply(p, out); });
}

ResourceGrid interpolate_zoh(std::span<const cplx> raw, const InterpolatorBank& bank) {
    const auto& pilots = bank.pattern.pilot_subcarriers;
    return separable(raw, bank, [&](std::span<const cplx> p, std::span<cplx> out) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = p[nearest_band(pilots, 1, k)];
    });
}

ChannelEstimate estimate_link(const ResourceGrid& y, const ResourceGrid& dmrs, const InterpolatorBank& bank) {
    ChannelEstimate est;
    est.raw = ls_pilot_estimate(y, dmrs, bank.pattern);
    est.h = interpolate(est.raw, bank);
    return est;
}

}  // namespace mmrx::chest
