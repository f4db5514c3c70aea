#include "mmrx/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmrx/simd/kernels.hpp"

namespace mmrx::frontend {

double QuantizerConfig::step() const { return 2.0 * clip_scale / std::ldexp(1.0, bits); }

void QuantizerConfig::validate() const {
    if (bits < 1 || bits > 30) throw std::invalid_argument("QuantizerConfig: bits must be in 1..30");
    if (!(clip_scale > 0.0) || !std::isfinite(clip_scale)) {
        throw std::invalid_argument("QuantizerConfig: clip_scale must be positive");
    }
}

double agc_gain(std::span<const cplx> y) {
    if (y.empty()) throw std::invalid_argument("agc_gain: empty block");
    const double energy = simd::active().norm_sq(y.data(), y.size());
    if (!(energy > 0.0)) throw std::invalid_argument("agc_gain: all-zero block");
    const double rail_var = energy / (2.0 * static_cast<double>(y.size()));
    return 1.0 / std::sqrt(rail_var);
}

std::vector<cplx> quantize(std::span<const cplx> y, const QuantizerConfig& cfg) {
    cfg.validate();
    std::vector<cplx> out(y.size());
    const double max_index = std::ldexp(1.0, cfg.bits - 1) - 1.0;
    simd::active().quantize_midrise(reinterpret_cast<const double*>(y.data()),
                                    reinterpret_cast<double*>(out.data()), 2 * y.size(), cfg.step(),
                                    max_index);
    return out;
}

double bussgang_gain(const QuantizerConfig& cfg) {
    cfg.validate();
    const double delta = cfg.step();
    const long levels = 1L << (cfg.bits - 1);
    auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
    // Symmetric quantizer: twice the positive half. The outermost cell runs to infinity.
    double acc = 0.0;
    for (long m = 0; m < levels; ++m) {
        const double lo = static_cast<double>(m) * delta;
        if (lo > 40.0) break;
        const double hi_phi = (m + 1 == levels) ? 0.0 : phi(static_cast<double>(m + 1) * delta);
        acc += (static_cast<double>(m) + 0.5) * delta * (phi(lo) - hi_phi);
    }
    return 2.0 * acc;
}

AdcOutput adc_block(std::span<const cplx> y, const QuantizerConfig& cfg) {
    AdcOutput out;
    out.agc_gain = agc_gain(y);
    std::vector<cplx> scaled(y.begin(), y.end());
    for (cplx& v : scaled) v *= out.agc_gain;
    out.samples = quantize(scaled, cfg);
    const double back = 1.0 / (out.agc_gain * bussgang_gain(cfg));
    for (cplx& v : out.samples) v *= back;
    return out;
}

double distortion_ratio(const QuantizerConfig& cfg) {
    cfg.validate();
    const double delta = cfg.step();
    const long levels = 1L << (cfg.bits - 1);
    auto tail = [](double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); };
    double power = 0.0;
    for (long m = 0; m < levels; ++m) {
        const double lo = static_cast<double>(m) * delta;
        if (lo > 40.0) break;
        const double hi_tail = (m + 1 == levels) ? 0.0 : tail(static_cast<double>(m + 1) * delta);
        const double level = (static_cast<double>(m) + 0.5) * delta;
        power += level * level * (tail(lo) - hi_tail);
    }
    power *= 2.0;
    const double g = bussgang_gain(cfg);
    return std::max(0.0, power / (g * g) - 1.0);
}

}  // namespace mmrx::frontend
