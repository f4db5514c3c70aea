#pragma once

#include <span>
#include <vector>

#include "mmrx/types.hpp"

namespace mmrx::frontend {

struct QuantizerConfig {
    int bits = 2;             // per rail
    double clip_scale = 2.0;  // clip level in units of the rail standard deviation

    double step() const;      // reconstruction level spacing 2 * clip / 2^bits
    void validate() const;
};

// Gain that brings the block to unit per-rail second moment. Throws on an
// empty or all-zero block.
double agc_gain(std::span<const cplx> y);

// Uniform midrise quantizer on each rail: levels +-(2m - 1) * step / 2,
// m = 1..2^(bits-1), saturating beyond the clip level. Input is expected to
// be gain-normalized.
std::vector<cplx> quantize(std::span<const cplx> y, const QuantizerConfig& cfg);

// E[x q(x)] for a unit-variance Gaussian rail; the linear gain the quantizer
// applies to a Gaussian input.
double bussgang_gain(const QuantizerConfig& cfg);

// Power of the distortion left after gain compensation, relative to the input
// power, for a Gaussian input: E[q^2] / kappa^2 - 1.
double distortion_ratio(const QuantizerConfig& cfg);

struct AdcOutput {
    std::vector<cplx> samples;  // quantized, returned to the input scale
    double agc_gain = 1.0;
};

// AGC, quantize, then divide by (agc_gain * bussgang_gain) so the digital
// samples are unbiased estimates of the analog input.
AdcOutput adc_block(std::span<const cplx> y, const QuantizerConfig& cfg);

}  // namespace mmrx::frontend
