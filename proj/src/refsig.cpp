#include "mmrx/refsig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mmrx::refsig {

std::vector<std::uint8_t> gold_sequence(const GoldConfig& cfg) {
    std::vector<std::uint8_t> out;
    if (cfg.length == 0) return out;
    const std::uint32_t x2_init = cfg.seed_init & 0x7FFFFFFFu;
    if (x2_init == 0) throw std::invalid_argument("gold_sequence: all-zero seed for the second register");

    // Bit j of each register holds x(n + j), j = 0..30.
    std::uint32_t x1 = 1;
    std::uint32_t x2 = x2_init;
    auto step = [&] {
        const std::uint32_t f1 = ((x1 >> 3) ^ x1) & 1u;
        const std::uint32_t f2 = ((x2 >> 3) ^ (x2 >> 2) ^ (x2 >> 1) ^ x2) & 1u;
        x1 = (x1 >> 1) | (f1 << 30);
        x2 = (x2 >> 1) | (f2 << 30);
    };
    for (std::uint32_t i = 0; i < cfg.skip; ++i) step();

    out.resize(cfg.length);
    for (std::size_t n = 0; n < cfg.length; ++n) {
        out[n] = static_cast<std::uint8_t>((x1 ^ x2) & 1u);
        step();
    }
    return out;
}

std::vector<cplx> qpsk_map(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_map: odd number of bits");
    const double a = 1.0 / std::numbers::sqrt2;
    std::vector<cplx> s(bits.size() / 2);
    for (std::size_t n = 0; n < s.size(); ++n) {
        s[n] = {bits[2 * n] ? -a : a, bits[2 * n + 1] ? -a : a};
    }
    return s;
}

DmrsLayerConfig layer_weights(int layer_index) {
    struct Row {
        int cs1, fdm, cdm1;
    };
    // w_cs(0) and w_cdm(0) are +1 for every layer.
    static constexpr Row kTable[kMaxLayers] = {
        {1, 0, 1}, {-1, 0, 1}, {1, 1, 1}, {-1, 1, 1},
        {1, 0, -1}, {-1, 0, -1}, {1, 1, -1}, {-1, 1, -1},
    };
    if (layer_index < 1 || layer_index > kMaxLayers) {
        throw std::out_of_range("layer_weights: layer index " + std::to_string(layer_index) +
                                " outside 1..8");
    }
    const Row& row = kTable[layer_index - 1];
    DmrsLayerConfig cfg;
    cfg.layer_index = layer_index;
    cfg.w_cs = {1, row.cs1};
    cfg.w_fdm = row.fdm;
    cfg.w_cdm = {1, row.cdm1};
    return cfg;
}

bool PilotPattern::is_dmrs_symbol(std::size_t l) const {
    return std::find(dmrs_symbols.begin(), dmrs_symbols.end(), l) != dmrs_symbols.end();
}

PilotPattern make_pilot_pattern(const DmrsLayerConfig& layer, std::size_t num_subcarriers,
                                std::size_t num_symbols) {
    if (num_subcarriers < 2 || num_subcarriers % 2 != 0) {
        throw std::invalid_argument("make_pilot_pattern: number of subcarriers must be even and >= 2");
    }
    if (layer.num_dmrs_symbols < 1 || layer.num_dmrs_symbols > 2) {
        throw std::invalid_argument("make_pilot_pattern: 1 or 2 DMRS symbols supported");
    }
    if (layer.ell0 + layer.num_dmrs_symbols > num_symbols) {
        throw std::invalid_argument("make_pilot_pattern: DMRS symbols do not fit in the slot");
    }
    if (layer.w_fdm != 0 && layer.w_fdm != 1) throw std::invalid_argument("make_pilot_pattern: w_fdm must be 0 or 1");

    PilotPattern p;
    p.num_subcarriers = num_subcarriers;
    p.num_symbols = num_symbols;
    p.w_fdm = layer.w_fdm;
    for (std::size_t d = 0; d < layer.num_dmrs_symbols; ++d) p.dmrs_symbols.push_back(layer.ell0 + d);
    for (std::size_t k = static_cast<std::size_t>(layer.w_fdm); k < num_subcarriers; k += 2) {
        p.pilot_subcarriers.push_back(k);
    }
    for (std::size_t l : p.dmrs_symbols) {
        for (std::size_t k : p.pilot_subcarriers) p.indices.push_back(l * num_subcarriers + k);
    }
    return p;
}

ResourceGrid dmrs_grid(const DmrsLayerConfig& layer, const PilotPattern& pattern,
                       const std::vector<cplx>& s) {
    if (pattern.w_fdm != layer.w_fdm) throw std::invalid_argument("dmrs_grid: pattern comb offset does not match layer");
    if (pattern.dmrs_symbols.size() != layer.num_dmrs_symbols ||
        (!pattern.dmrs_symbols.empty() && pattern.dmrs_symbols.front() != layer.ell0)) {
        throw std::invalid_argument("dmrs_grid: pattern DMRS symbols do not match layer");
    }
    const std::size_t K = pattern.num_subcarriers;
    if (s.size() < K / 2) throw std::invalid_argument("dmrs_grid: reference sequence too short");

    ResourceGrid grid(K, pattern.num_symbols);
    for (std::size_t d = 0; d < pattern.dmrs_symbols.size(); ++d) {
        const std::size_t l = pattern.dmrs_symbols[d];
        const double cdm = layer.w_cdm[d];
        for (std::size_t k : pattern.pilot_subcarriers) {
            const std::size_t m = k / 2;
            const double cs = layer.w_cs[m % 2];
            grid(k, l) = cs * cdm * s[m];
        }
    }
    return grid;
}

Separation separation(const DmrsLayerConfig& a, const DmrsLayerConfig& b) {
    if (a.w_fdm != b.w_fdm) return Separation::kFdm;
    if (a.w_cdm != b.w_cdm) return Separation::kCdm;
    if (a.w_cs != b.w_cs) return Separation::kCyclicShift;
    return Separation::kNone;
}

}  // namespace mmrx::refsig
