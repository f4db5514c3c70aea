#pragma once

// NR type 1 DMRS (front-loaded, up to 8 layers orthogonalized by cyclic
// shift, frequency-division and code-division multiplexing).

#include <array>
#include <cstdint>
#include <vector>

#include "mmrx/types.hpp"

namespace mmrx::refsig {

inline constexpr int kMaxLayers = 8;
inline constexpr std::uint32_t kGoldFastForward = 1600;

struct GoldConfig {
    std::uint32_t seed_init = 1;  // 31-bit init of the second shift register
    std::uint32_t skip = kGoldFastForward;
    std::size_t length = 0;
};

// Length-31 Gold sequence c(n) = x1(n + skip) ^ x2(n + skip) with the
// x^31 + x^3 + 1 and x^31 + x^3 + x^2 + x + 1 registers. x1 starts at
// 1,0,...,0 and x2 at the bits of seed_init.
std::vector<std::uint8_t> gold_sequence(const GoldConfig& cfg);

// Gray QPSK, ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2) from bits (2n, 2n+1).
std::vector<cplx> qpsk_map(const std::vector<std::uint8_t>& bits);

struct DmrsLayerConfig {
    int layer_index = 1;  // 1..8
    std::array<int, 2> w_cs{1, 1};
    int w_fdm = 0;
    std::array<int, 2> w_cdm{1, 1};
    std::size_t ell0 = 2;
    std::size_t num_dmrs_symbols = 2;
};

// Row i of the type 1 configuration table, with the default placement
// (first DMRS symbol 2, two adjacent symbols).
DmrsLayerConfig layer_weights(int layer_index);

// Pilot resource elements of one layer inside a K x L slot. Indices are into
// the vectorized grid (l * K + k). Layers sharing w_fdm share the pattern.
struct PilotPattern {
    std::size_t num_subcarriers = 0;  // K
    std::size_t num_symbols = 0;      // L
    int w_fdm = 0;
    std::vector<std::size_t> dmrs_symbols;
    std::vector<std::size_t> pilot_subcarriers;
    std::vector<std::size_t> indices;

    std::size_t pilots_per_symbol() const { return pilot_subcarriers.size(); }
    bool is_dmrs_symbol(std::size_t l) const;
};

PilotPattern make_pilot_pattern(const DmrsLayerConfig& layer, std::size_t num_subcarriers,
                                std::size_t num_symbols);

// a^i_{k,l} = w_cs(floor(k/2) mod 2) * [k mod 2 == w_fdm] * w_cdm(l - l0) * s[floor(k/2)]
// on DMRS symbols, zero elsewhere.
ResourceGrid dmrs_grid(const DmrsLayerConfig& layer, const PilotPattern& pattern,
                       const std::vector<cplx>& s);

enum class Separation { kFdm, kCdm, kCyclicShift, kNone };

// Mechanism that orthogonalizes two layers: FDM if they use different comb
// offsets, else CDM if the time cover codes differ, else cyclic shift.
Separation separation(const DmrsLayerConfig& a, const DmrsLayerConfig& b);

}  // namespace mmrx::refsig
