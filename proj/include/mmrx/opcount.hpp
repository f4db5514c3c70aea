#pragma once

#include <cstdint>

namespace mmrx {

// Real-arithmetic operation tally. Square roots and reciprocals are charged
// as multiplications; comparisons as additions.
struct OpCount {
    std::uint64_t adds = 0;
    std::uint64_t mults = 0;

    OpCount& operator+=(const OpCount& o) {
        adds += o.adds;
        mults += o.mults;
        return *this;
    }
    friend OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
    friend bool operator==(const OpCount&, const OpCount&) = default;
};

}  // namespace mmrx
