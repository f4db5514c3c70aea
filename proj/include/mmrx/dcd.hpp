#pragma once

// Sequential dichotomous coordinate descent with a box bound, for real
// symmetric positive semidefinite systems A x = b with |x_n| <= B.
//
// Step sizes are powers of two, so every "alpha * value" below is an exact
// exponent shift rather than a multiplication; the ledger counts it as a bit
// shift. Comparisons are charged like additions when forming totals.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "mmrx/types.hpp"

namespace mmrx::dcd {

inline constexpr std::size_t kUnlimitedUpdates = std::numeric_limits<std::size_t>::max();

struct DcdProblem {
    RMatrix a;
    std::vector<double> b;
    double h_step = 0.5;  // initial step, a power of two not above bound
    double bound = std::numeric_limits<double>::infinity();
    std::size_t max_updates = kUnlimitedUpdates;  // N_u
    int max_halvings = 8;                          // M_b

    std::size_t size() const { return b.size(); }
};

// 2^floor(log2(bound)); throws for non-positive or infinite bounds.
double recommended_step(double bound);

struct DcdUpdate {
    std::size_t pass;
    std::size_t coord;
    double delta;     // +-alpha
    double r_before;  // r[coord] before the update
    double r_after;
};

struct DcdLedger {
    std::uint64_t additions = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t bit_shifts = 0;
    std::uint64_t multiplications = 0;
    std::uint64_t accepted_updates = 0;
    std::uint64_t passes = 0;
    double final_step = 0.0;
    std::vector<DcdUpdate> trace;

    // Additions with comparisons folded in.
    std::uint64_t total_additions() const { return additions + comparisons; }
};

struct DcdResult {
    std::vector<double> x;
    std::vector<double> r;  // b - A x
    DcdLedger ledger;
};

// Throws std::invalid_argument if the problem is malformed (shape, asymmetry,
// negative diagonal, step not a power of two or above the bound). Running out
// of budget is not an error.
DcdResult dcd_bound(const DcdProblem& p, bool record_trace = false);

}  // namespace mmrx::dcd
