#include "mmrx/dcd.hpp"

#include <cmath>
#include <stdexcept>

#include "mmrx/simd/kernels.hpp"

namespace mmrx::dcd {

double recommended_step(double bound) {
    if (!(bound > 0.0) || std::isinf(bound)) throw std::invalid_argument("recommended_step: bound must be positive and finite");
    return std::ldexp(1.0, static_cast<int>(std::floor(std::log2(bound))));
}

namespace {

bool is_power_of_two(double v) {
    int exp = 0;
    return v > 0.0 && std::isfinite(v) && std::frexp(v, &exp) == 0.5;
}

void validate(const DcdProblem& p) {
    const std::size_t n = p.size();
    if (n == 0) throw std::invalid_argument("dcd_bound: empty system");
    if (p.a.rows() != n || p.a.cols() != n) throw std::invalid_argument("dcd_bound: A must be N x N with N = size(b)");
    if (!is_power_of_two(p.h_step)) throw std::invalid_argument("dcd_bound: initial step must be a power of two");
    if (!(p.bound > 0.0)) throw std::invalid_argument("dcd_bound: bound must be positive");
    if (p.h_step > p.bound) throw std::invalid_argument("dcd_bound: initial step exceeds the bound");
    if (p.max_halvings < 0) throw std::invalid_argument("dcd_bound: max_halvings must be >= 0");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p.a(i, i) >= 0.0)) throw std::invalid_argument("dcd_bound: negative diagonal entry");
        for (std::size_t j = 0; j < i; ++j) {
            const double aij = p.a(i, j), aji = p.a(j, i);
            if (std::fabs(aij - aji) > 1e-12 * (std::fabs(aij) + std::fabs(aji))) {
                throw std::invalid_argument("dcd_bound: A is not symmetric");
            }
        }
    }
}

}  // namespace

DcdResult dcd_bound(const DcdProblem& p, bool record_trace) {
    validate(p);
    const std::size_t n = p.size();
    const auto& kern = simd::active();
    const bool boxed = std::isfinite(p.bound);

    DcdResult res;
    res.x.assign(n, 0.0);
    res.r = p.b;
    DcdLedger& led = res.ledger;

    double alpha = p.h_step;
    int m = 0;
    bool updated = false;
    std::size_t k = 0;

    while (m < p.max_halvings) {
        ++led.passes;
        for (std::size_t c = 0; c < n; ++c) {
            const double rc = res.r[c];
            // alpha/2 * A_cc is an exponent shift of the diagonal.
            const double threshold = 0.5 * alpha * p.a(c, c);
            ++led.bit_shifts;
            ++led.comparisons;
            if (!(threshold < std::fabs(rc))) continue;

            const double step = std::signbit(rc) ? -alpha : alpha;
            const double t = res.x[c] + step;
            ++led.additions;
            if (boxed) {
                ++led.comparisons;
                if (!(std::fabs(t) <= p.bound)) continue;
            }
            res.x[c] = t;
            kern.shift_sub(step, p.a.col(c).data(), res.r.data(), n);
            led.additions += n;
            led.bit_shifts += n;
            updated = true;
            ++k;
            if (record_trace) led.trace.push_back({led.passes - 1, c, step, rc, res.r[c]});
        }
        if (k >= p.max_updates) break;
        if (updated) {
            updated = false;
        } else {
            ++m;
            alpha *= 0.5;
            ++led.bit_shifts;
        }
    }
    led.accepted_updates = k;
    led.final_step = alpha;
    return res;
}

}  // namespace mmrx::dcd
