#pragma once

// Per-subcarrier multi-user detection: Gram matrix and matched filter, the
// real-valued expansion fed to DCD, the MMSE baseline, and 16-QAM mapping.

#include <cstdint>
#include <span>
#include <vector>

#include "mmrx/dcd.hpp"
#include "mmrx/linalg.hpp"
#include "mmrx/opcount.hpp"
#include "mmrx/types.hpp"

namespace mmrx::equalizer {

struct GramResult {
    CMatrix g;
    OpCount ops;
};

// G = H^H H from the lower triangle and diagonal only, mirrored. H is
// N_rx x N_u.
GramResult gram(const CMatrix& h);
OpCount gram_ops(std::size_t n_rx, std::size_t n_users);

struct MatchedFilterResult {
    std::vector<cplx> v;
    OpCount ops;
};

MatchedFilterResult matched_filter(const CMatrix& h, std::span<const cplx> y);
OpCount matched_filter_ops(std::size_t n_rx, std::size_t n_users);

struct RealSystem {
    RMatrix a;
    std::vector<double> b;
};

// A = [[Re G, -Im G], [Im G, Re G]], b = [Re v; Im v]. Throws if G is not
// Hermitian.
RealSystem realify(const CMatrix& g, std::span<const cplx> v);
// b alone; A does not change across symbols on a subcarrier.
std::vector<double> realify_rhs(std::span<const cplx> v);
std::vector<cplx> recombine(std::span<const double> x);

struct DcdSettings {
    double bound;
    double h_step;
    std::size_t max_updates;
    int max_halvings;
};

// Solves G x = v through the real expansion with DCD.
struct DcdDetection {
    std::vector<cplx> x;
    dcd::DcdLedger ledger;
};
DcdDetection dcd_detect(const RMatrix& a, std::span<const cplx> v, const DcdSettings& s);

// Factorizes G + reg I once; solve() can then be called per symbol vector.
class MmseSolver {
public:
    // Throws std::domain_error if G + reg I is not positive definite.
    MmseSolver(const CMatrix& g, double reg, bool unbiased = false);

    std::size_t size() const { return chol_.size(); }
    std::vector<cplx> solve(std::span<const cplx> v, OpCount* ops = nullptr) const;
    const OpCount& factor_ops() const { return factor_ops_; }

private:
    OpCount factor_ops_;  // declared first: chol_ writes into it on construction
    linalg::Cholesky chol_;
    std::vector<double> unbias_;  // per-user scale, 1 when biased
};

struct MmseResult {
    std::vector<cplx> x;
    // Charges in the published decomposition.
    OpCount diag_load, inverse, matvec;
    // What the Cholesky route actually executed.
    OpCount measured_factor, measured_solve;
};

// x = (G + reg I)^{-1} v. With unbiased = true each output is divided by the
// diagonal of (G + reg I)^{-1} G.
MmseResult mmse_detect(const CMatrix& g, std::span<const cplx> v, double reg, bool unbiased = false);

OpCount diag_load_ops(std::size_t n_users);
OpCount matvec_ops(std::size_t n_users);
// Published constant at 8 users; otherwise the Cholesky factorization count.
OpCount inverse_charge(std::size_t n_users);

// 16-QAM, Gray labelled per rail: I from bits (0, 2), Q from bits (1, 3),
// level (1 - 2 b_sign) * (2 - (1 - 2 b_amp)) * scale.
inline constexpr double kQam16Scale = 0.31622776601683794;  // 1/sqrt(10)
std::vector<cplx> qam16_map(std::span<const std::uint8_t> bits, double scale = kQam16Scale);
std::vector<std::uint8_t> demap_qam16(std::span<const cplx> x, double scale = kQam16Scale);
// Tight box around the unit-energy constellation: 3/sqrt(10) plus one ulp.
double qam16_bound();

}  // namespace mmrx::equalizer
