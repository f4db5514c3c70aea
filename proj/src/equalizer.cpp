#include "mmrx/equalizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmrx/complexity.hpp"
#include "mmrx/simd/kernels.hpp"

namespace mmrx::equalizer {

OpCount gram_ops(std::size_t n_rx, std::size_t n_users) {
    const std::uint64_t n = n_rx, u = n_users;
    const std::uint64_t off = u * (u - 1) / 2;
    // Off-diagonal: n complex products (4 mul, 2 add) plus n-1 complex adds.
    // Diagonal: n squared magnitudes (2 mul, 1 add) plus n-1 real adds.
    return {off * (4 * n - 2) + u * (2 * n - 1), off * 4 * n + u * 2 * n};
}

GramResult gram(const CMatrix& h) {
    const std::size_t n = h.rows();
    const std::size_t u = h.cols();
    const auto& kern = simd::active();
    GramResult res{CMatrix(u, u), gram_ops(n, u)};
    for (std::size_t j = 0; j < u; ++j) {
        res.g(j, j) = kern.norm_sq(h.col(j).data(), n);
        for (std::size_t i = j + 1; i < u; ++i) {
            const cplx gij = kern.cdot_conj(h.col(i).data(), h.col(j).data(), n);
            res.g(i, j) = gij;
            res.g(j, i) = std::conj(gij);
        }
    }
    return res;
}

OpCount matched_filter_ops(std::size_t n_rx, std::size_t n_users) {
    const std::uint64_t n = n_rx, u = n_users;
    return {u * (4 * n - 2), u * 4 * n};
}

MatchedFilterResult matched_filter(const CMatrix& h, std::span<const cplx> y) {
    if (y.size() != h.rows()) throw std::invalid_argument("matched_filter: y length != number of antennas");
    const auto& kern = simd::active();
    MatchedFilterResult res{std::vector<cplx>(h.cols()), matched_filter_ops(h.rows(), h.cols())};
    for (std::size_t u = 0; u < h.cols(); ++u) res.v[u] = kern.cdot_conj(h.col(u).data(), y.data(), h.rows());
    return res;
}

RealSystem realify(const CMatrix& g, std::span<const cplx> v) {
    const std::size_t u = g.rows();
    if (g.cols() != u || v.size() != u) throw std::invalid_argument("realify: dimension mismatch");
    double scale = 0.0;
    for (cplx e : g.flat()) scale = std::max(scale, std::abs(e));
    const double tol = 1e-12 * scale;
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (std::abs(g(i, j) - std::conj(g(j, i))) > tol) throw std::invalid_argument("realify: G is not Hermitian");

    RealSystem sys{RMatrix(2 * u, 2 * u), realify_rhs(v)};
    for (std::size_t j = 0; j < u; ++j) {
        for (std::size_t i = 0; i < u; ++i) {
            // Mirror the lower triangle so A is exactly symmetric.
            const cplx gij = i >= j ? g(i, j) : std::conj(g(j, i));
            const double re = gij.real();
            const double im = i == j ? 0.0 : gij.imag();
            sys.a(i, j) = re;
            sys.a(i + u, j + u) = re;
            sys.a(i + u, j) = im;
            sys.a(i, j + u) = -im;
        }
    }
    return sys;
}

std::vector<double> realify_rhs(std::span<const cplx> v) {
    const std::size_t u = v.size();
    std::vector<double> b(2 * u);
    for (std::size_t i = 0; i < u; ++i) {
        b[i] = v[i].real();
        b[i + u] = v[i].imag();
    }
    return b;
}

std::vector<cplx> recombine(std::span<const double> x) {
    if (x.size() % 2 != 0) throw std::invalid_argument("recombine: odd length");
    const std::size_t u = x.size() / 2;
    std::vector<cplx> out(u);
    for (std::size_t i = 0; i < u; ++i) out[i] = {x[i], x[i + u]};
    return out;
}

DcdDetection dcd_detect(const RMatrix& a, std::span<const cplx> v, const DcdSettings& s) {
    dcd::DcdProblem p;
    p.a = a;
    p.b = realify_rhs(v);
    p.h_step = s.h_step;
    p.bound = s.bound;
    p.max_updates = s.max_updates;
    p.max_halvings = s.max_halvings;
    auto res = dcd::dcd_bound(p);
    return {recombine(res.x), std::move(res.ledger)};
}

namespace {

CMatrix loaded(const CMatrix& g, double reg) {
    if (!(reg > 0.0)) throw std::invalid_argument("mmse: regularization must be positive");
    if (g.rows() != g.cols()) throw std::invalid_argument("mmse: G must be square");
    CMatrix m = g;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += reg;
    return m;
}

}  // namespace

MmseSolver::MmseSolver(const CMatrix& g, double reg, bool unbiased)
    : chol_(loaded(g, reg), &factor_ops_), unbias_(g.rows(), 1.0) {
    if (!unbiased) return;
    // diag((G + rI)^{-1} G) = 1 - r * diag((G + rI)^{-1})
    const std::size_t n = g.rows();
    std::vector<cplx> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(e.begin(), e.end(), cplx{});
        e[i] = 1.0;
        const double inv_ii = chol_.solve(e)[i].real();
        const double gain = 1.0 - reg * inv_ii;
        if (gain > 0.0) unbias_[i] = 1.0 / gain;
    }
}

std::vector<cplx> MmseSolver::solve(std::span<const cplx> v, OpCount* ops) const {
    auto x = chol_.solve(v, ops);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= unbias_[i];
    return x;
}

OpCount diag_load_ops(std::size_t n_users) { return {2 * static_cast<std::uint64_t>(n_users), 0}; }

OpCount matvec_ops(std::size_t n_users) {
    const std::uint64_t u = n_users;
    return {u * (4 * u - 2), 4 * u * u};
}

OpCount inverse_charge(std::size_t n_users) {
    if (n_users == 8) return complexity::kInverseCharge8;
    CMatrix id = CMatrix::identity(n_users);
    OpCount ops;
    linalg::Cholesky(id, &ops);
    return ops;
}

MmseResult mmse_detect(const CMatrix& g, std::span<const cplx> v, double reg, bool unbiased) {
    if (v.size() != g.rows()) throw std::invalid_argument("mmse_detect: dimension mismatch");
    MmseSolver solver(g, reg, unbiased);
    MmseResult res;
    res.measured_factor = solver.factor_ops();
    res.x = solver.solve(v, &res.measured_solve);
    const std::size_t u = g.rows();
    res.diag_load = diag_load_ops(u);
    res.inverse = inverse_charge(u);
    res.matvec = matvec_ops(u);
    return res;
}

}  // namespace mmrx::equalizer
