#include "mmrx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmrx::linalg {

Cholesky::Cholesky(const CMatrix& a, OpCount* ops, double min_pivot_ratio)
    : l_(a.rows(), a.cols()), inv_diag_(a.rows()) {
    if (a.rows() != a.cols()) throw std::invalid_argument("Cholesky: matrix not square");
    const std::size_t n = a.rows();
    OpCount local;
    double max_diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) max_diag = std::max(max_diag, a(j, j).real());

    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l_(j, k));
        local.mults += 2 * j;
        local.adds += 2 * j;
        if (!(d > 0.0) || d <= min_pivot_ratio * max_diag) {
            throw std::domain_error("Cholesky: matrix is not (numerically) positive definite");
        }
        const double ljj = std::sqrt(d);
        l_(j, j) = ljj;
        inv_diag_[j] = 1.0 / ljj;
        local.mults += 2;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * std::conj(l_(j, k));
            local.mults += 4 * j;
            local.adds += 4 * j;
            l_(i, j) = s * inv_diag_[j];
            local.mults += 2;
        }
    }
    if (ops) *ops += local;
}

std::vector<cplx> Cholesky::solve(std::span<const cplx> b, OpCount* ops) const {
    const std::size_t n = size();
    if (b.size() != n) throw std::invalid_argument("Cholesky::solve: dimension mismatch");
    OpCount local;
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * z[k];
        local.mults += 4 * i + 2;
        local.adds += 4 * i;
        z[i] = s * inv_diag_[i];
    }
    std::vector<cplx> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        cplx s = z[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l_(k, ii)) * x[k];
        local.mults += 4 * (n - 1 - ii) + 2;
        local.adds += 4 * (n - 1 - ii);
        x[ii] = s * inv_diag_[ii];
    }
    if (ops) *ops += local;
    return x;
}

CMatrix Cholesky::solve(const CMatrix& b) const {
    CMatrix x(b.rows(), b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        auto col = solve(b.col(c));
        std::copy(col.begin(), col.end(), x.col(c).begin());
    }
    return x;
}

CMatrix conj_transpose(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (std::size_t r = 0; r < a.rows(); ++r) t(c, r) = std::conj(a(r, c));
    return t;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
    CMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, k) * bkj;
        }
    return c;
}

std::vector<cplx> multiply(const CMatrix& a, std::span<const cplx> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("multiply: dimension mismatch");
    std::vector<cplx> y(a.rows());
    for (std::size_t k = 0; k < a.cols(); ++k)
        for (std::size_t i = 0; i < a.rows(); ++i) y[i] += a(i, k) * x[k];
    return y;
}

}  // namespace mmrx::linalg
