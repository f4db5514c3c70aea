#pragma once

#include <span>
#include <vector>

#include "mmrx/opcount.hpp"
#include "mmrx/types.hpp"

namespace mmrx::linalg {

// A = L L^H for Hermitian positive definite A. Only the lower triangle of A
// is read.
class Cholesky {
public:
    // Throws std::domain_error if a pivot is not positive, or if the smallest
    // pivot is below min_pivot_ratio times the largest diagonal entry.
    explicit Cholesky(const CMatrix& a, OpCount* ops = nullptr, double min_pivot_ratio = 0.0);

    std::size_t size() const { return l_.rows(); }
    const CMatrix& factor() const { return l_; }

    // Solves A x = b.
    std::vector<cplx> solve(std::span<const cplx> b, OpCount* ops = nullptr) const;
    // Solves A X = B column by column.
    CMatrix solve(const CMatrix& b) const;

private:
    CMatrix l_;
    std::vector<double> inv_diag_;
};

CMatrix conj_transpose(const CMatrix& a);
CMatrix multiply(const CMatrix& a, const CMatrix& b);
std::vector<cplx> multiply(const CMatrix& a, std::span<const cplx> x);

}  // namespace mmrx::linalg
