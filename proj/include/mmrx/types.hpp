#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mmrx {

using cplx = std::complex<double>;

// Complex samples on a K x L OFDM grid, subcarrier index fastest
// (linear index l * K + k).
class ResourceGrid {
public:
    ResourceGrid() = default;
    ResourceGrid(std::size_t num_subcarriers, std::size_t num_symbols)
        : k_(num_subcarriers), l_(num_symbols), data_(num_subcarriers * num_symbols) {}

    std::size_t num_subcarriers() const { return k_; }
    std::size_t num_symbols() const { return l_; }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(std::size_t k, std::size_t l) { return data_[l * k_ + k]; }
    const cplx& operator()(std::size_t k, std::size_t l) const { return data_[l * k_ + k]; }

    std::span<cplx> symbol(std::size_t l) { return {data_.data() + l * k_, k_}; }
    std::span<const cplx> symbol(std::size_t l) const { return {data_.data() + l * k_, k_}; }

    std::span<cplx> flat() { return data_; }
    std::span<const cplx> flat() const { return data_; }

    bool same_shape(const ResourceGrid& other) const { return k_ == other.k_ && l_ == other.l_; }

private:
    std::size_t k_ = 0;
    std::size_t l_ = 0;
    std::vector<cplx> data_;
};

// Dense column-major matrix.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<T> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const T> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

    std::span<T> flat() { return data_; }
    std::span<const T> flat() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;
using RMatrix = Matrix<double>;

}  // namespace mmrx
