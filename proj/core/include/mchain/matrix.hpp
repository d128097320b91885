#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mchain/errors.hpp"
#include "mchain/rational.hpp"

namespace mchain {

// Dense row-major matrix over an exact or floating scalar.  Only the small
// amount of linear algebra the chain computations need.
template <class T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, const T& fill = num_traits<T>::zero())
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = num_traits<T>::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const T* row(std::size_t i) const { return data_.data() + i * cols_; }
    T* row(std::size_t i) { return data_.data() + i * cols_; }

    Matrix operator*(const Matrix& other) const {
        if (cols_ != other.rows_) throw LengthMismatch("matrix product shape mismatch");
        Matrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == num_traits<T>::zero()) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) {
                    out(i, j) += a * other(k, j);
                }
            }
        }
        return out;
    }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

// Gaussian elimination with partial pivoting (pivot row chosen by largest
// absolute value; for rationals this doubles as a zero test).
template <class T>
std::vector<T> solve_linear(Matrix<T> a, std::vector<T> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw LengthMismatch("solve_linear shape mismatch");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        T best = num_traits<T>::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            T cand = num_traits<T>::abs(a(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == num_traits<T>::zero()) throw SingularSystem("zero pivot column");
        if (pivot != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col) == num_traits<T>::zero()) continue;
            T factor = a(r, col) / a(col, col);
            a(r, col) = num_traits<T>::zero();
            for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= factor * a(col, j);
            b[r] -= factor * b[col];
        }
    }

    std::vector<T> x(n, num_traits<T>::zero());
    for (std::size_t ri = n; ri-- > 0;) {
        T acc = b[ri];
        for (std::size_t j = ri + 1; j < n; ++j) acc -= a(ri, j) * x[j];
        x[ri] = acc / a(ri, ri);
    }
    return x;
}

}  // namespace mchain
