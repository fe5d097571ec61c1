#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace machina {

using complex = std::complex<double>;

/// Dense row-major matrix. Sized for desk-scale problems (tens of rows).
template <typename T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<complex>;
using ComplexVector = std::vector<complex>;

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
  return a;
}

template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= b(i, j);
  return a;
}

template <typename T>
Matrix<T> operator*(T s, Matrix<T> a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= s;
  return a;
}

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexVector apply(const ComplexMatrix& m, const ComplexVector& v);
complex inner(const ComplexVector& bra, const ComplexVector& ket);  // <bra|ket>
double norm(const ComplexVector& v);
/// |ket><bra|
ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra);
complex trace(const ComplexMatrix& m);

/// Largest absolute entry of a - b; the "infinity" residual used throughout.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
double hermiticity_defect(const ComplexMatrix& m);

struct HermitianEigen {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column i pairs with values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Rotations continue
/// until the off-diagonal Frobenius norm drops below `off_tol`.
HermitianEigen hermitian_eigen(const ComplexMatrix& m, double off_tol = 1e-13,
                               int max_sweeps = 100);

/// Solves A x = b by Gaussian elimination with partial pivoting. Returns false
/// when a pivot falls below `pivot_tol`.
bool solve_linear(RealMatrix a, std::vector<double> b, std::vector<double>& x,
                  double pivot_tol = 1e-14);

}  // namespace machina
