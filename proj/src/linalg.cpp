#include "machina/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace machina {

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

ComplexVector apply(const ComplexMatrix& m, const ComplexVector& v) {
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    complex acc{};
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

complex inner(const ComplexVector& bra, const ComplexVector& ket) {
  complex acc{};
  for (std::size_t i = 0; i < bra.size(); ++i) acc += std::conj(bra[i]) * ket[i];
  return acc;
}

double norm(const ComplexVector& v) { return std::sqrt(std::real(inner(v, v))); }

ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra) {
  ComplexMatrix out(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) out(i, j) = ket[i] * std::conj(bra[j]);
  return out;
}

complex trace(const ComplexMatrix& m) {
  complex acc{};
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) acc += m(i, i);
  return acc;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs_diff(m, adjoint(m));
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& m, double off_tol, int max_sweeps) {
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  // Symmetrize once so round-off in the input cannot bias the rotations.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const complex h = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = h;
      a(j, i) = std::conj(h);
    }
  }

  int sweep = 0;
  for (; sweep < max_sweeps && off_diagonal_norm(a) > off_tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex h = a(p, q);
        const double mag = std::abs(h);
        if (mag < 1e-300) continue;
        const complex phase = h / mag;
        // J = diag(1, conj(phase)) * R(c, s) zeroes the (p, q) entry of J^H A J.
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const complex jpp = c;
        const complex jpq = s;
        const complex jqp = -s * std::conj(phase);
        const complex jqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^H A
          const complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  HermitianEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

bool solve_linear(RealMatrix a, std::vector<double> b, std::vector<double>& x, double pivot_tol) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < pivot_tol) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
    x[i] = acc / a(i, i);
  }
  return true;
}

}  // namespace machina
