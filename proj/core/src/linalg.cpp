#include "klasr/linalg.hpp"

#include <cmath>
#include <string>

#include "klasr/error.hpp"

namespace klasr {

SquareMatrix SquareMatrix::identity(int n) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

LuFactorization lu_decompose(const SquareMatrix& m) {
  const int n = m.order;
  if (n <= 0) throw DataError("matrix order must be positive");
  for (double v : m.entries) {
    if (!std::isfinite(v)) throw DataError("matrix contains non-finite entry");
  }

  LuFactorization f;
  f.order = n;
  f.lu = m.entries;
  f.perm.resize(n);
  f.sign = 1;
  auto lu = [&](int i, int j) -> double& {
    return f.lu[static_cast<size_t>(i) * n + j];
  };

  // Implicit row scales for the pivot-magnitude threshold.
  std::vector<double> scale(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) scale[i] = std::max(scale[i], std::abs(m.at(i, j)));
    if (scale[i] == 0.0)
      throw NumericalError("singular matrix: zero row " + std::to_string(i));
  }

  for (int k = 0; k < n; ++k) {
    int pivot_row = k;
    double best = -1.0;
    for (int i = k; i < n; ++i) {
      const double cand = std::abs(lu(i, k)) / scale[i];
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (std::abs(lu(pivot_row, k)) < 1e-14 * scale[pivot_row])
      throw NumericalError("singular matrix to working precision at column " +
                           std::to_string(k));
    if (pivot_row != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot_row, j));
      std::swap(scale[k], scale[pivot_row]);
      f.sign = -f.sign;
    }
    f.perm[k] = pivot_row;

    const double inv_pivot = 1.0 / lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) * inv_pivot;
      lu(i, k) = factor;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
    }
  }
  return f;
}

std::pair<double, int> log_det(const LuFactorization& f) {
  double log_abs = 0.0;
  int sign = f.sign;
  for (int i = 0; i < f.order; ++i) {
    const double d = f.lu[static_cast<size_t>(i) * f.order + i];
    log_abs += std::log(std::abs(d));
    if (d < 0.0) sign = -sign;
  }
  return {log_abs, sign};
}

void lu_solve(const LuFactorization& f, std::span<double> b) {
  const int n = f.order;
  if (static_cast<int>(b.size()) != n)
    throw DataError("right-hand side length does not match matrix order");
  auto lu = [&](int i, int j) { return f.lu[static_cast<size_t>(i) * n + j]; };

  for (int k = 0; k < n; ++k) std::swap(b[k], b[f.perm[k]]);
  for (int i = 1; i < n; ++i) {
    double sum = b[i];
    for (int j = 0; j < i; ++j) sum -= lu(i, j) * b[j];
    b[i] = sum;
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = b[i];
    for (int j = i + 1; j < n; ++j) sum -= lu(i, j) * b[j];
    b[i] = sum / lu(i, i);
  }
}

SquareMatrix invert(const LuFactorization& f) {
  const int n = f.order;
  SquareMatrix inv(n);
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    lu_solve(f, col);
    for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

std::optional<SquareMatrix> cholesky(const SquareMatrix& m) {
  const int n = m.order;
  SquareMatrix l(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = m.at(i, j);
      for (int k = 0; k < j; ++k) sum -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (sum <= 0.0 || !std::isfinite(sum)) return std::nullopt;
        l.at(i, i) = std::sqrt(sum);
      } else {
        l.at(i, j) = sum / l.at(j, j);
      }
    }
  }
  return l;
}

LevinsonResult levinson_durbin(std::span<const double> autocorr, int order) {
  if (order < 1) throw DataError("AR order must be >= 1");
  if (static_cast<int>(autocorr.size()) < order + 1)
    throw DataError("need autocorrelation lags 0.." + std::to_string(order));
  if (autocorr[0] <= 0.0)
    throw NumericalError("autocorrelation at lag 0 must be positive");

  std::vector<double> a(order + 1, 0.0);  // a[1..m] at stage m
  std::vector<double> prev(order + 1, 0.0);
  double err = autocorr[0];

  for (int m = 1; m <= order; ++m) {
    double acc = autocorr[m];
    for (int i = 1; i < m; ++i) acc -= a[i] * autocorr[m - i];
    const double k = acc / err;
    if (!(std::abs(k) < 1.0))
      throw NumericalError("invalid autocorrelation sequence: reflection "
                           "coefficient magnitude >= 1 at lag " +
                           std::to_string(m));
    prev = a;
    a[m] = k;
    for (int i = 1; i < m; ++i) a[i] = prev[i] - k * prev[m - i];
    err *= 1.0 - k * k;
  }

  LevinsonResult r;
  r.ar_coeffs.assign(a.begin() + 1, a.end());
  r.residual_variance = err;
  return r;
}

}  // namespace klasr
