#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace klasr {

/// Dense square matrix, row-major.
struct SquareMatrix {
  int order = 0;
  std::vector<double> entries;  // order * order values

  SquareMatrix() = default;
  explicit SquareMatrix(int n) : order(n), entries(static_cast<size_t>(n) * n, 0.0) {}

  double& at(int i, int j) { return entries[static_cast<size_t>(i) * order + j]; }
  double at(int i, int j) const { return entries[static_cast<size_t>(i) * order + j]; }

  static SquareMatrix identity(int n);
};

/// Combined LU factors with partial (row) pivoting. lu holds L below the
/// diagonal (unit diagonal implied) and U on and above it; perm[k] is the row
/// swapped into position k at step k, sign the parity of the swaps.
struct LuFactorization {
  int order = 0;
  std::vector<double> lu;
  std::vector<int> perm;
  int sign = 1;
};

/// Factorizes m with partial pivoting. Throws NumericalError when the best
/// available pivot falls below 1e-14 times the source row's scale.
LuFactorization lu_decompose(const SquareMatrix& m);

/// Determinant in log domain: sign * exp(log_abs_det). Returned sign is
/// +1/-1 (0 cannot occur; singularity is rejected at decomposition).
std::pair<double, int> log_det(const LuFactorization& f);

/// Solves m * x = b in place using the factorization of m.
void lu_solve(const LuFactorization& f, std::span<double> b);

/// Inverse computed column by column from the factorization.
SquareMatrix invert(const LuFactorization& f);

/// Lower-triangular Cholesky factor of a symmetric matrix, or nullopt if the
/// matrix is not positive-definite to working precision.
std::optional<SquareMatrix> cholesky(const SquareMatrix& m);

struct LevinsonResult {
  std::vector<double> ar_coeffs;  // predictor convention: x_t = sum a_i x_{t-i} + e_t
  double residual_variance = 0.0;
};

/// Solves the order-P Toeplitz normal equations from autocorr[0..P].
/// Throws NumericalError on non-positive r_0 or any reflection coefficient
/// with magnitude >= 1 (not a valid autocorrelation sequence).
LevinsonResult levinson_durbin(std::span<const double> autocorr, int order);

}  // namespace klasr
