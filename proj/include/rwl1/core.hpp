#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "rwl1/types.hpp"

namespace rwl1 {

/// u = phi x + e.
inline Vector measure(const Matrix& phi, const Vector& x, const Vector& e) {
  if (x.size() != phi.cols())
    throw DimensionMismatch("measure: dim(x) != cols(phi)");
  if (e.size() != phi.rows())
    throw DimensionMismatch("measure: dim(e) != rows(phi)");
  return phi * x + e;
}

/// Best s-term approximation: x restricted to its s largest-magnitude
/// coordinates, zeros elsewhere. Ties break toward the smaller index.
inline Vector best_s_term(const Vector& x, int s) {
  const int d = static_cast<int>(x.size());
  require(s >= 0, "best_s_term: s must be nonnegative");
  if (s > d) throw std::invalid_argument("best_s_term: s exceeds dim(x)");
  if (s == d) return x;
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double fa = std::abs(x[a]), fb = std::abs(x[b]);
    return fa != fb ? fa > fb : a < b;
  });
  Vector out = Vector::Zero(d);
  for (int k = 0; k < s; ++k) out[order[k]] = x[order[k]];
  return out;
}

/// C(d, s), saturating at `cap` + 1 to avoid overflow.
inline std::uint64_t binomial_capped(int d, int s, std::uint64_t cap) {
  if (s < 0 || s > d) return 0;
  s = std::min(s, d - s);
  long double c = 1.0L;
  for (int i = 1; i <= s; ++i) {
    c = c * (d - s + i) / i;
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(c + 0.5L);
}

/// Exact restricted-isometry constant of order s by exhaustive enumeration:
/// delta_s = max over all s-column submatrices of
/// max(lambda_max(G) - 1, 1 - lambda_min(G)), G the submatrix Gram matrix.
/// Refuses to enumerate more than `budget` subsets.
inline RipEstimate estimate_ric(const Matrix& phi, int s,
                                std::uint64_t budget) {
  const int d = static_cast<int>(phi.cols());
  require(s >= 1 && s <= d, "estimate_ric: need 1 <= s <= cols(phi)");
  require(budget >= 1, "estimate_ric: budget must be positive");
  const std::uint64_t count = binomial_capped(d, s, budget);
  if (count > budget)
    throw CombinatorialBudgetExceeded(
        "estimate_ric: C(d,s) exceeds the enumeration budget");

  Matrix sub(phi.rows(), s);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  double delta = 0.0;
  std::vector<int> pick(s);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    for (int j = 0; j < s; ++j) sub.col(j) = phi.col(pick[j]);
    eig.compute(sub.transpose() * sub, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    delta = std::max(delta, std::max(ev[s - 1] - 1.0, 1.0 - ev[0]));
    // next s-combination in lexicographic order
    int i = s - 1;
    while (i >= 0 && pick[i] == d - s + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
  }
  return RipEstimate{s, true, std::max(delta, 0.0)};
}

}  // namespace rwl1
