#ifndef METROTROPY_MATRICES_HPP
#define METROTROPY_MATRICES_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "metrotropy/permutation.hpp"

namespace metrotropy {

inline constexpr double kNegativityTol = 1e-12;
inline constexpr double kSumTol = 1e-9;

/// N x N matrix with non-negative entries whose rows and columns each sum
/// to 1. Construction validates; out-of-tolerance input is rejected.
class BistochasticMatrix {
 public:
  explicit BistochasticMatrix(Eigen::MatrixXd entries);

  static BistochasticMatrix from_permutation(const Permutation& sigma);
  /// The measurement channel (1 + sigma)/2 for an involution sigma.
  /// Entries are exactly in {0, 1/2, 1}.
  static BistochasticMatrix involution_channel(const Permutation& sigma);

  const Eigen::MatrixXd& entries() const { return entries_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }

 private:
  Eigen::MatrixXd entries_;
};

/// N x N complex matrix with U U^dagger = 1 within Frobenius norm 1e-9.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Eigen::MatrixXcd entries);

  static UnitaryMatrix from_permutation(const Permutation& sigma);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }

 private:
  Eigen::MatrixXcd entries_;
};

/// Convex combination of permutation matrices: sum_i weights[i] * matrix(perms[i]).
struct ConvexCombination {
  std::vector<double> weights;
  std::vector<Permutation> perms;

  Eigen::MatrixXd reconstruct() const;
};

/// Birkhoff decomposition by greedy maximum-matching extraction with
/// deterministic tie-breaking (lowest-index augmenting order). At most
/// (N-1)^2 + 1 terms; reconstruction error below 1e-9 entrywise.
ConvexCombination birkhoff_decompose(const BistochasticMatrix& b);

/// The unistochastic image P_kl = |U_kl|^2.
BistochasticMatrix unistochastic_of(const UnitaryMatrix& u);

}  // namespace metrotropy

#endif
