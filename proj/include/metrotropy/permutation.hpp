#ifndef METROTROPY_PERMUTATION_HPP
#define METROTROPY_PERMUTATION_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace metrotropy {

/// Thrown when a brute-force or diagnostic routine is asked for a problem
/// size above its hard guard.
struct SizeGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A bijection on {0..N-1}, stored as an index array with map[k] = sigma(k).
/// Matrix form has a 1 at (sigma(k), k), so that for vectors E, r:
///   E^T . matrix(sigma) . r = sum_k E[sigma(k)] * r[k].
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> map);

  static Permutation identity(std::size_t n);
  /// The transposition swapping a and b on {0..n-1} (a == b gives identity).
  static Permutation transposition(std::size_t n, std::size_t a, std::size_t b);

  std::size_t size() const { return map_.size(); }
  std::size_t operator()(std::size_t k) const { return map_[k]; }
  const std::vector<std::size_t>& map() const { return map_; }

  /// this after other: result(k) = this(other(k)).
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;
  bool is_involution() const;

  Eigen::MatrixXd matrix() const;

  /// Cycle notation, fixed points omitted; identity prints "id".
  std::string cycles() const;

  bool operator==(const Permutation& other) const { return map_ == other.map_; }
  bool operator!=(const Permutation& other) const { return !(*this == other); }

 private:
  std::vector<std::size_t> map_;
};

/// All involutions of S_n in lexicographic order of the map array.
/// Count equals the telephone number T(n). Guarded at n <= 12.
std::vector<Permutation> enumerate_involutions(std::size_t n);

/// All permutations of S_n in lexicographic order. Diagnostic tool, n <= 5.
std::vector<Permutation> all_permutations(std::size_t n);

/// Pairwise complementarity of the permutation matrices A, B:
/// A_ij = A_hk = B_ik = 1 implies B_hj = 1 for every index quadruple.
bool is_complementary(const Permutation& a, const Permutation& b);

}  // namespace metrotropy

#endif
