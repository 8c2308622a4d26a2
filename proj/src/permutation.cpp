#include "metrotropy/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace metrotropy {

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  if (map_.empty()) throw std::invalid_argument("permutation: empty map");
  std::vector<bool> seen(map_.size(), false);
  for (std::size_t v : map_) {
    if (v >= map_.size() || seen[v])
      throw std::invalid_argument("permutation: map is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  if (n == 0) throw std::invalid_argument("permutation: n must be positive");
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

Permutation Permutation::transposition(std::size_t n, std::size_t a, std::size_t b) {
  if (a >= n || b >= n)
    throw std::invalid_argument("permutation: transposition index out of range");
  Permutation p = identity(n);
  std::swap(p.map_[a], p.map_[b]);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  if (size() != other.size())
    throw std::invalid_argument("permutation: dimension mismatch in compose");
  std::vector<std::size_t> m(size());
  for (std::size_t k = 0; k < size(); ++k) m[k] = map_[other.map_[k]];
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> m(size());
  for (std::size_t k = 0; k < size(); ++k) m[map_[k]] = k;
  return Permutation(std::move(m));
}

bool Permutation::is_involution() const {
  for (std::size_t k = 0; k < size(); ++k)
    if (map_[map_[k]] != k) return false;
  return true;
}

Eigen::MatrixXd Permutation::matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < size(); ++k)
    m(static_cast<Eigen::Index>(map_[k]), static_cast<Eigen::Index>(k)) = 1.0;
  return m;
}

std::string Permutation::cycles() const {
  std::ostringstream out;
  std::vector<bool> done(size(), false);
  bool any = false;
  for (std::size_t start = 0; start < size(); ++start) {
    if (done[start] || map_[start] == start) continue;
    any = true;
    out << '(';
    std::size_t k = start;
    bool first = true;
    do {
      if (!first) out << ' ';
      out << k;
      done[k] = true;
      k = map_[k];
      first = false;
    } while (k != start);
    out << ')';
  }
  return any ? out.str() : std::string("id");
}

namespace {

void involutions_rec(std::vector<std::size_t>& map, std::vector<bool>& used,
                     std::size_t n, std::vector<Permutation>& out) {
  std::size_t k = 0;
  while (k < n && used[k]) ++k;
  if (k == n) {
    out.emplace_back(map);
    return;
  }
  // Fixing k first, then pairing with ascending j, yields lexicographic order.
  used[k] = true;
  map[k] = k;
  involutions_rec(map, used, n, out);
  for (std::size_t j = k + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = true;
    map[k] = j;
    map[j] = k;
    involutions_rec(map, used, n, out);
    used[j] = false;
  }
  used[k] = false;
}

}  // namespace

std::vector<Permutation> enumerate_involutions(std::size_t n) {
  if (n == 0) throw std::invalid_argument("enumerate_involutions: n must be positive");
  if (n > 12)
    throw SizeGuardError("enumerate_involutions: n > 12 (T(12) = 140152 is the "
                         "largest supported enumeration)");
  std::vector<Permutation> out;
  std::vector<std::size_t> map(n);
  std::vector<bool> used(n, false);
  involutions_rec(map, used, n, out);
  return out;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  if (n == 0) throw std::invalid_argument("all_permutations: n must be positive");
  if (n > 5) throw SizeGuardError("all_permutations: n > 5 (diagnostic tool)");
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  std::vector<Permutation> out;
  do {
    out.emplace_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

bool is_complementary(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("is_complementary: dimension mismatch");
  // A_ij = 1 iff i = a(j). Over columns j, k the condition collapses to:
  // a(j) = b(k) implies a(k) = b(j).
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a(j) == b(k) && a(k) != b(j)) return false;
  return true;
}

}  // namespace metrotropy
