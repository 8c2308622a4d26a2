#include "metrotropy/matrices.hpp"

#include <cmath>

namespace metrotropy {

BistochasticMatrix::BistochasticMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n == 0 || entries_.cols() != n)
    throw std::invalid_argument("bistochastic: matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || v < -kNegativityTol)
        throw std::invalid_argument("bistochastic: negative or non-finite entry");
    }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(entries_.row(i).sum() - 1.0) > kSumTol)
      throw std::invalid_argument("bistochastic: row sum differs from 1");
    if (std::abs(entries_.col(i).sum() - 1.0) > kSumTol)
      throw std::invalid_argument("bistochastic: column sum differs from 1");
  }
}

BistochasticMatrix BistochasticMatrix::from_permutation(const Permutation& sigma) {
  return BistochasticMatrix(sigma.matrix());
}

BistochasticMatrix BistochasticMatrix::involution_channel(const Permutation& sigma) {
  if (!sigma.is_involution())
    throw std::invalid_argument("involution_channel: permutation is not an involution");
  const auto n = static_cast<Eigen::Index>(sigma.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma(k) == k) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    } else {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 0.5;
      m(static_cast<Eigen::Index>(sigma(k)), static_cast<Eigen::Index>(k)) = 0.5;
    }
  }
  return BistochasticMatrix(std::move(m));
}

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n == 0 || entries_.cols() != n)
    throw std::invalid_argument("unitary: matrix must be square and non-empty");
  const Eigen::MatrixXcd gram = entries_ * entries_.adjoint();
  const double err = (gram - Eigen::MatrixXcd::Identity(n, n)).norm();
  if (!(err <= kSumTol))
    throw std::invalid_argument("unitary: U U^dagger differs from identity");
}

UnitaryMatrix UnitaryMatrix::from_permutation(const Permutation& sigma) {
  return UnitaryMatrix(sigma.matrix().cast<std::complex<double>>());
}

Eigen::MatrixXd ConvexCombination::reconstruct() const {
  if (perms.empty() || weights.size() != perms.size())
    throw std::invalid_argument("convex combination: empty or mismatched lists");
  const auto n = static_cast<Eigen::Index>(perms.front().size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < perms.size(); ++i) m += weights[i] * perms[i].matrix();
  return m;
}

namespace {

// Kuhn's augmenting-path matching on the support graph, columns tried in
// ascending order, rows in ascending order. match_row[i] = column matched
// to row i, or npos.
bool try_augment(const Eigen::MatrixXd& r, double support_tol, std::size_t col,
                 std::vector<bool>& visited, std::vector<std::size_t>& match_row) {
  const auto n = static_cast<std::size_t>(r.rows());
  for (std::size_t row = 0; row < n; ++row) {
    if (visited[row] ||
        r(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) <= support_tol)
      continue;
    visited[row] = true;
    if (match_row[row] == static_cast<std::size_t>(-1) ||
        try_augment(r, support_tol, match_row[row], visited, match_row)) {
      match_row[row] = col;
      return true;
    }
  }
  return false;
}

}  // namespace

ConvexCombination birkhoff_decompose(const BistochasticMatrix& b) {
  const auto n = b.size();
  Eigen::MatrixXd residual = b.entries();
  ConvexCombination out;
  double weight_left = 1.0;
  const std::size_t max_terms = (n - 1) * (n - 1) + 1 + n;  // slack for fp dirt
  const double support_tol = 1e-13;

  for (std::size_t term = 0; term < max_terms && weight_left > kSumTol; ++term) {
    std::vector<std::size_t> match_row(n, static_cast<std::size_t>(-1));
    std::size_t matched = 0;
    for (std::size_t col = 0; col < n; ++col) {
      std::vector<bool> visited(n, false);
      if (try_augment(residual, support_tol, col, visited, match_row)) ++matched;
    }
    if (matched < n)
      throw std::invalid_argument(
          "birkhoff_decompose: support admits no perfect matching");

    std::vector<std::size_t> map(n);
    for (std::size_t row = 0; row < n; ++row) map[match_row[row]] = row;
    Permutation sigma(map);

    double lambda = weight_left;
    for (std::size_t k = 0; k < n; ++k)
      lambda = std::min(lambda, residual(static_cast<Eigen::Index>(sigma(k)),
                                         static_cast<Eigen::Index>(k)));
    for (std::size_t k = 0; k < n; ++k)
      residual(static_cast<Eigen::Index>(sigma(k)), static_cast<Eigen::Index>(k)) -=
          lambda;
    out.weights.push_back(lambda);
    out.perms.push_back(std::move(sigma));
    weight_left -= lambda;
  }
  return out;
}

BistochasticMatrix unistochastic_of(const UnitaryMatrix& u) {
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = std::norm(u.entries()(i, j));
  return BistochasticMatrix(std::move(p));
}

}  // namespace metrotropy
