#include "metrotropy/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace metrotropy {

StationarySystem::StationarySystem(std::vector<double> energies,
                                   std::vector<double> populations)
    : energies_(std::move(energies)), populations_(std::move(populations)) {
  if (energies_.empty() || energies_.size() != populations_.size())
    throw std::invalid_argument("stationary system: vectors empty or mismatched");
  double sum = 0.0;
  for (double e : energies_)
    if (!std::isfinite(e))
      throw std::invalid_argument("stationary system: non-finite energy");
  for (double r : populations_) {
    if (!std::isfinite(r) || r < -kNegativityTol)
      throw std::invalid_argument("stationary system: negative population");
    sum += r;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw std::invalid_argument("stationary system: populations do not sum to 1");
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n == 0 || entries_.cols() != n)
    throw std::invalid_argument("density matrix: must be square and non-empty");
  if ((entries_ - entries_.adjoint()).norm() > kSumTol)
    throw std::invalid_argument("density matrix: not Hermitian");
  if (std::abs(entries_.trace() - std::complex<double>(1.0)) > kSumTol)
    throw std::invalid_argument("density matrix: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_,
                                                         Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kSumTol)
    throw std::invalid_argument("density matrix: negative eigenvalue");
}

double initial_energy(const StationarySystem& sys) {
  double e = 0.0;
  for (std::size_t k = 0; k < sys.size(); ++k)
    e += sys.energies()[k] * sys.populations()[k];
  return e;
}

double involution_energy(const StationarySystem& sys, const Permutation& sigma) {
  if (sigma.size() != sys.size())
    throw std::invalid_argument("involution_energy: dimension mismatch");
  double e = 0.0;
  for (std::size_t k = 0; k < sys.size(); ++k)
    e += sys.energies()[sigma(k)] * sys.populations()[k];
  return e;
}

namespace {

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double post_unitary_energy(const StationarySystem& sys, const BistochasticMatrix& p) {
  if (p.size() != sys.size())
    throw std::invalid_argument("post_unitary_energy: dimension mismatch");
  return to_vec(sys.energies()).dot(p.entries() * to_vec(sys.populations()));
}

double post_measurement_energy(const StationarySystem& sys,
                               const BistochasticMatrix& p) {
  if (p.size() != sys.size())
    throw std::invalid_argument("post_measurement_energy: dimension mismatch");
  return to_vec(sys.energies())
      .dot(p.entries().transpose() * (p.entries() * to_vec(sys.populations())));
}

ExtractionReport ergotropy(const StationarySystem& sys) {
  const std::size_t n = sys.size();
  std::vector<std::size_t> by_pop(n), by_energy(n);
  std::iota(by_pop.begin(), by_pop.end(), std::size_t{0});
  std::iota(by_energy.begin(), by_energy.end(), std::size_t{0});
  std::stable_sort(by_pop.begin(), by_pop.end(), [&](std::size_t a, std::size_t b) {
    return sys.populations()[a] > sys.populations()[b];
  });
  std::stable_sort(by_energy.begin(), by_energy.end(),
                   [&](std::size_t a, std::size_t b) {
                     return sys.energies()[a] < sys.energies()[b];
                   });
  // k-th largest population goes to the k-th smallest energy.
  std::vector<std::size_t> map(n);
  for (std::size_t t = 0; t < n; ++t) map[by_pop[t]] = by_energy[t];
  Permutation sigma(std::move(map));

  const double e0 = initial_energy(sys);
  const double ef = involution_energy(sys, sigma);
  return ExtractionReport{ExtractionKind::ergotropy,
                          e0 - ef,
                          e0,
                          ef,
                          sigma,
                          BistochasticMatrix::from_permutation(sigma),
                          UnitaryMatrix::from_permutation(sigma)};
}

namespace {

ExtractionReport metrotropy_report(const StationarySystem& sys,
                                   const Permutation& sigma_m) {
  const double e0 = initial_energy(sys);
  const double v0 = involution_energy(sys, sigma_m);
  return ExtractionReport{ExtractionKind::metrotropy,
                          (e0 - v0) / 2.0,
                          e0,
                          (v0 + e0) / 2.0,
                          sigma_m,
                          BistochasticMatrix::involution_channel(sigma_m),
                          realizing_unitary(sigma_m)};
}

}  // namespace

ExtractionReport metrotropy_bruteforce(const StationarySystem& sys) {
  if (sys.size() > 12)
    throw SizeGuardError(
        "metrotropy_bruteforce: N > 12; use metrotropy_matching instead");
  const auto involutions = enumerate_involutions(sys.size());
  std::size_t best = 0;
  double v0 = involution_energy(sys, involutions[0]);
  for (std::size_t i = 1; i < involutions.size(); ++i) {
    const double v = involution_energy(sys, involutions[i]);
    if (v < v0) {
      v0 = v;
      best = i;
    }
  }
  return metrotropy_report(sys, involutions[best]);
}

ExtractionReport metrotropy_matching(const StationarySystem& sys) {
  const std::size_t n = sys.size();
  if (n > 20)
    throw SizeGuardError("metrotropy_matching: N > 20 exceeds the exact-matching "
                         "subset search");
  const auto& en = sys.energies();
  const auto& pop = sys.populations();
  auto weight = [&](std::size_t a, std::size_t b) {
    return (en[a] - en[b]) * (pop[a] - pop[b]);
  };

  // best[mask] = max total weight of a matching inside mask using only
  // positive edges; choice[mask] = partner of the lowest set index, or -1.
  const std::size_t nmask = std::size_t{1} << n;
  std::vector<double> best(nmask, 0.0);
  std::vector<int> choice(nmask, -1);
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    std::size_t a = 0;
    while (!(mask >> a & 1)) ++a;
    const std::size_t rest = mask & (mask - 1);  // mask without a
    best[mask] = best[rest];                     // leave a unmatched
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!(mask >> b & 1)) continue;
      const double w = weight(a, b);
      if (w <= 0.0) continue;
      const double cand = w + best[rest & ~(std::size_t{1} << b)];
      if (cand > best[mask]) {
        best[mask] = cand;
        choice[mask] = static_cast<int>(b);
      }
    }
  }

  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  std::size_t mask = nmask - 1;
  while (mask != 0) {
    std::size_t a = 0;
    while (!(mask >> a & 1)) ++a;
    if (choice[mask] >= 0) {
      const auto b = static_cast<std::size_t>(choice[mask]);
      map[a] = b;
      map[b] = a;
      mask &= ~(std::size_t{1} << b);
    }
    mask &= mask - 1;
  }
  return metrotropy_report(sys, Permutation(std::move(map)));
}

UnitaryMatrix realizing_unitary(const Permutation& sigma) {
  if (!sigma.is_involution())
    throw std::invalid_argument("realizing_unitary: permutation is not an involution");
  const auto n = static_cast<Eigen::Index>(sigma.size());
  // Block phase (1+i)/2 has squared modulus exactly 1/2 in double arithmetic,
  // so the unistochastic image lands exactly on (1 + sigma)/2.
  const std::complex<double> half_mix(0.5, 0.5);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const std::size_t j = sigma(k);
    const auto a = static_cast<Eigen::Index>(std::min(k, j));
    const auto b = static_cast<Eigen::Index>(std::max(k, j));
    if (j == k) {
      u(a, a) = 1.0;
    } else {
      u(a, a) = half_mix;
      u(b, a) = half_mix;
      u(a, b) = half_mix;
      u(b, b) = -half_mix;
    }
  }
  return UnitaryMatrix(std::move(u));
}

Eigen::MatrixXd u_matrix(const StationarySystem& sys,
                         const std::vector<Permutation>& perms) {
  if (perms.size() > 120)
    throw SizeGuardError("u_matrix: more than 120 permutations (S_5 guard)");
  if (perms.empty()) throw std::invalid_argument("u_matrix: empty permutation list");
  const auto m = static_cast<Eigen::Index>(perms.size());
  Eigen::MatrixXd u(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) {
      const Permutation p = perms[static_cast<std::size_t>(i)].inverse().compose(
          perms[static_cast<std::size_t>(j)]);
      const double v =
          (involution_energy(sys, p) + involution_energy(sys, p.inverse())) / 2.0;
      u(i, j) = v;
      u(j, i) = v;
    }
  return u;
}

double general_ergotropy(const Eigen::MatrixXcd& h, const DensityMatrix& rho) {
  const Eigen::Index n = h.rows();
  if (n == 0 || h.cols() != n)
    throw std::invalid_argument("general_ergotropy: hamiltonian must be square");
  if (static_cast<std::size_t>(n) != rho.size())
    throw std::invalid_argument("general_ergotropy: dimension mismatch");
  if ((h - h.adjoint()).norm() > kSumTol)
    throw std::invalid_argument("general_ergotropy: hamiltonian not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rs(rho.entries(),
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd e_asc = hs.eigenvalues();
  const Eigen::VectorXd r_asc = rs.eigenvalues();
  double passive = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) passive += e_asc(k) * r_asc(n - 1 - k);
  return (h * rho.entries()).trace().real() - passive;
}

}  // namespace metrotropy
