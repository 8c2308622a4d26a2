#ifndef METROTROPY_EXTRACTION_HPP
#define METROTROPY_EXTRACTION_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metrotropy/matrices.hpp"
#include "metrotropy/permutation.hpp"

namespace metrotropy {

/// Diagonal (H, rho) data of a stationary system: an energy spectrum and the
/// matching populations. Neither vector is assumed sorted.
class StationarySystem {
 public:
  StationarySystem(std::vector<double> energies, std::vector<double> populations);

  std::size_t size() const { return energies_.size(); }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<double>& populations() const { return populations_; }

 private:
  std::vector<double> energies_;
  std::vector<double> populations_;
};

/// Validated density matrix: Hermitian, unit trace, PSD within 1e-9.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }

 private:
  Eigen::MatrixXcd entries_;
};

enum class ExtractionKind { ergotropy, metrotropy };

struct ExtractionReport {
  ExtractionKind kind;
  double value;
  double initial_energy;
  double final_energy;
  Permutation optimal_permutation;
  BistochasticMatrix channel;
  UnitaryMatrix realizing_unitary;
};

/// E = sum_k E_k r_k.
double initial_energy(const StationarySystem& sys);

/// E^T . matrix(sigma) . r = sum_k E[sigma(k)] r[k].
double involution_energy(const StationarySystem& sys, const Permutation& sigma);

/// E^T . p . r  (final energy after the unitary channel p).
double post_unitary_energy(const StationarySystem& sys, const BistochasticMatrix& p);

/// E^T . p^T . p . r  (final energy after measuring in the basis behind p).
double post_measurement_energy(const StationarySystem& sys,
                               const BistochasticMatrix& p);

/// Maximal unitary extraction. The optimal permutation pairs the k-th largest
/// population with the k-th smallest energy; ties break to the lower original
/// index on both sides.
ExtractionReport ergotropy(const StationarySystem& sys);

/// Maximal measurement extraction by exhaustive search over involutions.
/// Guarded at N <= 12; larger systems should use metrotropy_matching.
ExtractionReport metrotropy_bruteforce(const StationarySystem& sys);

/// Maximal measurement extraction as a maximum-weight matching over index
/// pairs (a,b) with weight (E_a - E_b)(r_a - r_b), positive edges only.
/// Exact and polynomial-free of the involution enumeration.
ExtractionReport metrotropy_matching(const StationarySystem& sys);

/// The unitary that maximally mixes each transposed pair of an involution and
/// leaves fixed points untouched. Its unistochastic image is (1 + sigma)/2
/// with entries exactly in {0, 1/2, 1}.
UnitaryMatrix realizing_unitary(const Permutation& sigma);

/// u[i][j] = E^T . (sigma_i^T sigma_j + sigma_j^T sigma_i)/2 . r over the
/// given permutation list. Diagnostic tool; guarded at 120 permutations (S_5).
Eigen::MatrixXd u_matrix(const StationarySystem& sys,
                         const std::vector<Permutation>& perms);

/// Ergotropy of a possibly non-stationary state:
/// Tr(h rho) - sum_k E_k^asc r_k^desc over the two eigenvalue lists.
double general_ergotropy(const Eigen::MatrixXcd& h, const DensityMatrix& rho);

}  // namespace metrotropy

#endif
