#ifndef METROTROPY_VERIFY_HPP
#define METROTROPY_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "metrotropy/extraction.hpp"
#include "metrotropy/matrices.hpp"

namespace metrotropy {

struct OptimizerConfig {
  int multistarts = 64;
  int max_iterations = 2000;
  double convergence_tol = 1e-10;  // on objective change
  std::uint64_t seed = 0;
  double refute_threshold = 1e-3;  // residual above which refutation is declared

  void validate() const;
};

struct VerificationReport {
  double numerical_min;
  double analytic_min;  // (v0 + E)/2
  double gap;           // numerical_min - analytic_min
  UnitaryMatrix best_unitary;
  BistochasticMatrix best_channel;
  int starts_converged;
  // Entrywise distance of best_channel to (1 + sigma_M)/2, minimum over tied
  // involutions. Filled by verify_metrotropy only.
  std::optional<double> channel_distance;
};

enum class UnistochasticVerdict { certified, refuted, inconclusive };

struct UnistochasticDecision {
  UnistochasticVerdict verdict;
  double best_residual;                   // squared Frobenius residual
  std::optional<UnitaryMatrix> witness;   // present when certified
};

/// Smooth map from N^2 real parameters onto U(N) up to global phase:
/// N(N-1)/2 two-level rotations (angle + phase each, pairs in lexicographic
/// order) followed by N diagonal phases. The zero vector maps to the identity.
UnitaryMatrix parameterized_unitary(const std::vector<double>& params);

/// Multi-start derivative-free minimization of E' = E^T P^T P r over the
/// parameterized unitaries. Deterministic given cfg.seed; ties between starts
/// resolve to the lowest start index. Guarded at N <= 8.
VerificationReport minimize_post_measurement_energy(const StationarySystem& sys,
                                                    const OptimizerConfig& cfg);

/// Numerical search for a unitary whose unistochastic image matches b.
/// N = 2 inputs are certified analytically. Residuals between the certify and
/// refute thresholds yield an explicit inconclusive verdict.
UnistochasticDecision decide_unistochastic(const BistochasticMatrix& b,
                                           const OptimizerConfig& cfg);

/// Runs the minimizer and compares against the analytic optimum from
/// metrotropy_matching, reporting the distance of the best channel to the
/// predicted (1 + sigma_M)/2 form.
VerificationReport verify_metrotropy(const StationarySystem& sys,
                                     const OptimizerConfig& cfg);

}  // namespace metrotropy

#endif
