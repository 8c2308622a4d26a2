#include "metrotropy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>

namespace metrotropy {

void OptimizerConfig::validate() const {
  if (multistarts <= 0 || max_iterations <= 0 || !(convergence_tol > 0.0) ||
      !(refute_threshold > 0.0))
    throw std::invalid_argument("optimizer config: all fields must be positive");
  if (!(refute_threshold > convergence_tol))
    throw std::invalid_argument(
        "optimizer config: refute_threshold must exceed convergence_tol");
}

namespace {

// Counter-based generator (splitmix64); identical streams on every platform.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_angle(std::uint64_t& state) {
  const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1p-53;
  return -M_PI + 2.0 * M_PI * u;
}

Eigen::MatrixXcd build_unitary(const std::vector<double>& params, std::size_t n) {
  const std::complex<double> i_unit(0.0, 1.0);
  Eigen::MatrixXcd u(n, n);
  u.setZero();
  const std::size_t n_pairs = n * (n - 1) / 2;
  for (std::size_t k = 0; k < n; ++k)
    u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
        std::exp(i_unit * params[2 * n_pairs + k]);
  std::size_t pair = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q, ++pair) {
      const double theta = params[2 * pair];
      const double phi = params[2 * pair + 1];
      const double c = std::cos(theta);
      const std::complex<double> s_plus = std::exp(i_unit * phi) * std::sin(theta);
      const std::complex<double> s_minus = std::exp(-i_unit * phi) * std::sin(theta);
      const auto ip = static_cast<Eigen::Index>(p);
      const auto iq = static_cast<Eigen::Index>(q);
      const Eigen::RowVectorXcd row_p = u.row(ip);
      const Eigen::RowVectorXcd row_q = u.row(iq);
      u.row(ip) = c * row_p - s_plus * row_q;
      u.row(iq) = s_minus * row_p + c * row_q;
    }
  return u;
}

Eigen::MatrixXd uni_image(const Eigen::MatrixXcd& u) {
  Eigen::MatrixXd p(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j) p(i, j) = std::norm(u(i, j));
  return p;
}

struct NelderMeadResult {
  std::vector<double> x;
  double fx;
  bool converged;
};

// Deterministic Nelder-Mead with standard coefficients. Convergence is
// declared when the simplex objective spread falls below tol.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, int max_iter,
                             double tol) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<double>> pts(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step;
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];
    if (fv[worst] - fv[best] < tol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](double coef) {
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d)
        p[d] = centroid[d] + coef * (centroid[d] - pts[worst][d]);
      return p;
    };

    const std::vector<double> reflected = blend(1.0);
    const double fr = f(reflected);
    if (fr < fv[best]) {
      const std::vector<double> expanded = blend(2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        fv[worst] = fe;
      } else {
        pts[worst] = reflected;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = reflected;
      fv[worst] = fr;
    } else {
      const std::vector<double> contracted = blend(fr < fv[worst] ? 0.5 : -0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = contracted;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < dim; ++d)
            pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i)
    if (fv[i] < fv[best]) best = i;
  return NelderMeadResult{pts[best], fv[best], converged};
}

// One local search: Nelder-Mead followed by shrinking-simplex polish rounds.
NelderMeadResult local_search(const std::function<double(const std::vector<double>&)>& f,
                              std::vector<double> x0, int max_iter, double tol) {
  NelderMeadResult r = nelder_mead(f, std::move(x0), 0.5, max_iter, tol);
  for (double step : {5e-2, 5e-3, 5e-4}) {
    NelderMeadResult polish = nelder_mead(f, r.x, step, max_iter, tol);
    if (polish.fx < r.fx) r = polish;
    r.converged = r.converged || polish.converged;
  }
  return r;
}

std::vector<double> random_start(std::uint64_t seed, int start_index, std::size_t dim) {
  std::uint64_t state =
      seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(start_index + 1);
  std::vector<double> x(dim);
  for (double& v : x) v = uniform_angle(state);
  return x;
}

struct MultistartResult {
  std::vector<double> best_x;
  double best_f;
  int starts_converged;
};

// Multistart local search. Extra deterministic starting points (if any) are
// explored first, then cfg.multistarts seeded random starts.
MultistartResult multistart(const std::function<double(const std::vector<double>&)>& f,
                            std::size_t dim, const OptimizerConfig& cfg,
                            double early_exit_below,
                            const std::vector<std::vector<double>>& extra_starts = {}) {
  MultistartResult out{{}, std::numeric_limits<double>::infinity(), 0};
  auto run_one = [&](std::vector<double> x0) {
    NelderMeadResult r =
        local_search(f, std::move(x0), cfg.max_iterations, cfg.convergence_tol);
    if (r.converged) ++out.starts_converged;
    if (r.fx < out.best_f) {  // strict: ties resolve to the earliest start
      out.best_f = r.fx;
      out.best_x = std::move(r.x);
    }
    return out.best_f < early_exit_below;
  };
  for (const auto& x0 : extra_starts)
    if (run_one(x0)) return out;
  for (int s = 0; s < cfg.multistarts; ++s)
    if (run_one(random_start(cfg.seed, s, dim))) break;
  return out;
}

// Parameters whose unitary has unistochastic image (1 + matrix(sigma))/2 for an
// involution sigma: a quarter-turn rotation on every transposed pair.
std::vector<double> involution_channel_params(const Permutation& sigma) {
  const std::size_t n = sigma.size();
  std::vector<double> params(n * n, 0.0);
  std::size_t pair = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q, ++pair)
      if (sigma.map()[p] == q) params[2 * pair] = M_PI / 4.0;
  return params;
}

// Elementwise unit phase of a complex matrix (1 where the entry vanishes).
Eigen::MatrixXcd phase_of(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double a = std::abs(m(i, j));
      out(i, j) = a > 1e-300 ? m(i, j) / a : std::complex<double>(1.0, 0.0);
    }
  return out;
}

// Nearest unitary in Frobenius norm: the polar factor.
Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Alternating projections between {matrices with |entries| = sqrt(target)} and
// the unitary group, starting from the given entrywise phases. Returns the
// resulting unitary; its image residual is the caller's concern.
Eigen::MatrixXcd alternating_projection(const Eigen::MatrixXd& sqrt_target,
                                        const Eigen::MatrixXcd& phases,
                                        int max_iter, double tol) {
  Eigen::MatrixXcd v = polar_unitary(sqrt_target.cwiseProduct(phases));
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    v = polar_unitary(sqrt_target.cwiseProduct(phase_of(v)));
    const double res = (uni_image(v) - sqrt_target.cwiseAbs2()).squaredNorm();
    if (prev - res < tol && it > 2) break;
    prev = res;
  }
  return v;
}

}  // namespace

UnitaryMatrix parameterized_unitary(const std::vector<double>& params) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(
      static_cast<double>(params.size()))));
  if (n == 0 || n * n != params.size())
    throw std::invalid_argument(
        "parameterized_unitary: parameter count must be a positive square");
  return UnitaryMatrix(build_unitary(params, n));
}

VerificationReport minimize_post_measurement_energy(const StationarySystem& sys,
                                                    const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t n = sys.size();
  if (n > 8)
    throw SizeGuardError("minimize_post_measurement_energy: N > 8 cost guard");

  const Eigen::VectorXd energies = Eigen::Map<const Eigen::VectorXd>(
      sys.energies().data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd pops = Eigen::Map<const Eigen::VectorXd>(
      sys.populations().data(), static_cast<Eigen::Index>(n));
  auto objective = [&](const std::vector<double>& x) {
    const Eigen::MatrixXd p = uni_image(build_unitary(x, n));
    return energies.dot(p.transpose() * (p * pops));
  };

  // The involution channel predicted by the matching solver is always offered
  // as the first start, so the numerical minimum never exceeds the analytic
  // candidate; random starts can still descend below it.
  const ExtractionReport matching = metrotropy_matching(sys);
  const std::vector<std::vector<double>> extra = {
      involution_channel_params(matching.optimal_permutation)};
  MultistartResult ms =
      multistart(objective, n * n, cfg,
                 -std::numeric_limits<double>::infinity(), extra);
  if (ms.starts_converged == 0)
    throw std::runtime_error(
        "minimize_post_measurement_energy: no start converged");

  const double analytic_min = matching.final_energy;
  UnitaryMatrix best_u(build_unitary(ms.best_x, n));
  BistochasticMatrix best_channel = unistochastic_of(best_u);
  return VerificationReport{ms.best_f,
                            analytic_min,
                            ms.best_f - analytic_min,
                            std::move(best_u),
                            std::move(best_channel),
                            ms.starts_converged,
                            std::nullopt};
}

UnistochasticDecision decide_unistochastic(const BistochasticMatrix& b,
                                           const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t n = b.size();
  const double certify_below = cfg.convergence_tol * 100.0;

  if (n == 1) {
    return UnistochasticDecision{UnistochasticVerdict::certified, 0.0,
                                 UnitaryMatrix(Eigen::MatrixXcd::Identity(1, 1))};
  }
  if (n == 2) {
    // Every 2x2 bistochastic matrix is unistochastic; build the witness from
    // square roots of the entries.
    const double a = std::clamp(b.entries()(0, 0), 0.0, 1.0);
    Eigen::MatrixXcd u(2, 2);
    const double sa = std::sqrt(a), sb = std::sqrt(1.0 - a);
    u << sa, sb, sb, -sa;
    UnitaryMatrix witness(u);
    const double residual = (uni_image(witness.entries()) - b.entries()).squaredNorm();
    return UnistochasticDecision{UnistochasticVerdict::certified, residual,
                                 std::move(witness)};
  }

  // Stage 1: alternating projections onto the unitary group from seeded random
  // entrywise phases. Cheap and sharp: a certifiable target is usually matched
  // to machine precision within a few starts.
  const Eigen::MatrixXd sqrt_target = b.entries().cwiseSqrt();
  const std::complex<double> i_unit(0.0, 1.0);
  double best_residual = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd best_v;
  for (int s = 0; s < cfg.multistarts; ++s) {
    std::uint64_t state =
        cfg.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s + 1);
    Eigen::MatrixXcd phases(b.entries().rows(), b.entries().cols());
    if (s == 0) {
      phases.setOnes();  // real non-negative start: exact for permutation-like targets
    } else {
      for (Eigen::Index i = 0; i < phases.rows(); ++i)
        for (Eigen::Index j = 0; j < phases.cols(); ++j)
          phases(i, j) = std::exp(i_unit * uniform_angle(state));
    }
    const Eigen::MatrixXcd v = alternating_projection(
        sqrt_target, phases, cfg.max_iterations, cfg.convergence_tol);
    const double res = (uni_image(v) - b.entries()).squaredNorm();
    if (res < best_residual) {
      best_residual = res;
      best_v = v;
    }
    if (best_residual < certify_below) break;
  }
  if (best_residual < certify_below)
    return UnistochasticDecision{UnistochasticVerdict::certified, best_residual,
                                 UnitaryMatrix(best_v)};

  // Stage 2: derivative-free descent over the unitary parameterization, in
  // case the projection iteration stalled away from the optimum.
  auto objective = [&](const std::vector<double>& x) {
    return (uni_image(build_unitary(x, n)) - b.entries()).squaredNorm();
  };
  MultistartResult ms = multistart(objective, n * n, cfg, certify_below);
  if (ms.best_f < best_residual) {
    best_residual = ms.best_f;
    best_v = build_unitary(ms.best_x, n);
  }

  if (best_residual < certify_below)
    return UnistochasticDecision{UnistochasticVerdict::certified, best_residual,
                                 UnitaryMatrix(best_v)};
  if (best_residual > cfg.refute_threshold)
    return UnistochasticDecision{UnistochasticVerdict::refuted, best_residual,
                                 std::nullopt};
  return UnistochasticDecision{UnistochasticVerdict::inconclusive, best_residual,
                               std::nullopt};
}

VerificationReport verify_metrotropy(const StationarySystem& sys,
                                     const OptimizerConfig& cfg) {
  VerificationReport report = minimize_post_measurement_energy(sys, cfg);
  // Entrywise distance of the best channel to (1 + sigma)/2, minimized over
  // involutions tied at v0.
  const ExtractionReport analytic = metrotropy_matching(sys);
  const double v0 = involution_energy(sys, analytic.optimal_permutation);
  double dist = std::numeric_limits<double>::infinity();
  for (const Permutation& sigma : enumerate_involutions(sys.size())) {
    if (involution_energy(sys, sigma) > v0 + 1e-12) continue;
    const Eigen::MatrixXd channel =
        BistochasticMatrix::involution_channel(sigma).entries();
    dist = std::min(dist, (report.best_channel.entries() - channel)
                              .cwiseAbs()
                              .maxCoeff());
  }
  report.channel_distance = dist;
  return report;
}

}  // namespace metrotropy
