#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "metrotropy/extraction.hpp"
#include "metrotropy/qubit.hpp"

using namespace metrotropy;

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::uint64_t& s) {
  return static_cast<double>(splitmix(s) >> 11) * 0x1p-53;
}

BlochVector random_bloch(std::uint64_t& s) {
  // Uniform direction, radius biased toward the surface; stays in the ball.
  const double z = 2.0 * unit_uniform(s) - 1.0;
  const double phi = 2.0 * M_PI * unit_uniform(s);
  const double len = std::cbrt(unit_uniform(s));
  const double sxy = std::sqrt(1.0 - z * z);
  return BlochVector{len * sxy * std::cos(phi), len * sxy * std::sin(phi), len * z};
}

// Energy drop bz (r_z - r'_z) for a measurement along polar angle alpha,
// azimuth phi.
double sweep_drop(const QubitSystem& q, double alpha, double phi) {
  const BlochVector n{std::sin(alpha) * std::cos(phi),
                      std::sin(alpha) * std::sin(phi), std::cos(alpha)};
  const BlochVector post = project_bloch(q.r(), n);
  return q.bz() * (q.r().z - post.z);
}

}  // namespace

TEST_CASE("qubit system validation") {
  CHECK_THROWS_AS(QubitSystem(0.0, BlochVector{0, 0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(QubitSystem(-1.0, BlochVector{0, 0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(QubitSystem(1.0, BlochVector{0.9, 0.9, 0.9}), std::invalid_argument);
  CHECK_NOTHROW(QubitSystem(1.0, BlochVector{0, 0, 1.0}));
}

TEST_CASE("project_bloch") {
  const BlochVector r{0.0, 0.0, 0.8};
  const BlochVector aligned = project_bloch(r, BlochVector{0, 0, 1});
  CHECK(aligned.z == 0.8);
  const BlochVector killed = project_bloch(r, BlochVector{1, 0, 0});
  CHECK(killed.x == 0.0);
  CHECK(killed.z == 0.0);

  const double isq = 1.0 / std::sqrt(2.0);
  const BlochVector tilted = project_bloch(BlochVector{1, 0, 0},
                                           BlochVector{isq, 0, isq});
  CHECK(tilted.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tilted.z == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(project_bloch(r, BlochVector{0.5, 0, 0}), std::invalid_argument);
}

TEST_CASE("project_bloch is idempotent and norm-non-increasing") {
  std::uint64_t s = 2;
  for (int trial = 0; trial < 500; ++trial) {
    const BlochVector r = random_bloch(s);
    BlochVector n = random_bloch(s);
    const double len = n.norm();
    if (len < 1e-6) continue;
    n = BlochVector{n.x / len, n.y / len, n.z / len};
    const BlochVector once = project_bloch(r, n);
    const BlochVector twice = project_bloch(once, n);
    CHECK(std::abs(once.x - twice.x) < 1e-15);
    CHECK(std::abs(once.y - twice.y) < 1e-15);
    CHECK(std::abs(once.z - twice.z) < 1e-15);
    CHECK(once.norm() <= r.norm() + 1e-15);
  }
}

TEST_CASE("stationary closed forms") {
  const QubitSystem up(1.0, BlochVector{0, 0, 0.8});
  CHECK(qubit_ergotropy(up) == doctest::Approx(1.6).epsilon(1e-14));
  const QubitMeasurement m = qubit_metrotropy(up);
  CHECK(m.value == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(std::abs(m.direction.z) < 1e-15);  // equatorial

  const QubitSystem down(1.0, BlochVector{0, 0, -0.5});
  CHECK(qubit_ergotropy(down) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(qubit_metrotropy(down).value == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("equatorial and degenerate cases") {
  const QubitSystem eq(1.0, BlochVector{1.0, 0.0, 0.0});  // theta = pi/2
  CHECK(qubit_ergotropy(eq) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(qubit_metrotropy(eq).value == doctest::Approx(0.5).epsilon(1e-14));

  const QubitSystem zero(2.0, BlochVector{0, 0, 0});
  CHECK(qubit_ergotropy(zero) == 0.0);
  const QubitMeasurement m = qubit_metrotropy(zero);
  CHECK(m.value == 0.0);
  CHECK(m.direction.x == 1.0);
}

TEST_CASE("metrotropy is exactly half the ergotropy") {
  std::uint64_t s = 9;
  for (int trial = 0; trial < 1000; ++trial) {
    const QubitSystem q(0.1 + unit_uniform(s), random_bloch(s));
    CHECK(qubit_metrotropy(q).value == qubit_ergotropy(q) / 2.0);
  }
}

TEST_CASE("optimal direction reproduces the value through projection") {
  std::uint64_t s = 13;
  for (int trial = 0; trial < 500; ++trial) {
    const QubitSystem q(0.1 + unit_uniform(s), random_bloch(s));
    const QubitMeasurement m = qubit_metrotropy(q);
    const BlochVector post = project_bloch(q.r(), m.direction);
    CHECK(q.bz() * (q.r().z - post.z) == doctest::Approx(m.value).epsilon(1e-12));
  }
}

TEST_CASE("in-plane sweep confirms the optimal angle") {
  const double bz = 1.0;
  for (double len : {0.25, 0.5, 1.0}) {
    for (int deg = 0; deg <= 180; deg += 7) {
      const double theta = deg * M_PI / 180.0;
      const QubitSystem q(bz, BlochVector{len * std::sin(theta), 0.0,
                                          len * std::cos(theta)});
      double best = 0.0, best_alpha = 0.0;
      for (int a = 0; a <= 180; ++a) {
        const double alpha = a * M_PI / 180.0;
        const double drop = sweep_drop(q, alpha, 0.0);
        if (drop > best) {
          best = drop;
          best_alpha = alpha;
        }
      }
      const double expect = bz * len * (1.0 + std::cos(theta)) / 2.0;
      CHECK(best == doctest::Approx(expect).epsilon(1e-4));
      if (expect > 1e-3)
        CHECK(std::abs(best_alpha - (M_PI / 2.0 + theta / 2.0)) < 1e-2);
    }
  }
}

TEST_CASE("full-sphere sweep never beats the in-plane optimum") {
  // Guards the symmetry argument restricting the optimal axis to the r-z plane.
  const QubitSystem q(1.0, BlochVector{0.5, 0.2, 0.4});
  const double analytic = qubit_metrotropy(q).value;
  double best = 0.0;
  for (int a = 0; a <= 90; ++a)
    for (int p = 0; p < 180; ++p) {
      const double drop = sweep_drop(q, a * M_PI / 90.0, p * M_PI / 90.0);
      best = std::max(best, drop);
    }
  CHECK(best <= analytic + 1e-9);
  CHECK(best == doctest::Approx(analytic).epsilon(1e-3));
}

TEST_CASE("stationary qubit agrees with the general extraction module") {
  std::uint64_t s = 19;
  for (int trial = 0; trial < 200; ++trial) {
    const double bz = 0.1 + unit_uniform(s);
    const double r_z = unit_uniform(s);
    const QubitSystem q(bz, BlochVector{0, 0, r_z});
    const StationarySystem sys({-bz, bz}, {(1.0 - r_z) / 2.0, (1.0 + r_z) / 2.0});
    CHECK(qubit_ergotropy(q) == doctest::Approx(ergotropy(sys).value).epsilon(1e-12));
    CHECK(qubit_metrotropy(q).value ==
          doctest::Approx(metrotropy_matching(sys).value).epsilon(1e-12));
  }
}
