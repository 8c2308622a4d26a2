#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "metrotropy/matrices.hpp"
#include "metrotropy/permutation.hpp"

using namespace metrotropy;

namespace {

// Deterministic generator for property tests.
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

Permutation random_permutation(std::uint64_t& s, std::size_t n) {
  std::vector<std::size_t> map(n);
  for (std::size_t k = 0; k < n; ++k) map[k] = k;
  for (std::size_t k = n; k > 1; --k)
    std::swap(map[k - 1], map[splitmix(s) % k]);
  return Permutation(map);
}

// Random convex mixture of random permutations.
BistochasticMatrix random_bistochastic(std::uint64_t& s, std::size_t n) {
  const std::size_t terms = 2 + splitmix(s) % (2 * n);
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& v : w) {
    v = unit_uniform(s) + 1e-6;
    total += v;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < terms; ++t)
    m += (w[t] / total) * random_permutation(s, n).matrix();
  return BistochasticMatrix(m);
}

const std::vector<std::size_t> kThreeCycle{2, 0, 1};  // the worked-example sigma_W

}  // namespace

TEST_CASE("identity permutation") {
  CHECK(Permutation::identity(3).map() == std::vector<std::size_t>{0, 1, 2});
  CHECK(Permutation::identity(1).map() == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(Permutation::identity(0), std::invalid_argument);

  std::uint64_t s = 1;
  const Permutation sigma = random_permutation(s, 4);
  CHECK(Permutation::identity(4).compose(sigma) == sigma);
  CHECK(sigma.compose(Permutation::identity(4)) == sigma);
}

TEST_CASE("compose and inverse") {
  const Permutation swap01 = Permutation::transposition(3, 0, 1);
  CHECK(swap01.compose(swap01) == Permutation::identity(3));

  // 3-cycle 0->1->2->0 is map [1,2,0]; composed with itself it chases to [2,0,1].
  const Permutation cycle({1, 2, 0});
  CHECK(cycle.compose(cycle) == Permutation({2, 0, 1}));

  CHECK(cycle.compose(cycle.inverse()) == Permutation::identity(3));
  CHECK(Permutation({1, 2, 0}).inverse() == Permutation({2, 0, 1}));
  CHECK(Permutation::identity(5).inverse() == Permutation::identity(5));
  CHECK(swap01.inverse() == swap01);

  CHECK_THROWS_AS(swap01.compose(Permutation::identity(4)), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
}

TEST_CASE("matrix form matches composition and transpose-inverse") {
  std::uint64_t s = 7;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + splitmix(s) % 5;
    const Permutation a = random_permutation(s, n);
    const Permutation b = random_permutation(s, n);
    CHECK((a.compose(b).matrix() - a.matrix() * b.matrix()).norm() == 0.0);
    CHECK((a.inverse().matrix() - a.matrix().transpose()).norm() == 0.0);
  }
}

TEST_CASE("is_involution") {
  CHECK(Permutation::identity(4).is_involution());
  CHECK_FALSE(Permutation(kThreeCycle).is_involution());
  CHECK(Permutation::transposition(3, 0, 1).is_involution());
}

TEST_CASE("enumerate_involutions counts and order") {
  CHECK(enumerate_involutions(2).size() == 2);
  const auto inv3 = enumerate_involutions(3);
  REQUIRE(inv3.size() == 4);
  CHECK(inv3[0] == Permutation::identity(3));
  CHECK(inv3[1] == Permutation::transposition(3, 1, 2));
  CHECK(inv3[2] == Permutation::transposition(3, 0, 1));
  CHECK(inv3[3] == Permutation::transposition(3, 0, 2));
  CHECK(enumerate_involutions(6).size() == 76);

  // Telephone recurrence T(n) = T(n-1) + (n-1) T(n-2) up to n = 10.
  std::size_t t_prev2 = 1, t_prev1 = 1;
  for (std::size_t n = 2; n <= 10; ++n) {
    const std::size_t t_n = t_prev1 + (n - 1) * t_prev2;
    CHECK(enumerate_involutions(n).size() == t_n);
    t_prev2 = t_prev1;
    t_prev1 = t_n;
  }
  CHECK_THROWS_AS(enumerate_involutions(13), SizeGuardError);

  for (const auto& sigma : enumerate_involutions(5)) CHECK(sigma.is_involution());
}

TEST_CASE("complementarity theorems") {
  // Complementary to the identity iff symmetric; exhaustive on S_4.
  for (const Permutation& sigma : all_permutations(4))
    CHECK(is_complementary(Permutation::identity(4), sigma) == sigma.is_involution());

  CHECK_FALSE(is_complementary(Permutation::identity(3), Permutation(kThreeCycle)));

  // For involutions, complementary iff commuting; exhaustive on S_4 involutions.
  for (const Permutation& a : enumerate_involutions(4))
    for (const Permutation& b : enumerate_involutions(4))
      CHECK(is_complementary(a, b) == (a.compose(b) == b.compose(a)));
}

TEST_CASE("bistochastic validation") {
  CHECK_THROWS_AS(BistochasticMatrix(Eigen::MatrixXd::Zero(2, 2)),
                  std::invalid_argument);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.1, -0.1, -0.1, 1.1;
  CHECK_THROWS_AS((BistochasticMatrix(neg)), std::invalid_argument);
  CHECK_NOTHROW(BistochasticMatrix(Eigen::MatrixXd::Identity(3, 3)));
  CHECK_NOTHROW(BistochasticMatrix(Eigen::MatrixXd::Constant(4, 4, 0.25)));
}

TEST_CASE("product of bistochastic matrices is bistochastic") {
  std::uint64_t s = 11;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + splitmix(s) % 5;
    const auto a = random_bistochastic(s, n);
    const auto b = random_bistochastic(s, n);
    CHECK_NOTHROW(BistochasticMatrix(a.entries() * b.entries()));
  }
}

TEST_CASE("unitary validation") {
  CHECK_NOTHROW(UnitaryMatrix(Eigen::MatrixXcd::Identity(3, 3)));
  CHECK_THROWS_AS(UnitaryMatrix(Eigen::MatrixXcd::Constant(2, 2, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("unistochastic_of basics") {
  const auto id = unistochastic_of(UnitaryMatrix(Eigen::MatrixXcd::Identity(3, 3)));
  CHECK((id.entries() - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);

  Eigen::MatrixXcd mixer(2, 2);
  const double isq = 1.0 / std::sqrt(2.0);
  mixer << isq, isq, isq, -isq;
  const auto p = unistochastic_of(UnitaryMatrix(mixer));
  CHECK(p.entries().maxCoeff() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.entries().minCoeff() == doctest::Approx(0.5).epsilon(1e-15));

  // Permutations are unistochastic: the image of the matrix form is itself.
  std::uint64_t s = 3;
  for (int trial = 0; trial < 20; ++trial) {
    const Permutation sigma = random_permutation(s, 2 + splitmix(s) % 6);
    const auto img = unistochastic_of(UnitaryMatrix::from_permutation(sigma));
    CHECK((img.entries() - sigma.matrix()).norm() == 0.0);
  }
}

TEST_CASE("birkhoff: permutation matrix gives a single term") {
  const Permutation sigma({2, 0, 1});
  const auto cc = birkhoff_decompose(BistochasticMatrix::from_permutation(sigma));
  REQUIRE(cc.perms.size() == 1);
  CHECK(cc.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cc.perms[0] == sigma);
}

TEST_CASE("birkhoff: involution channel gives two half terms") {
  const Permutation sigma = Permutation::transposition(4, 1, 3);
  const auto cc = birkhoff_decompose(BistochasticMatrix::involution_channel(sigma));
  REQUIRE(cc.perms.size() == 2);
  CHECK(cc.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cc.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
  const auto b = BistochasticMatrix::involution_channel(sigma);
  CHECK((cc.reconstruct() - b.entries()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("birkhoff: the non-unistochastic example still decomposes") {
  Eigen::MatrixXd m(3, 3);
  m << 0.5, 0.5, 0.0, 0.0, 0.5, 0.5, 0.5, 0.0, 0.5;
  const auto cc = birkhoff_decompose(BistochasticMatrix(m));
  double total = 0.0;
  for (double w : cc.weights) {
    CHECK(w >= 0.0);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((cc.reconstruct() - m).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("birkhoff reconstruction property") {
  std::uint64_t s = 42;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + splitmix(s) % 7;  // N in {2..8}
    const auto b = random_bistochastic(s, n);
    const auto cc = birkhoff_decompose(b);
    CHECK(cc.perms.size() <= (n - 1) * (n - 1) + 1 + n);
    CHECK((cc.reconstruct() - b.entries()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("birkhoff rejects non-bistochastic input") {
  Eigen::MatrixXd m(2, 2);
  m << 0.9, 0.2, 0.1, 0.8;
  CHECK_THROWS_AS((BistochasticMatrix(m)), std::invalid_argument);
}

TEST_CASE("cycle notation") {
  CHECK(Permutation::identity(3).cycles() == "id");
  CHECK(Permutation(kThreeCycle).cycles() == "(0 2 1)");
  CHECK(Permutation::transposition(3, 0, 1).cycles() == "(0 1)");
}
