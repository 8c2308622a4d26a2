#include "metrotropy/qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace metrotropy {

namespace {
constexpr double kBallTol = 1e-9;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

QubitSystem::QubitSystem(double bz, BlochVector r) : bz_(bz), r_(r) {
  if (!(bz > 0.0) || !std::isfinite(bz))
    throw std::invalid_argument("qubit system: bz must be positive");
  if (r.x * r.x + r.y * r.y + r.z * r.z > 1.0 + kBallTol)
    throw std::invalid_argument("qubit system: Bloch vector outside the unit ball");
}

BlochVector project_bloch(const BlochVector& r, const BlochVector& n) {
  if (std::abs(n.norm() - 1.0) > kBallTol)
    throw std::invalid_argument("project_bloch: measurement axis is not a unit vector");
  const double c = r.x * n.x + r.y * n.y + r.z * n.z;
  return BlochVector{c * n.x, c * n.y, c * n.z};
}

double qubit_ergotropy(const QubitSystem& q) {
  return q.bz() * (q.r().norm() + q.r().z);
}

QubitMeasurement qubit_metrotropy(const QubitSystem& q) {
  const BlochVector& r = q.r();
  const double len = r.norm();
  if (len == 0.0) return QubitMeasurement{0.0, BlochVector{1.0, 0.0, 0.0}};

  const double rho_xy = std::hypot(r.x, r.y);
  const double theta = std::atan2(rho_xy, r.z);
  const double alpha = M_PI / 2.0 + theta / 2.0;
  // Azimuth of the r-z plane; zero by convention when r is on the z axis.
  const double cphi = rho_xy > 0.0 ? r.x / rho_xy : 1.0;
  const double sphi = rho_xy > 0.0 ? r.y / rho_xy : 0.0;
  const BlochVector n{std::sin(alpha) * cphi, std::sin(alpha) * sphi,
                      std::cos(alpha)};
  return QubitMeasurement{qubit_ergotropy(q) / 2.0, n};
}

}  // namespace metrotropy
