#ifndef METROTROPY_QUBIT_HPP
#define METROTROPY_QUBIT_HPP

namespace metrotropy {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// Two-level system with H = bz * sigma_z (eigenvalues -bz, +bz) and state
/// rho = (1 + r . sigma)/2.
class QubitSystem {
 public:
  QubitSystem(double bz, BlochVector r);

  double bz() const { return bz_; }
  const BlochVector& r() const { return r_; }

 private:
  double bz_;
  BlochVector r_;
};

struct QubitMeasurement {
  double value;          // metrotropy, energy units
  BlochVector direction; // optimal measurement axis (unit vector)
};

/// Projection of the state vector onto the measurement axis: (r . n) n.
BlochVector project_bloch(const BlochVector& r, const BlochVector& n);

/// W = bz (|r| + r_z).
double qubit_ergotropy(const QubitSystem& q);

/// M = W/2, achieved at polar angle pi/2 + theta/2 in the plane spanned by
/// r and the z axis (zero azimuth when r lies on the z axis).
QubitMeasurement qubit_metrotropy(const QubitSystem& q);

}  // namespace metrotropy

#endif
