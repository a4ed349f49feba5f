#pragma once

// Quaternion model of SU(2): h(alpha, beta) = [[alpha, -conj(beta)], [beta, conj(alpha)]]
// with |alpha|^2 + |beta|^2 = 1. Euler angles follow g3(phi) g2(theta) g3(psi).

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <optional>
#include <random>

namespace su2 {

using Complex = std::complex<double>;

/// Random stream used by every sampler. Streams are derived from (seed, index).
using Rng = std::mt19937_64;

Rng make_stream(std::uint64_t seed, std::uint64_t index);

struct EulerAngles {
  double phi = 0.0;    // [0, 2pi]
  double theta = 0.0;  // [0, pi]
  double psi = 0.0;    // [0, 4pi)
};

class SU2Element {
 public:
  /// Identity.
  SU2Element() = default;

  /// Normalizing constructor. Throws Error(NearZero) when |alpha|^2+|beta|^2 <= 1e-30.
  static SU2Element make(Complex alpha, Complex beta);

  /// Wraps a pair that is already unit norm (to ~1e-12); no renormalization.
  static SU2Element from_unit(Complex alpha, Complex beta);

  static SU2Element identity() { return {}; }
  /// Rotation generator around e3: h(e^{i psi/2}, 0).
  static SU2Element g3(double psi);
  /// Rotation generator around e2: h(cos(theta/2), sin(theta/2)).
  static SU2Element g2(double theta);

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }

  SU2Element inverse() const { return {std::conj(alpha_), -beta_}; }
  /// Entrywise complex conjugate of the 2x2 matrix.
  SU2Element conj_entries() const { return {std::conj(alpha_), std::conj(beta_)}; }
  SU2Element operator-() const { return {-alpha_, -beta_}; }

  friend SU2Element operator*(const SU2Element& a, const SU2Element& b);

  Eigen::Matrix2cd matrix() const;
  double norm_defect() const { return std::abs(std::norm(alpha_) + std::norm(beta_) - 1.0); }

 private:
  SU2Element(Complex a, Complex b) : alpha_(a), beta_(b) {}

  Complex alpha_{1.0, 0.0};
  Complex beta_{0.0, 0.0};
};

/// Max-entry distance between the 2x2 matrices of a and b.
double distance(const SU2Element& a, const SU2Element& b);

SU2Element su2_from_euler(const EulerAngles& e);

/// Branch: theta = 2 atan2(|beta|, |alpha|); phi = arg(alpha) - arg(beta),
/// psi = arg(alpha) + arg(beta), reduced to [0,2pi) x [0,4pi) (adding 2pi to psi
/// when phi wraps). At theta in {0, pi} phi is set to 0.
EulerAngles euler_from_su2(const SU2Element& g);

/// Haar-distributed element: four i.i.d. standard normals, normalized.
SU2Element haar_sample(Rng& rng);

/// A point of the Riemann sphere C u {infinity}.
class RiemannSpherePoint {
 public:
  RiemannSpherePoint() = default;
  RiemannSpherePoint(Complex z) : value_(z) {}  // NOLINT: implicit from a finite value
  static RiemannSpherePoint infinity() { return RiemannSpherePoint(std::nullopt); }

  /// From homogeneous coordinates [z0 : z1] = z0 / z1.
  static RiemannSpherePoint projective(Complex z0, Complex z1);

  bool is_infinite() const { return !value_.has_value(); }
  Complex value() const;  // throws std::logic_error at infinity

  /// Homogeneous representative with |z0|^2 + |z1|^2 = 1.
  std::pair<Complex, Complex> homogeneous() const;

  friend bool operator==(const RiemannSpherePoint& a, const RiemannSpherePoint& b) {
    return a.value_ == b.value_;
  }

 private:
  explicit RiemannSpherePoint(std::optional<Complex> v) : value_(v) {}
  std::optional<Complex> value_{Complex{0.0, 0.0}};
};

/// Chordal distance on the Riemann sphere (distance of the unit-sphere images).
double chordal_distance(const RiemannSpherePoint& a, const RiemannSpherePoint& b);

/// Hopf projection zeta = alpha / beta (infinity when beta = 0).
RiemannSpherePoint hopf_project(const SU2Element& g);

/// Moebius action [z0 : z1] -> [alpha z0 - conj(beta) z1 : beta z0 + conj(alpha) z1].
RiemannSpherePoint moebius(const SU2Element& g, const RiemannSpherePoint& z);

/// Stereographic map from the north pole: zeta = (x + i y) / (1 - t). Requires |p| = 1 to 1e-12.
RiemannSpherePoint stereographic(const Eigen::Vector3d& p);
Eigen::Vector3d inverse_stereographic(const RiemannSpherePoint& z);

/// Double cover SU(2) -> SO(3), compatible with the Moebius action:
/// stereographic(R p) = moebius(g, stereographic(p)).
Eigen::Matrix3d so3_from_su2(const SU2Element& g);

}  // namespace su2
