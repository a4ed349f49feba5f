#include "su2/group.hpp"

#include "su2/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace su2 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearZero = 1e-30;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x2545f491u};
  return Rng(seq);
}

SU2Element SU2Element::make(Complex alpha, Complex beta) {
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (!(n2 > kNearZero)) throw Error(ErrorCode::NearZero, "|alpha|^2 + |beta|^2 below 1e-30");
  const double inv = 1.0 / std::sqrt(n2);
  return {alpha * inv, beta * inv};
}

SU2Element SU2Element::from_unit(Complex alpha, Complex beta) { return {alpha, beta}; }

SU2Element SU2Element::g3(double psi) { return {std::polar(1.0, psi / 2), 0.0}; }

SU2Element SU2Element::g2(double theta) { return {std::cos(theta / 2), std::sin(theta / 2)}; }

SU2Element operator*(const SU2Element& a, const SU2Element& b) {
  // [[a1, -b1*], [b1, a1*]] [[a2, -b2*], [b2, a2*]], first column.
  const Complex alpha = a.alpha_ * b.alpha_ - std::conj(a.beta_) * b.beta_;
  const Complex beta = a.beta_ * b.alpha_ + std::conj(a.alpha_) * b.beta_;
  return {alpha, beta};
}

Eigen::Matrix2cd SU2Element::matrix() const {
  Eigen::Matrix2cd m;
  m << alpha_, -std::conj(beta_), beta_, std::conj(alpha_);
  return m;
}

double distance(const SU2Element& a, const SU2Element& b) {
  return std::max(std::abs(a.alpha() - b.alpha()), std::abs(a.beta() - b.beta()));
}

SU2Element su2_from_euler(const EulerAngles& e) {
  const double c = std::cos(e.theta / 2);
  const double s = std::sin(e.theta / 2);
  return SU2Element::from_unit(std::polar(c, (e.phi + e.psi) / 2), std::polar(s, (-e.phi + e.psi) / 2));
}

EulerAngles euler_from_su2(const SU2Element& g) {
  const double ra = std::abs(g.alpha());
  const double rb = std::abs(g.beta());
  EulerAngles e;
  e.theta = 2.0 * std::atan2(rb, ra);
  if (rb == 0.0) {
    // theta = 0: only phi + psi = 2 arg(alpha) is determined.
    e.phi = 0.0;
    e.psi = wrap(2.0 * std::arg(g.alpha()), 4 * kPi);
    return e;
  }
  if (ra == 0.0) {
    // theta = pi: only psi - phi = 2 arg(beta) is determined.
    e.phi = 0.0;
    e.psi = wrap(2.0 * std::arg(g.beta()), 4 * kPi);
    return e;
  }
  const double aa = std::arg(g.alpha());
  const double ab = std::arg(g.beta());
  double phi = aa - ab;
  double psi = aa + ab;
  // (phi, psi) and (phi + 2pi, psi + 2pi) name the same element.
  const double turns = std::floor(phi / (2 * kPi));
  phi -= turns * 2 * kPi;
  psi -= turns * 2 * kPi;
  if (phi >= 2 * kPi) {
    phi -= 2 * kPi;
    psi -= 2 * kPi;
  }
  e.phi = phi;
  e.psi = wrap(psi, 4 * kPi);
  return e;
}

SU2Element haar_sample(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const double x0 = normal(rng);
    const double y0 = normal(rng);
    const double x1 = normal(rng);
    const double y1 = normal(rng);
    const double n2 = x0 * x0 + y0 * y0 + x1 * x1 + y1 * y1;
    if (n2 > kNearZero) return SU2Element::make({x0, y0}, {x1, y1});
  }
}

RiemannSpherePoint RiemannSpherePoint::projective(Complex z0, Complex z1) {
  if (z1 == Complex{0.0, 0.0}) {
    if (z0 == Complex{0.0, 0.0}) throw Error(ErrorCode::NearZero, "[0:0] is not a point");
    return infinity();
  }
  return RiemannSpherePoint(z0 / z1);
}

Complex RiemannSpherePoint::value() const {
  if (!value_) throw std::logic_error("value() of the point at infinity");
  return *value_;
}

std::pair<Complex, Complex> RiemannSpherePoint::homogeneous() const {
  if (!value_) return {1.0, 0.0};
  const Complex z = *value_;
  const double n = std::sqrt(1.0 + std::norm(z));
  return {z / n, 1.0 / n};
}

Eigen::Vector3d inverse_stereographic(const RiemannSpherePoint& z) {
  // With [z0 : z1] unit: x + i y = 2 z0 conj(z1), t = |z0|^2 - |z1|^2.
  const auto [z0, z1] = z.homogeneous();
  const Complex w = 2.0 * z0 * std::conj(z1);
  return {w.real(), w.imag(), std::norm(z0) - std::norm(z1)};
}

double chordal_distance(const RiemannSpherePoint& a, const RiemannSpherePoint& b) {
  return (inverse_stereographic(a) - inverse_stereographic(b)).norm();
}

RiemannSpherePoint hopf_project(const SU2Element& g) {
  return RiemannSpherePoint::projective(g.alpha(), g.beta());
}

RiemannSpherePoint moebius(const SU2Element& g, const RiemannSpherePoint& z) {
  const auto [z0, z1] = z.homogeneous();
  const Complex a = g.alpha();
  const Complex b = g.beta();
  return RiemannSpherePoint::projective(a * z0 - std::conj(b) * z1, b * z0 + std::conj(a) * z1);
}

RiemannSpherePoint stereographic(const Eigen::Vector3d& p) {
  if (std::abs(p.norm() - 1.0) > 1e-12) throw Error(ErrorCode::InvalidIndex, "stereographic needs a unit vector");
  // (x + i y) / (1 - t) = (1 + t) / (x - i y); use the better-conditioned form.
  const Complex w{p.x(), p.y()};
  if (p.z() <= 0.0) return RiemannSpherePoint(w / (1.0 - p.z()));
  return RiemannSpherePoint::projective(1.0 + p.z(), std::conj(w));
}

Eigen::Matrix3d so3_from_su2(const SU2Element& g) {
  // A point p corresponds to the traceless Hermitian matrix x sx - y sy + t sz,
  // which transforms as A -> g A g^H under the Moebius action.
  // R_ij = (1/2) tr(tau_i g tau_j g^H) with tau = (sx, -sy, sz).
  static const std::array<Eigen::Matrix2cd, 3> tau = [] {
    const Complex i{0.0, 1.0};
    std::array<Eigen::Matrix2cd, 3> t;
    t[0] << 0, 1, 1, 0;
    t[1] << 0, i, -i, 0;
    t[2] << 1, 0, 0, -1;
    return t;
  }();
  const Eigen::Matrix2cd m = g.matrix();
  Eigen::Matrix3d r;
  for (int j = 0; j < 3; ++j) {
    const Eigen::Matrix2cd moved = m * tau[j] * m.adjoint();
    for (int i = 0; i < 3; ++i) r(i, j) = 0.5 * (tau[i] * moved).trace().real();
  }
  return r;
}

}  // namespace su2
