#pragma once

// Band-limited analysis on SU(2) = 2S^3 with the unnormalized volume measure
// (total 16 pi^2) and the orthonormal basis phi^l_{m,s} = sqrt(2l+1)/(4 pi) D^l_{m,s}.

#include "su2/group.hpp"
#include "su2/wigner.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace su2 {

inline constexpr double kVolume = 16.0 * std::numbers::pi * std::numbers::pi;

/// Product rule on the Euler chart: N_phi = 2L+2 uniform phi, N_psi = 4L+2
/// uniform psi on [0, 4pi), N_theta = 2L+2 Gauss-Legendre nodes in cos(theta).
/// Flattened node order is (theta, phi, psi) with psi fastest.
class QuadratureGrid {
 public:
  int band_limit() const { return two_L_; }
  std::size_t size() const { return weights_.size(); }

  const std::vector<EulerAngles>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const;

  const std::vector<double>& phi_nodes() const { return phi_; }
  const std::vector<double>& psi_nodes() const { return psi_; }
  const std::vector<double>& theta_nodes() const { return theta_; }
  const std::vector<double>& theta_weights() const { return theta_w_; }
  double phi_weight() const { return phi_w_; }
  double psi_weight() const { return psi_w_; }

  /// Orthonormality defect max |<phi, phi'> - delta| found by the build gate.
  double gate_defect() const { return gate_defect_; }

 private:
  friend QuadratureGrid build_grid(int two_L, double gate_tolerance, int cap);

  int two_L_ = 0;
  std::vector<double> phi_, psi_, theta_, theta_w_;
  double phi_w_ = 0.0;
  double psi_w_ = 0.0;
  std::vector<EulerAngles> nodes_;
  std::vector<double> weights_;
  double gate_defect_ = 0.0;
};

/// Builds the grid and runs the orthonormality gate through the product
/// structure (phi sums, psi sums, and per-(m, s) theta Gram blocks).
/// Throws BandLimitExceeded or ExactnessGateFailed.
QuadratureGrid build_grid(int two_L, double gate_tolerance = 1e-8, int cap = kDefaultBandLimitCap);

/// Direct Gram matrix B^H W B over every basis pair, for audits; O(nodes * basis^2).
double direct_gram_defect(const QuadratureGrid& grid);

void write_grid_csv(const QuadratureGrid& grid, std::ostream& out);

class SpectralCoefficients {
 public:
  SpectralCoefficients() : SpectralCoefficients(0) {}
  explicit SpectralCoefficients(int two_L);

  static SpectralCoefficients delta(int two_L, int two_ell, int two_m, int two_s, Complex value = 1.0);

  int band_limit() const { return two_L_; }

  /// Block a^l with entry (m, s) at (position(two_ell, two_m), position(two_ell, two_s)).
  Eigen::MatrixXcd& block(int two_ell);
  const Eigen::MatrixXcd& block(int two_ell) const;

  Complex& at(int two_ell, int two_m, int two_s);
  Complex at(int two_ell, int two_m, int two_s) const;

  double norm_squared() const;
  double norm() const;

  SpectralCoefficients& operator+=(const SpectralCoefficients& other);
  SpectralCoefficients& operator*=(Complex c);

 private:
  int two_L_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

double max_abs_diff(const SpectralCoefficients& a, const SpectralCoefficients& b);

using Field = std::function<Complex(const SU2Element&)>;

/// Forward and inverse transforms on a fixed grid. The phi and psi sums are
/// done first, so analysis costs O(nodes * (2L+1)^2) rather than a full
/// basis-by-node product.
class SpectralTransform {
 public:
  explicit SpectralTransform(int two_L);
  explicit SpectralTransform(QuadratureGrid grid);

  const QuadratureGrid& grid() const { return grid_; }
  int band_limit() const { return grid_.band_limit(); }

  /// a^l_{m,s} = <phi^l_{m,s}, field>, by quadrature.
  SpectralCoefficients analyze(const Field& field) const;
  /// Same from samples in the grid's flattened node order.
  SpectralCoefficients analyze_samples(const std::vector<Complex>& samples) const;

  /// Field values at the grid nodes.
  std::vector<Complex> synthesize_on_grid(const SpectralCoefficients& coeffs) const;

 private:
  QuadratureGrid grid_;
  // d_[t][two_ell] = D^l(g2(theta_t)), real part.
  std::vector<std::vector<Eigen::MatrixXd>> d_;
};

SpectralCoefficients analyze(const Field& field, int two_L);

/// X(g) = sum a^l_{m,s} phi^l_{m,s}(g).
Complex synthesize_at(const SpectralCoefficients& coeffs, const SU2Element& g);
Field synthesize(SpectralCoefficients coeffs);

/// L^2 inner product <f, h> = integral conj(f) h on a grid.
Complex grid_inner_product(const QuadratureGrid& grid, const Field& f, const Field& h);

enum class LaplacianKind { Full, Vertical, Horizontal, Spin };

LaplacianKind parse_laplacian_kind(const std::string& name);
const char* to_string(LaplacianKind kind);

/// Four times the eigenvalue on D^l_{m,s}, exact in integers:
///   full -2l(2l+2), vertical -(2s)^2, horizontal -(2l-2s)(2l+2s+2) - 2(2s),
///   spin -(2l-2s)(2l+2s+2).
long long laplacian_multiplier_quadrupled(LaplacianKind kind, int two_ell, int two_s);

/// Eigenvalues -l(l+1), -s^2, -(l-s)(l+s+1)-s, -(l-s)(l+s+1).
double laplacian_multiplier(LaplacianKind kind, int two_ell, int two_s);

SpectralCoefficients apply_laplacian(const SpectralCoefficients& coeffs, LaplacianKind kind);

enum class Side { Left, Right };

/// Keep row m = k (left) or column s = k (right) in every degree.
SpectralCoefficients project_spin(const SpectralCoefficients& coeffs, Side side, int two_k);

/// Spectral probability pi and its marginals. Keys are doubled indices.
struct SpinMeasureSet {
  std::map<std::tuple<int, int, int>, double> total;  // (2l, 2m, 2s)
  std::map<int, double> left;                          // 2m
  std::map<int, double> right;                         // 2s
  std::map<std::pair<int, int>, double> bi;            // (2m, 2s)
};

/// Throws ZeroField when the coefficients vanish.
SpinMeasureSet spin_measures(const SpectralCoefficients& coeffs);

/// Per-degree squared masses |a^l_{m,s}|^2 (unnormalized), keyed like SpinMeasureSet.
SpinMeasureSet squared_masses(const SpectralCoefficients& coeffs);

}  // namespace su2
