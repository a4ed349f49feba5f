#pragma once

// Random fields at coefficient level, their closed-form second moments, and a
// chunked Monte Carlo harness whose output does not depend on the thread count.

#include "su2/harmonic.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace su2 {

/// Complex Gaussian sigma (xi1 + i xi2) / sqrt(2): E|a|^2 = sigma^2, E a^2 = 0.
Complex complex_gaussian(Rng& rng, double sigma = 1.0);

struct CovarianceSpec {
  enum class Variant { BiInvariant, LeftInvariant };

  Variant variant = Variant::BiInvariant;
  int band_limit = 0;
  /// sigma(l)^2 indexed by 2l (bi-invariant).
  std::vector<double> spectrum;
  /// K(s, s') indexed by 2l, rows and columns s ascending (left-invariant).
  std::vector<Eigen::MatrixXcd> covariance;

  /// Throws InvalidSpec on shape or sign errors and NotPSD when some K has an
  /// eigenvalue below -1e-10 * trace or is not Hermitian to 1e-12.
  void validate() const;
};

SpectralCoefficients gen_gaussian_bi_invariant(const CovarianceSpec& spec, Rng& rng);

/// Rows a^l_{m,.} = R z_m with R R^H = K and z_m standard complex Gaussian.
SpectralCoefficients gen_gaussian_left_invariant(const CovarianceSpec& spec, Rng& rng);

/// Hermitian square root factor with eigenvalues above -1e-10 * trace clamped
/// to 0. Throws NotPSD otherwise.
Eigen::MatrixXcd psd_factor(const Eigen::MatrixXcd& k);

/// Left: coefficients of X(g^{-1} .), each column becomes conj(D(g)) a_{.,s}.
/// Right: coefficients of X(. g), each row a_{m,.} becomes D(g) a_{m,.}.
SpectralCoefficients rotate_coefficients(const SpectralCoefficients& coeffs, const SU2Element& g, Side side);

enum class RotationSide { Left, Right, Bi };

RotationSide parse_rotation_side(const std::string& name);
const char* to_string(RotationSide side);

/// X(z) = F(g1^{-1} z g2) with independent Haar g1 (left, bi) and g2 (right, bi).
SpectralCoefficients gen_rotated(const SpectralCoefficients& templ, RotationSide side, Rng& rng);

struct SpinMeasure {
  int two_ell = 0;
  std::vector<double> masses;  // s = -l..l ascending

  /// Throws InvalidSpec unless nonnegative, summing to 1 within 1e-12.
  void validate() const;
};

/// a^l_{m,s} = mu(s)^{1/2} D^l_{s,m}(gamma_s) with independent Haar gamma_s.
/// Band limit defaults to two_ell.
SpectralCoefficients realize_spin_measure(const SpinMeasure& mu, Rng& rng, int band_limit = -1);

/// One Haar gamma for the whole collection: v_i -> D^{l_i}(gamma) v_i, with
/// 2 l_i + 1 = v_i.size().
std::vector<Eigen::VectorXcd> d_invariantize(const std::vector<Eigen::VectorXcd>& vectors, Rng& rng);

// ---------------------------------------------------------------------------
// Closed-form moments.

struct CoefficientIndex {
  int two_ell = 0;
  int two_m = 0;
  int two_s = 0;
  std::string str() const;
};

/// second = E{a conj(a')}, pseudo = E{a a'}.
struct Moments {
  Complex second = 0.0;
  Complex pseudo = 0.0;
};

/// E{D^l_{m,s} conj(D^l'_{m',s'})} and E{D^l_{m,s} D^l'_{m',s'}} under Haar measure.
Moments haar_pair_moments(const CoefficientIndex& a, const CoefficientIndex& b);

/// Schur moments of w = D(gamma) v, w' = D(gamma) v' at entries i, j (positions).
Moments schur_moments(const Eigen::VectorXcd& v, const Eigen::VectorXcd& vp, int i, int j);

/// The generator families with their predicted moments.
struct GeneratorConfig {
  enum class Variant { GaussianBi, GaussianLeft, Rotated, SpinMeasure };

  Variant variant = Variant::GaussianBi;
  CovarianceSpec covariance;
  SpectralCoefficients templ;
  RotationSide side = RotationSide::Bi;
  SpinMeasure mu;

  int band_limit() const;
  void validate() const;
};

const char* to_string(GeneratorConfig::Variant variant);

using CoefficientGenerator = std::function<SpectralCoefficients(Rng&)>;

CoefficientGenerator make_generator(const GeneratorConfig& config);
Moments predict_moments(const GeneratorConfig& config, const CoefficientIndex& a, const CoefficientIndex& b);

// ---------------------------------------------------------------------------
// Monte Carlo harness.

struct McOptions {
  std::uint64_t seed = 1;
  long samples = 100000;
  int threads = 1;
  /// Samples per random stream; stream c is make_stream(seed, c).
  long chunk = 1000;
};

/// Observation vector per sample.
using Sampler = std::function<Eigen::VectorXcd(Rng&)>;

struct PairTarget {
  std::string label;
  int i = 0;
  int j = 0;
  Moments prediction;
};

struct CorrelationRow {
  std::string label;
  Moments estimate;
  Moments prediction;
  double stderr_second = 0.0;
  double stderr_pseudo = 0.0;
  bool pass_second = false;
  bool pass_pseudo = false;
};

struct CorrelationReport {
  long samples = 0;
  std::vector<CorrelationRow> rows;
  bool all_pass() const;
};

/// |est - pred| <= 5 stderr + 1e-12.
bool within_tolerance(Complex estimate, Complex prediction, double standard_error);

/// Sample means of x_i conj(x_j) and x_i x_j over N samples, stderr = sqrt(mean |y - ybar|^2 / N).
CorrelationReport estimate_pair_moments(const Sampler& sampler, const std::vector<PairTarget>& targets,
                                        const McOptions& options);

/// Flat position of a^l_{m,s} in coefficient order (l, then m, then s).
int flat_index(const CoefficientIndex& index);
Eigen::VectorXcd flatten(const SpectralCoefficients& coeffs);

struct CoefficientTarget {
  CoefficientIndex a;
  CoefficientIndex b;
  Moments prediction;
};

CorrelationReport estimate_correlations(const CoefficientGenerator& generator,
                                        const std::vector<CoefficientTarget>& targets, const McOptions& options);

/// All pairs of indices of degree <= max_two_ell with predictions from config.
std::vector<CoefficientTarget> all_targets(const GeneratorConfig& config, int max_two_ell);

enum class SpinMode { Weak, Strong };

struct SpinMeasureEstimate {
  long samples = 0;
  SpinMeasureSet value;
  SpinMeasureSet standard_error;
};

/// Weak: sum |a|^2 / sum ||X||^2 (delta-method stderr). Strong: mean of
/// |a|^2 / ||X||^2 over nonzero samples (stderr = std / sqrt(N)).
/// Throws ZeroField if every sample vanishes.
SpinMeasureEstimate estimate_spin_measures(const CoefficientGenerator& generator, SpinMode mode,
                                           const McOptions& options);

// ---------------------------------------------------------------------------
// Orbits of the standard basis vectors.

struct OrbitReport {
  int two_ell = 0;
  int two_s = 0;
  /// Every enumerated isotropy angle gives the phase e^{-i s psi} = 1 exactly
  /// in integer arithmetic.
  bool isotropy_exact = false;
  double isotropy_defect = 0.0;  // max |D(g3(psi_k)) e_s - e_s|
  double moved_distance = 0.0;   // |D(g) e_s - e_s| for a non-isotropy g
  double span_ratio = 0.0;       // smallest / largest singular value
  bool span_full_rank = false;
};

/// For s != 0, psi_k = 2 pi k / |s| for k = 1..2|s| and the moving element
/// g3(pi / |s|). For s = 0, the circle g3(psi) and, when l is an integer, the
/// elements h(0, beta), which fix e_0 exactly when l is even; the moving
/// element is then a Haar draw. The span check uses 2l+1 Haar rotations of a
/// random v.
OrbitReport orbit_checks(int two_ell, int two_s, Rng& rng);

}  // namespace su2
