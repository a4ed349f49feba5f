#include "su2/random_fields.hpp"

#include "su2/errors.hpp"
#include "su2/format.hpp"
#include "su2/half_index.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace su2 {

namespace {

constexpr double kPi = std::numbers::pi;

// Runs body(rng, count, acc) once per chunk and returns the
// per-chunk accumulators in chunk order.
template <typename Acc, typename Make, typename Body>
std::vector<Acc> run_chunks(const McOptions& options, Make make, Body body) {
  if (options.samples < 100) throw Error(ErrorCode::InvalidSpec, "Monte Carlo needs at least 100 samples");
  if (options.chunk < 1) throw Error(ErrorCode::InvalidSpec, "chunk size must be positive");
  const long chunks = (options.samples + options.chunk - 1) / options.chunk;
  std::vector<Acc> accs;
  accs.reserve(chunks);
  for (long c = 0; c < chunks; ++c) accs.push_back(make());
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (long c = next++; c < chunks; c = next++) {
        Rng rng = make_stream(options.seed, static_cast<std::uint64_t>(c));
        const long count = std::min(options.chunk, options.samples - c * options.chunk);
        body(rng, count, accs[c]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };
  const int threads = static_cast<int>(std::clamp<long>(options.threads, 1, chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return accs;
}

Eigen::MatrixXcd wigner_block(int two_ell, const SU2Element& g) {
  return wigner_matrix(two_ell, g, std::max(two_ell, kDefaultBandLimitCap)).matrix();
}

void check_hermitian(const Eigen::MatrixXcd& k, const std::string& what) {
  if (k.rows() != k.cols()) throw Error(ErrorCode::InvalidSpec, what + " is not square");
  if (!k.allFinite()) throw Error(ErrorCode::InvalidSpec, what + " has non-finite entries");
  const double asym = (k - k.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) throw Error(ErrorCode::InvalidSpec, what + " is not Hermitian (defect " + format_double(asym) + ")");
}

SpectralCoefficients left_gaussian_from_factors(const std::vector<Eigen::MatrixXcd>& factors, Rng& rng) {
  const int two_L = static_cast<int>(factors.size()) - 1;
  SpectralCoefficients out(two_L);
  for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
    const int n = two_ell + 1;
    Eigen::MatrixXcd z(n, n);  // row m holds z_m
    for (int m = 0; m < n; ++m)
      for (int s = 0; s < n; ++s) z(m, s) = complex_gaussian(rng);
    out.block(two_ell) = z * factors[two_ell].transpose();
  }
  return out;
}

std::vector<Eigen::MatrixXcd> left_factors(const CovarianceSpec& spec) {
  std::vector<Eigen::MatrixXcd> f;
  for (const auto& k : spec.covariance) f.push_back(psd_factor(k));
  return f;
}

}  // namespace

Complex complex_gaussian(Rng& rng, double sigma) {
  std::normal_distribution<double> normal;
  const double x = normal(rng);
  const double y = normal(rng);
  return Complex(x, y) * (sigma / std::numbers::sqrt2);
}

void CovarianceSpec::validate() const {
  if (band_limit < 0) throw Error(ErrorCode::InvalidSpec, "negative band limit");
  if (band_limit > kDefaultBandLimitCap) throw Error(ErrorCode::BandLimitExceeded, "band limit above cap");
  if (variant == Variant::BiInvariant) {
    if (static_cast<int>(spectrum.size()) != band_limit + 1) {
      throw Error(ErrorCode::InvalidSpec, "spectrum needs one entry per degree 2l = 0.." + std::to_string(band_limit));
    }
    for (double v : spectrum) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, "spectrum entries must be finite and >= 0");
    }
    return;
  }
  if (static_cast<int>(covariance.size()) != band_limit + 1) {
    throw Error(ErrorCode::InvalidSpec, "covariance needs one matrix per degree 2l = 0.." + std::to_string(band_limit));
  }
  for (int two_ell = 0; two_ell <= band_limit; ++two_ell) {
    const auto& k = covariance[two_ell];
    if (k.rows() != two_ell + 1 || k.cols() != two_ell + 1) {
      throw Error(ErrorCode::InvalidSpec, "covariance for 2l = " + std::to_string(two_ell) + " must be " +
                                              std::to_string(two_ell + 1) + "x" + std::to_string(two_ell + 1));
    }
    psd_factor(k);
  }
}

Eigen::MatrixXcd psd_factor(const Eigen::MatrixXcd& k) {
  check_hermitian(k, "covariance");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k);
  const double trace = std::abs(k.trace().real());
  Eigen::VectorXd lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -1e-10 * trace) {
      throw Error(ErrorCode::NotPSD, "covariance eigenvalue " + format_double(lambda(i)) + " below -1e-10 * trace");
    }
    lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().adjoint();
}

SpectralCoefficients gen_gaussian_bi_invariant(const CovarianceSpec& spec, Rng& rng) {
  if (spec.variant != CovarianceSpec::Variant::BiInvariant) throw Error(ErrorCode::InvalidSpec, "expected a bi-invariant spec");
  spec.validate();
  SpectralCoefficients out(spec.band_limit);
  for (int two_ell = 0; two_ell <= spec.band_limit; ++two_ell) {
    const double sigma = std::sqrt(spec.spectrum[two_ell]);
    auto& b = out.block(two_ell);
    for (Eigen::Index m = 0; m < b.rows(); ++m)
      for (Eigen::Index s = 0; s < b.cols(); ++s) b(m, s) = complex_gaussian(rng, sigma);
  }
  return out;
}

SpectralCoefficients gen_gaussian_left_invariant(const CovarianceSpec& spec, Rng& rng) {
  if (spec.variant != CovarianceSpec::Variant::LeftInvariant) throw Error(ErrorCode::InvalidSpec, "expected a left-invariant spec");
  spec.validate();
  return left_gaussian_from_factors(left_factors(spec), rng);
}

SpectralCoefficients rotate_coefficients(const SpectralCoefficients& coeffs, const SU2Element& g, Side side) {
  SpectralCoefficients out(coeffs.band_limit());
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
    const Eigen::MatrixXcd d = wigner_block(two_ell, g);
    if (side == Side::Left) {
      out.block(two_ell) = d.conjugate() * coeffs.block(two_ell);
    } else {
      out.block(two_ell) = coeffs.block(two_ell) * d.transpose();
    }
  }
  return out;
}

RotationSide parse_rotation_side(const std::string& name) {
  if (name == "left") return RotationSide::Left;
  if (name == "right") return RotationSide::Right;
  if (name == "bi") return RotationSide::Bi;
  throw Error(ErrorCode::InvalidSpec, "side must be left, right or bi, got '" + name + "'");
}

const char* to_string(RotationSide side) {
  switch (side) {
    case RotationSide::Left: return "left";
    case RotationSide::Right: return "right";
    case RotationSide::Bi: return "bi";
  }
  return "?";
}

SpectralCoefficients gen_rotated(const SpectralCoefficients& templ, RotationSide side, Rng& rng) {
  SpectralCoefficients out = templ;
  if (side != RotationSide::Right) out = rotate_coefficients(out, haar_sample(rng), Side::Left);
  if (side != RotationSide::Left) out = rotate_coefficients(out, haar_sample(rng), Side::Right);
  return out;
}

void SpinMeasure::validate() const {
  if (two_ell < 0) throw Error(ErrorCode::InvalidSpec, "negative degree");
  if (two_ell > kDefaultBandLimitCap) throw Error(ErrorCode::BandLimitExceeded, "degree above cap");
  if (static_cast<int>(masses.size()) != two_ell + 1) {
    throw Error(ErrorCode::InvalidSpec, "spin measure needs " + std::to_string(two_ell + 1) + " masses");
  }
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw Error(ErrorCode::InvalidSpec, "masses must be finite and >= 0");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidSpec, "masses sum to " + format_double(total));
}

SpectralCoefficients realize_spin_measure(const SpinMeasure& mu, Rng& rng, int band_limit) {
  mu.validate();
  if (band_limit < 0) band_limit = mu.two_ell;
  if (band_limit < mu.two_ell) throw Error(ErrorCode::InvalidSpec, "band limit below the measure's degree");
  SpectralCoefficients out(band_limit);
  auto& block = out.block(mu.two_ell);
  for (int s = 0; s <= mu.two_ell; ++s) {
    const auto gamma = haar_sample(rng);
    if (mu.masses[s] == 0.0) continue;
    const Eigen::MatrixXcd d = wigner_block(mu.two_ell, gamma);
    block.col(s) = std::sqrt(mu.masses[s]) * d.row(s).transpose();
  }
  return out;
}

std::vector<Eigen::VectorXcd> d_invariantize(const std::vector<Eigen::VectorXcd>& vectors, Rng& rng) {
  const auto gamma = haar_sample(rng);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() < 1) throw Error(ErrorCode::InvalidIndex, "empty vector");
    out.push_back(wigner_block(static_cast<int>(v.size()) - 1, gamma) * v);
  }
  return out;
}

std::string CoefficientIndex::str() const {
  return "(" + HalfIndex(two_ell).str() + "," + HalfIndex(two_m).str() + "," + HalfIndex(two_s).str() + ")";
}

Moments haar_pair_moments(const CoefficientIndex& a, const CoefficientIndex& b) {
  require_triple(a.two_ell, a.two_m, a.two_s);
  require_triple(b.two_ell, b.two_m, b.two_s);
  Moments out;
  if (a.two_ell != b.two_ell) return out;
  const double inv = 1.0 / (a.two_ell + 1);
  if (a.two_m == b.two_m && a.two_s == b.two_s) out.second = inv;
  if (b.two_m == -a.two_m && b.two_s == -a.two_s) out.pseudo = parity_sign((a.two_s - a.two_m) / 2) * inv;
  return out;
}

Moments schur_moments(const Eigen::VectorXcd& v, const Eigen::VectorXcd& vp, int i, int j) {
  Moments out;
  if (v.size() != vp.size()) return out;
  const int n = static_cast<int>(v.size()) - 1;
  if (i < 0 || j < 0 || i > n || j > n) throw Error(ErrorCode::InvalidIndex, "vector position out of range");
  const double inv = 1.0 / (n + 1);
  if (i == j) out.second = vp.dot(v) * inv;  // sum_k v_k conj(v'_k)
  if (j == n - i) {
    Complex sum = 0.0;
    for (int k = 0; k <= n; ++k) sum += double(parity_sign(k - i)) * v(k) * vp(n - k);
    out.pseudo = sum * inv;
  }
  return out;
}

int GeneratorConfig::band_limit() const {
  switch (variant) {
    case Variant::GaussianBi:
    case Variant::GaussianLeft: return covariance.band_limit;
    case Variant::Rotated: return templ.band_limit();
    case Variant::SpinMeasure: return mu.two_ell;
  }
  return 0;
}

void GeneratorConfig::validate() const {
  switch (variant) {
    case Variant::GaussianBi:
      if (covariance.variant != CovarianceSpec::Variant::BiInvariant) throw Error(ErrorCode::InvalidSpec, "gaussian_bi needs a spectrum");
      covariance.validate();
      return;
    case Variant::GaussianLeft:
      if (covariance.variant != CovarianceSpec::Variant::LeftInvariant) throw Error(ErrorCode::InvalidSpec, "gaussian_left needs covariance matrices");
      covariance.validate();
      return;
    case Variant::Rotated:
      if (templ.band_limit() > kDefaultBandLimitCap) throw Error(ErrorCode::BandLimitExceeded, "template band limit above cap");
      if (!(templ.norm() > 0.0)) throw Error(ErrorCode::InvalidSpec, "rotated template must be nonzero");
      return;
    case Variant::SpinMeasure: mu.validate(); return;
  }
}

const char* to_string(GeneratorConfig::Variant variant) {
  switch (variant) {
    case GeneratorConfig::Variant::GaussianBi: return "gaussian_bi";
    case GeneratorConfig::Variant::GaussianLeft: return "gaussian_left";
    case GeneratorConfig::Variant::Rotated: return "rotated";
    case GeneratorConfig::Variant::SpinMeasure: return "spin_measure";
  }
  return "?";
}

CoefficientGenerator make_generator(const GeneratorConfig& config) {
  config.validate();
  switch (config.variant) {
    case GeneratorConfig::Variant::GaussianBi:
      return [spec = config.covariance](Rng& rng) { return gen_gaussian_bi_invariant(spec, rng); };
    case GeneratorConfig::Variant::GaussianLeft:
      return [factors = left_factors(config.covariance)](Rng& rng) { return left_gaussian_from_factors(factors, rng); };
    case GeneratorConfig::Variant::Rotated:
      return [templ = config.templ, side = config.side](Rng& rng) { return gen_rotated(templ, side, rng); };
    case GeneratorConfig::Variant::SpinMeasure:
      return [mu = config.mu](Rng& rng) { return realize_spin_measure(mu, rng); };
  }
  throw Error(ErrorCode::InvalidSpec, "unknown generator variant");
}

Moments predict_moments(const GeneratorConfig& config, const CoefficientIndex& a, const CoefficientIndex& b) {
  require_triple(a.two_ell, a.two_m, a.two_s);
  require_triple(b.two_ell, b.two_m, b.two_s);
  Moments out;
  const int n = a.two_ell;
  if (b.two_ell != n || n > config.band_limit()) return out;
  const int mp = position(n, a.two_m);
  const int sp = position(n, a.two_s);
  const int mq = position(n, b.two_m);
  const int sq = position(n, b.two_s);
  const bool same_m = mp == mq;
  const bool same_s = sp == sq;
  const bool flip_m = mq == n - mp;
  const bool flip_s = sq == n - sp;
  const double inv = 1.0 / (n + 1);
  switch (config.variant) {
    case GeneratorConfig::Variant::GaussianBi:
      if (same_m && same_s) out.second = config.covariance.spectrum[n];
      return out;
    case GeneratorConfig::Variant::GaussianLeft:
      if (same_m) out.second = config.covariance.covariance[n](sp, sq);
      return out;
    case GeneratorConfig::Variant::SpinMeasure:
      if (n != config.mu.two_ell) return out;
      if (same_m && same_s) out.second = config.mu.masses[sp] * inv;
      if (a.two_s == 0 && b.two_s == 0 && flip_m) out.pseudo = config.mu.masses[sp] * parity_sign(a.two_m / 2) * inv;
      return out;
    case GeneratorConfig::Variant::Rotated: break;
  }
  const Eigen::MatrixXcd& t = config.templ.block(n);
  switch (config.side) {
    case RotationSide::Left:
      if (same_m) out.second = t.col(sq).dot(t.col(sp)) * inv;
      if (flip_m) {
        Complex sum = 0.0;
        for (int k = 0; k <= n; ++k) sum += double(parity_sign(k - mp)) * t(k, sp) * t(n - k, sq);
        out.pseudo = sum * inv;
      }
      break;
    case RotationSide::Right:
      if (same_s) out.second = t.row(mq).dot(t.row(mp)) * inv;
      if (flip_s) {
        Complex sum = 0.0;
        for (int k = 0; k <= n; ++k) sum += double(parity_sign(k - sp)) * t(mp, k) * t(mq, n - k);
        out.pseudo = sum * inv;
      }
      break;
    case RotationSide::Bi:
      if (same_m && same_s) out.second = t.squaredNorm() * inv * inv;
      if (flip_m && flip_s) {
        Complex sum = 0.0;
        for (int k = 0; k <= n; ++k)
          for (int j = 0; j <= n; ++j) sum += double(parity_sign(k - mp + j - sp)) * t(k, j) * t(n - k, n - j);
        out.pseudo = sum * inv * inv;
      }
      break;
  }
  return out;
}

bool CorrelationReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass_second || !r.pass_pseudo) return false;
  return true;
}

bool within_tolerance(Complex estimate, Complex prediction, double standard_error) {
  return std::abs(estimate - prediction) <= 5.0 * standard_error + 1e-12;
}

CorrelationReport estimate_pair_moments(const Sampler& sampler, const std::vector<PairTarget>& targets,
                                        const McOptions& options) {
  struct Acc {
    std::vector<Complex> second, pseudo;
    std::vector<double> second_sq, pseudo_sq;
  };
  const std::size_t nt = targets.size();
  auto make = [nt] { return Acc{std::vector<Complex>(nt), std::vector<Complex>(nt), std::vector<double>(nt), std::vector<double>(nt)}; };
  auto body = [&](Rng& rng, long count, Acc& acc) {
    for (long k = 0; k < count; ++k) {
      const Eigen::VectorXcd x = sampler(rng);
      for (std::size_t t = 0; t < nt; ++t) {
        const Complex xi = x(targets[t].i);
        const Complex xj = x(targets[t].j);
        const Complex y2 = xi * std::conj(xj);
        const Complex yp = xi * xj;
        acc.second[t] += y2;
        acc.pseudo[t] += yp;
        acc.second_sq[t] += std::norm(y2);
        acc.pseudo_sq[t] += std::norm(yp);
      }
    }
  };
  const auto accs = run_chunks<Acc>(options, make, body);
  Acc total = make();
  for (const auto& a : accs) {
    for (std::size_t t = 0; t < nt; ++t) {
      total.second[t] += a.second[t];
      total.pseudo[t] += a.pseudo[t];
      total.second_sq[t] += a.second_sq[t];
      total.pseudo_sq[t] += a.pseudo_sq[t];
    }
  }
  const double n = static_cast<double>(options.samples);
  CorrelationReport report;
  report.samples = options.samples;
  for (std::size_t t = 0; t < nt; ++t) {
    CorrelationRow row;
    row.label = targets[t].label;
    row.prediction = targets[t].prediction;
    row.estimate.second = total.second[t] / n;
    row.estimate.pseudo = total.pseudo[t] / n;
    row.stderr_second = std::sqrt(std::max(total.second_sq[t] / n - std::norm(row.estimate.second), 0.0) / n);
    row.stderr_pseudo = std::sqrt(std::max(total.pseudo_sq[t] / n - std::norm(row.estimate.pseudo), 0.0) / n);
    row.pass_second = within_tolerance(row.estimate.second, row.prediction.second, row.stderr_second);
    row.pass_pseudo = within_tolerance(row.estimate.pseudo, row.prediction.pseudo, row.stderr_pseudo);
    report.rows.push_back(std::move(row));
  }
  return report;
}

int flat_index(const CoefficientIndex& index) {
  require_triple(index.two_ell, index.two_m, index.two_s);
  int offset = 0;
  for (int two_ell = 0; two_ell < index.two_ell; ++two_ell) offset += (two_ell + 1) * (two_ell + 1);
  return offset + position(index.two_ell, index.two_m) * (index.two_ell + 1) + position(index.two_ell, index.two_s);
}

Eigen::VectorXcd flatten(const SpectralCoefficients& coeffs) {
  int size = 0;
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) size += (two_ell + 1) * (two_ell + 1);
  Eigen::VectorXcd out(size);
  int k = 0;
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
    const auto& b = coeffs.block(two_ell);
    for (int m = 0; m <= two_ell; ++m)
      for (int s = 0; s <= two_ell; ++s) out(k++) = b(m, s);
  }
  return out;
}

CorrelationReport estimate_correlations(const CoefficientGenerator& generator,
                                        const std::vector<CoefficientTarget>& targets, const McOptions& options) {
  std::vector<PairTarget> pairs;
  pairs.reserve(targets.size());
  for (const auto& t : targets) pairs.push_back({t.a.str() + " " + t.b.str(), flat_index(t.a), flat_index(t.b), t.prediction});
  return estimate_pair_moments([&](Rng& rng) { return flatten(generator(rng)); }, pairs, options);
}

std::vector<CoefficientTarget> all_targets(const GeneratorConfig& config, int max_two_ell) {
  std::vector<CoefficientIndex> indices;
  for (int two_ell = 0; two_ell <= std::min(max_two_ell, config.band_limit()); ++two_ell)
    for (int tm = -two_ell; tm <= two_ell; tm += 2)
      for (int ts = -two_ell; ts <= two_ell; ts += 2) indices.push_back({two_ell, tm, ts});
  std::vector<CoefficientTarget> out;
  for (const auto& a : indices)
    for (const auto& b : indices) out.push_back({a, b, predict_moments(config, a, b)});
  return out;
}

SpinMeasureEstimate estimate_spin_measures(const CoefficientGenerator& generator, SpinMode mode,
                                           const McOptions& options) {
  // Observation layout: total (flat coefficient order), left (2m + 2L),
  // right (2s + 2L), bi ((2m + 2L) * (4L + 1) + 2s + 2L).
  int two_L = -1;
  int n_total = 0;
  int width = 0;
  auto layout = [&](int band) {
    two_L = band;
    n_total = 0;
    for (int two_ell = 0; two_ell <= band; ++two_ell) n_total += (two_ell + 1) * (two_ell + 1);
    width = 2 * band + 1;
  };
  {
    Rng probe = make_stream(options.seed, 0);
    layout(generator(probe).band_limit());
  }
  const int dim = n_total + 2 * width + width * width;
  auto observe = [&](const SpectralCoefficients& x, Eigen::VectorXd& y) {
    if (x.band_limit() != two_L) throw Error(ErrorCode::InvalidSpec, "generator changed its band limit");
    y.setZero(dim);
    int k = 0;
    for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
      const auto& b = x.block(two_ell);
      for (int m = 0; m <= two_ell; ++m) {
        const int im = order_at(two_ell, m) + two_L;
        for (int s = 0; s <= two_ell; ++s) {
          const int is = order_at(two_ell, s) + two_L;
          const double w = std::norm(b(m, s));
          y(k++) += w;
          y(n_total + im) += w;
          y(n_total + width + is) += w;
          y(n_total + 2 * width + im * width + is) += w;
        }
      }
    }
  };
  struct Acc {
    Eigen::VectorXd sum, sum_sq, cross;
    double norm_sum = 0.0, norm_sq = 0.0;
    long used = 0;
  };
  auto make = [dim] {
    return Acc{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), 0.0, 0.0, 0};
  };
  auto body = [&](Rng& rng, long count, Acc& acc) {
    Eigen::VectorXd y;
    for (long k = 0; k < count; ++k) {
      const SpectralCoefficients x = generator(rng);
      observe(x, y);
      const double norm2 = x.norm_squared();
      if (mode == SpinMode::Strong) {
        if (!(norm2 > 0.0)) continue;
        y /= norm2;
        acc.sum += y;
        acc.sum_sq += y.cwiseAbs2();
      } else {
        acc.sum += y;
        acc.sum_sq += y.cwiseAbs2();
        acc.cross += y * norm2;
        acc.norm_sum += norm2;
        acc.norm_sq += norm2 * norm2;
      }
      ++acc.used;
    }
  };
  const auto accs = run_chunks<Acc>(options, make, body);
  Acc total = make();
  for (const auto& a : accs) {
    total.sum += a.sum;
    total.sum_sq += a.sum_sq;
    total.cross += a.cross;
    total.norm_sum += a.norm_sum;
    total.norm_sq += a.norm_sq;
    total.used += a.used;
  }
  if (total.used == 0 || (mode == SpinMode::Weak && !(total.norm_sum > 0.0))) {
    throw Error(ErrorCode::ZeroField, "every sample vanished");
  }
  const double n = static_cast<double>(total.used);
  Eigen::VectorXd value(dim);
  Eigen::VectorXd se(dim);
  if (mode == SpinMode::Strong) {
    value = total.sum / n;
    for (int i = 0; i < dim; ++i) se(i) = std::sqrt(std::max(total.sum_sq(i) / n - value(i) * value(i), 0.0) / n);
  } else {
    const double norm_mean = total.norm_sum / n;
    value = total.sum / total.norm_sum;
    for (int i = 0; i < dim; ++i) {
      // Delta method for a ratio of means: Var(Y - R N) / (N mean^2 n).
      const double r = value(i);
      const double var = total.sum_sq(i) / n - 2.0 * r * total.cross(i) / n + r * r * total.norm_sq / n;
      se(i) = std::sqrt(std::max(var, 0.0) / n) / norm_mean;
    }
  }
  SpinMeasureEstimate out;
  out.samples = total.used;
  int k = 0;
  for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
    for (int m = 0; m <= two_ell; ++m) {
      for (int s = 0; s <= two_ell; ++s, ++k) {
        const std::tuple<int, int, int> key{two_ell, order_at(two_ell, m), order_at(two_ell, s)};
        out.value.total[key] = value(k);
        out.standard_error.total[key] = se(k);
        const int im = order_at(two_ell, m) + two_L;
        const int is = order_at(two_ell, s) + two_L;
        out.value.left[im - two_L] = value(n_total + im);
        out.standard_error.left[im - two_L] = se(n_total + im);
        out.value.right[is - two_L] = value(n_total + width + is);
        out.standard_error.right[is - two_L] = se(n_total + width + is);
        out.value.bi[{im - two_L, is - two_L}] = value(n_total + 2 * width + im * width + is);
        out.standard_error.bi[{im - two_L, is - two_L}] = se(n_total + 2 * width + im * width + is);
      }
    }
  }
  return out;
}

OrbitReport orbit_checks(int two_ell, int two_s, Rng& rng) {
  require_order(two_ell, two_s);
  OrbitReport report;
  report.two_ell = two_ell;
  report.two_s = two_s;
  const int n = two_ell;
  const int sp = position(n, two_s);
  const Eigen::VectorXcd e = Eigen::VectorXcd::Unit(n + 1, sp);
  auto moved = [&](const SU2Element& g) { return (wigner_block(n, g) * e - e).norm(); };

  report.isotropy_exact = true;
  if (two_s != 0) {
    const int abs2s = std::abs(two_s);
    // psi_k = 2 pi k / |s| = 4 pi k / |2s|; the phase is e^{-2 pi i (2s k / |2s|)}.
    for (int k = 1; k <= abs2s; ++k) {
      report.isotropy_exact = report.isotropy_exact && (two_s * k) % abs2s == 0;
      report.isotropy_defect = std::max(report.isotropy_defect, moved(SU2Element::g3(4 * kPi * k / abs2s)));
    }
    report.moved_distance = moved(SU2Element::g3(2 * kPi / abs2s));
  } else {
    std::uniform_real_distribution<double> unif(0.0, 4 * kPi);
    for (int k = 0; k < 16; ++k) report.isotropy_defect = std::max(report.isotropy_defect, moved(SU2Element::g3(unif(rng))));
    if (n % 4 == 0) {
      // l even: h(0, beta) maps e_0 to (-1)^l e_0 = e_0.
      for (int k = 0; k < 16; ++k) {
        report.isotropy_defect = std::max(report.isotropy_defect, moved(SU2Element::make(0.0, std::polar(1.0, unif(rng)))));
      }
    }
    report.moved_distance = moved(haar_sample(rng));
  }

  Eigen::VectorXcd v(n + 1);
  for (int i = 0; i <= n; ++i) v(i) = complex_gaussian(rng);
  Eigen::MatrixXcd points(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) points.col(j) = wigner_block(n, haar_sample(rng)) * v;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(points);
  const auto& sv = svd.singularValues();
  report.span_ratio = sv(sv.size() - 1) / sv(0);
  report.span_full_rank = report.span_ratio > 1e-8;
  return report;
}

}  // namespace su2
