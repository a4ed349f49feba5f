#include "su2/harmonic.hpp"

#include "su2/errors.hpp"
#include "su2/format.hpp"
#include "su2/half_index.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <ostream>

namespace su2 {

namespace {

constexpr double kPi = std::numbers::pi;

using Tables = std::vector<std::vector<Eigen::MatrixXd>>;

Tables theta_tables(const QuadratureGrid& grid) {
  const int two_L = grid.band_limit();
  Tables d(grid.theta_nodes().size());
  for (std::size_t t = 0; t < d.size(); ++t) {
    d[t].reserve(two_L + 1);
    for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
      d[t].push_back(little_d(two_ell, grid.theta_nodes()[t], std::max(two_L, kDefaultBandLimitCap)).matrix().real());
    }
  }
  return d;
}

// Columns q = 0..2*two_L hold e^{i (q - two_L)/2 * x_j} for each node x_j.
Eigen::MatrixXcd exponentials(const std::vector<double>& x, int two_L) {
  Eigen::MatrixXcd e(x.size(), 2 * two_L + 1);
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (int q = 0; q <= 2 * two_L; ++q) e(j, q) = std::polar(1.0, 0.5 * (q - two_L) * x[j]);
  }
  return e;
}

// Max over doubled frequencies d1 = d2 (mod 2), (d1, d2) != (0, 0), of
// |sum_phi w e^{i d1 phi / 2}| |sum_psi w e^{i d2 psi / 2}|.
double off_block_factor(const QuadratureGrid& grid) {
  const int two_L = grid.band_limit();
  const Eigen::VectorXcd phi_sum = exponentials(grid.phi_nodes(), 2 * two_L).colwise().sum().transpose() * grid.phi_weight();
  const Eigen::VectorXcd psi_sum = exponentials(grid.psi_nodes(), 2 * two_L).colwise().sum().transpose() * grid.psi_weight();
  double worst = 0.0;
  for (int d1 = -2 * two_L; d1 <= 2 * two_L; ++d1) {
    for (int d2 = -2 * two_L; d2 <= 2 * two_L; ++d2) {
      if ((d1 - d2) % 2 != 0 || (d1 == 0 && d2 == 0)) continue;
      worst = std::max(worst, std::abs(phi_sum(d1 + 2 * two_L)) * std::abs(psi_sum(d2 + 2 * two_L)));
    }
  }
  return worst;
}

double product_gate_defect(const QuadratureGrid& grid) {
  const int two_L = grid.band_limit();
  const Tables d = theta_tables(grid);
  const double c_max = harmonic_normalization(two_L);
  // |theta sum| <= sum of theta weights = 2 since |d| <= 1.
  double defect = c_max * c_max * 2.0 * off_block_factor(grid);
  const double phi_psi = grid.phi_weight() * grid.phi_nodes().size() * grid.psi_weight() * grid.psi_nodes().size();
  for (int tm = -two_L; tm <= two_L; ++tm) {
    for (int ts = -two_L; ts <= two_L; ++ts) {
      if ((tm - ts) % 2 != 0) continue;
      std::vector<int> degrees;
      for (int two_ell = std::max(std::abs(tm), std::abs(ts)); two_ell <= two_L; two_ell += 2) degrees.push_back(two_ell);
      for (std::size_t a = 0; a < degrees.size(); ++a) {
        for (std::size_t b = a; b < degrees.size(); ++b) {
          const int la = degrees[a];
          const int lb = degrees[b];
          double theta_sum = 0.0;
          for (std::size_t t = 0; t < d.size(); ++t) {
            theta_sum += grid.theta_weights()[t] * d[t][la](position(la, tm), position(la, ts)) *
                         d[t][lb](position(lb, tm), position(lb, ts));
          }
          const double value = harmonic_normalization(la) * harmonic_normalization(lb) * phi_psi * theta_sum;
          defect = std::max(defect, std::abs(value - (a == b ? 1.0 : 0.0)));
        }
      }
    }
  }
  return defect;
}

void check_band_limit(int two_L, int cap) {
  if (two_L < 0) throw Error(ErrorCode::InvalidIndex, "negative band limit");
  if (two_L > cap) {
    throw Error(ErrorCode::BandLimitExceeded,
                "band limit 2L = " + std::to_string(two_L) + " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

double QuadratureGrid::total_weight() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

QuadratureGrid build_grid(int two_L, double gate_tolerance, int cap) {
  check_band_limit(two_L, cap);
  QuadratureGrid grid;
  grid.two_L_ = two_L;
  const int n_phi = two_L + 2;
  const int n_psi = 2 * two_L + 2;
  const int n_theta = two_L + 2;
  grid.phi_w_ = 2 * kPi / n_phi;
  grid.psi_w_ = 4 * kPi / n_psi;
  for (int i = 0; i < n_phi; ++i) grid.phi_.push_back(grid.phi_w_ * i);
  for (int j = 0; j < n_psi; ++j) grid.psi_.push_back(grid.psi_w_ * j);

  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(n_theta), &gsl_integration_glfixed_table_free);
  if (!table) throw std::bad_alloc();
  for (int t = 0; t < n_theta; ++t) {
    double x = 0.0;
    double w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, t, &x, &w, table.get());
    grid.theta_.push_back(std::acos(x));
    grid.theta_w_.push_back(w);
  }

  grid.nodes_.reserve(std::size_t(n_theta) * n_phi * n_psi);
  grid.weights_.reserve(grid.nodes_.capacity());
  for (int t = 0; t < n_theta; ++t) {
    for (int i = 0; i < n_phi; ++i) {
      for (int j = 0; j < n_psi; ++j) {
        grid.nodes_.push_back({grid.phi_[i], grid.theta_[t], grid.psi_[j]});
        grid.weights_.push_back(grid.phi_w_ * grid.psi_w_ * grid.theta_w_[t]);
      }
    }
  }

  grid.gate_defect_ = product_gate_defect(grid);
  if (!(grid.gate_defect_ <= gate_tolerance)) {
    throw Error(ErrorCode::ExactnessGateFailed, "orthonormality defect " + format_double(grid.gate_defect_) +
                                                    " exceeds " + format_double(gate_tolerance));
  }
  return grid;
}

double direct_gram_defect(const QuadratureGrid& grid) {
  const int two_L = grid.band_limit();
  int basis = 0;
  for (int two_ell = 0; two_ell <= two_L; ++two_ell) basis += (two_ell + 1) * (two_ell + 1);
  Eigen::MatrixXcd b(grid.size(), basis);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const SU2Element g = su2_from_euler(grid.nodes()[k]);
    const double sw = std::sqrt(grid.weights()[k]);
    int col = 0;
    for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
      const Eigen::MatrixXcd d = wigner_matrix(two_ell, g, std::max(two_L, kDefaultBandLimitCap)).matrix();
      const double c = harmonic_normalization(two_ell) * sw;
      for (int s = 0; s <= two_ell; ++s)
        for (int m = 0; m <= two_ell; ++m) b(k, col++) = c * d(m, s);
    }
  }
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(basis, basis);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(b.adjoint());
  gram.diagonal().array() -= 1.0;
  return gram.triangularView<Eigen::Lower>().toDenseMatrix().cwiseAbs().maxCoeff();
}

void write_grid_csv(const QuadratureGrid& grid, std::ostream& out) {
  out << "phi,theta,psi,weight\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& e = grid.nodes()[k];
    out << format_double(e.phi) << ',' << format_double(e.theta) << ',' << format_double(e.psi) << ','
        << format_double(grid.weights()[k]) << '\n';
  }
}

SpectralCoefficients::SpectralCoefficients(int two_L) : two_L_(two_L) {
  if (two_L < 0) throw Error(ErrorCode::InvalidIndex, "negative band limit");
  blocks_.reserve(two_L + 1);
  for (int two_ell = 0; two_ell <= two_L; ++two_ell) blocks_.push_back(Eigen::MatrixXcd::Zero(two_ell + 1, two_ell + 1));
}

SpectralCoefficients SpectralCoefficients::delta(int two_L, int two_ell, int two_m, int two_s, Complex value) {
  SpectralCoefficients c(two_L);
  c.at(two_ell, two_m, two_s) = value;
  return c;
}

Eigen::MatrixXcd& SpectralCoefficients::block(int two_ell) {
  if (two_ell < 0 || two_ell > two_L_) throw Error(ErrorCode::InvalidIndex, "degree outside band limit");
  return blocks_[two_ell];
}

const Eigen::MatrixXcd& SpectralCoefficients::block(int two_ell) const {
  if (two_ell < 0 || two_ell > two_L_) throw Error(ErrorCode::InvalidIndex, "degree outside band limit");
  return blocks_[two_ell];
}

Complex& SpectralCoefficients::at(int two_ell, int two_m, int two_s) {
  require_triple(two_ell, two_m, two_s);
  return block(two_ell)(position(two_ell, two_m), position(two_ell, two_s));
}

Complex SpectralCoefficients::at(int two_ell, int two_m, int two_s) const {
  require_triple(two_ell, two_m, two_s);
  return block(two_ell)(position(two_ell, two_m), position(two_ell, two_s));
}

double SpectralCoefficients::norm_squared() const {
  double total = 0.0;
  for (const auto& b : blocks_) total += b.squaredNorm();
  return total;
}

double SpectralCoefficients::norm() const { return std::sqrt(norm_squared()); }

SpectralCoefficients& SpectralCoefficients::operator+=(const SpectralCoefficients& other) {
  if (other.two_L_ != two_L_) throw Error(ErrorCode::InvalidIndex, "band limits differ");
  for (int two_ell = 0; two_ell <= two_L_; ++two_ell) blocks_[two_ell] += other.blocks_[two_ell];
  return *this;
}

SpectralCoefficients& SpectralCoefficients::operator*=(Complex c) {
  for (auto& b : blocks_) b *= c;
  return *this;
}

double max_abs_diff(const SpectralCoefficients& a, const SpectralCoefficients& b) {
  if (a.band_limit() != b.band_limit()) throw Error(ErrorCode::InvalidIndex, "band limits differ");
  double worst = 0.0;
  for (int two_ell = 0; two_ell <= a.band_limit(); ++two_ell) {
    worst = std::max(worst, (a.block(two_ell) - b.block(two_ell)).cwiseAbs().maxCoeff());
  }
  return worst;
}

SpectralTransform::SpectralTransform(int two_L) : SpectralTransform(build_grid(two_L)) {}

SpectralTransform::SpectralTransform(QuadratureGrid grid) : grid_(std::move(grid)), d_(theta_tables(grid_)) {}

SpectralCoefficients SpectralTransform::analyze(const Field& field) const {
  std::vector<Complex> samples;
  samples.reserve(grid_.size());
  for (const auto& e : grid_.nodes()) samples.push_back(field(su2_from_euler(e)));
  return analyze_samples(samples);
}

SpectralCoefficients SpectralTransform::analyze_samples(const std::vector<Complex>& samples) const {
  if (samples.size() != grid_.size()) throw Error(ErrorCode::InvalidIndex, "sample count does not match grid");
  const int two_L = band_limit();
  const int n_phi = static_cast<int>(grid_.phi_nodes().size());
  const int n_psi = static_cast<int>(grid_.psi_nodes().size());
  const Eigen::MatrixXcd e_phi = exponentials(grid_.phi_nodes(), two_L);
  const Eigen::MatrixXcd e_psi = exponentials(grid_.psi_nodes(), two_L);
  SpectralCoefficients out(two_L);
  const double w_flat = grid_.phi_weight() * grid_.psi_weight();
  for (std::size_t t = 0; t < grid_.theta_nodes().size(); ++t) {
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> f(
        samples.data() + t * n_phi * n_psi, n_phi, n_psi);
    // g(p, q) = sum_{i,j} e^{i m_p phi_i} f(i, j) e^{i s_q psi_j}
    const Eigen::MatrixXcd g = e_phi.transpose() * (f * e_psi);
    const double w = w_flat * grid_.theta_weights()[t];
    for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
      const double c = w * harmonic_normalization(two_ell);
      const auto& d = d_[t][two_ell];
      auto& block = out.block(two_ell);
      for (int s = 0; s <= two_ell; ++s) {
        const int q = order_at(two_ell, s) + two_L;
        for (int m = 0; m <= two_ell; ++m) {
          const int p = order_at(two_ell, m) + two_L;
          block(m, s) += c * d(m, s) * g(p, q);
        }
      }
    }
  }
  return out;
}

std::vector<Complex> SpectralTransform::synthesize_on_grid(const SpectralCoefficients& coeffs) const {
  const int two_L = band_limit();
  if (coeffs.band_limit() > two_L) throw Error(ErrorCode::BandLimitExceeded, "coefficients exceed grid band limit");
  const int n_phi = static_cast<int>(grid_.phi_nodes().size());
  const int n_psi = static_cast<int>(grid_.psi_nodes().size());
  const Eigen::MatrixXcd e_phi = exponentials(grid_.phi_nodes(), two_L).conjugate();
  const Eigen::MatrixXcd e_psi = exponentials(grid_.psi_nodes(), two_L).conjugate();
  std::vector<Complex> out(grid_.size());
  for (std::size_t t = 0; t < grid_.theta_nodes().size(); ++t) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2 * two_L + 1, 2 * two_L + 1);
    for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
      const double c = harmonic_normalization(two_ell);
      const auto& d = d_[t][two_ell];
      const auto& block = coeffs.block(two_ell);
      for (int s = 0; s <= two_ell; ++s) {
        const int q = order_at(two_ell, s) + two_L;
        for (int m = 0; m <= two_ell; ++m) b(order_at(two_ell, m) + two_L, q) += c * block(m, s) * d(m, s);
      }
    }
    const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x = e_phi * b * e_psi.transpose();
    std::copy(x.data(), x.data() + x.size(), out.begin() + t * n_phi * n_psi);
  }
  return out;
}

SpectralCoefficients analyze(const Field& field, int two_L) { return SpectralTransform(two_L).analyze(field); }

Complex synthesize_at(const SpectralCoefficients& coeffs, const SU2Element& g) {
  Complex total = 0.0;
  const int cap = std::max(coeffs.band_limit(), kDefaultBandLimitCap);
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
    const auto& block = coeffs.block(two_ell);
    if (block.isZero(0.0)) continue;
    total += harmonic_normalization(two_ell) * block.cwiseProduct(wigner_matrix(two_ell, g, cap).matrix()).sum();
  }
  return total;
}

Field synthesize(SpectralCoefficients coeffs) {
  return [c = std::move(coeffs)](const SU2Element& g) { return synthesize_at(c, g); };
}

Complex grid_inner_product(const QuadratureGrid& grid, const Field& f, const Field& h) {
  Complex total = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const SU2Element g = su2_from_euler(grid.nodes()[k]);
    total += grid.weights()[k] * std::conj(f(g)) * h(g);
  }
  return total;
}

LaplacianKind parse_laplacian_kind(const std::string& name) {
  if (name == "full") return LaplacianKind::Full;
  if (name == "vertical") return LaplacianKind::Vertical;
  if (name == "horizontal") return LaplacianKind::Horizontal;
  if (name == "spin") return LaplacianKind::Spin;
  throw Error(ErrorCode::ParseError, "unknown Laplacian kind '" + name + "'");
}

const char* to_string(LaplacianKind kind) {
  switch (kind) {
    case LaplacianKind::Full: return "full";
    case LaplacianKind::Vertical: return "vertical";
    case LaplacianKind::Horizontal: return "horizontal";
    case LaplacianKind::Spin: return "spin";
  }
  return "?";
}

long long laplacian_multiplier_quadrupled(LaplacianKind kind, int two_ell, int two_s) {
  require_order(two_ell, two_s);
  const long long l2 = two_ell;
  const long long s2 = two_s;
  switch (kind) {
    case LaplacianKind::Full: return -l2 * (l2 + 2);
    case LaplacianKind::Vertical: return -s2 * s2;
    case LaplacianKind::Horizontal: return -(l2 - s2) * (l2 + s2 + 2) - 2 * s2;
    case LaplacianKind::Spin: return -(l2 - s2) * (l2 + s2 + 2);
  }
  return 0;
}

double laplacian_multiplier(LaplacianKind kind, int two_ell, int two_s) {
  return 0.25 * static_cast<double>(laplacian_multiplier_quadrupled(kind, two_ell, two_s));
}

SpectralCoefficients apply_laplacian(const SpectralCoefficients& coeffs, LaplacianKind kind) {
  SpectralCoefficients out = coeffs;
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
    auto& block = out.block(two_ell);
    for (int s = 0; s <= two_ell; ++s) block.col(s) *= laplacian_multiplier(kind, two_ell, order_at(two_ell, s));
  }
  return out;
}

SpectralCoefficients project_spin(const SpectralCoefficients& coeffs, Side side, int two_k) {
  SpectralCoefficients out(coeffs.band_limit());
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
    if (!valid_order(two_ell, two_k)) continue;
    const int p = position(two_ell, two_k);
    if (side == Side::Left) {
      out.block(two_ell).row(p) = coeffs.block(two_ell).row(p);
    } else {
      out.block(two_ell).col(p) = coeffs.block(two_ell).col(p);
    }
  }
  return out;
}

SpinMeasureSet squared_masses(const SpectralCoefficients& coeffs) {
  SpinMeasureSet out;
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
    const auto& block = coeffs.block(two_ell);
    for (int s = 0; s <= two_ell; ++s) {
      const int ts = order_at(two_ell, s);
      for (int m = 0; m <= two_ell; ++m) {
        const int tm = order_at(two_ell, m);
        const double w = std::norm(block(m, s));
        out.total[{two_ell, tm, ts}] += w;
        out.left[tm] += w;
        out.right[ts] += w;
        out.bi[{tm, ts}] += w;
      }
    }
  }
  return out;
}

SpinMeasureSet spin_measures(const SpectralCoefficients& coeffs) {
  const double norm2 = coeffs.norm_squared();
  if (!(norm2 > 0.0)) throw Error(ErrorCode::ZeroField, "spectral measure of a zero field");
  SpinMeasureSet out = squared_masses(coeffs);
  for (auto& [k, v] : out.total) v /= norm2;
  for (auto& [k, v] : out.left) v /= norm2;
  for (auto& [k, v] : out.right) v /= norm2;
  for (auto& [k, v] : out.bi) v /= norm2;
  return out;
}

}  // namespace su2
