#include "su2/verify.hpp"

#include "su2/errors.hpp"
#include "su2/format.hpp"
#include "su2/half_index.hpp"
#include "su2/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace su2 {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector4d coordinates(const SU2Element& g) {
  return {g.alpha().real(), g.alpha().imag(), g.beta().real(), g.beta().imag()};
}

Complex extended_entry(int two_ell, int pm, int ps, const Eigen::Vector4d& x) {
  return wigner_matrix_extended(two_ell, {x(0), x(1)}, {x(2), x(3)})(pm, ps);
}

// All Wigner blocks up to max_two_ell at every grid node.
std::vector<std::vector<Eigen::MatrixXcd>> node_blocks(const QuadratureGrid& grid, int max_two_ell) {
  std::vector<std::vector<Eigen::MatrixXcd>> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const SU2Element g = su2_from_euler(grid.nodes()[k]);
    for (int two_ell = 0; two_ell <= max_two_ell; ++two_ell) out[k].push_back(wigner_matrix(two_ell, g).matrix());
  }
  return out;
}

}  // namespace

double harmonicity_defect(int two_ell, int two_m, int two_s, const Eigen::Vector4d& x, double h) {
  require_triple(two_ell, two_m, two_s);
  const int pm = position(two_ell, two_m);
  const int ps = position(two_ell, two_s);
  const Complex center = extended_entry(two_ell, pm, ps, x);
  Complex lap = 0.0;
  double scale = std::abs(center) / x.squaredNorm();
  auto at = [&](const Eigen::Vector4d& y) { return extended_entry(two_ell, pm, ps, y); };
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d e = Eigen::Vector4d::Unit(i) * h;
    const Complex dii = (-at(x + 2 * e) + 16.0 * at(x + e) - 30.0 * center + 16.0 * at(x - e) - at(x - 2 * e)) / (12.0 * h * h);
    lap += dii;
    scale += std::abs(dii);
  }
  return scale > 0.0 ? std::abs(lap) / scale : std::abs(lap);
}

Complex fd_sphere_laplacian(const Field& field, const SU2Element& g, double h) {
  auto f = [&](const Eigen::Vector4d& x) {
    const Eigen::Vector4d u = x / x.norm();
    return field(SU2Element::from_unit({u(0), u(1)}, {u(2), u(3)}));
  };
  const Eigen::Vector4d p = coordinates(g);
  const Complex center = f(p);
  Complex lap = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d e = Eigen::Vector4d::Unit(i) * h;
    lap += (f(p + e) - 2.0 * center + f(p - e)) / (h * h);
  }
  return lap / 4.0;
}

double haar_moment_defect(const QuadratureGrid& grid, int max_two_ell) {
  const auto blocks = node_blocks(grid, max_two_ell);
  double defect = 0.0;
  for (int la = 0; la <= max_two_ell; ++la) {
    for (int lb = 0; lb <= max_two_ell; ++lb) {
      for (int pa = 0; pa < (la + 1) * (la + 1); ++pa) {
        for (int pb = 0; pb < (lb + 1) * (lb + 1); ++pb) {
          const int ma = pa / (la + 1), sa = pa % (la + 1);
          const int mb = pb / (lb + 1), sb = pb % (lb + 1);
          Complex second = 0.0;
          Complex pseudo = 0.0;
          for (std::size_t k = 0; k < grid.size(); ++k) {
            const Complex x = blocks[k][la](ma, sa);
            const Complex y = blocks[k][lb](mb, sb);
            second += grid.weights()[k] * x * std::conj(y);
            pseudo += grid.weights()[k] * x * y;
          }
          const Moments p = haar_pair_moments({la, order_at(la, ma), order_at(la, sa)}, {lb, order_at(lb, mb), order_at(lb, sb)});
          defect = std::max(defect, std::abs(second / kVolume - p.second));
          defect = std::max(defect, std::abs(pseudo / kVolume - p.pseudo));
        }
      }
    }
  }
  return defect;
}

double schur_moment_defect(const QuadratureGrid& grid, const Eigen::VectorXcd& v, const Eigen::VectorXcd& vp) {
  if (v.size() != vp.size()) throw Error(ErrorCode::InvalidIndex, "Schur vectors must share a degree");
  const int n = static_cast<int>(v.size()) - 1;
  const int dim = n + 1;
  Eigen::MatrixXcd second = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd pseudo = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Eigen::MatrixXcd d = wigner_matrix(n, su2_from_euler(grid.nodes()[k])).matrix();
    const Eigen::VectorXcd w = d * v;
    const Eigen::VectorXcd wp = d * vp;
    second += grid.weights()[k] * w * wp.adjoint();
    pseudo += grid.weights()[k] * w * wp.transpose();
  }
  double defect = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const Moments p = schur_moments(v, vp, i, j);
      defect = std::max(defect, std::abs(second(i, j) / kVolume - p.second));
      defect = std::max(defect, std::abs(pseudo(i, j) / kVolume - p.pseudo));
    }
  }
  return defect;
}

std::vector<CheckRow> run_verify(const VerifyConfig& config) {
  const int two_L = config.band_limit;
  if (two_L < 0) throw Error(ErrorCode::InvalidIndex, "negative band limit");
  if (two_L > kDefaultBandLimitCap) {
    throw Error(ErrorCode::BandLimitExceeded, "band limit 2L = " + std::to_string(two_L) + " exceeds cap " +
                                                  std::to_string(kDefaultBandLimitCap));
  }
  std::vector<CheckRow> rows;
  auto add = [&](const std::string& name, double metric, double threshold) {
    const auto it = config.tolerance_overrides.find(name);
    if (it != config.tolerance_overrides.end()) threshold = it->second;
    rows.push_back({name, metric, threshold, metric <= threshold});
  };
  Rng rng = make_stream(config.seed, 0);

  double unitarity = 0.0, homomorphism = 0.0, symmetry = 0.0, realness = 0.0;
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int i = 0; i < config.random_elements; ++i) {
    const auto a = haar_sample(rng);
    const auto b = haar_sample(rng);
    const double theta = angle(rng);
    for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
      const auto da = wigner_matrix(two_ell, a).matrix();
      unitarity = std::max(unitarity, unitarity_defect(da));
      homomorphism = std::max(homomorphism, max_abs_diff(wigner_matrix(two_ell, a * b).matrix(), da * wigner_matrix(two_ell, b).matrix()));
      symmetry = std::max(symmetry, symmetry_check(two_ell, a).max());
      realness = std::max(realness, little_d(two_ell, theta).matrix().imag().cwiseAbs().maxCoeff());
    }
  }
  add("unitarity", unitarity, 1e-10);
  add("homomorphism", homomorphism, 1e-10);
  add("symmetry", symmetry, 1e-12);
  add("little_d_realness", realness, 1e-12);

  double harmonic = 0.0;
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  for (int two_ell = 1; two_ell <= 4; ++two_ell) {
    for (int i = 0; i < 20; ++i) {
      const Eigen::Vector4d x = coordinates(haar_sample(rng)) * radius(rng);
      for (int tm = -two_ell; tm <= two_ell; tm += 2)
        for (int ts = -two_ell; ts <= two_ell; ts += 2) harmonic = std::max(harmonic, harmonicity_defect(two_ell, tm, ts, x));
    }
  }
  add("harmonicity_fd", harmonic, 1e-5);

  const QuadratureGrid grid = build_grid(two_L, 1.0);
  add("grid_gate", direct_gram_defect(grid), 1e-8);
  add("grid_total_weight", std::abs(grid.total_weight() / kVolume - 1.0), 1e-9);

  long long mismatches = 0;
  for (int l2 = 0; l2 <= kDefaultBandLimitCap; ++l2) {
    for (int s2 = -l2; s2 <= l2; s2 += 2) {
      const long long full = laplacian_multiplier_quadrupled(LaplacianKind::Full, l2, s2);
      const long long hor = laplacian_multiplier_quadrupled(LaplacianKind::Horizontal, l2, s2);
      const long long vert = laplacian_multiplier_quadrupled(LaplacianKind::Vertical, l2, s2);
      const long long spin = laplacian_multiplier_quadrupled(LaplacianKind::Spin, l2, s2);
      const long long ll = l2, ss = s2;
      if (full != -ll * (ll + 2) || vert != -ss * ss || spin != -(ll - ss) * (ll + ss + 2) ||
          hor != -(ll - ss) * (ll + ss + 2) - 2 * ss || full != hor + vert) {
        ++mismatches;
      }
    }
  }
  add("laplacian_exact", static_cast<double>(mismatches), 0.0);

  double lap_fd = 0.0;
  for (int two_ell = 1; two_ell <= std::min(3, std::max(two_L, 1)); ++two_ell) {
    SpectralCoefficients a(two_ell);
    for (int m = 0; m <= two_ell; ++m)
      for (int s = 0; s <= two_ell; ++s) a.block(two_ell)(m, s) = complex_gaussian(rng);
    const Field field = synthesize(a);
    const Field lap = synthesize(apply_laplacian(a, LaplacianKind::Full));
    for (int i = 0; i < 10; ++i) {
      const auto g = haar_sample(rng);
      const Complex spectral = lap(g);
      lap_fd = std::max(lap_fd, std::abs(fd_sphere_laplacian(field, g) - spectral) / std::max(std::abs(spectral), 1e-3));
    }
  }
  add("laplacian_fd", lap_fd, 1e-4);

  const int moment_degree = std::min(two_L, 4);
  const QuadratureGrid moment_grid = build_grid(std::max(moment_degree, 1));
  add("haar_moments", haar_moment_defect(moment_grid, moment_degree), 1e-9);

  double schur = 0.0;
  for (int two_ell = 0; two_ell <= moment_degree; ++two_ell) {
    Eigen::VectorXcd v(two_ell + 1), vp(two_ell + 1);
    for (int i = 0; i <= two_ell; ++i) {
      v(i) = complex_gaussian(rng);
      vp(i) = complex_gaussian(rng);
    }
    schur = std::max(schur, schur_moment_defect(moment_grid, v, vp));
  }
  add("schur_moments", schur, 1e-9);
  return rows;
}

bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

void write_rows_csv(const std::vector<CheckRow>& rows, std::ostream& out) {
  out << "name,metric,threshold,pass\n";
  for (const auto& r : rows) {
    out << r.name << ',' << format_double(r.metric) << ',' << format_double(r.threshold) << ',' << (r.pass ? "true" : "false")
        << '\n';
  }
}

}  // namespace su2
