#include "su2/errors.hpp"
#include "su2/half_index.hpp"
#include "su2/harmonic.hpp"

#include <gtest/gtest.h>

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <sstream>

namespace su2 {
namespace {

constexpr double kPi = std::numbers::pi;

SpectralCoefficients random_coefficients(int two_L, Rng& rng) {
  std::normal_distribution<double> normal;
  SpectralCoefficients a(two_L);
  for (int two_ell = 0; two_ell <= two_L; ++two_ell) {
    auto& b = a.block(two_ell);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) b(i, j) = {normal(rng), normal(rng)};
  }
  return a;
}

Field basis_function(int two_ell, int two_m, int two_s) {
  return [=](const SU2Element& g) { return normalized_harmonic(two_ell, two_m, two_s, g); };
}

TEST(Grid, NodeCountsAndWeight) {
  const auto grid = build_grid(12);
  EXPECT_EQ(grid.phi_nodes().size(), 14u);
  EXPECT_EQ(grid.psi_nodes().size(), 26u);
  EXPECT_EQ(grid.theta_nodes().size(), 14u);
  EXPECT_EQ(grid.size(), 14u * 26u * 14u);
  EXPECT_NEAR(grid.total_weight() / (16 * kPi * kPi), 1.0, 1e-10);
  EXPECT_LE(grid.gate_defect(), 1e-8);
  for (double w : grid.weights()) EXPECT_GT(w, 0.0);
}

TEST(Grid, Errors) {
  try {
    build_grid(65);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BandLimitExceeded);
  }
  try {
    build_grid(4, 0.0);  // rounding makes the defect positive
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExactnessGateFailed);
  }
}

TEST(Grid, DirectGramAgreesWithGate) {
  for (int two_L : {0, 1, 4, 7}) {
    const auto grid = build_grid(two_L);
    EXPECT_LE(direct_gram_defect(grid), 1e-10) << two_L;
  }
}

TEST(Grid, ExampleInnerProducts) {
  const auto grid = build_grid(2);
  const auto one = basis_function(0, 0, 0);
  EXPECT_NEAR(std::abs(grid_inner_product(grid, one, one) - 1.0), 0.0, 1e-12);
  for (int tm : {-1, 1})
    for (int ts : {-1, 1})
      for (int tm2 : {-2, 0, 2})
        for (int ts2 : {-2, 0, 2})
          EXPECT_LE(std::abs(grid_inner_product(grid, basis_function(1, tm, ts), basis_function(2, tm2, ts2))), 1e-10);
  const Field d1 = [](const SU2Element& g) { return wigner_matrix(2, g).at(0, 2); };
  EXPECT_NEAR(grid_inner_product(grid, d1, d1).real() / (16 * kPi * kPi / 3), 1.0, 1e-12);
}

TEST(Grid, CsvDump) {
  const auto grid = build_grid(0);
  std::ostringstream out;
  write_grid_csv(grid, out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, 23), "phi,theta,psi,weight\n0,");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + static_cast<long>(grid.size()));
}

TEST(Analyze, DeltaOfBasisFunction) {
  const auto a = analyze(basis_function(2, 0, 2), 4);
  auto expected = SpectralCoefficients::delta(4, 2, 0, 2);
  EXPECT_LE(max_abs_diff(a, expected), 1e-9);
}

TEST(Analyze, WignerEntry) {
  const Field f = [](const SU2Element& g) { return wigner_matrix(1, g).at(1, 1); };
  const auto a = analyze(f, 2);
  EXPECT_LE(max_abs_diff(a, SpectralCoefficients::delta(2, 1, 1, 1, 4 * kPi / std::sqrt(2.0))), 1e-12);
}

TEST(Synthesize, Examples) {
  const auto zero = synthesize(SpectralCoefficients(3));
  const auto g = SU2Element::make({0.3, 0.1}, {-0.2, 0.9});
  EXPECT_EQ(zero(g), Complex(0.0));
  const auto constant = synthesize(SpectralCoefficients::delta(3, 0, 0, 0));
  EXPECT_NEAR(std::abs(constant(g) - 1.0 / (4 * kPi)), 0.0, 1e-16);
}

TEST(Transform, RoundTripAndParseval) {
  Rng rng = make_stream(31, 0);
  for (int two_L : {3, 6, 12}) {
    const SpectralTransform transform(two_L);
    const auto a = random_coefficients(two_L, rng);
    const auto samples = transform.synthesize_on_grid(a);
    const auto back = transform.analyze_samples(samples);
    EXPECT_LE(max_abs_diff(back, a), 1e-9) << two_L;
    double grid_norm2 = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) grid_norm2 += transform.grid().weights()[k] * std::norm(samples[k]);
    EXPECT_NEAR(std::sqrt(grid_norm2), a.norm(), 1e-9 * a.norm()) << two_L;
  }
}

TEST(Transform, GridSynthesisMatchesPointwise) {
  Rng rng = make_stream(32, 0);
  const SpectralTransform transform(5);
  const auto a = random_coefficients(5, rng);
  const auto samples = transform.synthesize_on_grid(a);
  for (std::size_t k = 0; k < samples.size(); k += 37) {
    const auto g = su2_from_euler(transform.grid().nodes()[k]);
    EXPECT_LE(std::abs(samples[k] - synthesize_at(a, g)), 1e-11);
  }
  const auto via_field = transform.analyze(synthesize(a));
  EXPECT_LE(max_abs_diff(via_field, a), 1e-9);
}

TEST(Laplacian, Examples) {
  EXPECT_EQ(laplacian_multiplier(LaplacianKind::Full, 1, 1), -0.75);
  EXPECT_EQ(laplacian_multiplier(LaplacianKind::Vertical, 2, 2), -1.0);
  EXPECT_EQ(laplacian_multiplier(LaplacianKind::Spin, 2, 2), 0.0);
  EXPECT_EQ(laplacian_multiplier(LaplacianKind::Horizontal, 2, 0), -2.0);
  EXPECT_EQ(laplacian_multiplier(LaplacianKind::Full, 4, 0), -6.0);
  EXPECT_THROW(laplacian_multiplier(LaplacianKind::Full, 2, 1), Error);
  EXPECT_EQ(parse_laplacian_kind("horizontal"), LaplacianKind::Horizontal);
  EXPECT_THROW(parse_laplacian_kind("radial"), Error);
}

TEST(Laplacian, ExactIdentities) {
  for (long long l2 = 0; l2 <= 64; ++l2) {
    for (long long s2 = -l2; s2 <= l2; s2 += 2) {
      const int tl = static_cast<int>(l2);
      const int ts = static_cast<int>(s2);
      const long long full = laplacian_multiplier_quadrupled(LaplacianKind::Full, tl, ts);
      const long long vert = laplacian_multiplier_quadrupled(LaplacianKind::Vertical, tl, ts);
      const long long hor = laplacian_multiplier_quadrupled(LaplacianKind::Horizontal, tl, ts);
      const long long spin = laplacian_multiplier_quadrupled(LaplacianKind::Spin, tl, ts);
      // 4 l(l+1) with l = l2/2 is l2 (l2 + 2).
      EXPECT_EQ(full, -l2 * (l2 + 2));
      EXPECT_EQ(full, hor + vert);
      EXPECT_EQ(full, spin - 2 * s2 - s2 * s2);
      EXPECT_EQ(vert, -s2 * s2);
    }
  }
}

TEST(Laplacian, ApplyScalesDeltas) {
  const auto a = apply_laplacian(SpectralCoefficients::delta(2, 1, -1, 1, {2.0, 1.0}), LaplacianKind::Full);
  EXPECT_EQ(a.at(1, -1, 1), Complex(-1.5, -0.75));
  const auto c = apply_laplacian(SpectralCoefficients::delta(2, 0, 0, 0, 3.0), LaplacianKind::Full);
  EXPECT_EQ(c.norm(), 0.0);
}

// Ambient oracle: for the 0-homogeneous extension F(x) = X(x/|x|) on R^4,
// the R^4 Laplacian at |x| = 1 equals the unit-S^3 Laplacian, and the radius-2
// metric divides it by 4.
Complex fd_sphere_laplacian(const Field& x_field, const Eigen::Vector4d& p, double h) {
  auto f = [&](const Eigen::Vector4d& x) {
    const Eigen::Vector4d u = x / x.norm();
    return x_field(SU2Element::from_unit({u(0), u(1)}, {u(2), u(3)}));
  };
  const Complex center = f(p);
  Complex lap = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d e = Eigen::Vector4d::Unit(i) * h;
    lap += (f(p + e) - 2.0 * center + f(p - e)) / (h * h);
  }
  return lap / 4.0;
}

TEST(Laplacian, SpectralMatchesFiniteDifference) {
  Rng rng = make_stream(33, 0);
  for (int two_ell : {1, 2, 3}) {
    SpectralCoefficients a(two_ell);
    a.block(two_ell) = random_coefficients(two_ell, rng).block(two_ell);
    const auto field = synthesize(a);
    const auto lap = synthesize(apply_laplacian(a, LaplacianKind::Full));
    for (int k = 0; k < 10; ++k) {
      const auto g = haar_sample(rng);
      const Eigen::Vector4d p(g.alpha().real(), g.alpha().imag(), g.beta().real(), g.beta().imag());
      const Complex fd = fd_sphere_laplacian(field, p, 1e-3);
      const Complex spectral = lap(g);
      EXPECT_LE(std::abs(fd - spectral), 1e-4 * std::max(std::abs(spectral), 1e-3)) << two_ell;
    }
  }
}

TEST(ProjectSpin, Definition) {
  Rng rng = make_stream(34, 0);
  const auto a = random_coefficients(4, rng);
  const auto d = SpectralCoefficients::delta(4, 2, 0, 2, 1.5);
  EXPECT_EQ(max_abs_diff(project_spin(project_spin(d, Side::Left, 0), Side::Right, 2), d), 0.0);
  const auto r0 = project_spin(a, Side::Right, 0);
  for (int two_ell = 0; two_ell <= 4; ++two_ell) {
    for (int m = 0; m <= two_ell; ++m) {
      for (int s = 0; s <= two_ell; ++s) {
        const bool keep = two_ell % 2 == 0 && order_at(two_ell, s) == 0;
        EXPECT_EQ(r0.block(two_ell)(m, s), keep ? a.block(two_ell)(m, s) : Complex(0.0));
      }
    }
  }
}

TEST(ProjectSpin, RightProjectionHasPureSpin) {
  Rng rng = make_stream(35, 0);
  const auto a = random_coefficients(4, rng);
  std::uniform_real_distribution<double> unif(0.0, 4 * kPi);
  for (int two_k : {-2, 1, 0}) {
    const auto f = synthesize(project_spin(a, Side::Right, two_k));
    for (int i = 0; i < 50; ++i) {
      const auto g = haar_sample(rng);
      const double psi = unif(rng);
      const Complex expected = f(g) * std::polar(1.0, -0.5 * two_k * psi);
      EXPECT_LE(std::abs(f(g * SU2Element::g3(psi)) - expected), 1e-9);
    }
  }
}

TEST(SpinMeasures, Examples) {
  const auto m = spin_measures(SpectralCoefficients::delta(2, 2, 0, 2, {0.0, 3.0}));
  EXPECT_EQ(m.total.at({2, 0, 2}), 1.0);
  EXPECT_EQ(m.right.at(2), 1.0);
  EXPECT_EQ(m.right.at(-2), 0.0);
  auto two = SpectralCoefficients::delta(2, 2, 0, 2, 1.0 / std::sqrt(2.0));
  two.at(2, 0, -2) = 1.0 / std::sqrt(2.0);
  const auto r = spin_measures(two).right;
  EXPECT_NEAR(r.at(2), 0.5, 1e-15);
  EXPECT_NEAR(r.at(-2), 0.5, 1e-15);
  try {
    spin_measures(SpectralCoefficients(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroField);
  }
}

TEST(SpinMeasures, Normalized) {
  Rng rng = make_stream(36, 0);
  const auto m = spin_measures(random_coefficients(5, rng));
  auto sum = [](const auto& map) {
    double t = 0.0;
    for (const auto& [k, v] : map) {
      EXPECT_GE(v, 0.0);
      t += v;
    }
    return t;
  };
  EXPECT_NEAR(sum(m.total), 1.0, 1e-12);
  EXPECT_NEAR(sum(m.left), 1.0, 1e-12);
  EXPECT_NEAR(sum(m.right), 1.0, 1e-12);
  EXPECT_NEAR(sum(m.bi), 1.0, 1e-12);
}

}  // namespace
}  // namespace su2
