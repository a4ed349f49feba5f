#include "su2/errors.hpp"
#include "su2/verify.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace su2;

TEST(Verify, DefaultConfigPassesInOrder) {
  const auto rows = run_verify({});
  const std::vector<std::string> names = {"unitarity",      "homomorphism", "symmetry",          "little_d_realness",
                                          "harmonicity_fd", "grid_gate",    "grid_total_weight", "laplacian_exact",
                                          "laplacian_fd",   "haar_moments", "schur_moments"};
  ASSERT_EQ(rows.size(), names.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].name, names[i]);
    EXPECT_TRUE(rows[i].pass) << rows[i].name << " " << rows[i].metric;
  }
  EXPECT_TRUE(all_pass(rows));
}

TEST(Verify, OverrideForcesFailure) {
  VerifyConfig c;
  c.tolerance_overrides["unitarity"] = 1e-20;
  const auto rows = run_verify(c);
  EXPECT_FALSE(rows[0].pass);
  EXPECT_EQ(rows[0].threshold, 1e-20);
  EXPECT_FALSE(all_pass(rows));
}

TEST(Verify, BandLimitCap) {
  VerifyConfig c;
  c.band_limit = 65;
  try {
    run_verify(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BandLimitExceeded);
  }
}

TEST(Verify, DeterministicCsv) {
  std::ostringstream a, b;
  write_rows_csv(run_verify({}), a);
  write_rows_csv(run_verify({}), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Harmonicity, WignerPolynomialsAtAFixedPoint) {
  const Eigen::Vector4d x(0.3, -0.7, 0.4, 0.5);
  for (int two_ell = 1; two_ell <= 4; ++two_ell)
    for (int tm = -two_ell; tm <= two_ell; tm += 2)
      for (int ts = -two_ell; ts <= two_ell; ts += 2) EXPECT_LE(harmonicity_defect(two_ell, tm, ts, x), 1e-9);
}

TEST(SphereLaplacian, EigenfunctionByFiniteDifference) {
  // D^1_{0,0} = cos(theta) has full-Laplacian eigenvalue -l(l+1) = -2.
  const Field f = [](const SU2Element& g) { return wigner_matrix(2, g).at(0, 0); };
  Rng rng = make_stream(5, 0);
  for (int i = 0; i < 10; ++i) {
    const auto g = haar_sample(rng);
    EXPECT_NEAR(std::abs(fd_sphere_laplacian(f, g) - (-2.0) * f(g)), 0.0, 1e-5);
  }
}

TEST(Moments, QuadratureDefectsAreTiny) {
  const QuadratureGrid grid = build_grid(4);
  EXPECT_LE(haar_moment_defect(grid, 2), 1e-12);
  Eigen::VectorXcd v(3), vp(3);
  v << Complex(1, 2), Complex(0, -1), Complex(0.5, 0);
  vp << Complex(-1, 0), Complex(2, 1), Complex(0, 0.25);
  EXPECT_LE(schur_moment_defect(grid, v, vp), 1e-12);
}
