#include "su2/errors.hpp"
#include "su2/half_index.hpp"
#include "su2/wigner.hpp"

#include <gtest/gtest.h>

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace su2 {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Monomial, Examples) {
  EXPECT_EQ(monomial_eval(0, 0, {0.3, 0.2}, {-1.0, 4.0}), Complex(1.0));
  const Complex z0(0.6, -0.2);
  EXPECT_EQ(monomial_eval(1, 1, z0, {0.1, 0.1}), z0);
  EXPECT_NEAR(std::abs(monomial_eval(2, 0, 1.0, 1.0) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_THROW(monomial_eval(2, 1, 1.0, 1.0), Error);
}

TEST(Wigner, DegreeZero) {
  const auto d = wigner_matrix(0, SU2Element::make({0.2, 0.4}, {-0.1, 0.7}));
  ASSERT_EQ(d.size(), 1);
  EXPECT_NEAR(std::abs(d.at(0, 0) - 1.0), 0.0, 1e-15);
}

TEST(Wigner, SpinHalfEntries) {
  const auto g = SU2Element::make({0.2, 0.4}, {-0.1, 0.7});
  const Complex a = g.alpha();
  const Complex b = g.beta();
  const auto d = wigner_matrix(1, g);
  EXPECT_NEAR(std::abs(d.at(1, 1) - std::conj(a)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.at(-1, 1) - std::conj(b)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.at(1, -1) + b), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.at(-1, -1) - a), 0.0, 1e-15);
}

TEST(Wigner, AtG2Pi) {
  for (int two_ell = 0; two_ell <= 8; ++two_ell) {
    const auto d = wigner_matrix(two_ell, SU2Element::g2(kPi));
    for (int tm = -two_ell; tm <= two_ell; tm += 2) {
      for (int ts = -two_ell; ts <= two_ell; ts += 2) {
        const double expected = (tm == -ts) ? parity_sign((two_ell + tm) / 2) : 0.0;
        EXPECT_NEAR(std::abs(d.at(tm, ts) - expected), 0.0, 1e-15) << two_ell << " " << tm << " " << ts;
      }
    }
  }
}

// Defining relation psi_s(h^{-1} z) = sum_m psi_m(z) D_{m,s}(h), evaluated
// directly from the monomials.
TEST(Wigner, MatchesDefiningExpansion) {
  Rng rng = make_stream(21, 0);
  for (int two_ell : {1, 2, 3, 6, 11, 20, 40}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto h = haar_sample(rng);
      const auto zg = haar_sample(rng);
      const Eigen::Vector2cd z(zg.alpha(), zg.beta());
      const Eigen::Vector2cd w = h.inverse().matrix() * z;
      const auto d = wigner_matrix(two_ell, h);
      for (int ts = -two_ell; ts <= two_ell; ts += 2) {
        const Complex lhs = monomial_eval(two_ell, ts, w(0), w(1));
        Complex rhs = 0.0;
        double scale = 0.0;
        for (int tm = -two_ell; tm <= two_ell; tm += 2) {
          const Complex term = monomial_eval(two_ell, tm, z(0), z(1)) * d.at(tm, ts);
          rhs += term;
          scale += std::abs(term);
        }
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, scale)) << two_ell;
      }
    }
  }
}

TEST(Wigner, UnitarityHomomorphismDeterminant) {
  Rng rng = make_stream(22, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = haar_sample(rng);
    const auto b = haar_sample(rng);
    for (int two_ell = 0; two_ell <= 40; ++two_ell) {
      const auto da = wigner_matrix(two_ell, a).matrix();
      const auto db = wigner_matrix(two_ell, b).matrix();
      EXPECT_LE(unitarity_defect(da), 1e-10) << two_ell;
      EXPECT_LE(max_abs_diff(wigner_matrix(two_ell, a * b).matrix(), da * db), 1e-10) << two_ell;
      if (two_ell <= 20) EXPECT_NEAR(std::abs(da.determinant()), 1.0, 1e-10);
    }
  }
}

TEST(Wigner, UnitaryAtCap) {
  Rng rng = make_stream(23, 0);
  const auto g = haar_sample(rng);
  EXPECT_LE(unitarity_defect(wigner_matrix(64, g).matrix()), 1e-10);
  try {
    wigner_matrix(65, g);
    FAIL() << "expected BandLimitExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BandLimitExceeded);
  }
  EXPECT_NO_THROW(wigner_matrix(66, g, 66));
}

TEST(Wigner, PureSpinLaws) {
  Rng rng = make_stream(24, 0);
  std::uniform_real_distribution<double> unif(0.0, 4 * kPi);
  for (int two_ell = 0; two_ell <= 12; ++two_ell) {
    const auto g = haar_sample(rng);
    const double psi = unif(rng);
    const auto d = wigner_matrix(two_ell, g).matrix();
    Eigen::VectorXcd phase(two_ell + 1);
    for (int p = 0; p <= two_ell; ++p) phase(p) = std::polar(1.0, -0.5 * order_at(two_ell, p) * psi);
    const auto right = wigner_matrix(two_ell, g * SU2Element::g3(psi)).matrix();
    const auto left = wigner_matrix(two_ell, SU2Element::g3(psi) * g).matrix();
    EXPECT_LE(max_abs_diff(right, d * phase.asDiagonal()), 1e-11);
    EXPECT_LE(max_abs_diff(left, phase.asDiagonal() * d), 1e-11);
  }
}

TEST(Wigner, EntryAtG3) {
  EXPECT_EQ(wigner_entry_at_g3(2, 2, 2, 0.0), Complex(1.0));
  EXPECT_EQ(wigner_entry_at_g3(2, 0, 2, 1.0), Complex(0.0));
  EXPECT_NEAR(std::abs(wigner_entry_at_g3(1, 1, 1, kPi) - Complex(0, -1)), 0.0, 1e-15);
  for (int two_ell = 0; two_ell <= 6; ++two_ell) {
    const auto d = wigner_matrix(two_ell, SU2Element::g3(2.3));
    for (int tm = -two_ell; tm <= two_ell; tm += 2)
      for (int ts = -two_ell; ts <= two_ell; ts += 2)
        EXPECT_NEAR(std::abs(d.at(tm, ts) - wigner_entry_at_g3(two_ell, tm, ts, 2.3)), 0.0, 1e-14);
  }
}

TEST(Wigner, SymmetryIdentities) {
  Rng rng = make_stream(25, 0);
  EXPECT_EQ(symmetry_check(0, haar_sample(rng)).max(), 0.0);
  for (int two_ell = 0; two_ell <= 20; ++two_ell) {
    for (int trial = 0; trial < 3; ++trial) {
      EXPECT_LE(symmetry_check(two_ell, haar_sample(rng)).max(), 1e-12) << two_ell;
    }
  }
  const auto real = SU2Element::make(0.6, 0.8);
  const auto d = wigner_matrix(5, real).matrix();
  EXPECT_LE(d.imag().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Wigner, ReflectionSignAtSpinHalf) {
  // conj(D_{1/2,1/2}) = alpha = D_{-1/2,-1/2}: the sign is +1.
  EXPECT_EQ(reflection_sign(1, 1), 1);
  EXPECT_EQ(reflection_sign(1, -1), -1);
  EXPECT_EQ(reflection_sign(-3, 1), 1);
}

TEST(LittleD, Examples) {
  for (int two_ell = 0; two_ell <= 10; ++two_ell) {
    EXPECT_LE(max_abs_diff(little_d(two_ell, 0.0).matrix(), Eigen::MatrixXcd::Identity(two_ell + 1, two_ell + 1)), 0.0);
    EXPECT_LE(max_abs_diff(little_d(two_ell, kPi).matrix(), wigner_matrix(two_ell, SU2Element::g2(kPi)).matrix()), 0.0);
  }
  const double t = 1.1;
  const auto d = little_d(1, t);
  EXPECT_NEAR(d.at(1, 1).real(), std::cos(t / 2), 1e-15);
  EXPECT_NEAR(d.at(-1, -1).real(), std::cos(t / 2), 1e-15);
  EXPECT_NEAR(d.at(1, -1).real(), -std::sin(t / 2), 1e-15);
  EXPECT_NEAR(d.at(-1, 1).real(), std::sin(t / 2), 1e-15);
  for (int two_ell = 0; two_ell <= 40; ++two_ell) {
    EXPECT_LE(little_d(two_ell, 2.0).matrix().imag().cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Harmonics, Normalizations) {
  const auto g = SU2Element::make({0.1, 0.3}, {0.5, -0.2});
  EXPECT_NEAR(std::abs(normalized_harmonic(0, 0, 0, g) - 1.0 / (4 * kPi)), 0.0, 1e-16);
  const Complex d = wigner_matrix(2, g).at(0, 2);
  EXPECT_NEAR(std::abs(normalized_harmonic(2, 0, 2, g) - std::sqrt(3.0) / (4 * kPi) * d), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(spin_weighted_harmonic(2, 0, 2, g) - std::sqrt(3.0 / (4 * kPi)) * d), 0.0, 1e-16);
  EXPECT_THROW(normalized_harmonic(2, 1, 0, g), Error);
}

TEST(Epsilon, Examples) {
  EXPECT_EQ(epsilon_matrix(0).at(0, 0), 1);
  const auto e1 = epsilon_matrix(1);
  EXPECT_EQ(e1.at(1, -1), 1);
  EXPECT_EQ(e1.at(-1, 1), -1);
  EXPECT_EQ(e1.at(1, 1), 0);
  const auto e2 = epsilon_matrix(2);
  EXPECT_EQ(e2.at(2, -2), 1);
  EXPECT_EQ(e2.at(0, 0), -1);
  EXPECT_EQ(e2.at(-2, 2), 1);
}

TEST(Epsilon, SquareAndPermutationStructure) {
  for (int two_ell = 0; two_ell <= 20; ++two_ell) {
    const Eigen::MatrixXd e = epsilon_matrix(two_ell).matrix();
    const double sign = parity_sign(two_ell);
    EXPECT_EQ(e * e, sign * Eigen::MatrixXd::Identity(two_ell + 1, two_ell + 1));
    for (int i = 0; i <= two_ell; ++i) {
      EXPECT_EQ(e.row(i).cwiseAbs().sum(), 1.0);
      EXPECT_EQ(e.col(i).cwiseAbs().sum(), 1.0);
    }
  }
}

}  // namespace
}  // namespace su2
