#include "su2/wigner.hpp"

#include "su2/errors.hpp"
#include "su2/half_index.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace su2 {

namespace {

using LComplex = std::complex<long double>;

constexpr int kMaxBinomial = 2 * kDefaultBandLimitCap + 2;

// Pascal triangle in long double. Entries up to C(64, 32) ~ 1.8e18 fit the
// 64-bit mantissa exactly.
const std::vector<std::vector<long double>>& binomials() {
  static const std::vector<std::vector<long double>> table = [] {
    std::vector<std::vector<long double>> t(kMaxBinomial + 1);
    for (int n = 0; n <= kMaxBinomial; ++n) {
      t[n].assign(n + 1, 1.0L);
      for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

long double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  return binomials()[n][k];
}

std::vector<LComplex> powers(LComplex z, int n) {
  std::vector<LComplex> p(n + 1);
  p[0] = 1.0L;
  for (int j = 1; j <= n; ++j) p[j] = p[j - 1] * z;
  return p;
}

Eigen::MatrixXcd evaluate(int two_ell, Complex alpha, Complex beta, int cap) {
  if (two_ell < 0) throw Error(ErrorCode::InvalidIndex, "negative degree");
  if (two_ell > cap || two_ell > kMaxBinomial) {
    throw Error(ErrorCode::BandLimitExceeded,
                "2l = " + std::to_string(two_ell) + " exceeds cap " + std::to_string(cap));
  }
  const int n = two_ell;
  const LComplex a(alpha.real(), alpha.imag());
  const LComplex b(beta.real(), beta.imag());
  const auto pa = powers(a, n);
  const auto pac = powers(std::conj(a), n);
  const auto pnb = powers(-b, n);
  const auto pbc = powers(std::conj(b), n);

  Eigen::MatrixXcd d(n + 1, n + 1);
  // Integer offsets: lpm = l+m, lms = l-s, lps = l+s, smm = s-m.
  for (int col = 0; col <= n; ++col) {
    const int lps = col;
    const int lms = n - col;
    for (int row = 0; row <= n; ++row) {
      const int lpm = row;
      const int smm = col - row;
      const int k_lo = std::max(0, -smm);
      const int k_hi = std::min(lms, lpm);
      LComplex sum = 0.0L;
      for (int k = k_lo; k <= k_hi; ++k) {
        const long double c = binom(lps, lpm - k) * binom(lms, k);
        sum += c * pac[lpm - k] * pbc[smm + k] * pnb[k] * pa[lms - k];
      }
      const long double scale = std::sqrt(binom(n, lms) / binom(n, lpm));
      sum *= scale;
      d(row, col) = Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    }
  }
  return d;
}

}  // namespace

WignerMatrix::WignerMatrix(int two_ell, Eigen::MatrixXcd entries)
    : two_ell_(two_ell), entries_(std::move(entries)) {}

Complex WignerMatrix::at(int two_m, int two_s) const {
  require_triple(two_ell_, two_m, two_s);
  return entries_(position(two_ell_, two_m), position(two_ell_, two_s));
}

Complex monomial_eval(int two_ell, int two_m, Complex z0, Complex z1) {
  require_order(two_ell, two_m);
  const int lpm = position(two_ell, two_m);
  const int lmm = two_ell - lpm;
  return std::sqrt(static_cast<double>(binom(two_ell, lpm))) * std::pow(z0, lpm) * std::pow(z1, lmm);
}

WignerMatrix wigner_matrix(int two_ell, const SU2Element& g, int cap) {
  return WignerMatrix(two_ell, evaluate(two_ell, g.alpha(), g.beta(), cap));
}

Eigen::MatrixXcd wigner_matrix_extended(int two_ell, Complex alpha, Complex beta, int cap) {
  return evaluate(two_ell, alpha, beta, cap);
}

Complex wigner_entry_at_g3(int two_ell, int two_m, int two_s, double psi) {
  require_triple(two_ell, two_m, two_s);
  if (two_m != two_s) return 0.0;
  return std::polar(1.0, -0.5 * two_s * psi);
}

WignerMatrix little_d(int two_ell, double theta, int cap) {
  return wigner_matrix(two_ell, SU2Element::g2(theta), cap);
}

int reflection_sign(int two_m, int two_s) { return parity_sign((two_m - two_s) / 2); }

SymmetryDefect symmetry_check(int two_ell, const SU2Element& g) {
  const Eigen::MatrixXcd d = wigner_matrix(two_ell, g).matrix();
  const Eigen::MatrixXcd dbar = wigner_matrix(two_ell, g.conj_entries()).matrix();
  SymmetryDefect out;
  const int n = two_ell;
  for (int row = 0; row <= n; ++row) {
    for (int col = 0; col <= n; ++col) {
      const Complex c = std::conj(d(row, col));
      out.conjugate_argument = std::max(out.conjugate_argument, std::abs(c - dbar(row, col)));
      const int sign = reflection_sign(order_at(n, row), order_at(n, col));
      out.index_reflection = std::max(out.index_reflection, std::abs(c - double(sign) * d(n - row, n - col)));
    }
  }
  return out;
}

double harmonic_normalization(int two_ell) {
  return std::sqrt(two_ell + 1.0) / (4.0 * std::numbers::pi);
}

Complex normalized_harmonic(int two_ell, int two_m, int two_s, const SU2Element& g) {
  require_triple(two_ell, two_m, two_s);
  return harmonic_normalization(two_ell) * wigner_matrix(two_ell, g).at(two_m, two_s);
}

Complex spin_weighted_harmonic(int two_ell, int two_m, int two_s, const SU2Element& g) {
  require_triple(two_ell, two_m, two_s);
  return std::sqrt((two_ell + 1.0) / (4.0 * std::numbers::pi)) * wigner_matrix(two_ell, g).at(two_m, two_s);
}

EpsilonMatrix::EpsilonMatrix(int two_ell) : two_ell_(two_ell), entries_(Eigen::MatrixXd::Zero(two_ell + 1, two_ell + 1)) {
  if (two_ell < 0) throw Error(ErrorCode::InvalidIndex, "negative degree");
  for (int row = 0; row <= two_ell; ++row) {
    const int two_m = order_at(two_ell, row);
    entries_(row, position(two_ell, -two_m)) = parity_sign((two_ell - two_m) / 2);
  }
}

int EpsilonMatrix::at(int two_m, int two_mp) const {
  require_order(two_ell_, two_m);
  require_order(two_ell_, two_mp);
  return static_cast<int>(entries_(position(two_ell_, two_m), position(two_ell_, two_mp)));
}

EpsilonMatrix epsilon_matrix(int two_ell) { return EpsilonMatrix(two_ell); }

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Eigen::MatrixXcd& d) {
  return max_abs_diff(d.adjoint() * d, Eigen::MatrixXcd::Identity(d.rows(), d.cols()));
}

}  // namespace su2
