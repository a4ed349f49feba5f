#pragma once

// Wigner matrices D^l(g) in the monomial basis psi^l_m(z) = C(2l, l+m)^{1/2} z0^{l+m} z1^{l-m}.
//
// Layout: rows are m = -l..l ascending, columns s = -l..l ascending, so entry
// (m, s) sits at (position(two_ell, two_m), position(two_ell, two_s)).

#include "su2/group.hpp"

#include <Eigen/Core>

namespace su2 {

inline constexpr int kDefaultBandLimitCap = 64;

class WignerMatrix {
 public:
  WignerMatrix(int two_ell, Eigen::MatrixXcd entries);

  int two_ell() const { return two_ell_; }
  int size() const { return two_ell_ + 1; }

  /// Entry (m, s) by doubled indices.
  Complex at(int two_m, int two_s) const;

  const Eigen::MatrixXcd& matrix() const { return entries_; }

 private:
  int two_ell_;
  Eigen::MatrixXcd entries_;
};

/// psi^l_m(z0, z1) = C(2l, l+m)^{1/2} z0^{l+m} z1^{l-m}.
Complex monomial_eval(int two_ell, int two_m, Complex z0, Complex z1);

/// D^l(h(alpha, beta)) from the coefficient expansion of
///   psi_s(h^{-1} z) = sum_m psi_m(z) D_{m,s}(h),
/// which gives
///   D_{m,s} = [C(2l,l-s)/C(2l,l+m)]^{1/2} sum_k C(l+s, l+m-k) C(l-s, k)
///             conj(alpha)^{l+m-k} conj(beta)^{s-m+k} (-beta)^k alpha^{l-s-k}.
/// Throws BandLimitExceeded when two_ell > cap.
WignerMatrix wigner_matrix(int two_ell, const SU2Element& g, int cap = kDefaultBandLimitCap);

/// Same polynomial evaluated at an arbitrary quaternion h(alpha, beta), not
/// necessarily of unit norm (the harmonic extension to R^4).
Eigen::MatrixXcd wigner_matrix_extended(int two_ell, Complex alpha, Complex beta,
                                        int cap = kDefaultBandLimitCap);

/// D^l_{m,s}(g3(psi)) = delta_{m,s} e^{-i s psi}.
Complex wigner_entry_at_g3(int two_ell, int two_m, int two_s, double psi);

/// D^l(g2(theta)); real up to rounding.
WignerMatrix little_d(int two_ell, double theta, int cap = kDefaultBandLimitCap);

/// Sign relating conj(D^l_{m,s}) to D^l_{-m,-s}: conj(D_{m,s}) = (-1)^{m-s} D_{-m,-s}.
int reflection_sign(int two_m, int two_s);

struct SymmetryDefect {
  double conjugate_argument = 0.0;  // max |conj(D(g)) - D(conj g)|
  double index_reflection = 0.0;    // max |conj(D_{m,s}(g)) - (-1)^{m-s} D_{-m,-s}(g)|
  double max() const { return std::max(conjugate_argument, index_reflection); }
};

SymmetryDefect symmetry_check(int two_ell, const SU2Element& g);

/// Orthonormal hyperspherical harmonic phi^l_{m,s} = sqrt(2l+1)/(4 pi) D^l_{m,s}.
Complex normalized_harmonic(int two_ell, int two_m, int two_s, const SU2Element& g);
double harmonic_normalization(int two_ell);

/// Spin-weighted spherical harmonic Y^l_{m,s} = sqrt((2l+1)/(4 pi)) D^l_{m,s}.
Complex spin_weighted_harmonic(int two_ell, int two_m, int two_s, const SU2Element& g);

/// Antidiagonal sign matrix eps(l)_{m,m'} = delta_{-m,m'} (-1)^{l-m}.
class EpsilonMatrix {
 public:
  explicit EpsilonMatrix(int two_ell);
  int two_ell() const { return two_ell_; }
  int at(int two_m, int two_mp) const;
  const Eigen::MatrixXd& matrix() const { return entries_; }

 private:
  int two_ell_;
  Eigen::MatrixXd entries_;
};

EpsilonMatrix epsilon_matrix(int two_ell);

/// Max-entry norm of a - b.
double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double unitarity_defect(const Eigen::MatrixXcd& d);

}  // namespace su2
