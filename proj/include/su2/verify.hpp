#pragma once

// Structural self-checks shared by the command line tool and the acceptance
// runner. Each check yields one row (name, metric, threshold, pass).

#include "su2/harmonic.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace su2 {

struct CheckRow {
  std::string name;
  double metric = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerifyConfig {
  int band_limit = 4;
  std::uint64_t seed = 1;
  int random_elements = 20;
  /// Replaces the threshold of the row with the same name.
  std::map<std::string, double> tolerance_overrides;
};

/// Rows, in order: unitarity, homomorphism, symmetry, little_d_realness,
/// harmonicity_fd, grid_gate, grid_total_weight, laplacian_exact,
/// laplacian_fd, haar_moments, schur_moments.
std::vector<CheckRow> run_verify(const VerifyConfig& config);

bool all_pass(const std::vector<CheckRow>& rows);
void write_rows_csv(const std::vector<CheckRow>& rows, std::ostream& out);

/// Ambient R^4 Laplacian of the polynomial D-hat^l_{m,s}(x) with
/// alpha = x0 + i x1, beta = x2 + i x3, by the five-point fourth-order
/// stencil (exact on polynomials of degree <= 5, so only rounding remains for
/// 2l <= 5). Returns |Laplacian| / (sum_i |d_ii D-hat| + |D-hat| / |x|^2).
double harmonicity_defect(int two_ell, int two_m, int two_s, const Eigen::Vector4d& x, double h = 1e-2);

/// Laplacian of the radius-2 sphere at g from the 0-homogeneous extension
/// F(x) = X(x / |x|): at |x| = 1, Delta_{R^4} F = 4 Delta_{2 S^3} X.
Complex fd_sphere_laplacian(const Field& field, const SU2Element& g, double h = 1e-3);

/// max over degrees 2l, 2l' <= max_two_ell of the quadrature error of the Haar
/// moments E{D D'^*} and E{D D'} against haar_pair_moments.
double haar_moment_defect(const QuadratureGrid& grid, int max_two_ell);

/// Quadrature error of E{(D v)_i conj(D v')_j} and E{(D v)_i (D v')_j}
/// against schur_moments for the given vectors.
double schur_moment_defect(const QuadratureGrid& grid, const Eigen::VectorXcd& v, const Eigen::VectorXcd& vp);

}  // namespace su2
