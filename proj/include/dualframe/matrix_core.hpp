#pragma once

#include <Eigen/Dense>
#include <complex>

#include "dualframe/errors.hpp"

namespace dualframe {

/// A validated real expansive dilation matrix A: every eigenvalue has
/// modulus strictly greater than one. Keeps the transpose B = A^t and the
/// spectrum around since every construction downstream needs them.
class DilationMatrix {
 public:
  static constexpr double kSingularTol = 1e-12;
  static constexpr double kExpansiveTol = 1e-12;

  const Eigen::MatrixXd& entries() const { return a_; }
  const Eigen::MatrixXd& transposed() const { return b_; }
  int dim() const { return static_cast<int>(a_.rows()); }
  double det_abs() const { return det_abs_; }
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  double min_eigenvalue_modulus() const { return min_modulus_; }
  double max_eigenvalue_modulus() const { return max_modulus_; }

 private:
  friend DilationMatrix validate_expansive(const Eigen::MatrixXd& m);
  DilationMatrix() = default;

  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  double det_abs_ = 0.0;
  Eigen::VectorXcd eigenvalues_;
  double min_modulus_ = 0.0;
  double max_modulus_ = 0.0;
};

/// Validates that M is square, finite, invertible and expansive.
/// Throws SingularMatrix or NotExpansive (naming the offending eigenvalue).
DilationMatrix validate_expansive(const Eigen::MatrixXd& m);

/// Hermitian norm ||x||_* = sqrt(x^t K x) in which B acts expanding:
/// ||Bx||_* >= lambda ||x||_* with a certified lambda > 1. K is the
/// truncated series K = I + (B^-1)^t B^-1 + ... + (B^-k)^t B^-k.
struct AssociatedNorm {
  Eigen::MatrixXd B;          // matrix the norm is associated with
  Eigen::MatrixXd K;          // symmetric positive definite Gram matrix
  int k = 0;                  // truncation order
  double lambda = 1.0;        // certified expansion factor (> 1)
  Eigen::MatrixXd eigQ;       // orthonormal eigenvectors of K (columns)
  Eigen::VectorXd eigLambda;  // eigenvalues of K, ascending
  double maxSemiAxis = 0.0;   // largest semi-principal axis of I_*

  int dim() const { return static_cast<int>(K.rows()); }
  double value(const Eigen::VectorXd& x) const;
};

/// Builds the associated norm for B = A^t: scans k = 0..kMax for the
/// smallest truncation order such that B^t K B - lambda^2 K is positive
/// semi-definite (within -tol on the minimum eigenvalue) for some
/// lambda > 1. The certified lambda is the bisection supremum over
/// [1, max |eig B|], accurate to 1e-6. Throws NoCertificate if kMax is
/// exhausted.
AssociatedNorm build_associated_norm(const DilationMatrix& a, int kMax = 64,
                                     double tol = 1e-9);

/// Assembles an AssociatedNorm from an already-certified (B, K, k, lambda);
/// only the spectral decomposition is recomputed. Used when transporting a
/// norm through a change of basis, where the certificate carries over.
AssociatedNorm make_associated_norm(Eigen::MatrixXd B, Eigen::MatrixXd K,
                                    int k, double lambda);

double norm_value(const AssociatedNorm& norm, const Eigen::VectorXd& x);

/// The unique j with B^j x in O_* = I_* \ B^-1(I_*), i.e.
/// ||B^j x||_* <= 1 < ||B^{j+1} x||_*. Throws ZeroVector for x = 0.
int dilation_index(const AssociatedNorm& norm, const Eigen::VectorXd& x);

/// Radial coordinate of an axis-aligned ellipsoid surface in hyperspherical
/// coordinates: r = f(theta)^{-1/2} with f = sum_i u_i(theta)^2 / l_i^2 and
/// u the unit vector of the angles. Angles theta_1..theta_{n-2} must lie in
/// [0, pi], theta_{n-1} in [0, 2 pi).
double ellipsoid_radius(const Eigen::VectorXd& semiAxes,
                        const Eigen::VectorXd& angles);

/// Unit direction vector of hyperspherical angles (dimension angles.size()+1).
Eigen::VectorXd hyperspherical_direction(const Eigen::VectorXd& angles);

/// Ellipsoid shell B^c(I_*) \ B^{c-d-1}(I_*); d = 0 gives B^c(O_*).
struct EllipsoidShell {
  AssociatedNorm norm;
  int c = 0;
  int d = 0;

  bool contains(const Eigen::VectorXd& x) const;
};

// Small dense helpers shared across modules.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int e);
double spectral_norm(const Eigen::MatrixXd& m);
double min_symmetric_eigenvalue(const Eigen::MatrixXd& sym);

}  // namespace dualframe
