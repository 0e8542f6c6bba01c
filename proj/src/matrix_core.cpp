#include "dualframe/matrix_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace dualframe {

namespace {

void require_square_finite(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidArgument("matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw InvalidArgument("matrix entries must be finite");
  }
}

}  // namespace

DilationMatrix validate_expansive(const Eigen::MatrixXd& m) {
  require_square_finite(m);

  DilationMatrix out;
  out.a_ = m;
  out.b_ = m.transpose();

  const double det = m.determinant();
  out.det_abs_ = std::abs(det);
  if (out.det_abs_ <= DilationMatrix::kSingularTol) {
    std::ostringstream msg;
    msg << "matrix is singular: |det| = " << out.det_abs_;
    throw SingularMatrix(msg.str());
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  out.eigenvalues_ = solver.eigenvalues();

  double prod = 1.0;
  out.min_modulus_ = std::numeric_limits<double>::infinity();
  out.max_modulus_ = 0.0;
  for (int i = 0; i < out.eigenvalues_.size(); ++i) {
    const double mod = std::abs(out.eigenvalues_(i));
    prod *= mod;
    out.min_modulus_ = std::min(out.min_modulus_, mod);
    out.max_modulus_ = std::max(out.max_modulus_, mod);
    if (mod <= 1.0 + DilationMatrix::kExpansiveTol) {
      std::ostringstream msg;
      msg << "matrix is not expansive: eigenvalue " << out.eigenvalues_(i).real()
          << (out.eigenvalues_(i).imag() >= 0 ? "+" : "")
          << out.eigenvalues_(i).imag() << "i has modulus " << mod;
      throw NotExpansive(msg.str());
    }
  }

  // |det A| must equal the product of eigenvalue moduli.
  if (std::abs(prod - out.det_abs_) > 1e-9 * out.det_abs_) {
    throw Error("eigenvalue product does not match |det|; eigensolver failure");
  }
  return out;
}

double AssociatedNorm::value(const Eigen::VectorXd& x) const {
  return std::sqrt(std::max(0.0, x.dot(K * x)));
}

namespace {

// Supremum of lambda in [1, hi] with lambda_min(B^t K B - lambda^2 K) >= -tol,
// found by bisection to 1e-6. Returns 0 when even lambda slightly above 1
// fails, i.e. this K certifies nothing.
double certified_lambda(const Eigen::MatrixXd& B, const Eigen::MatrixXd& K,
                        double hi, double tol) {
  const Eigen::MatrixXd G = B.transpose() * K * B;
  auto slack = [&](double lambda) {
    const Eigen::MatrixXd M = G - lambda * lambda * K;
    return min_symmetric_eigenvalue(M);
  };
  if (slack(1.0) < -tol) return 0.0;
  if (slack(hi) >= -tol) return hi;
  double lo = 1.0;
  double up = hi;
  while (up - lo > 1e-6) {
    const double mid = 0.5 * (lo + up);
    if (slack(mid) >= -tol) {
      lo = mid;
    } else {
      up = mid;
    }
  }
  return lo;
}

}  // namespace

AssociatedNorm build_associated_norm(const DilationMatrix& a, int kMax,
                                     double tol) {
  if (kMax < 0) throw InvalidArgument("kMax must be >= 0");
  if (!(tol > 0)) throw InvalidArgument("tol must be > 0");

  const Eigen::MatrixXd B = a.transposed();
  const int n = a.dim();
  const Eigen::MatrixXd Binv = B.inverse();
  const double hi = a.max_eigenvalue_modulus();

  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k <= kMax; ++k) {
    if (k > 0) {
      term = Binv.transpose() * term * Binv;  // (B^-k)^t B^-k
      K += term;
    }
    const double lambda = certified_lambda(B, K, hi, tol);
    if (lambda > 1.0 + 1e-6) {
      return make_associated_norm(B, K, k, lambda);
    }
  }
  std::ostringstream msg;
  msg << "no expansion certificate found up to k = " << kMax
      << "; raise kMax or loosen tol";
  throw NoCertificate(msg.str());
}

AssociatedNorm make_associated_norm(Eigen::MatrixXd B, Eigen::MatrixXd K,
                                    int k, double lambda) {
  AssociatedNorm norm;
  norm.B = std::move(B);
  norm.K = 0.5 * (K + K.transpose());  // enforce exact symmetry
  norm.k = k;
  norm.lambda = lambda;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(norm.K);
  if (eigs.info() != Eigen::Success) {
    throw Error("spectral decomposition of K failed");
  }
  norm.eigLambda = eigs.eigenvalues();
  norm.eigQ = eigs.eigenvectors();
  if (norm.eigLambda(0) <= 0.0) {
    throw Error("K is not positive definite");
  }
  norm.maxSemiAxis = 1.0 / std::sqrt(norm.eigLambda(0));
  return norm;
}

double norm_value(const AssociatedNorm& norm, const Eigen::VectorXd& x) {
  if (x.size() != norm.dim()) throw InvalidArgument("dimension mismatch");
  if (!x.allFinite()) throw InvalidArgument("x must be finite");
  return norm.value(x);
}

int dilation_index(const AssociatedNorm& norm, const Eigen::VectorXd& x) {
  if (x.size() != norm.dim()) throw InvalidArgument("dimension mismatch");
  if (x.isZero(0.0)) throw ZeroVector("dilation index of the zero vector");

  constexpr int kMaxSteps = 200000;
  Eigen::VectorXd y = x;
  int j = 0;
  if (norm.value(y) <= 1.0) {
    // Walk up while the next dilate still fits inside I_*.
    Eigen::VectorXd next = norm.B * y;
    int steps = 0;
    while (norm.value(next) <= 1.0) {
      y = next;
      ++j;
      next = norm.B * y;
      if (++steps > kMaxSteps) throw Error("dilation index walk diverged");
    }
  } else {
    const Eigen::MatrixXd Binv = norm.B.inverse();
    int steps = 0;
    do {
      y = Binv * y;
      --j;
      if (++steps > kMaxSteps) throw Error("dilation index walk diverged");
    } while (norm.value(y) > 1.0);
  }
  return j;
}

Eigen::VectorXd hyperspherical_direction(const Eigen::VectorXd& angles) {
  const int n = static_cast<int>(angles.size()) + 1;
  Eigen::VectorXd u(n);
  double sinProd = 1.0;
  for (int i = 0; i < n - 1; ++i) {
    u(i) = sinProd * std::cos(angles(i));
    sinProd *= std::sin(angles(i));
  }
  u(n - 1) = sinProd;
  return u;
}

double ellipsoid_radius(const Eigen::VectorXd& semiAxes,
                        const Eigen::VectorXd& angles) {
  const int n = static_cast<int>(semiAxes.size());
  if (n < 1) throw InvalidArgument("need at least one semi-axis");
  if (angles.size() != n - 1) {
    throw InvalidArgument("expected n-1 angles for an n-dimensional ellipsoid");
  }
  for (int i = 0; i < n; ++i) {
    if (!(semiAxes(i) > 0.0)) throw InvalidArgument("semi-axes must be > 0");
  }
  constexpr double kPi = 3.14159265358979323846;
  for (int i = 0; i + 1 < n - 1; ++i) {
    if (!(angles(i) >= 0.0 && angles(i) <= kPi)) {
      throw AngleOutOfRange("polar angles must lie in [0, pi]");
    }
  }
  if (n >= 2) {
    const double last = angles(n - 2);
    if (!(last >= 0.0 && last < 2.0 * kPi)) {
      throw AngleOutOfRange("azimuthal angle must lie in [0, 2 pi)");
    }
  }
  if (n == 1) return semiAxes(0);

  const Eigen::VectorXd u = hyperspherical_direction(angles);
  double f = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = u(i) / semiAxes(i);
    f += t * t;
  }
  return 1.0 / std::sqrt(f);
}

bool EllipsoidShell::contains(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd outer = matrix_power(norm.B, -c);
  const Eigen::MatrixXd inner = matrix_power(norm.B, -(c - d - 1));
  return norm.value(outer * x) <= 1.0 && norm.value(inner * x) > 1.0;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int e) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd base = e >= 0 ? m : Eigen::MatrixXd(m.inverse());
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < std::abs(e); ++i) out = out * base;
  return out;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double min_symmetric_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(
      0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
  return eigs.eigenvalues()(0);
}

}  // namespace dualframe
