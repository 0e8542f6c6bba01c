#include "dualframe/support.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace dualframe {

namespace {

double max_row_norm(const Eigen::MatrixXd& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).norm());
  return best;
}

double max_corner_norm(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.cols());
  double best = 0.0;
  for (long mask = 0; mask < (1L << n); ++mask) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
    best = std::max(best, (p * v).norm());
  }
  return best;
}

}  // namespace

SupportSpec SupportSpec::shell(const AssociatedNorm& norm, int c, int d) {
  if (d < 0) throw InvalidArgument("shell thickness d must be >= 0");
  SupportSpec s;
  s.kind_ = Kind::Shell;
  s.dim_ = norm.dim();
  s.c_ = c;
  s.d_ = d;
  s.norm_ = norm;

  auto form = [&](int m) {
    const Eigen::MatrixXd Bm = matrix_power(norm.B, -m);
    return Eigen::MatrixXd(Bm.transpose() * norm.K * Bm);
  };
  s.outerForm_ = form(c);
  s.innerForm_ = form(c - d - 1);
  s.samplerForm_ = form(c - d);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> outerEigs(s.outerForm_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> innerEigs(s.innerForm_);
  s.outerRadius_ = 1.0 / std::sqrt(outerEigs.eigenvalues()(0));
  s.innerRadius_ = 1.0 / std::sqrt(innerEigs.eigenvalues()(s.dim_ - 1));

  const Eigen::MatrixXd samplerInv = s.samplerForm_.inverse();
  s.samplerHw_ = samplerInv.diagonal().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd outerInv = s.outerForm_.inverse();
  s.supportHw_ = outerInv.diagonal().cwiseMax(0.0).cwiseSqrt();

  // x in B^c(I_*) <=> ||Lambda^{1/2} Q^t B^{-c} x|| <= 1.
  s.unitBallMap_ = Eigen::MatrixXd(norm.eigLambda.cwiseSqrt().asDiagonal() *
                                   norm.eigQ.transpose() *
                                   matrix_power(norm.B, -c));
  return s;
}

SupportSpec SupportSpec::box_annulus(const Eigen::MatrixXd& B, int c, int d) {
  if (d < 0) throw InvalidArgument("box annulus thickness d must be >= 0");
  SupportSpec s;
  s.kind_ = Kind::BoxAnnulus;
  s.dim_ = static_cast<int>(B.rows());
  s.c_ = c;
  s.d_ = d;
  s.B_ = B;

  s.outerForm_ = matrix_power(B, -c);
  s.innerForm_ = matrix_power(B, -(c - d - 1));
  s.samplerForm_ = matrix_power(B, -(c - d));

  s.outerRadius_ = max_corner_norm(matrix_power(B, c));
  s.innerRadius_ = 1.0 / max_row_norm(s.innerForm_);
  const Eigen::MatrixXd ps = matrix_power(B, c - d);
  s.samplerHw_ = ps.cwiseAbs().rowwise().sum();
  s.supportHw_ = matrix_power(B, c).cwiseAbs().rowwise().sum();
  return s;
}

SupportSpec SupportSpec::mapped(const SupportSpec& base,
                                const Eigen::MatrixXd& w) {
  if (w.rows() != base.dim() || w.cols() != base.dim()) {
    throw InvalidArgument("map dimension mismatch");
  }
  SupportSpec s;
  s.kind_ = Kind::Mapped;
  s.dim_ = base.dim();
  s.c_ = base.c();
  s.d_ = base.d();
  s.base_ = std::make_shared<SupportSpec>(base);
  s.mapW_ = w;
  s.mapWinv_ = w.inverse();

  s.samplerHw_ = w.cwiseAbs() * base.sampler_box_halfwidths();
  s.supportHw_ = w.cwiseAbs() * base.support_box_halfwidths();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
  const double sMax = svd.singularValues()(0);
  const double sMin = svd.singularValues()(s.dim_ - 1);
  s.outerRadius_ = sMax * base.bounding_radius();
  s.innerRadius_ = sMin * base.inner_radius();
  if (base.unit_ball_map()) {
    s.unitBallMap_ = Eigen::MatrixXd(*base.unit_ball_map() * s.mapWinv_);
  }
  return s;
}

bool SupportSpec::contains(const Eigen::VectorXd& xi) const {
  switch (kind_) {
    case Kind::Shell:
      return xi.dot(outerForm_ * xi) <= 1.0 && xi.dot(innerForm_ * xi) > 1.0;
    case Kind::BoxAnnulus:
      return (outerForm_ * xi).cwiseAbs().maxCoeff() <= 1.0 &&
             (innerForm_ * xi).cwiseAbs().maxCoeff() > 1.0;
    case Kind::Mapped:
      return base_->contains(mapWinv_ * xi);
  }
  return false;
}

bool SupportSpec::sampler_contains(const Eigen::VectorXd& xi) const {
  switch (kind_) {
    case Kind::Shell:
      return xi.dot(samplerForm_ * xi) <= 1.0 && xi.dot(innerForm_ * xi) > 1.0;
    case Kind::BoxAnnulus:
      return (samplerForm_ * xi).cwiseAbs().maxCoeff() <= 1.0 &&
             (innerForm_ * xi).cwiseAbs().maxCoeff() > 1.0;
    case Kind::Mapped:
      return base_->sampler_contains(mapWinv_ * xi);
  }
  return false;
}

SupportSpec SupportSpec::with_params(int c, int d) const {
  switch (kind_) {
    case Kind::Shell:
      return shell(*norm_, c, d);
    case Kind::BoxAnnulus:
      return box_annulus(B_, c, d);
    case Kind::Mapped:
      break;
  }
  throw InvalidArgument("cannot re-parametrize a mapped support");
}

}  // namespace dualframe
