#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "dualframe/matrix_core.hpp"

namespace dualframe {

/// Frequency-domain support of a bandlimited generator: the union of d+1
/// consecutive dilated copies of a multiplicative tile E,
///
///   supp = union_{j=0}^{d} B^{c-j}(E),
///
/// where E is either the ellipsoid annulus B^0(O_*) of an associated norm
/// (Shell) or the box annulus [-1,1]^n \ B^-1([-1,1]^n) (BoxAnnulus).
/// A Mapped support is the image of another support under a linear map,
/// which is what a change of translation lattice produces.
///
/// Every support also carries a sampler region, the innermost tile
/// M = B^{c-d}(E); one dilation orbit of M covers R^n, which makes M the
/// canonical domain for sup/inf sampling.
class SupportSpec {
 public:
  enum class Kind { Shell, BoxAnnulus, Mapped };

  static SupportSpec shell(const AssociatedNorm& norm, int c, int d);
  static SupportSpec box_annulus(const Eigen::MatrixXd& B, int c, int d);
  static SupportSpec mapped(const SupportSpec& base, const Eigen::MatrixXd& w);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int c() const { return c_; }
  int d() const { return d_; }

  bool contains(const Eigen::VectorXd& xi) const;
  bool sampler_contains(const Eigen::VectorXd& xi) const;

  /// Axis-aligned half-widths of a box bounding the sampler region.
  const Eigen::VectorXd& sampler_box_halfwidths() const { return samplerHw_; }

  /// Axis-aligned half-widths of a box bounding the whole support.
  const Eigen::VectorXd& support_box_halfwidths() const { return supportHw_; }

  /// Upper bound on ||xi||_2 over the support (tight for native kinds).
  double bounding_radius() const { return outerRadius_; }
  /// Lower bound on ||xi||_2 over the support.
  double inner_radius() const { return innerRadius_; }

  /// Map T with "xi in outer hull <=> ||T xi||_2 <= 1" when the hull is an
  /// ellipsoid; empty for box hulls.
  const std::optional<Eigen::MatrixXd>& unit_ball_map() const {
    return unitBallMap_;
  }

  /// Same support family with different placement/thickness; used to derive
  /// the support of a dual generator. Not available for mapped supports.
  SupportSpec with_params(int c, int d) const;

 private:
  SupportSpec() = default;

  Kind kind_ = Kind::Shell;
  int dim_ = 0;
  int c_ = 0;
  int d_ = 0;

  // Shell: quadratic forms x^t M x <= 1 of the outer/inner/sampler hulls.
  // BoxAnnulus: max-norm maps ||W x||_inf <= 1 of the same three hulls.
  Eigen::MatrixXd outerForm_, innerForm_, samplerForm_;

  std::optional<AssociatedNorm> norm_;  // Shell only
  Eigen::MatrixXd B_;                   // BoxAnnulus only

  // Mapped only: support = mapW_(base).
  std::shared_ptr<const SupportSpec> base_;
  Eigen::MatrixXd mapW_, mapWinv_;

  Eigen::VectorXd samplerHw_;
  Eigen::VectorXd supportHw_;
  double outerRadius_ = 0.0;
  double innerRadius_ = 0.0;
  std::optional<Eigen::MatrixXd> unitBallMap_;
};

}  // namespace dualframe
