#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "dualframe/matrix_core.hpp"
#include "dualframe/support.hpp"

namespace dualframe {

/// Full-rank lattice Gamma = P Z^n with determinant d(Gamma) = |det P|.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd basis);

  const Eigen::MatrixXd& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.rows()); }
  double determinant() const { return determinant_; }
  Eigen::VectorXd point(const Eigen::VectorXi& k) const;

 private:
  Eigen::MatrixXd basis_;
  double determinant_ = 0.0;
};

/// Translation lattice Gamma together with its dual Gamma*;
/// d(Gamma) d(Gamma*) = 1.
struct LatticePair {
  Lattice gamma;
  Lattice gammaStar;
};

/// Dual lattice with basis (P^t)^{-1}.
Lattice dual_lattice(const Lattice& l);

/// Pairs a lattice with its derived dual.
LatticePair lattice_pair(Lattice gamma);

/// The lattice of the concrete construction: Gamma = 1/2 A^{-c} Q L^{1/2} Z^n
/// with dual Gamma* = 2 B^{c} Q L^{-1/2} Z^n, where Q L Q^t is the spectral
/// decomposition of the norm's Gram matrix. By construction
/// (B^c(I_*) + gamma) and B^c(I_*) do not overlap for gamma in Gamma* \ {0}.
/// Note the exponent: the translation lattice uses A^{-c}, the dual B^{+c}.
LatticePair special_lattice(const DilationMatrix& a, const AssociatedNorm& norm,
                            int c);

/// Upper bound on ||P||_2 so that Gamma = P Z^n is an admissible translation
/// lattice: 1 / (l ||A^c|| (1 + ||A^{mUnder}||)) with l the largest
/// semi-principal axis of I_*.
double crude_lattice_norm_bound(const DilationMatrix& a,
                                const AssociatedNorm& norm, int c, int mUnder);

/// Basis scale * [[2, 0], [1, sqrt(3)]].
Lattice hexagonal_lattice_2d(double scale);

/// Face-centered cubic lattice; its unit-ball packing density is
/// pi / sqrt(18).
Lattice fcc_lattice_3d(double scale);

double unit_ball_volume(int n);

/// Pure formula V_n r^n / d(L); non-overlap is not enforced.
double packing_density(const Lattice& l, double ballRadius);

/// All lattice points with ||P k||_2 <= radius (optionally without 0).
std::vector<Eigen::VectorXd> lattice_points_in_ball(const Lattice& l,
                                                    double radius,
                                                    bool includeOrigin);

struct SeparationReport {
  bool separated = true;
  bool analytic = false;   // the ellipsoid-hull test was applicable
  int candidates = 0;      // nonzero dual-lattice vectors examined
  std::optional<Eigen::VectorXd> violation;
};

/// Checks (regionA + gamma) cap regionB = empty for all gamma in
/// gammaStar \ {0}. Candidates are the finitely many gamma with
/// ||gamma|| <= radiusA + radiusB. When both regions sit in the same
/// ellipsoid hull the check is analytic (hull images may touch but not
/// overlap); otherwise `samples` points of regionB are tested per candidate.
SeparationReport verify_separation(const Lattice& gammaStar,
                                   const SupportSpec& regionA,
                                   const SupportSpec& regionB,
                                   int samples = 10000,
                                   std::uint64_t seed = 2026);

/// Exactly |det Q| representatives of the quotient group Q^{-1}Z^n / Z^n,
/// each with coordinates in [0, 1). Q must be an invertible integer matrix.
std::vector<Eigen::VectorXd> integer_quotient_representatives(
    const Eigen::MatrixXd& q);

}  // namespace dualframe
