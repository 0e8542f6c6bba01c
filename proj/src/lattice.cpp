#include "dualframe/lattice.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

#include "dualframe/sampling.hpp"

namespace dualframe {

Lattice::Lattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() == 0 || basis_.rows() != basis_.cols()) {
    throw InvalidArgument("lattice basis must be square and non-empty");
  }
  if (!basis_.allFinite()) {
    throw InvalidArgument("lattice basis must be finite");
  }
  determinant_ = std::abs(basis_.determinant());
  if (determinant_ <= 1e-12) {
    throw SingularMatrix("lattice basis is singular");
  }
}

Eigen::VectorXd Lattice::point(const Eigen::VectorXi& k) const {
  return basis_ * k.cast<double>();
}

Lattice dual_lattice(const Lattice& l) {
  return Lattice(l.basis().transpose().inverse());
}

LatticePair lattice_pair(Lattice gamma) {
  Lattice star = dual_lattice(gamma);
  return LatticePair{std::move(gamma), std::move(star)};
}

LatticePair special_lattice(const DilationMatrix& a, const AssociatedNorm& norm,
                            int c) {
  if (norm.dim() != a.dim()) throw InvalidArgument("dimension mismatch");
  const Eigen::VectorXd sqrtL = norm.eigLambda.cwiseSqrt();
  const Eigen::MatrixXd gamma = 0.5 * matrix_power(a.entries(), -c) *
                                norm.eigQ * sqrtL.asDiagonal();
  const Eigen::MatrixXd gammaStar = 2.0 * matrix_power(a.transposed(), c) *
                                    norm.eigQ *
                                    sqrtL.cwiseInverse().asDiagonal();
  return LatticePair{Lattice(gamma), Lattice(gammaStar)};
}

double crude_lattice_norm_bound(const DilationMatrix& a,
                                const AssociatedNorm& norm, int c, int mUnder) {
  if (mUnder < 0) throw InvalidArgument("mUnder must be >= 0");
  const double nc = spectral_norm(matrix_power(a.entries(), c));
  const double nm = spectral_norm(matrix_power(a.entries(), mUnder));
  return 1.0 / (norm.maxSemiAxis * nc * (1.0 + nm));
}

Lattice hexagonal_lattice_2d(double scale) {
  if (!(scale > 0)) throw InvalidArgument("scale must be > 0");
  Eigen::MatrixXd p(2, 2);
  p << 2.0, 0.0, 1.0, std::sqrt(3.0);
  return Lattice(scale * p);
}

Lattice fcc_lattice_3d(double scale) {
  if (!(scale > 0)) throw InvalidArgument("scale must be > 0");
  Eigen::MatrixXd p(3, 3);
  p << 0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0;
  return Lattice(scale * p);
}

double unit_ball_volume(int n) {
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  constexpr double kPi = 3.14159265358979323846;
  if (n % 2 == 0) {
    const int m = n / 2;  // V_{2m} = pi^m / m!
    double v = 1.0;
    for (int i = 1; i <= m; ++i) v *= kPi / i;
    return v;
  }
  const int m = (n - 1) / 2;  // V_{2m+1} = 2^{2m+1} m! pi^m / (2m+1)!
  double num = std::pow(2.0, 2 * m + 1) * std::pow(kPi, m);
  for (int i = 1; i <= m; ++i) num *= i;
  double den = 1.0;
  for (int i = 1; i <= 2 * m + 1; ++i) den *= i;
  return num / den;
}

double packing_density(const Lattice& l, double ballRadius) {
  if (!(ballRadius > 0)) throw InvalidArgument("ball radius must be > 0");
  return unit_ball_volume(l.dim()) * std::pow(ballRadius, l.dim()) /
         l.determinant();
}

std::vector<Eigen::VectorXd> lattice_points_in_ball(const Lattice& l,
                                                    double radius,
                                                    bool includeOrigin) {
  const int n = l.dim();
  const Eigen::MatrixXd inv = l.basis().inverse();
  const int bound =
      static_cast<int>(std::floor(spectral_norm(inv) * radius + 1e-9));
  double cells = 1.0;
  for (int i = 0; i < n; ++i) cells *= 2.0 * bound + 1.0;
  if (cells > 2e7) throw Error("candidate lattice enumeration too large");

  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXi k = Eigen::VectorXi::Constant(n, -bound);
  while (true) {
    if (includeOrigin || !k.isZero()) {
      Eigen::VectorXd p = l.point(k);
      if (p.norm() <= radius) out.push_back(std::move(p));
    }
    int axis = 0;
    while (axis < n && k(axis) == bound) {
      k(axis) = -bound;
      ++axis;
    }
    if (axis == n) break;
    ++k(axis);
  }
  return out;
}

namespace {

// Both regions live in the same ellipsoid hull when the hull quadratic
// forms agree; then separation reduces to Euclidean length >= 2 in
// unit-ball coordinates (touching allowed).
bool same_ellipsoid_hull(const SupportSpec& a, const SupportSpec& b) {
  if (!a.unit_ball_map() || !b.unit_ball_map()) return false;
  const Eigen::MatrixXd fa =
      a.unit_ball_map()->transpose() * (*a.unit_ball_map());
  const Eigen::MatrixXd fb =
      b.unit_ball_map()->transpose() * (*b.unit_ball_map());
  const double scale = std::max(1.0, fa.norm());
  return (fa - fb).norm() <= 1e-9 * scale;
}

}  // namespace

SeparationReport verify_separation(const Lattice& gammaStar,
                                   const SupportSpec& regionA,
                                   const SupportSpec& regionB, int samples,
                                   std::uint64_t seed) {
  if (gammaStar.dim() != regionA.dim() || regionA.dim() != regionB.dim()) {
    throw InvalidArgument("dimension mismatch");
  }
  SeparationReport report;
  const double radius =
      regionA.bounding_radius() + regionB.bounding_radius();
  const auto candidates =
      lattice_points_in_ball(gammaStar, radius * (1.0 + 1e-12), false);
  report.candidates = static_cast<int>(candidates.size());

  if (same_ellipsoid_hull(regionA, regionB)) {
    report.analytic = true;
    const Eigen::MatrixXd& t = *regionA.unit_ball_map();
    for (const auto& gamma : candidates) {
      if ((t * gamma).norm() < 2.0 - 1e-9) {
        report.separated = false;
        report.violation = gamma;
        return report;
      }
    }
    return report;
  }

  if (candidates.empty()) return report;
  const auto points = sample_box_region(
      regionB.support_box_halfwidths(),
      [&](const Eigen::VectorXd& x) { return regionB.contains(x); }, samples,
      seed);
  for (const auto& gamma : candidates) {
    for (const auto& x : points) {
      if (regionA.contains(x - gamma)) {
        report.separated = false;
        report.violation = gamma;
        return report;
      }
    }
  }
  return report;
}

std::vector<Eigen::VectorXd> integer_quotient_representatives(
    const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(q.rows());
  if (n == 0 || q.rows() != q.cols()) {
    throw InvalidArgument("matrix must be square and non-empty");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(q(i, j) - std::round(q(i, j))) > 1e-9) {
        throw NotInteger("matrix entries must be integers");
      }
    }
  }
  const double det = q.determinant();
  const std::int64_t detInt = static_cast<std::int64_t>(std::llround(det));
  if (detInt == 0) throw SingularMatrix("integer matrix has determinant 0");
  if (std::abs(det - static_cast<double>(detInt)) > 1e-6) {
    throw Error("determinant is not integral; conditioning failure");
  }
  const std::int64_t order = std::llabs(detInt);
  if (std::pow(static_cast<double>(order), n) > 2e7) {
    throw Error("quotient group too large to enumerate");
  }

  // adj(Q) = det(Q) Q^{-1} has integer entries (cofactors).
  const Eigen::MatrixXd adjD = det * q.inverse();
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> adj(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      adj(i, j) = std::llround(adjD(i, j));
      if (std::abs(adjD(i, j) - static_cast<double>(adj(i, j))) > 1e-6) {
        throw Error("adjugate is not integral; conditioning failure");
      }
    }
  }
  const std::int64_t sign = detInt > 0 ? 1 : -1;

  // Q^{-1}k = adj(Q) k / det; the class of k is adj(Q) k mod |det|.
  std::set<std::vector<std::int64_t>> seen;
  std::vector<Eigen::VectorXd> reps;
  Eigen::VectorXi k = Eigen::VectorXi::Zero(n);
  while (true) {
    std::vector<std::int64_t> key(n);
    for (int i = 0; i < n; ++i) {
      std::int64_t w = 0;
      for (int j = 0; j < n; ++j) w += adj(i, j) * k(j);
      w *= sign;
      key[i] = ((w % order) + order) % order;
    }
    if (seen.insert(key).second) {
      Eigen::VectorXd rep(n);
      for (int i = 0; i < n; ++i) {
        rep(i) = static_cast<double>(key[i]) / static_cast<double>(order);
      }
      reps.push_back(std::move(rep));
    }
    int axis = 0;
    while (axis < n && k(axis) == static_cast<int>(order) - 1) {
      k(axis) = 0;
      ++axis;
    }
    if (axis == n) break;
    ++k(axis);
  }
  if (static_cast<std::int64_t>(reps.size()) != order) {
    std::ostringstream msg;
    msg << "expected " << order << " quotient classes, found " << reps.size();
    throw Error(msg.str());
  }
  return reps;
}

}  // namespace dualframe
