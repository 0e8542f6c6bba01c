#include "dualframe/generators.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "dualframe/sampling.hpp"

namespace dualframe {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kCoeffZero = 1e-15;
}  // namespace

int DualCoefficients::m_over() const {
  int m = 0;
  for (int j = 1; j <= d(); ++j) {
    if (std::abs(at(j)) > kCoeffZero) m = j;
  }
  return m;
}

int DualCoefficients::m_under() const {
  int m = 0;
  for (int j = 1; j <= d(); ++j) {
    if (std::abs(at(-j)) > kCoeffZero) m = j;
  }
  return m;
}

bool DualCoefficients::valid(double tol) const {
  if (b.size() % 2 == 0 || b.size() == 0) return false;
  if (std::abs(at(0) - 1.0) > tol) return false;
  for (int j = 1; j <= d(); ++j) {
    if (std::abs(at(j) + at(-j) - 2.0) > tol) return false;
  }
  return true;
}

DualCoefficients DualCoefficients::special(int d) {
  if (d < 0) throw InvalidArgument("d must be >= 0");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * d + 1);
  b(d) = 1.0;
  for (int j = 1; j <= d; ++j) b(d + j) = 2.0;
  return DualCoefficients{std::move(b)};
}

DualCoefficients DualCoefficients::from_values(
    std::initializer_list<double> values) {
  Eigen::VectorXd b(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) b(i++) = v;
  return DualCoefficients{std::move(b)};
}

BandlimitedGenerator::BandlimitedGenerator(DilationMatrix dilation,
                                           AssociatedNorm norm,
                                           SupportSpec support, Eval fourier,
                                           Eval margin)
    : dilation_(std::move(dilation)),
      norm_(std::move(norm)),
      support_(std::move(support)),
      fourier_(std::move(fourier)),
      margin_(std::move(margin)) {}

double BandlimitedGenerator::interface_margin(const Eigen::VectorXd& xi) const {
  if (!margin_) return std::numeric_limits<double>::infinity();
  return margin_(xi);
}

// ---------------------------------------------------------------------------
// Quincunx tent

namespace {

// Tent on the positive quadrant; mirrored in both axes by the caller.
double tent_quadrant(double x1, double x2) {
  if (x1 > 1.0 || x2 > 1.0) return 0.0;
  const double s = x1 + x2;
  if (s < 0.5) return 0.0;
  if (s <= 1.0) {
    if (x1 <= 0.5 && x2 <= 0.5) return -1.0 + 2.0 * s;  // J1
    if (x1 >= 0.5) return 2.0 * x2;                     // J2
    return 2.0 * x1;                                    // J3
  }
  return x2 <= x1 ? 2.0 - 2.0 * x1 : 2.0 - 2.0 * x2;    // J4 / J5
}

double tent_margin(const Eigen::VectorXd& xi) {
  const double x1 = std::abs(xi(0));
  const double x2 = std::abs(xi(1));
  const double s = x1 + x2;
  double m = std::numeric_limits<double>::infinity();
  for (double v : {x1, x2, x1 - 0.5, x2 - 0.5, x1 - 1.0, x2 - 1.0, s - 0.5,
                   s - 1.0, x1 - x2}) {
    m = std::min(m, std::abs(v));
  }
  return m;
}

}  // namespace

BandlimitedGenerator quincunx_tent_generator() {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, -1.0, 1.0, 1.0;
  DilationMatrix dilation = validate_expansive(a);
  AssociatedNorm norm = build_associated_norm(dilation);
  SupportSpec support = SupportSpec::box_annulus(dilation.transposed(), 0, 2);
  auto eval = [](const Eigen::VectorXd& xi) {
    return tent_quadrant(std::abs(xi(0)), std::abs(xi(1)));
  };
  return BandlimitedGenerator(std::move(dilation), std::move(norm),
                              std::move(support), eval, tent_margin);
}

// ---------------------------------------------------------------------------
// Shell generators

namespace {

// Quadratic form of the ellipsoid B^m(I_*): x^t M_m x <= 1.
Eigen::MatrixXd shell_form(const AssociatedNorm& norm, int m) {
  const Eigen::MatrixXd bm = matrix_power(norm.B, -m);
  return bm.transpose() * norm.K * bm;
}

// Euclidean radius of the boundary ellipsoid x^t M x = 1 along x.
double directional_radius(const Eigen::MatrixXd& form,
                          const Eigen::VectorXd& x, double r) {
  return r / std::sqrt(x.dot(form * x));
}

double profile_value(RadialProfile profile, double r, double r1, double r2) {
  const double width = r2 - r1;
  switch (profile) {
    case RadialProfile::Linear:
      return (r2 - r) / width;
    case RadialProfile::Cubic:
      return (r2 - r) * (r2 - r) * (2.0 * (r - r1) + width) /
             (width * width * width);
    case RadialProfile::Cosine:
      return 0.5 + 0.5 * std::cos(kPi * (r - r1) / width);
  }
  return 0.0;
}

std::function<double(const Eigen::VectorXd&)> shell_margin(
    const AssociatedNorm& norm, int mLo, int mHi) {
  std::vector<Eigen::MatrixXd> forms;
  for (int m = mLo; m <= mHi; ++m) forms.push_back(shell_form(norm, m));
  return [forms](const Eigen::VectorXd& xi) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& form : forms) {
      margin = std::min(margin, std::abs(std::sqrt(xi.dot(form * xi)) - 1.0));
    }
    return margin;
  };
}

double eta(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

BandlimitedGenerator radial_profile_generator(const AssociatedNorm& norm,
                                              int c, RadialProfile profile) {
  DilationMatrix dilation = validate_expansive(norm.B.transpose());
  SupportSpec support = SupportSpec::shell(norm, c, 1);

  const Eigen::MatrixXd outer = shell_form(norm, c);        // dB^c
  const Eigen::MatrixXd middle = shell_form(norm, c - 1);   // dB^{c-1}
  const Eigen::MatrixXd inner = shell_form(norm, c - 2);    // dB^{c-2}
  const Eigen::MatrixXd B = norm.B;

  auto outer_branch = [outer, middle, profile](const Eigen::VectorXd& x,
                                               double r) {
    const double r1 = directional_radius(middle, x, r);
    const double r2 = directional_radius(outer, x, r);
    return profile_value(profile, r, r1, r2);
  };
  auto eval = [outer, middle, inner, B, outer_branch](
                  const Eigen::VectorXd& x) {
    const double r = x.norm();
    if (r == 0.0) return 0.0;
    const double qOuter = x.dot(outer * x);
    if (qOuter > 1.0) return 0.0;
    const double qMiddle = x.dot(middle * x);
    if (qMiddle > 1.0) return outer_branch(x, r);  // between c-1 and c
    const double qInner = x.dot(inner * x);
    if (qInner > 1.0) {  // between c-2 and c-1
      const Eigen::VectorXd y = B * x;
      return 1.0 - outer_branch(y, y.norm());
    }
    return 0.0;
  };
  return BandlimitedGenerator(std::move(dilation), norm, std::move(support),
                              eval, shell_margin(norm, c - 2, c));
}

BandlimitedGenerator smooth_generator(const AssociatedNorm& norm, int c,
                                      int d) {
  if (d < 1) throw InvalidArgument("smooth generator needs d >= 1");
  DilationMatrix dilation = validate_expansive(norm.B.transpose());
  SupportSpec support = SupportSpec::shell(norm, c, d);

  const Eigen::MatrixXd outer = shell_form(norm, c);
  const Eigen::MatrixXd inner = shell_form(norm, c - d - 1);
  const int n = norm.dim();

  // r2(theta) <= r1(theta) somewhere would mean the shell is inside out.
  HaltonSequence halton(n, 17);
  for (int i = 0; i < 512; ++i) {
    Eigen::VectorXd u = 2.0 * halton.next() - Eigen::VectorXd::Ones(n);
    const double len = u.norm();
    if (len < 1e-3) continue;
    u /= len;
    const double r1 = directional_radius(inner, u, 1.0);
    const double r2 = directional_radius(outer, u, 1.0);
    if (!(r2 > r1)) {
      std::ostringstream msg;
      msg << "shell boundary radii cross: r1 = " << r1 << ", r2 = " << r2;
      throw DegenerateShell(msg.str());
    }
  }

  std::vector<Eigen::MatrixXd> powers;  // B^j for j = -d..d
  for (int j = -d; j <= d; ++j) powers.push_back(matrix_power(norm.B, j));

  auto bump = [outer, inner](const Eigen::VectorXd& x) {
    const double r = x.norm();
    if (r == 0.0) return 0.0;
    const double r1 = directional_radius(inner, x, r);
    const double r2 = directional_radius(outer, x, r);
    return eta(r - r1) * eta(r2 - r);
  };
  auto eval = [bump, powers, d](const Eigen::VectorXd& x) {
    const double px = bump(x);
    if (px <= 0.0) return 0.0;
    double w = 0.0;
    for (int i = 0; i < 2 * d + 1; ++i) w += bump(powers[i] * x);
    return px / w;
  };
  return BandlimitedGenerator(std::move(dilation), norm, std::move(support),
                              eval, shell_margin(norm, c - d - 1, c));
}

// ---------------------------------------------------------------------------
// Dual pairs

namespace {

DualFramePair build_pair(const BandlimitedGenerator& psi,
                         const DualCoefficients& coeffs,
                         const LatticePair& lattice, bool enforce) {
  if (coeffs.b.size() != 2 * psi.support().d() + 1) {
    throw BadCoefficients("coefficient vector must have 2d+1 entries");
  }
  if (enforce && !coeffs.valid()) {
    throw BadCoefficients("need b_0 = 1 and b_j + b_{-j} = 2");
  }
  if (lattice.gamma.dim() != psi.dilation().dim()) {
    throw InvalidArgument("lattice dimension mismatch");
  }

  const int d = psi.support().d();
  const int mOver = coeffs.m_over();
  const int mUnder = coeffs.m_under();
  const double dGamma = lattice.gamma.determinant();

  SupportSpec phiSupport =
      psi.support().with_params(psi.support().c() + mUnder,
                                mUnder + mOver + d);

  if (enforce) {
    const SeparationReport separation =
        verify_separation(lattice.gammaStar, psi.support(), phiSupport);
    if (!separation.separated) {
      std::ostringstream msg;
      msg << "support separation fails at gamma = ("
          << separation.violation->transpose() << ")";
      throw SeparationFailure(msg.str());
    }
  }

  std::vector<Eigen::MatrixXd> powers;  // B^j for j = -mUnder..mOver
  const Eigen::MatrixXd& B = psi.dilation().transposed();
  for (int j = -mUnder; j <= mOver; ++j) powers.push_back(matrix_power(B, j));
  std::vector<double> weights;
  for (int j = -mUnder; j <= mOver; ++j) weights.push_back(coeffs.at(j));

  const BandlimitedGenerator psiCopy = psi;
  auto phiEval = [psiCopy, powers, weights, dGamma](const Eigen::VectorXd& xi) {
    double sum = 0.0;
    for (size_t i = 0; i < powers.size(); ++i) {
      if (weights[i] != 0.0) sum += weights[i] * psiCopy(powers[i] * xi);
    }
    return dGamma * sum;
  };
  auto phiMargin = [psiCopy, powers](const Eigen::VectorXd& xi) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : powers) {
      m = std::min(m, psiCopy.interface_margin(p * xi));
    }
    return m;
  };

  BandlimitedGenerator phi(psi.dilation(), psi.norm(), std::move(phiSupport),
                           phiEval, phiMargin);
  return DualFramePair{psi, std::move(phi), coeffs, lattice};
}

}  // namespace

DualFramePair make_dual(const BandlimitedGenerator& psi,
                        const DualCoefficients& coeffs,
                        const LatticePair& lattice) {
  return build_pair(psi, coeffs, lattice, /*enforce=*/true);
}

DualFramePair make_dual_unchecked(const BandlimitedGenerator& psi,
                                  const DualCoefficients& coeffs,
                                  const LatticePair& lattice) {
  return build_pair(psi, coeffs, lattice, /*enforce=*/false);
}

DualFramePair make_dual_special(const BandlimitedGenerator& psi,
                                const LatticePair& lattice) {
  return make_dual(psi, DualCoefficients::special(psi.support().d()), lattice);
}

DualPair1d dual_pair_1d(const BandlimitedGenerator& psi,
                        const DualCoefficients& coeffs, double bTrans) {
  if (psi.dilation().dim() != 1) {
    throw InvalidArgument("dual_pair_1d needs a one-dimensional generator");
  }
  const double a = std::abs(psi.dilation().entries()(0, 0));
  const int c = psi.support().c();
  const int m = coeffs.m_under();
  const double maxTranslation =
      std::pow(a, -c) / (1.0 + std::pow(a, m));
  if (!(bTrans > 0.0)) throw InvalidArgument("translation step must be > 0");
  if (bTrans > maxTranslation * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "translation step " << bTrans << " exceeds the bound "
        << maxTranslation;
    throw TranslationTooCoarse(msg.str());
  }
  Eigen::MatrixXd basis(1, 1);
  basis << bTrans;
  DualFramePair pair = make_dual(psi, coeffs, lattice_pair(Lattice(basis)));
  return DualPair1d{std::move(pair), maxTranslation};
}

namespace {

BandlimitedGenerator map_generator(const BandlimitedGenerator& g,
                                   const DilationMatrix& dilation,
                                   const AssociatedNorm& norm,
                                   const Eigen::MatrixXd& w, double detFac) {
  const Eigen::MatrixXd winv = w.inverse();
  const BandlimitedGenerator base = g;
  auto eval = [base, winv, detFac](const Eigen::VectorXd& xi) {
    return detFac * base(winv * xi);
  };
  auto margin = [base, winv](const Eigen::VectorXd& xi) {
    return base.interface_margin(winv * xi);
  };
  return BandlimitedGenerator(dilation, norm,
                              SupportSpec::mapped(g.support(), w), eval,
                              margin);
}

}  // namespace

DualFramePair standardize(const DualFramePair& pair, const Eigen::MatrixXd& p) {
  const int n = pair.psi.dilation().dim();
  if (p.rows() != n || p.cols() != n) {
    throw InvalidArgument("dimension mismatch");
  }
  const Eigen::MatrixXd pInv = p.inverse();
  const Eigen::MatrixXd u = pInv * pair.lattice.gamma.basis();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(u(i, j) - std::round(u(i, j))) > 1e-9) {
        throw LatticeMismatch("P does not generate the pair's lattice");
      }
    }
  }
  if (std::abs(std::abs(u.determinant()) - 1.0) > 1e-9) {
    throw LatticeMismatch("P does not generate the pair's lattice");
  }

  DilationMatrix dilation =
      validate_expansive(pInv * pair.psi.dilation().entries() * p);
  // The norm certificate transports through the congruence
  // K~ = P^{-1} K P^{-t} with the same k and lambda.
  const AssociatedNorm& oldNorm = pair.psi.norm();
  AssociatedNorm norm = make_associated_norm(
      dilation.transposed(), pInv * oldNorm.K * pInv.transpose(), oldNorm.k,
      oldNorm.lambda);

  const Eigen::MatrixXd w = p.transpose();
  const double detFac = 1.0 / std::sqrt(std::abs(p.determinant()));
  BandlimitedGenerator psi = map_generator(pair.psi, dilation, norm, w, detFac);
  BandlimitedGenerator phi = map_generator(pair.phi, dilation, norm, w, detFac);

  LatticePair integerLattice =
      lattice_pair(Lattice(Eigen::MatrixXd::Identity(n, n)));
  return DualFramePair{std::move(psi), std::move(phi), pair.coeffs,
                       std::move(integerLattice)};
}

}  // namespace dualframe
