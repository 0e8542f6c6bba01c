#pragma once

#include <Eigen/Dense>
#include <functional>

#include "dualframe/lattice.hpp"
#include "dualframe/matrix_core.hpp"
#include "dualframe/support.hpp"

namespace dualframe {

/// Coefficients b_{-d} .. b_{d} of a dual generator
///   phi^(xi) = d(Gamma) sum_j b_j psi^(B^j xi).
/// A valid set has b_0 = 1 and b_j + b_{-j} = 2.
struct DualCoefficients {
  Eigen::VectorXd b;

  int d() const { return (static_cast<int>(b.size()) - 1) / 2; }
  double at(int j) const { return b(j + d()); }
  int m_over() const;   // max { j : b_j != 0 }
  int m_under() const;  // -min { j : b_j != 0 }
  bool valid(double tol = 1e-12) const;

  /// b_0 = 1, b_j = 2, b_{-j} = 0 for j = 1..d.
  static DualCoefficients special(int d);
  static DualCoefficients from_values(std::initializer_list<double> values);
};

/// A generator known through its real-valued Fourier transform psi^ with
/// compact support. Evaluation is pure and thread-safe; the attached
/// associated norm drives all dilation-index bookkeeping.
class BandlimitedGenerator {
 public:
  using Eval = std::function<double(const Eigen::VectorXd&)>;

  BandlimitedGenerator(DilationMatrix dilation, AssociatedNorm norm,
                       SupportSpec support, Eval fourier, Eval margin = {});

  double operator()(const Eigen::VectorXd& xi) const { return fourier_(xi); }
  const DilationMatrix& dilation() const { return dilation_; }
  const AssociatedNorm& norm() const { return norm_; }
  const SupportSpec& support() const { return support_; }

  /// Proximity measure to the nearest branch interface of the defining
  /// formulas; partition samplers reject points with margin below 1e-6.
  double interface_margin(const Eigen::VectorXd& xi) const;

 private:
  DilationMatrix dilation_;
  AssociatedNorm norm_;
  SupportSpec support_;
  Eval fourier_;
  Eval margin_;
};

/// The mirrored piecewise-linear tent on the box annulus
/// [-1,1]^2 \ B^-1([-1,1]^2) for the quincunx dilation; a dilative
/// partition of unity with d = 2 and peak value 1 at (1/2, 1/2).
BandlimitedGenerator quincunx_tent_generator();

enum class RadialProfile { Linear, Cubic, Cosine };

/// Two-shell generator supported on B^c(I_*) \ B^{c-2}(I_*): equals the
/// chosen radial profile f between the c-1 and c boundary ellipsoids and
/// 1 - f(Bx) one shell further in. Continuous (Cubic/Cosine are C^1 in the
/// radial variable).
BandlimitedGenerator radial_profile_generator(const AssociatedNorm& norm,
                                              int c, RadialProfile profile);

/// C^inf generator on B^c(I_*) \ B^{c-d-1}(I_*), d >= 1:
/// g = p / sum_{|j|<=d} p(B^j x) with p(x) = eta(|x| - r1) eta(r2 - |x|),
/// eta(t) = exp(-1/t) for t > 0. The partition of unity is exact by
/// construction. Throws DegenerateShell if the sampled boundary radii
/// cross, which signals a broken norm certificate.
BandlimitedGenerator smooth_generator(const AssociatedNorm& norm, int c,
                                      int d);

/// A dual frame generator pair: psi with its derived dual
/// phi^(xi) = d(Gamma) sum_j b_j psi^(B^j xi) and the translation lattice.
struct DualFramePair {
  BandlimitedGenerator psi;
  BandlimitedGenerator phi;
  DualCoefficients coeffs;
  LatticePair lattice;

  double lattice_determinant() const { return lattice.gamma.determinant(); }
};

/// Builds the dual pair; validates the coefficient constraints
/// (BadCoefficients) and the lattice separation condition
/// (SeparationFailure, reporting the violating gamma).
DualFramePair make_dual(const BandlimitedGenerator& psi,
                        const DualCoefficients& coeffs,
                        const LatticePair& lattice);

/// Same construction without any validation. Exists so that defective
/// configurations can be quantified by the verification module instead of
/// being rejected at construction.
DualFramePair make_dual_unchecked(const BandlimitedGenerator& psi,
                                  const DualCoefficients& coeffs,
                                  const LatticePair& lattice);

/// make_dual with the special coefficients b_0 = 1, b_j = 2, b_{-j} = 0.
DualFramePair make_dual_special(const BandlimitedGenerator& psi,
                                const LatticePair& lattice);

struct DualPair1d {
  DualFramePair pair;
  double maxTranslation;  // largest admissible translation step
};

/// One-dimensional construction for dilation a > 1: lattice Gamma =
/// bTrans Z with 0 < bTrans <= a^{-c} (1 + a^m)^{-1}, m = mUnder.
/// Coefficients are given in normalized form (b_0 = 1); the translation
/// step enters through d(Gamma) = bTrans. Throws TranslationTooCoarse when
/// the step exceeds the bound.
DualPair1d dual_pair_1d(const BandlimitedGenerator& psi,
                        const DualCoefficients& coeffs, double bTrans);

/// Rewrites the pair for the integer lattice Z^n: dilation becomes
/// P^{-1} A P and the generators pick up the unitary change of variables
/// g~^(xi) = |det P|^{-1/2} g^((P^t)^{-1} xi). P must generate the pair's
/// translation lattice (LatticeMismatch otherwise).
DualFramePair standardize(const DualFramePair& pair, const Eigen::MatrixXd& p);

}  // namespace dualframe
