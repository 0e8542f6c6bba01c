#pragma once

#include <cstdint>

#include "dualframe/generators.hpp"
#include "dualframe/lattice.hpp"

namespace dualframe {

/// Deterministic sampling plan over one multiplicative tile M = B^{c-d}(E)
/// of a support (one dilation orbit of M covers R^n, so dilation-periodic
/// sups/infs may be taken over M alone).
struct SampleSpec {
  int count = 10000;
  std::uint64_t seed = 42;
  SupportSpec region;
  bool parallel = false;
};

/// max_xi | sum_j psi^(B^j xi) - 1 | over margin-guarded samples of M.
double check_partition(const BandlimitedGenerator& gen, const SampleSpec& spec);

/// max_xi | sum_j phi^(B^j xi) psi^(B^j xi) - d(Gamma) | over samples of M.
double check_calderon(const DualFramePair& pair, const SampleSpec& spec);

/// max over samples of supp phi^ and dual-lattice shifts gamma != 0 of
/// | phi^(xi) psi^(xi + gamma) |. Exactly zero when the separation
/// condition holds, since the supports are then disjoint sets.
double check_cross_terms(const DualFramePair& pair, const SampleSpec& spec);

struct FrameBounds {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Sampled frame bounds: extrema over M of
/// (1/d(Gamma)) sum_{j=jLo}^{jHi} g^(B^j xi)^2, sharpened by compass-search
/// refinement around the extremal samples. Throws DegenerateLowerBound when
/// the lower bound collapses below 1e-9.
FrameBounds frame_bounds(const BandlimitedGenerator& gen, const Lattice& gamma,
                         const SampleSpec& spec, int jLo, int jHi);

/// Sampled Bessel bound including the dual-lattice cross products
/// (1/d(Gamma)) sup sum_j sum_gamma |g^(B^j xi) g^(B^j xi + gamma)|;
/// equals the frame-bound C2 whenever the separation condition holds.
double bessel_bound(const BandlimitedGenerator& gen, const Lattice& gamma,
                    const SampleSpec& spec);

struct VerificationTolerances {
  double partition = 1e-8;
  double calderon = 1e-8;
  double crossTerm = 1e-10;
};

struct VerificationReport {
  double partitionMaxErr = 0.0;
  double calderonMaxErr = 0.0;
  double crossTermMaxAbs = 0.0;
  double c1 = 0.0, c2 = 0.0;        // frame bounds of psi
  double c1Phi = 0.0, c2Phi = 0.0;  // frame bounds of phi
  double besselC2 = 0.0;            // Bessel bound of psi
  int sampleCount = 0;
  std::uint64_t seed = 0;
  VerificationTolerances tolerances;
  bool partitionPassed = false;
  bool calderonPassed = false;
  bool crossTermPassed = false;
  bool boundsPassed = false;

  bool all_passed() const {
    return partitionPassed && calderonPassed && crossTermPassed &&
           boundsPassed;
  }
};

/// Runs every check on the pair with the pair's own sampler region.
VerificationReport full_report(const DualFramePair& pair,
                               const SampleSpec& spec,
                               const VerificationTolerances& tol = {});

/// Dilation indices j for which B^j xi may meet the support, derived from
/// the star-norm band of the support (empty when first > second).
std::pair<int, int> dilate_window(const AssociatedNorm& norm,
                                  const SupportSpec& support,
                                  const Eigen::VectorXd& xi);

}  // namespace dualframe
