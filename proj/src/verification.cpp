#include "dualframe/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "dualframe/sampling.hpp"

namespace dualframe {

namespace {

constexpr double kInterfaceGuard = 1e-6;
constexpr int kRefinePoints = 8;

struct StarBand {
  double lo = 0.0;
  double hi = 0.0;
};

// ||xi||_* range that covers the support (a generous outer estimate).
StarBand star_band(const AssociatedNorm& norm, const SupportSpec& support) {
  const int n = norm.dim();
  StarBand band;
  band.lo = std::sqrt(norm.eigLambda(0)) * support.inner_radius();
  band.hi = std::sqrt(norm.eigLambda(n - 1)) * support.bounding_radius();
  return band;
}

std::pair<int, int> window_for_band(const AssociatedNorm& norm,
                                    const StarBand& band,
                                    const Eigen::VectorXd& xi) {
  const double v = norm.value(xi);
  if (!(v > 0.0) || !(band.hi > 0.0)) return {1, 0};
  constexpr int kMaxSteps = 100000;
  const Eigen::MatrixXd binv = norm.B.inverse();

  // Smallest j with ||B^j xi||_* >= band.lo; the sequence is strictly
  // increasing by a factor >= lambda > 1 per step.
  int jLo = 0;
  {
    Eigen::VectorXd y = xi;
    double s = v;
    int steps = 0;
    if (s >= band.lo) {
      while (true) {
        Eigen::VectorXd y2 = binv * y;
        const double s2 = norm.value(y2);
        if (s2 < band.lo) break;
        y = std::move(y2);
        s = s2;
        --jLo;
        if (++steps > kMaxSteps) throw Error("dilation window walk diverged");
      }
    } else {
      while (s < band.lo) {
        y = norm.B * y;
        s = norm.value(y);
        ++jLo;
        if (++steps > kMaxSteps) throw Error("dilation window walk diverged");
      }
    }
  }
  // Largest j with ||B^j xi||_* <= band.hi.
  int jHi = 0;
  {
    Eigen::VectorXd y = xi;
    double s = v;
    int steps = 0;
    if (s <= band.hi) {
      while (true) {
        Eigen::VectorXd y2 = norm.B * y;
        const double s2 = norm.value(y2);
        if (s2 > band.hi) break;
        y = std::move(y2);
        s = s2;
        ++jHi;
        if (++steps > kMaxSteps) throw Error("dilation window walk diverged");
      }
    } else {
      while (s > band.hi) {
        y = binv * y;
        s = norm.value(y);
        --jHi;
        if (++steps > kMaxSteps) throw Error("dilation window walk diverged");
      }
    }
  }
  return {jLo, jHi};
}

template <typename F>
std::vector<double> evaluate_all(const std::vector<Eigen::VectorXd>& xs,
                                 const F& f, bool parallel) {
  std::vector<double> values(xs.size());
  if (!parallel || xs.size() < 512) {
    for (size_t i = 0; i < xs.size(); ++i) values[i] = f(xs[i]);
    return values;
  }
  const unsigned threadCount =
      std::max(2u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> workers;
  const size_t chunk = (xs.size() + threadCount - 1) / threadCount;
  for (unsigned t = 0; t < threadCount; ++t) {
    const size_t lo = t * chunk;
    const size_t hi = std::min(xs.size(), lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi]() {
      for (size_t i = lo; i < hi; ++i) values[i] = f(xs[i]);
    });
  }
  for (auto& w : workers) w.join();
  return values;
}

std::vector<Eigen::VectorXd> draw_tile_samples(const SupportSpec& region,
                                               int count, std::uint64_t seed) {
  return sample_box_region(
      region.sampler_box_halfwidths(),
      [&](const Eigen::VectorXd& x) { return region.sampler_contains(x); },
      count, seed);
}

// Indices of the k smallest/largest entries of `values`.
std::vector<size_t> extreme_indices(const std::vector<double>& values, int k,
                                    bool largest) {
  std::vector<size_t> idx(values.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const size_t take = std::min<size_t>(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + take, idx.end(),
                    [&](size_t a, size_t b) {
                      return largest ? values[a] > values[b]
                                     : values[a] < values[b];
                    });
  idx.resize(take);
  return idx;
}

}  // namespace

std::pair<int, int> dilate_window(const AssociatedNorm& norm,
                                  const SupportSpec& support,
                                  const Eigen::VectorXd& xi) {
  return window_for_band(norm, star_band(norm, support), xi);
}

double check_partition(const BandlimitedGenerator& gen,
                       const SampleSpec& spec) {
  const AssociatedNorm& norm = gen.norm();
  const StarBand band = star_band(norm, gen.support());

  // Margin-guarded rejection sampling: stay 1e-6 away from the branch
  // interfaces of the defining formulas, at the sample and its dilates.
  const Eigen::VectorXd hw = spec.region.sampler_box_halfwidths();
  HaltonSequence halton(spec.region.dim(), spec.seed * 7919ULL);
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(spec.count);
  std::uint64_t attempts = 0;
  const std::uint64_t maxAttempts =
      10000ULL + 8000ULL * static_cast<std::uint64_t>(spec.count);
  while (static_cast<int>(samples.size()) < spec.count) {
    if (++attempts > maxAttempts) {
      throw Error("partition sampling failed: region too thin");
    }
    const Eigen::VectorXd u = halton.next();
    Eigen::VectorXd x(hw.size());
    for (int i = 0; i < hw.size(); ++i) x(i) = (2.0 * u(i) - 1.0) * hw(i);
    if (!spec.region.sampler_contains(x)) continue;
    const auto window = window_for_band(norm, band, x);
    double margin = std::numeric_limits<double>::infinity();
    Eigen::VectorXd y = matrix_power(norm.B, window.first) * x;
    for (int j = window.first; j <= window.second; ++j) {
      margin = std::min(margin, gen.interface_margin(y));
      if (j < window.second) y = norm.B * y;
    }
    if (margin < kInterfaceGuard) continue;
    samples.push_back(std::move(x));
  }

  auto err = [&](const Eigen::VectorXd& x) {
    const auto window = window_for_band(norm, band, x);
    double sum = 0.0;
    Eigen::VectorXd y = matrix_power(norm.B, window.first) * x;
    for (int j = window.first; j <= window.second; ++j) {
      sum += gen(y);
      if (j < window.second) y = norm.B * y;
    }
    return std::abs(sum - 1.0);
  };
  const auto values = evaluate_all(samples, err, spec.parallel);
  return values.empty() ? 0.0
                        : *std::max_element(values.begin(), values.end());
}

double check_calderon(const DualFramePair& pair, const SampleSpec& spec) {
  const AssociatedNorm& norm = pair.psi.norm();
  const StarBand psiBand = star_band(norm, pair.psi.support());
  const StarBand phiBand = star_band(norm, pair.phi.support());
  const StarBand band{std::min(psiBand.lo, phiBand.lo),
                      std::max(psiBand.hi, phiBand.hi)};
  const double target = pair.lattice_determinant();

  const auto samples = draw_tile_samples(spec.region, spec.count, spec.seed);
  auto err = [&](const Eigen::VectorXd& x) {
    const auto window = window_for_band(norm, band, x);
    double sum = 0.0;
    Eigen::VectorXd y = matrix_power(norm.B, window.first) * x;
    for (int j = window.first; j <= window.second; ++j) {
      sum += pair.phi(y) * pair.psi(y);
      if (j < window.second) y = norm.B * y;
    }
    return std::abs(sum - target);
  };
  const auto values = evaluate_all(samples, err, spec.parallel);
  return values.empty() ? 0.0
                        : *std::max_element(values.begin(), values.end());
}

double check_cross_terms(const DualFramePair& pair, const SampleSpec& spec) {
  const double radius = pair.psi.support().bounding_radius() +
                        pair.phi.support().bounding_radius();
  const auto candidates = lattice_points_in_ball(
      pair.lattice.gammaStar, radius * (1.0 + 1e-12), false);
  if (candidates.empty()) return 0.0;

  // The non-diagonal condition is not dilation periodic, so sample the
  // whole support of phi^ rather than one tile.
  const SupportSpec& phiSupp = pair.phi.support();
  const auto samples = sample_box_region(
      phiSupp.support_box_halfwidths(),
      [&](const Eigen::VectorXd& x) { return phiSupp.contains(x); },
      spec.count, spec.seed);

  auto worst = [&](const Eigen::VectorXd& x) {
    const double phiVal = pair.phi(x);
    if (phiVal == 0.0) return 0.0;
    double m = 0.0;
    for (const auto& gamma : candidates) {
      m = std::max(m, std::abs(phiVal * pair.psi(x + gamma)));
    }
    return m;
  };
  const auto values = evaluate_all(samples, worst, spec.parallel);
  return values.empty() ? 0.0
                        : *std::max_element(values.begin(), values.end());
}

namespace {

FrameBounds extremize(const std::function<double(const Eigen::VectorXd&)>& f,
                      const SupportSpec& region,
                      const std::vector<Eigen::VectorXd>& samples,
                      const std::vector<double>& values) {
  auto member = [&](const Eigen::VectorXd& x) {
    return region.sampler_contains(x);
  };
  const double scale = region.sampler_box_halfwidths().maxCoeff();
  const double initialStep = 0.05 * scale;
  const double finalStep = std::max(1e-12, 1e-9 * scale);

  FrameBounds bounds;
  bounds.c1 = std::numeric_limits<double>::infinity();
  bounds.c2 = -std::numeric_limits<double>::infinity();
  for (size_t i : extreme_indices(values, kRefinePoints, /*largest=*/false)) {
    bounds.c1 = std::min(bounds.c1, refine_extremum(f, member, samples[i],
                                                    /*maximize=*/false,
                                                    initialStep, finalStep));
  }
  for (size_t i : extreme_indices(values, kRefinePoints, /*largest=*/true)) {
    bounds.c2 = std::max(bounds.c2, refine_extremum(f, member, samples[i],
                                                    /*maximize=*/true,
                                                    initialStep, finalStep));
  }
  return bounds;
}

}  // namespace

FrameBounds frame_bounds(const BandlimitedGenerator& gen, const Lattice& gamma,
                         const SampleSpec& spec, int jLo, int jHi) {
  if (jHi < jLo) throw InvalidArgument("empty dilation range");
  std::vector<Eigen::MatrixXd> powers;
  for (int j = jLo; j <= jHi; ++j) {
    powers.push_back(matrix_power(gen.dilation().transposed(), j));
  }
  const double dGamma = gamma.determinant();
  auto f = [&gen, powers, dGamma](const Eigen::VectorXd& x) {
    double sum = 0.0;
    for (const auto& p : powers) {
      const double v = gen(p * x);
      sum += v * v;
    }
    return sum / dGamma;
  };

  const auto samples = draw_tile_samples(spec.region, spec.count, spec.seed);
  const auto values = evaluate_all(samples, f, spec.parallel);
  FrameBounds bounds = extremize(f, spec.region, samples, values);
  if (!(bounds.c1 > 1e-9)) {
    throw DegenerateLowerBound(
        "sum of squared dilates vanishes somewhere on the tile");
  }
  return bounds;
}

double bessel_bound(const BandlimitedGenerator& gen, const Lattice& gamma,
                    const SampleSpec& spec) {
  const Lattice gammaStar = dual_lattice(gamma);
  const double radius = 2.0 * gen.support().bounding_radius();
  const auto shifts =
      lattice_points_in_ball(gammaStar, radius * (1.0 + 1e-12), false);

  const AssociatedNorm& norm = gen.norm();
  const StarBand band = star_band(norm, gen.support());
  const double dGamma = gamma.determinant();
  auto f = [&](const Eigen::VectorXd& x) {
    const auto window = window_for_band(norm, band, x);
    double sum = 0.0;
    Eigen::VectorXd y = matrix_power(norm.B, window.first) * x;
    for (int j = window.first; j <= window.second; ++j) {
      const double base = gen(y);
      if (base != 0.0) {
        double inner = std::abs(base);  // gamma = 0 term
        for (const auto& shift : shifts) inner += std::abs(gen(y + shift));
        sum += std::abs(base) * inner;
      }
      if (j < window.second) y = norm.B * y;
    }
    return sum / dGamma;
  };

  const auto samples = draw_tile_samples(spec.region, spec.count, spec.seed);
  const auto values = evaluate_all(samples, f, spec.parallel);
  auto member = [&](const Eigen::VectorXd& x) {
    return spec.region.sampler_contains(x);
  };
  const double scale = spec.region.sampler_box_halfwidths().maxCoeff();
  double c2 = -std::numeric_limits<double>::infinity();
  for (size_t i : extreme_indices(values, kRefinePoints, /*largest=*/true)) {
    c2 = std::max(c2, refine_extremum(f, member, samples[i], true,
                                      0.05 * scale,
                                      std::max(1e-12, 1e-9 * scale)));
  }
  return c2;
}

VerificationReport full_report(const DualFramePair& pair,
                               const SampleSpec& spec,
                               const VerificationTolerances& tol) {
  VerificationReport report;
  report.sampleCount = spec.count;
  report.seed = spec.seed;
  report.tolerances = tol;

  SampleSpec psiSpec = spec;
  psiSpec.region = pair.psi.support();

  report.partitionMaxErr = check_partition(pair.psi, psiSpec);
  report.calderonMaxErr = check_calderon(pair, psiSpec);
  report.crossTermMaxAbs = check_cross_terms(pair, psiSpec);

  const int d = pair.psi.support().d();
  const int mOver = pair.coeffs.m_over();
  const int mUnder = pair.coeffs.m_under();
  const FrameBounds psiBounds =
      frame_bounds(pair.psi, pair.lattice.gamma, psiSpec, 0, d);
  const FrameBounds phiBounds = frame_bounds(
      pair.phi, pair.lattice.gamma, psiSpec, -std::max(d, mOver), d + mUnder);
  report.c1 = psiBounds.c1;
  report.c2 = psiBounds.c2;
  report.c1Phi = phiBounds.c1;
  report.c2Phi = phiBounds.c2;
  report.besselC2 = bessel_bound(pair.psi, pair.lattice.gamma, psiSpec);

  report.partitionPassed = report.partitionMaxErr <= tol.partition;
  report.calderonPassed = report.calderonMaxErr <= tol.calderon;
  report.crossTermPassed = report.crossTermMaxAbs <= tol.crossTerm;
  report.boundsPassed = report.c1 > 0.0 && report.c1 <= report.c2 &&
                        report.c1Phi > 0.0 && report.c1Phi <= report.c2Phi;
  return report;
}

}  // namespace dualframe
