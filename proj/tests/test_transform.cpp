#include <cmath>
#include <complex>

#include "doctest.h"
#include "dualframe/transform.hpp"
#include "dualframe/verification.hpp"

using namespace dualframe;

namespace {

Eigen::MatrixXd scalar_matrix(double a) {
  Eigen::MatrixXd m(1, 1);
  m << a;
  return m;
}

// a = 2 cosine-profile pair on the special lattice Gamma = 1/4 Z.
DualFramePair pair_1d(RadialProfile profile = RadialProfile::Cosine) {
  const DilationMatrix a = validate_expansive(scalar_matrix(2.0));
  const AssociatedNorm norm = build_associated_norm(a);
  const BandlimitedGenerator psi = radial_profile_generator(norm, 1, profile);
  return make_dual_special(psi, special_lattice(a, norm, 1));
}

DualFramePair smooth_pair_1d() {
  const DilationMatrix a = validate_expansive(scalar_matrix(2.0));
  const AssociatedNorm norm = build_associated_norm(a);
  const BandlimitedGenerator psi = smooth_generator(norm, 1, 1);
  return make_dual_special(psi, special_lattice(a, norm, 1));
}

std::complex<double> bump_1d(const Eigen::VectorXd& xi, double inner,
                             double outer) {
  const double r = xi.norm();
  auto eta = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return {eta(r - inner) * eta(outer - r) * std::exp(4.0 / (outer - inner)),
          0.0};
}

Eigen::VectorXd extents_1d(double full) {
  Eigen::VectorXd e(1);
  e << full;
  return e;
}

}  // namespace

TEST_CASE("grid bookkeeping") {
  const FrequencyGrid g = FrequencyGrid::zeros(extents_1d(8.0), 16);
  CHECK(g.spacing(0) == doctest::Approx(0.5));
  CHECK(g.size() == 16);
  CHECK(g.node(0)(0) == doctest::Approx(-3.75));
  CHECK(g.node(15)(0) == doctest::Approx(3.75));
  CHECK_THROWS_AS(FrequencyGrid::zeros(extents_1d(8.0), 12), InvalidArgument);
  Eigen::VectorXd e3(3);
  e3 << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(FrequencyGrid::zeros(e3, 16), UnsupportedDimension);
}

TEST_CASE("analyze of the zero signal is empty") {
  const DualFramePair pair = pair_1d();
  const FrequencyGrid zero = FrequencyGrid::zeros(extents_1d(5.0), 1024);
  const CoefficientTable table = analyze(zero, pair, {-1, 1, 16, 0.0});
  CHECK(table.entries.empty());
}

TEST_CASE("analyze matches a fine-grid quadrature oracle at (j,k) = (0,0)") {
  const DualFramePair pair = pair_1d();
  const int n = 1 << 14;
  const FrequencyGrid fhat = FrequencyGrid::from_function(
      extents_1d(5.0), n,
      [&](const Eigen::VectorXd& xi) {
        return std::complex<double>(pair.psi(xi), 0.0);
      });
  const CoefficientTable table = analyze(fhat, pair, {0, 0, 0, 0.0});
  REQUIRE(table.entries.size() == 1);
  const std::complex<double> c = table.entries.front().value;

  // independent quadrature of psi^ phi^ at 4x resolution
  const int fine = 4 * n;
  const double h = 5.0 / fine;
  double oracle = 0.0;
  for (int i = 0; i < fine; ++i) {
    Eigen::VectorXd xi(1);
    xi << -2.5 + (i + 0.5) * h;
    oracle += pair.psi(xi) * pair.phi(xi) * h;
  }
  CHECK(std::abs(c.real() - oracle) <= 1e-6);
  CHECK(std::abs(c.imag()) <= 1e-12);
}

TEST_CASE("coefficients of a smooth signal decay across the k window") {
  const DualFramePair pair = smooth_pair_1d();
  const FrequencyGrid fhat = FrequencyGrid::from_function(
      extents_1d(5.0), 1 << 12,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 0.6, 1.8); });
  const CoefficientTable table = analyze(fhat, pair, {0, 0, 32, 0.0});
  double edge = 0.0;
  double overall = 0.0;
  for (const auto& e : table.entries) {
    const double a = std::abs(e.value);
    overall = std::max(overall, a);
    if (std::abs(e.k(0)) == 32) edge = std::max(edge, a);
  }
  CHECK(overall > 0.0);
  CHECK(edge <= 1e-3 * overall);
}

TEST_CASE("synthesize from an empty or singleton table") {
  const DualFramePair pair = pair_1d();
  CoefficientTable table;
  table.latticeBasis = pair.lattice.gamma.basis();
  table.jLo = 0;
  table.jHi = 0;
  table.kWindow = 0;
  const FrequencyGrid zero = synthesize(table, pair, extents_1d(5.0), 256);
  for (const auto& v : zero.values) CHECK(v == std::complex<double>(0.0, 0.0));

  CoefficientEntry e;
  e.j = 0;
  e.k = Eigen::VectorXi::Zero(1);
  e.value = {1.0, 0.0};
  table.entries.push_back(e);
  const FrequencyGrid one = synthesize(table, pair, extents_1d(5.0), 256);
  for (long i = 0; i < one.size(); ++i) {
    CHECK(one.values[i].real() ==
          doctest::Approx(pair.psi(one.node(i))).epsilon(1e-14));
    CHECK(one.values[i].imag() == 0.0);
  }
}

TEST_CASE("analysis is linear in the signal") {
  const DualFramePair pair = pair_1d();
  const int n = 256;
  const FrequencyGrid f = FrequencyGrid::from_function(
      extents_1d(5.0), n,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 0.6, 1.8); });
  const FrequencyGrid g = FrequencyGrid::from_function(
      extents_1d(5.0), n, [&](const Eigen::VectorXd& xi) {
        return std::complex<double>(pair.psi(xi), 0.0);
      });
  FrequencyGrid combo = FrequencyGrid::zeros(extents_1d(5.0), n);
  const std::complex<double> alpha{0.7, -0.35};
  const std::complex<double> beta{-1.2, 0.4};
  for (long i = 0; i < combo.size(); ++i) {
    combo.values[i] = alpha * f.values[i] + beta * g.values[i];
  }
  const AnalyzeOptions opt{-1, 1, 12, 0.0};
  const CoefficientTable tf = analyze(f, pair, opt);
  const CoefficientTable tg = analyze(g, pair, opt);
  const CoefficientTable tc = analyze(combo, pair, opt);
  REQUIRE(tf.entries.size() == tg.entries.size());
  REQUIRE(tf.entries.size() == tc.entries.size());
  for (size_t i = 0; i < tc.entries.size(); ++i) {
    const std::complex<double> expected =
        alpha * tf.entries[i].value + beta * tg.entries[i].value;
    CHECK(std::abs(tc.entries[i].value - expected) <= 1e-12);
  }
}

TEST_CASE("dilation covariance shifts the scale index") {
  const DualFramePair pair = pair_1d();
  const int n = 1 << 10;
  const double a = 2.0;
  const FrequencyGrid f = FrequencyGrid::from_function(
      extents_1d(4.0), n,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 0.6, 1.8); });
  // f(B xi) sampled on the same grid equals f sampled on the dilated grid
  const FrequencyGrid fB = FrequencyGrid::from_function(
      extents_1d(4.0), n,
      [&](const Eigen::VectorXd& xi) { return bump_1d(a * xi, 0.6, 1.8); });
  const FrequencyGrid fWide = FrequencyGrid::from_function(
      extents_1d(4.0 * a), n,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 0.6, 1.8); });

  const AnalyzeOptions optNarrow{-1, 1, 16, 0.0};
  const AnalyzeOptions optWide{0, 2, 16, 0.0};
  const CoefficientTable tb = analyze(fB, pair, optNarrow);
  const CoefficientTable tw = analyze(fWide, pair, optWide);
  REQUIRE(tb.entries.size() == tw.entries.size());
  for (size_t i = 0; i < tb.entries.size(); ++i) {
    REQUIRE(tw.entries[i].j == tb.entries[i].j + 1);
    REQUIRE(tw.entries[i].k(0) == tb.entries[i].k(0));
    const std::complex<double> expected =
        std::sqrt(a) * tb.entries[i].value;
    CHECK(std::abs(tw.entries[i].value - expected) <= 1e-10);
  }
}

TEST_CASE("one-dimensional round trip converges") {
  const DualFramePair pair = pair_1d();
  const FrequencyGrid fhat = FrequencyGrid::from_function(
      extents_1d(5.0), 1 << 12,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 0.6, 1.8); });
  const RoundtripResult rt = roundtrip_error(fhat, pair, {-2, 2, 48, 0.0});
  CHECK(rt.coverage >= 0.999);
  CHECK_FALSE(rt.coverageWarning);
  CHECK(rt.relErr <= 1e-2);

  // refinement does not hurt
  const FrequencyGrid fine = FrequencyGrid::from_function(
      extents_1d(5.0), 1 << 13,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 0.6, 1.8); });
  const RoundtripResult rt2 = roundtrip_error(fine, pair, {-2, 2, 96, 0.0});
  CHECK(rt2.relErr <= rt.relErr * 1.1);
}

TEST_CASE("signals outside the covered scales do not reconstruct") {
  const DualFramePair pair = pair_1d();
  const FrequencyGrid fhat = FrequencyGrid::from_function(
      extents_1d(40.0), 1 << 12,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 14.0, 18.0); });
  const RoundtripResult rt = roundtrip_error(fhat, pair, {-1, 1, 16, 0.0});
  CHECK(rt.coverage <= 1e-6);
  CHECK(rt.coverageWarning);
  CHECK(rt.relErr >= 0.9);
}

TEST_CASE("zero signal and unsupported dimensions are rejected") {
  const DualFramePair pair = pair_1d();
  const FrequencyGrid zero = FrequencyGrid::zeros(extents_1d(5.0), 256);
  CHECK_THROWS_AS(roundtrip_error(zero, pair, {-1, 1, 8, 0.0}), ZeroSignal);

  // dimension mismatch between the pair and the grid
  Eigen::VectorXd e2(2);
  e2 << 4.0, 4.0;
  const FrequencyGrid grid2 = FrequencyGrid::zeros(e2, 16);
  CHECK_THROWS_AS(analyze(grid2, pair, {0, 0, 4, 0.0}), InvalidArgument);
}

TEST_CASE("two-dimensional round trip on a quincunx pair") {
  Eigen::MatrixXd q(2, 2);
  q << 1.0, -1.0, 1.0, 1.0;
  const DilationMatrix a = validate_expansive(q);
  const AssociatedNorm norm = build_associated_norm(a);
  const BandlimitedGenerator psi =
      radial_profile_generator(norm, 1, RadialProfile::Cosine);
  const DualFramePair pair = make_dual_special(psi, special_lattice(a, norm, 1));

  // The truncation error is grid-independent, so a 128^2 grid already shows
  // the kWindow = 16 budget.
  Eigen::VectorXd extents(2);
  extents << 4.2, 4.2;
  const FrequencyGrid fhat = FrequencyGrid::from_function(
      extents, 128,
      [&](const Eigen::VectorXd& xi) { return bump_1d(xi, 0.55, 2.0); });
  const RoundtripResult rt = roundtrip_error(fhat, pair, {-2, 2, 16, 0.0});
  CHECK(rt.coverage >= 0.999);
  CHECK(rt.relErr <= 1e-2);
}
