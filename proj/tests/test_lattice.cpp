#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "dualframe/lattice.hpp"

using namespace dualframe;

namespace {

Eigen::MatrixXd quincunx() {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, -1.0, 1.0, 1.0;
  return a;
}

Eigen::MatrixXd example_matrix() {
  Eigen::MatrixXd a(2, 2);
  a << 3.0, -3.0, 1.0, 0.0;
  return a;
}

bool generates_same_lattice(const Eigen::MatrixXd& p,
                            const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd u = p.inverse() * q;
  for (int i = 0; i < u.rows(); ++i) {
    for (int j = 0; j < u.cols(); ++j) {
      if (std::abs(u(i, j) - std::round(u(i, j))) > 1e-9) return false;
    }
  }
  return std::abs(std::abs(u.determinant()) - 1.0) <= 1e-9;
}

}  // namespace

TEST_CASE("dual lattice basics") {
  const Lattice id(Eigen::MatrixXd::Identity(3, 3));
  CHECK((dual_lattice(id).basis() - Eigen::MatrixXd::Identity(3, 3)).norm() ==
        0.0);

  // dual of Gamma = 1/2 A^-1 Z^2 is 2 B Z^2 for the quincunx matrix
  const Eigen::MatrixXd p = 0.5 * quincunx().inverse();
  const Lattice gamma(p);
  const Eigen::MatrixXd expected = 2.0 * quincunx().transpose();
  CHECK((dual_lattice(gamma).basis() - expected).cwiseAbs().maxCoeff() <=
        1e-14);
}

TEST_CASE("random lattices: determinant identity and integer pairings") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  std::uniform_int_distribution<int> ints(-5, 5);
  int done = 0;
  while (done < 100) {
    const int n = 1 + (done % 4);
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) p(i, j) = uni(rng);
    }
    if (std::abs(p.determinant()) < 0.1) continue;
    ++done;
    const LatticePair pair = lattice_pair(Lattice(p));
    CHECK(std::abs(pair.gamma.determinant() * pair.gammaStar.determinant() -
                   1.0) <= 1e-12);

    // <gamma, gamma*> in Z for random basis-integer combinations
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXi k1(n), k2(n);
      for (int i = 0; i < n; ++i) {
        k1(i) = ints(rng);
        k2(i) = ints(rng);
      }
      const double ip = pair.gamma.point(k1).dot(pair.gammaStar.point(k2));
      CHECK(std::abs(ip - std::round(ip)) <= 1e-9);
    }

    // dual of dual generates the original lattice
    CHECK(generates_same_lattice(
        pair.gamma.basis(), dual_lattice(pair.gammaStar).basis()));
  }
}

TEST_CASE("special lattice for the quincunx matrix at c = 1") {
  const DilationMatrix a = validate_expansive(quincunx());
  const AssociatedNorm norm = build_associated_norm(a);
  const LatticePair pair = special_lattice(a, norm, 1);
  CHECK(pair.gamma.determinant() == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(std::abs(pair.gamma.determinant() * pair.gammaStar.determinant() -
                 1.0) <= 1e-12);
  CHECK(generates_same_lattice(pair.gammaStar.basis(),
                               dual_lattice(pair.gamma).basis()));
}

TEST_CASE("special lattice determinant formula") {
  for (const Eigen::MatrixXd& m :
       {quincunx(), example_matrix(),
        Eigen::MatrixXd(2.0 * Eigen::MatrixXd::Identity(2, 2))}) {
    const DilationMatrix a = validate_expansive(m);
    const AssociatedNorm norm = build_associated_norm(a);
    for (int c = 0; c <= 2; ++c) {
      const LatticePair pair = special_lattice(a, norm, c);
      const double expected = std::pow(2.0, -a.dim()) *
                              std::pow(a.det_abs(), -c) *
                              std::sqrt(norm.eigLambda.prod());
      CHECK(std::abs(pair.gamma.determinant() - expected) <=
            1e-10 * expected);
    }
  }
}

TEST_CASE("special lattice in one dimension") {
  Eigen::MatrixXd two(1, 1);
  two << 2.0;
  const DilationMatrix a = validate_expansive(two);
  const AssociatedNorm norm = build_associated_norm(a);
  const LatticePair pair = special_lattice(a, norm, 0);
  CHECK(pair.gamma.basis()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("crude lattice bound") {
  Eigen::MatrixXd two(1, 1);
  two << 2.0;
  const DilationMatrix a1 = validate_expansive(two);
  const AssociatedNorm n1 = build_associated_norm(a1);
  CHECK(crude_lattice_norm_bound(a1, n1, 0, 0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const DilationMatrix aq = validate_expansive(quincunx());
  const AssociatedNorm nq = build_associated_norm(aq);
  CHECK(crude_lattice_norm_bound(aq, nq, 1, 0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));

  const DilationMatrix ae = validate_expansive(example_matrix());
  const AssociatedNorm ne = build_associated_norm(ae);
  for (int c = 0; c <= 2; ++c) {
    for (int m = 0; m <= 2; ++m) {
      CHECK(crude_lattice_norm_bound(ae, ne, c, m) > 0.0);
    }
  }
}

TEST_CASE("hexagonal lattice and packing densities") {
  const double pi = 3.14159265358979323846;
  const Lattice hex = hexagonal_lattice_2d(1.0);
  CHECK(std::abs(hex.determinant() - 2.0 * std::sqrt(3.0)) <= 1e-12);
  CHECK(std::abs(packing_density(hex, 1.0) - pi / std::sqrt(12.0)) <= 1e-12);

  const Lattice square(2.0 * Eigen::MatrixXd::Identity(2, 2));
  CHECK(std::abs(packing_density(square, 1.0) - pi / 4.0) <= 1e-12);
  CHECK(std::abs(packing_density(hex, 1.0) / packing_density(square, 1.0) -
                 2.0 / std::sqrt(3.0)) <= 1e-12);

  const Lattice cube(2.0 * Eigen::MatrixXd::Identity(3, 3));
  CHECK(std::abs(packing_density(cube, 1.0) - pi / 6.0) <= 1e-12);

  // FCC packs unit balls of radius sqrt(2)/2 at density pi/sqrt(18)
  const Lattice fcc = fcc_lattice_3d(1.0);
  CHECK(std::abs(packing_density(fcc, std::sqrt(2.0) / 2.0) -
                 pi / std::sqrt(18.0)) <= 1e-12);

  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0));
  CHECK(unit_ball_volume(5) == doctest::Approx(8.0 * pi * pi / 15.0));
}

TEST_CASE("separation: quincunx box annuli against 2Z^2") {
  const Eigen::MatrixXd b = quincunx().transpose();
  const SupportSpec psiSupp = SupportSpec::box_annulus(b, 0, 2);
  const SupportSpec phiSupp = SupportSpec::box_annulus(b, 0, 4);
  const Lattice twoZ(2.0 * Eigen::MatrixXd::Identity(2, 2));
  const SeparationReport report =
      verify_separation(twoZ, psiSupp, phiSupp, 20000);
  CHECK(report.separated);
  CHECK_FALSE(report.analytic);
  CHECK(report.candidates > 0);
}

TEST_CASE("separation: special lattice passes the analytic hull test") {
  for (const Eigen::MatrixXd& m :
       {quincunx(), example_matrix(),
        Eigen::MatrixXd(2.0 * Eigen::MatrixXd::Identity(2, 2))}) {
    const DilationMatrix a = validate_expansive(m);
    const AssociatedNorm norm = build_associated_norm(a);
    const LatticePair pair = special_lattice(a, norm, 1);
    const SupportSpec shell = SupportSpec::shell(norm, 1, 1);
    const SeparationReport report =
        verify_separation(pair.gammaStar, shell, shell);
    CHECK(report.separated);
    CHECK(report.analytic);
  }
}

TEST_CASE("separation: integer lattice overlaps the quincunx supports") {
  const Eigen::MatrixXd b = quincunx().transpose();
  const SupportSpec psiSupp = SupportSpec::box_annulus(b, 0, 2);
  const SupportSpec phiSupp = SupportSpec::box_annulus(b, 0, 4);
  const Lattice z2(Eigen::MatrixXd::Identity(2, 2));
  const SeparationReport report = verify_separation(z2, psiSupp, phiSupp);
  CHECK_FALSE(report.separated);
  REQUIRE(report.violation.has_value());
  CHECK(report.violation->norm() <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("any basis below the crude bound separates the shell supports") {
  const DilationMatrix a = validate_expansive(example_matrix());
  const AssociatedNorm norm = build_associated_norm(a);
  const int c = 1, d = 1, mUnder = 1, mOver = 1;
  const double bound = crude_lattice_norm_bound(a, norm, c, mUnder);
  const SupportSpec psiSupp = SupportSpec::shell(norm, c, d);
  const SupportSpec phiSupp =
      SupportSpec::shell(norm, c + mUnder, mUnder + mOver + d);

  std::mt19937 rng(77);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> shrink(0.2, 0.999);
  int done = 0;
  while (done < 10) {
    Eigen::MatrixXd p(2, 2);
    p << uni(rng), uni(rng), uni(rng), uni(rng);
    if (std::abs(p.determinant()) < 0.05) continue;
    p *= bound * shrink(rng) / spectral_norm(p);
    ++done;
    const LatticePair pair = lattice_pair(Lattice(p));
    const SeparationReport report =
        verify_separation(pair.gammaStar, psiSupp, phiSupp, 2000);
    CHECK(report.separated);
  }
}

TEST_CASE("integer quotient representatives") {
  const auto trivial =
      integer_quotient_representatives(Eigen::MatrixXd::Identity(2, 2));
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0].norm() == 0.0);

  Eigen::MatrixXd three(1, 1);
  three << 3.0;
  const auto thirds = integer_quotient_representatives(three);
  REQUIRE(thirds.size() == 3);
  std::set<long> seen;
  for (const auto& r : thirds) {
    seen.insert(std::lround(r(0) * 3.0));
    CHECK(r(0) >= 0.0);
    CHECK(r(0) < 1.0);
  }
  CHECK(seen == std::set<long>{0, 1, 2});

  const auto quarters =
      integer_quotient_representatives(2.0 * Eigen::MatrixXd::Identity(2, 2));
  REQUIRE(quarters.size() == 4);
  std::set<std::pair<long, long>> cells;
  for (const auto& r : quarters) {
    cells.insert({std::lround(r(0) * 2.0), std::lround(r(1) * 2.0)});
  }
  CHECK(cells == std::set<std::pair<long, long>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

  Eigen::MatrixXd frac(2, 2);
  frac << 1.5, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(integer_quotient_representatives(frac), NotInteger);
  Eigen::MatrixXd sing(2, 2);
  sing << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(integer_quotient_representatives(sing), SingularMatrix);
}

TEST_CASE("quotient representatives are pairwise distinct classes") {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> ints(-3, 3);
  int done = 0;
  while (done < 20) {
    Eigen::MatrixXd q(2, 2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) q(i, j) = ints(rng);
    }
    const double det = std::abs(q.determinant());
    if (det < 0.5 || det > 12.5) continue;
    ++done;
    const auto reps = integer_quotient_representatives(q);
    CHECK(reps.size() == static_cast<size_t>(std::lround(det)));
    for (size_t i = 0; i < reps.size(); ++i) {
      for (size_t j = i + 1; j < reps.size(); ++j) {
        const Eigen::VectorXd diff = reps[i] - reps[j];
        bool integerDiff = true;
        for (int t = 0; t < diff.size(); ++t) {
          if (std::abs(diff(t) - std::round(diff(t))) > 1e-9) {
            integerDiff = false;
          }
        }
        CHECK_FALSE(integerDiff);
      }
    }
  }
}
