#include <cmath>
#include <random>

#include "doctest.h"
#include "dualframe/matrix_core.hpp"

using namespace dualframe;

namespace {

Eigen::MatrixXd quincunx() {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, -1.0, 1.0, 1.0;
  return a;
}

Eigen::MatrixXd example_matrix() {  // eigenvalue moduli sqrt(3)
  Eigen::MatrixXd a(2, 2);
  a << 3.0, -3.0, 1.0, 0.0;
  return a;
}

Eigen::MatrixXd golden_k() {
  Eigen::MatrixXd k(2, 2);
  k << 28.0 / 9.0, 16.0 / 9.0, 16.0 / 9.0, 8.0 / 3.0;
  return k;
}

}  // namespace

TEST_CASE("validate_expansive accepts the quincunx matrix") {
  const DilationMatrix m = validate_expansive(quincunx());
  CHECK(m.dim() == 2);
  CHECK(m.det_abs() == doctest::Approx(2.0).epsilon(1e-14));
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(m.eigenvalues()(i)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  CHECK((m.transposed() - quincunx().transpose()).norm() == 0.0);
}

TEST_CASE("validate_expansive accepts [[3,-3],[1,0]]") {
  const DilationMatrix m = validate_expansive(example_matrix());
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(m.eigenvalues()(i)) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("validate_expansive rejects bad input") {
  CHECK_THROWS_AS(validate_expansive(Eigen::MatrixXd::Identity(2, 2)),
                  NotExpansive);
  CHECK_THROWS_AS(validate_expansive(Eigen::MatrixXd::Zero(2, 2)),
                  SingularMatrix);
  Eigen::MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(validate_expansive(rect), InvalidArgument);
  Eigen::MatrixXd nan2 = quincunx();
  nan2(0, 0) = std::nan("");
  CHECK_THROWS_AS(validate_expansive(nan2), InvalidArgument);
  Eigen::MatrixXd contracting(1, 1);
  contracting << 0.5;
  CHECK_THROWS_AS(validate_expansive(contracting), NotExpansive);
}

TEST_CASE("expansivity of A and A^t coincide") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd m(2, 2);
    m << uni(rng), uni(rng), uni(rng), uni(rng);
    bool okA = true, okAt = true;
    try {
      validate_expansive(m);
    } catch (const Error&) {
      okA = false;
    }
    try {
      validate_expansive(Eigen::MatrixXd(m.transpose()));
    } catch (const Error&) {
      okAt = false;
    }
    CHECK(okA == okAt);
  }
}

TEST_CASE("associated norm of the quincunx matrix is Euclidean") {
  const DilationMatrix a = validate_expansive(quincunx());
  const AssociatedNorm norm = build_associated_norm(a);
  CHECK(norm.k == 0);
  CHECK((norm.K - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(norm.lambda == doctest::Approx(std::sqrt(2.0)).epsilon(2e-6));
  CHECK(norm.maxSemiAxis == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("associated norm golden data for [[3,-3],[1,0]]") {
  const DilationMatrix a = validate_expansive(example_matrix());
  const AssociatedNorm norm = build_associated_norm(a);
  CHECK(norm.k == 2);
  CHECK((norm.K - golden_k()).cwiseAbs().maxCoeff() <= 1e-12);

  // lambda = 1.03 must be certified with slack >= -1e-9.
  const Eigen::MatrixXd b = a.transposed();
  const Eigen::MatrixXd slackM =
      b.transpose() * norm.K * b - 1.03 * 1.03 * norm.K;
  CHECK(min_symmetric_eigenvalue(slackM) >= -1e-9);
  CHECK(norm.lambda >= 1.03 - 1e-9);

  // eigenvalues (26 -+ 2 sqrt(65)) / 9
  const double lo = (26.0 - 2.0 * std::sqrt(65.0)) / 9.0;
  const double hi = (26.0 + 2.0 * std::sqrt(65.0)) / 9.0;
  CHECK(std::abs(norm.eigLambda(0) - lo) <= 1e-10);
  CHECK(std::abs(norm.eigLambda(1) - hi) <= 1e-10);

  // K = Q diag(lambda) Q^t
  const Eigen::MatrixXd rebuilt =
      norm.eigQ * norm.eigLambda.asDiagonal() * norm.eigQ.transpose();
  CHECK((rebuilt - norm.K).cwiseAbs().maxCoeff() <= 1e-10);

  // truncation order 1 certifies nothing for this matrix
  CHECK_THROWS_AS(build_associated_norm(a, 1), NoCertificate);
}

TEST_CASE("associated norm of 2I") {
  Eigen::MatrixXd two = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  const AssociatedNorm norm = build_associated_norm(validate_expansive(two));
  CHECK(norm.k == 0);
  CHECK((norm.K - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(norm.lambda == doctest::Approx(2.0).epsilon(2e-6));
}

TEST_CASE("norm certifies ||Bx|| >= lambda ||x|| on random points") {
  for (const Eigen::MatrixXd& m : {quincunx(), example_matrix()}) {
    const DilationMatrix a = validate_expansive(m);
    const AssociatedNorm norm = build_associated_norm(a);
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 10000; ++i) {
      Eigen::VectorXd x(2);
      x << gauss(rng), gauss(rng);
      const double lhs = norm.value(norm.B * x);
      const double rhs = norm.lambda * norm.value(x);
      CHECK(lhs >= rhs - 1e-9 * norm.value(x));
    }
  }
}

TEST_CASE("norm_value examples") {
  const AssociatedNorm euclid = build_associated_norm(
      validate_expansive(2.0 * Eigen::MatrixXd::Identity(2, 2)));
  Eigen::VectorXd x(2);
  x << 3.0, 4.0;
  CHECK(norm_value(euclid, x) == doctest::Approx(5.0).epsilon(1e-14));
  x.setZero();
  CHECK(norm_value(euclid, x) == 0.0);

  const AssociatedNorm golden =
      build_associated_norm(validate_expansive(example_matrix()));
  Eigen::VectorXd e1(2);
  e1 << 1.0, 0.0;
  CHECK(norm_value(golden, e1) ==
        doctest::Approx(std::sqrt(28.0 / 9.0)).epsilon(1e-14));
}

TEST_CASE("dilation_index examples") {
  const AssociatedNorm norm = build_associated_norm(
      validate_expansive(2.0 * Eigen::MatrixXd::Identity(2, 2)));
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;
  CHECK(dilation_index(norm, x) == 0);
  x << std::pow(2.0, -5), 0.0;
  CHECK(dilation_index(norm, x) == 5);
  x << 3.0, 0.0;
  CHECK(dilation_index(norm, x) == -2);  // ||B^-2 x|| = 0.75 <= 1 < 1.5
  x.setZero();
  CHECK_THROWS_AS(dilation_index(norm, x), ZeroVector);
}

TEST_CASE("dilation index is the unique annulus index") {
  const DilationMatrix a = validate_expansive(example_matrix());
  const AssociatedNorm norm = build_associated_norm(a);
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> logScale(-4.0, 4.0);
  auto inAnnulus = [&](const Eigen::VectorXd& y) {
    return norm.value(y) <= 1.0 && norm.value(norm.B * y) > 1.0;
  };
  for (int i = 0; i < 10000; ++i) {
    Eigen::VectorXd x(2);
    x << gauss(rng), gauss(rng);
    if (x.norm() < 1e-12) continue;
    x *= std::pow(10.0, logScale(rng));
    const int j = dilation_index(norm, x);
    const Eigen::VectorXd yj = matrix_power(norm.B, j) * x;
    CHECK(inAnnulus(yj));
    CHECK_FALSE(inAnnulus(norm.B * yj));
    CHECK_FALSE(inAnnulus(norm.B.inverse() * yj));
  }
}

TEST_CASE("ellipsoid_radius examples") {
  Eigen::VectorXd axes = Eigen::VectorXd::Ones(4);
  Eigen::VectorXd angles(3);
  angles << 0.4, 1.1, 2.2;
  CHECK(ellipsoid_radius(axes, angles) == doctest::Approx(1.0).epsilon(1e-14));

  axes << 7.0, 2.0, 3.0, 4.0;
  angles << 0.0, 0.7, 1.3;
  CHECK(ellipsoid_radius(axes, angles) == doctest::Approx(7.0).epsilon(1e-12));

  axes << 1.0, 2.0, 3.0, 4.0;
  const double half = 1.5707963267948966;
  angles << half, half, 0.0;
  CHECK(ellipsoid_radius(axes, angles) == doctest::Approx(3.0).epsilon(1e-12));

  angles << -0.1, 0.7, 1.3;
  CHECK_THROWS_AS(ellipsoid_radius(axes, angles), AngleOutOfRange);
  angles << 0.1, 0.7, 6.9;
  CHECK_THROWS_AS(ellipsoid_radius(axes, angles), AngleOutOfRange);

  // n = 1 has no angles
  Eigen::VectorXd oneAxis(1);
  oneAxis << 2.5;
  CHECK(ellipsoid_radius(oneAxis, Eigen::VectorXd()) == 2.5);
}

TEST_CASE("ellipsoid_radius lands on the surface") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 250; ++trial) {
      Eigen::VectorXd axes(n);
      for (int i = 0; i < n; ++i) axes(i) = 0.3 + 3.0 * uni(rng);
      Eigen::VectorXd angles(n - 1);
      for (int i = 0; i < n - 2; ++i) angles(i) = 3.14159 * uni(rng);
      angles(n - 2) = 6.28318 * uni(rng);
      const double r = ellipsoid_radius(axes, angles);
      const Eigen::VectorXd x = r * hyperspherical_direction(angles);
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += (x(i) / axes(i)) * (x(i) / axes(i));
      CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("ellipsoid shell membership") {
  const AssociatedNorm norm =
      build_associated_norm(validate_expansive(quincunx()));
  const EllipsoidShell annulus{norm, 0, 0};  // O_* for the quincunx norm
  Eigen::VectorXd x(2);
  x << 0.9, 0.0;
  CHECK(annulus.contains(x));  // ||x|| = 0.9, ||Bx|| = 0.9 sqrt(2) > 1
  x << 0.5, 0.0;
  CHECK_FALSE(annulus.contains(x));
  x << 1.1, 0.0;
  CHECK_FALSE(annulus.contains(x));
}
