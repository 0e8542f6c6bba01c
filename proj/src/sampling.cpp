#include "dualframe/sampling.hpp"

#include "dualframe/errors.hpp"

namespace dualframe {

namespace {
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}
}  // namespace

HaltonSequence::HaltonSequence(int dim, std::uint64_t startIndex)
    : dim_(dim), index_(startIndex + 1) {
  if (dim < 1 || dim > 8) {
    throw InvalidArgument("halton sequence supports dimensions 1..8");
  }
}

Eigen::VectorXd HaltonSequence::next() {
  Eigen::VectorXd u(dim_);
  for (int i = 0; i < dim_; ++i) u(i) = radical_inverse(index_, kPrimes[i]);
  ++index_;
  return u;
}

std::vector<Eigen::VectorXd> sample_box_region(
    const Eigen::VectorXd& halfwidths,
    const std::function<bool(const Eigen::VectorXd&)>& member, int count,
    std::uint64_t seed) {
  const int n = static_cast<int>(halfwidths.size());
  HaltonSequence halton(n, seed * 7919ULL);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  const std::uint64_t maxAttempts =
      10000ULL + 4000ULL * static_cast<std::uint64_t>(count);
  std::uint64_t attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > maxAttempts) {
      throw Error("rejection sampling failed: region too thin in its box");
    }
    const Eigen::VectorXd u = halton.next();
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = (2.0 * u(i) - 1.0) * halfwidths(i);
    if (member(x)) out.push_back(std::move(x));
  }
  return out;
}

double refine_extremum(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::function<bool(const Eigen::VectorXd&)>& member,
    const Eigen::VectorXd& start, bool maximize, double initialStep,
    double finalStep) {
  const int n = static_cast<int>(start.size());
  Eigen::VectorXd x = start;
  double best = f(x);
  double step = initialStep;
  constexpr int kMaxMovesPerLevel = 64;
  while (step > finalStep) {
    for (int move = 0; move < kMaxMovesPerLevel; ++move) {
      bool improved = false;
      for (int i = 0; i < n && !improved; ++i) {
        for (double sign : {1.0, -1.0}) {
          Eigen::VectorXd y = x;
          y(i) += sign * step;
          if (!member(y)) continue;
          const double v = f(y);
          if (maximize ? v > best : v < best) {
            best = v;
            x = std::move(y);
            improved = true;
            break;
          }
        }
      }
      if (!improved) break;
    }
    step *= 0.5;
  }
  return best;
}

}  // namespace dualframe
