#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace dualframe {

/// Halton low-discrepancy sequence in [0,1)^dim (prime bases 2,3,5,...).
/// The start index is shifted by the seed, so a fixed (seed, count) always
/// reproduces the same point set.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t startIndex);

  Eigen::VectorXd next();

 private:
  int dim_;
  std::uint64_t index_;
};

/// Draws `count` points of {x : |x_i| <= halfwidths_i} passing `member`,
/// by rejection from the Halton stream. Throws if the acceptance rate
/// collapses (region too thin for its bounding box).
std::vector<Eigen::VectorXd> sample_box_region(
    const Eigen::VectorXd& halfwidths,
    const std::function<bool(const Eigen::VectorXd&)>& member, int count,
    std::uint64_t seed);

/// Compass (pattern) search refinement of an extremum of f over a region,
/// starting from `start` and shrinking the step from initialStep down to
/// finalStep. Returns the refined extremal value.
double refine_extremum(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::function<bool(const Eigen::VectorXd&)>& member,
    const Eigen::VectorXd& start, bool maximize, double initialStep,
    double finalStep);

}  // namespace dualframe
