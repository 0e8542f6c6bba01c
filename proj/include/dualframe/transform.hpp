#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "dualframe/generators.hpp"

namespace dualframe {

/// Uniform cell-centered grid over a centered box in frequency space;
/// node i of axis a sits at -extent_a/2 + (i + 1/2) h_a.
struct FrequencyGrid {
  int dim = 1;
  Eigen::VectorXd extents;  // full box lengths per axis
  int pointsPerAxis = 0;    // power of two
  std::vector<std::complex<double>> values;  // row-major

  static FrequencyGrid zeros(const Eigen::VectorXd& extents,
                             int pointsPerAxis);
  static FrequencyGrid from_function(
      const Eigen::VectorXd& extents, int pointsPerAxis,
      const std::function<std::complex<double>(const Eigen::VectorXd&)>& f);

  double spacing(int axis) const { return extents(axis) / pointsPerAxis; }
  double cell_volume() const;
  long size() const { return static_cast<long>(values.size()); }
  Eigen::VectorXd node(long flatIndex) const;
  double norm2() const;  // discrete L2 norm
};

struct CoefficientEntry {
  int j = 0;
  Eigen::VectorXi k;
  std::complex<double> value;
};

/// Frame coefficients c_{j,k} = <f, D^j T_{Pk} phi> keyed by scale j and
/// lattice index k.
struct CoefficientTable {
  std::vector<CoefficientEntry> entries;
  Eigen::MatrixXd latticeBasis;
  int jLo = 0;
  int jHi = -1;
  int kWindow = 0;

  double max_abs() const;
};

struct AnalyzeOptions {
  int jLo = 0;
  int jHi = 0;
  int kWindow = 16;
  double dropTol = 0.0;
};

/// Riemann-sum analysis coefficients
///   c_{j,k} = sum_grid f^(xi) |det A|^{-j/2} e^{2 pi i <B^{-j} xi, Pk>}
///             phi^(B^{-j} xi) h^n
/// for ||k||_inf <= kWindow; entries with |c| < dropTol are discarded.
/// Only n in {1, 2} is supported.
CoefficientTable analyze(const FrequencyGrid& fhat, const DualFramePair& pair,
                         const AnalyzeOptions& opt);

/// Dual side of the expansion evaluated on grid nodes:
///   f^rec(xi) = sum_{j,k} c_{j,k} |det A|^{-j/2}
///               e^{-2 pi i <B^{-j} xi, Pk>} psi^(B^{-j} xi).
FrequencyGrid synthesize(const CoefficientTable& table,
                         const DualFramePair& pair,
                         const Eigen::VectorXd& extents, int pointsPerAxis);

/// Mass fraction of |f^|^2 on nodes reachable by some dilate of the psi
/// support within the scale range.
double coverage_ratio(const FrequencyGrid& fhat, const DualFramePair& pair,
                      int jLo, int jHi);

struct RoundtripResult {
  double relErr = 0.0;
  double coverage = 1.0;
  bool coverageWarning = false;
  std::size_t coefficientCount = 0;
};

/// relErr = ||f^rec - f^||_2 / ||f^||_2 over the grid.
/// Throws ZeroSignal when f^ vanishes.
RoundtripResult roundtrip_error(const FrequencyGrid& fhat,
                                const DualFramePair& pair,
                                const AnalyzeOptions& opt);

}  // namespace dualframe
