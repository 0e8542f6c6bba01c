#include "dualframe/transform.hpp"

#include <cmath>

namespace dualframe {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;

void require_supported_dim(int dim) {
  if (dim < 1 || dim > 2) {
    throw UnsupportedDimension("grids support n in {1, 2}");
  }
}

void require_power_of_two(int n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw InvalidArgument("pointsPerAxis must be a power of two");
  }
}

std::complex<double> unit_phase(double turns) {
  return {std::cos(kTwoPi * turns), std::sin(kTwoPi * turns)};
}

}  // namespace

FrequencyGrid FrequencyGrid::zeros(const Eigen::VectorXd& extents,
                                   int pointsPerAxis) {
  require_supported_dim(static_cast<int>(extents.size()));
  require_power_of_two(pointsPerAxis);
  for (int i = 0; i < extents.size(); ++i) {
    if (!(extents(i) > 0)) throw InvalidArgument("extents must be > 0");
  }
  FrequencyGrid g;
  g.dim = static_cast<int>(extents.size());
  g.extents = extents;
  g.pointsPerAxis = pointsPerAxis;
  long total = 1;
  for (int i = 0; i < g.dim; ++i) total *= pointsPerAxis;
  g.values.assign(total, {0.0, 0.0});
  return g;
}

FrequencyGrid FrequencyGrid::from_function(
    const Eigen::VectorXd& extents, int pointsPerAxis,
    const std::function<std::complex<double>(const Eigen::VectorXd&)>& f) {
  FrequencyGrid g = zeros(extents, pointsPerAxis);
  for (long i = 0; i < g.size(); ++i) g.values[i] = f(g.node(i));
  return g;
}

double FrequencyGrid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= spacing(i);
  return v;
}

Eigen::VectorXd FrequencyGrid::node(long flatIndex) const {
  Eigen::VectorXd xi(dim);
  long rest = flatIndex;
  for (int axis = dim - 1; axis >= 0; --axis) {
    const long i = rest % pointsPerAxis;
    rest /= pointsPerAxis;
    xi(axis) = -0.5 * extents(axis) + (i + 0.5) * spacing(axis);
  }
  return xi;
}

double FrequencyGrid::norm2() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return std::sqrt(sum * cell_volume());
}

double CoefficientTable::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, std::abs(e.value));
  return m;
}

CoefficientTable analyze(const FrequencyGrid& fhat, const DualFramePair& pair,
                         const AnalyzeOptions& opt) {
  require_supported_dim(fhat.dim);
  if (pair.psi.dilation().dim() != fhat.dim) {
    throw InvalidArgument("pair and grid dimensions differ");
  }
  if (opt.jHi < opt.jLo) throw InvalidArgument("empty scale range");
  if (opt.kWindow < 0) throw InvalidArgument("kWindow must be >= 0");

  const Eigen::MatrixXd& B = pair.psi.dilation().transposed();
  const Eigen::MatrixXd pT = pair.lattice.gamma.basis().transpose();
  const double detA = pair.psi.dilation().det_abs();
  const double vol = fhat.cell_volume();
  const int K = opt.kWindow;
  const int M = 2 * K + 1;

  CoefficientTable table;
  table.latticeBasis = pair.lattice.gamma.basis();
  table.jLo = opt.jLo;
  table.jHi = opt.jHi;
  table.kWindow = K;

  for (int j = opt.jLo; j <= opt.jHi; ++j) {
    const Eigen::MatrixXd bmj = matrix_power(B, -j);
    const double detFac = std::pow(detA, -0.5 * j);

    // Nonzero contributions of this scale: weight and lattice phase seed.
    std::vector<std::complex<double>> weights;
    std::vector<Eigen::VectorXd> phases;
    for (long idx = 0; idx < fhat.size(); ++idx) {
      const std::complex<double> f = fhat.values[idx];
      if (f == std::complex<double>(0.0, 0.0)) continue;
      const Eigen::VectorXd y = bmj * fhat.node(idx);
      const double phiVal = pair.phi(y);
      if (phiVal == 0.0) continue;
      weights.push_back(f * (phiVal * detFac * vol));
      phases.push_back(pT * y);
    }
    if (weights.empty()) continue;

    std::vector<std::complex<double>> acc(
        fhat.dim == 1 ? M : static_cast<long>(M) * M, {0.0, 0.0});
    if (fhat.dim == 1) {
      for (size_t i = 0; i < weights.size(); ++i) {
        const double t = phases[i](0);
        const std::complex<double> z = unit_phase(t);
        std::complex<double> p = unit_phase(-t * K);
        for (int k = 0; k < M; ++k) {
          acc[k] += weights[i] * p;
          p *= z;
        }
      }
    } else {
      for (size_t i = 0; i < weights.size(); ++i) {
        const double t0 = phases[i](0);
        const double t1 = phases[i](1);
        const std::complex<double> z0 = unit_phase(t0);
        const std::complex<double> z1 = unit_phase(t1);
        std::complex<double> p0 = weights[i] * unit_phase(-t0 * K);
        for (int k0 = 0; k0 < M; ++k0) {
          std::complex<double> p = p0 * unit_phase(-t1 * K);
          std::complex<double>* row = acc.data() + static_cast<long>(k0) * M;
          for (int k1 = 0; k1 < M; ++k1) {
            row[k1] += p;
            p *= z1;
          }
          p0 *= z0;
        }
      }
    }

    for (long flat = 0; flat < static_cast<long>(acc.size()); ++flat) {
      if (std::abs(acc[flat]) < opt.dropTol) continue;
      CoefficientEntry entry;
      entry.j = j;
      entry.value = acc[flat];
      entry.k = Eigen::VectorXi(fhat.dim);
      if (fhat.dim == 1) {
        entry.k(0) = static_cast<int>(flat) - K;
      } else {
        entry.k(0) = static_cast<int>(flat / M) - K;
        entry.k(1) = static_cast<int>(flat % M) - K;
      }
      table.entries.push_back(std::move(entry));
    }
  }
  return table;
}

FrequencyGrid synthesize(const CoefficientTable& table,
                         const DualFramePair& pair,
                         const Eigen::VectorXd& extents, int pointsPerAxis) {
  require_supported_dim(static_cast<int>(extents.size()));
  FrequencyGrid grid = FrequencyGrid::zeros(extents, pointsPerAxis);
  if (table.entries.empty()) return grid;
  if (pair.psi.dilation().dim() != grid.dim) {
    throw InvalidArgument("pair and grid dimensions differ");
  }

  const Eigen::MatrixXd& B = pair.psi.dilation().transposed();
  const Eigen::MatrixXd pT = table.latticeBasis.transpose();
  const double detA = pair.psi.dilation().det_abs();
  const int K = table.kWindow;
  const int M = 2 * K + 1;

  for (int j = table.jLo; j <= table.jHi; ++j) {
    // Dense coefficient window of this scale.
    std::vector<std::complex<double>> coeff(
        grid.dim == 1 ? M : static_cast<long>(M) * M, {0.0, 0.0});
    bool any = false;
    for (const auto& e : table.entries) {
      if (e.j != j) continue;
      const long flat = grid.dim == 1
                            ? e.k(0) + K
                            : static_cast<long>(e.k(0) + K) * M + (e.k(1) + K);
      coeff[flat] = e.value;
      any = true;
    }
    if (!any) continue;

    const Eigen::MatrixXd bmj = matrix_power(B, -j);
    const double detFac = std::pow(detA, -0.5 * j);
    for (long idx = 0; idx < grid.size(); ++idx) {
      const Eigen::VectorXd y = bmj * grid.node(idx);
      const double psiVal = pair.psi(y);
      if (psiVal == 0.0) continue;
      const Eigen::VectorXd t = pT * y;
      std::complex<double> sum(0.0, 0.0);
      if (grid.dim == 1) {
        const std::complex<double> z = unit_phase(-t(0));
        std::complex<double> p = unit_phase(t(0) * K);
        for (int k = 0; k < M; ++k) {
          sum += coeff[k] * p;
          p *= z;
        }
      } else {
        const std::complex<double> z0 = unit_phase(-t(0));
        const std::complex<double> z1 = unit_phase(-t(1));
        std::complex<double> p0 = unit_phase(t(0) * K);
        for (int k0 = 0; k0 < M; ++k0) {
          std::complex<double> p = p0 * unit_phase(t(1) * K);
          const std::complex<double>* row =
              coeff.data() + static_cast<long>(k0) * M;
          for (int k1 = 0; k1 < M; ++k1) {
            sum += row[k1] * p;
            p *= z1;
          }
          p0 *= z0;
        }
      }
      grid.values[idx] += detFac * psiVal * sum;
    }
  }
  return grid;
}

double coverage_ratio(const FrequencyGrid& fhat, const DualFramePair& pair,
                      int jLo, int jHi) {
  const Eigen::MatrixXd& B = pair.psi.dilation().transposed();
  std::vector<Eigen::MatrixXd> powers;
  for (int j = jLo; j <= jHi; ++j) powers.push_back(matrix_power(B, -j));

  double total = 0.0;
  double covered = 0.0;
  for (long idx = 0; idx < fhat.size(); ++idx) {
    const double mass = std::norm(fhat.values[idx]);
    if (mass == 0.0) continue;
    total += mass;
    const Eigen::VectorXd xi = fhat.node(idx);
    for (const auto& p : powers) {
      if (pair.psi.support().contains(p * xi)) {
        covered += mass;
        break;
      }
    }
  }
  return total > 0.0 ? covered / total : 1.0;
}

RoundtripResult roundtrip_error(const FrequencyGrid& fhat,
                                const DualFramePair& pair,
                                const AnalyzeOptions& opt) {
  const double signalNorm = fhat.norm2();
  if (signalNorm == 0.0) throw ZeroSignal("input grid is identically zero");

  RoundtripResult result;
  result.coverage = coverage_ratio(fhat, pair, opt.jLo, opt.jHi);
  result.coverageWarning = result.coverage < 0.999;

  const CoefficientTable table = analyze(fhat, pair, opt);
  result.coefficientCount = table.entries.size();
  const FrequencyGrid rec =
      synthesize(table, pair, fhat.extents, fhat.pointsPerAxis);

  double diff = 0.0;
  double ref = 0.0;
  for (long i = 0; i < fhat.size(); ++i) {
    diff += std::norm(rec.values[i] - fhat.values[i]);
    ref += std::norm(fhat.values[i]);
  }
  result.relErr = std::sqrt(diff / ref);
  return result;
}

}  // namespace dualframe
