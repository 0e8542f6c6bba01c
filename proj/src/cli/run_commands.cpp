#include "cli/run_commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "dualframe/generators.hpp"
#include "dualframe/lattice.hpp"
#include "dualframe/matrix_core.hpp"
#include "dualframe/transform.hpp"
#include "dualframe/verification.hpp"

namespace dualframe::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw InvalidConfig(where + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw InvalidConfig("unknown key '" + item.key() + "' in " + where);
    }
  }
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw InvalidConfig(where + " must be a non-empty array");
  }
  if (j.front().is_array()) {  // nested rows
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
        throw InvalidConfig(where + " rows must have equal length");
      }
      for (int c = 0; c < cols; ++c) {
        if (!j[r][c].is_number()) throw InvalidConfig(where + " not numeric");
        m(r, c) = j[r][c].get<double>();
      }
    }
    return m;
  }
  // flat row-major, length must be a perfect square
  const int len = static_cast<int>(j.size());
  const int n = static_cast<int>(std::lround(std::sqrt(double(len))));
  if (n * n != len) {
    throw InvalidConfig(where + " flat array length must be a perfect square");
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < len; ++i) {
    if (!j[i].is_number()) throw InvalidConfig(where + " not numeric");
    m(i / n, i % n) = j[i].get<double>();
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

// ---------------------------------------------------------------------------
// Config schema

struct GeneratorConfig {
  std::string type;  // tent | radial | smooth
  std::string profile = "cosine";
  int c = 1;
  int d = 1;
};

struct LatticeConfig {
  std::string mode;  // special | crude | hexagonal | custom
  std::optional<int> c;
  std::optional<Eigen::MatrixXd> basis;
};

struct TransformConfig {
  Eigen::VectorXd extents;
  int pointsPerAxis = 0;
  int jLo = 0, jHi = 0;
  int kWindow = 16;
  double dropTol = 0.0;
  std::string signalType;  // radialBump | psi
  double inner = 0.0, outer = 0.0;
};

struct RunConfig {
  Eigen::MatrixXd matrix;
  int normKMax = 64;
  double normTol = 1e-9;
  std::optional<GeneratorConfig> generator;
  std::optional<LatticeConfig> lattice;
  std::optional<Eigen::VectorXd> coefficients;
  int samples = 10000;
  std::uint64_t seed = 42;
  VerificationTolerances tolerances;
  std::optional<TransformConfig> transform;
};

RunConfig parse_config(const json& config) {
  check_keys(config,
             {"matrix", "norm", "generator", "lattice", "coefficients",
              "verification", "transform"},
             "config");
  if (!config.contains("matrix")) throw InvalidConfig("config needs 'matrix'");

  RunConfig rc;
  rc.matrix = parse_matrix(config.at("matrix"), "matrix");

  if (config.contains("norm")) {
    const json& n = config.at("norm");
    check_keys(n, {"kMax", "tol"}, "norm");
    if (n.contains("kMax")) rc.normKMax = n.at("kMax").get<int>();
    if (n.contains("tol")) rc.normTol = n.at("tol").get<double>();
  }

  if (config.contains("generator")) {
    const json& g = config.at("generator");
    check_keys(g, {"type", "profile", "c", "d"}, "generator");
    GeneratorConfig gc;
    if (!g.contains("type")) throw InvalidConfig("generator needs 'type'");
    gc.type = g.at("type").get<std::string>();
    if (g.contains("profile")) gc.profile = g.at("profile").get<std::string>();
    if (g.contains("c")) gc.c = g.at("c").get<int>();
    if (g.contains("d")) gc.d = g.at("d").get<int>();

    if (gc.type == "tent") {
      if (g.contains("profile")) {
        throw InvalidConfig("tent generator takes no profile");
      }
      if (g.contains("c") && gc.c != 0) {
        throw InvalidConfig("tent generator is fixed at c = 0");
      }
      if (g.contains("d") && gc.d != 2) {
        throw InvalidConfig("tent generator is fixed at d = 2");
      }
      gc.c = 0;
      gc.d = 2;
    } else if (gc.type == "radial") {
      if (g.contains("d") && gc.d != 1) {
        throw InvalidConfig("radial generator is fixed at d = 1");
      }
      gc.d = 1;
      if (gc.profile != "linear" && gc.profile != "cubic" &&
          gc.profile != "cosine") {
        throw InvalidConfig("profile must be linear, cubic or cosine");
      }
    } else if (gc.type == "smooth") {
      if (g.contains("profile")) {
        throw InvalidConfig("smooth generator takes no profile");
      }
      if (gc.d < 1) throw InvalidConfig("smooth generator needs d >= 1");
    } else {
      throw InvalidConfig("generator type must be tent, radial or smooth");
    }
    rc.generator = gc;
  }

  if (config.contains("lattice")) {
    const json& l = config.at("lattice");
    check_keys(l, {"mode", "c", "basis"}, "lattice");
    LatticeConfig lc;
    if (!l.contains("mode")) throw InvalidConfig("lattice needs 'mode'");
    lc.mode = l.at("mode").get<std::string>();
    if (lc.mode != "special" && lc.mode != "crude" && lc.mode != "hexagonal" &&
        lc.mode != "custom") {
      throw InvalidConfig("lattice mode must be special, crude, hexagonal or custom");
    }
    if (l.contains("c")) lc.c = l.at("c").get<int>();
    if (l.contains("basis")) {
      lc.basis = parse_matrix(l.at("basis"), "lattice.basis");
    }
    if (lc.mode == "custom" && !lc.basis) {
      throw InvalidConfig("custom lattice needs 'basis'");
    }
    rc.lattice = lc;
  }

  if (config.contains("coefficients")) {
    const json& c = config.at("coefficients");
    if (!c.is_array() || c.empty() || c.size() % 2 == 0) {
      throw InvalidConfig("coefficients must be an odd-length array");
    }
    Eigen::VectorXd b(static_cast<int>(c.size()));
    for (int i = 0; i < b.size(); ++i) b(i) = c[i].get<double>();
    rc.coefficients = b;
  }

  if (config.contains("verification")) {
    const json& v = config.at("verification");
    check_keys(v, {"samples", "seed", "tolerances"}, "verification");
    if (v.contains("samples")) rc.samples = v.at("samples").get<int>();
    if (v.contains("seed")) rc.seed = v.at("seed").get<std::uint64_t>();
    if (v.contains("tolerances")) {
      const json& t = v.at("tolerances");
      check_keys(t, {"partition", "calderon", "crossTerm"}, "tolerances");
      if (t.contains("partition")) {
        rc.tolerances.partition = t.at("partition").get<double>();
      }
      if (t.contains("calderon")) {
        rc.tolerances.calderon = t.at("calderon").get<double>();
      }
      if (t.contains("crossTerm")) {
        rc.tolerances.crossTerm = t.at("crossTerm").get<double>();
      }
    }
  }
  if (const char* env = std::getenv("DUALFRAME_SEED")) {
    rc.seed = std::strtoull(env, nullptr, 10);
  }

  if (config.contains("transform")) {
    const json& t = config.at("transform");
    check_keys(t, {"grid", "jRange", "kWindow", "dropTol", "signal"},
               "transform");
    TransformConfig tc;
    if (!t.contains("grid")) throw InvalidConfig("transform needs 'grid'");
    const json& g = t.at("grid");
    check_keys(g, {"extents", "pointsPerAxis"}, "transform.grid");
    if (!g.contains("extents") || !g.contains("pointsPerAxis")) {
      throw InvalidConfig("grid needs 'extents' and 'pointsPerAxis'");
    }
    const json& e = g.at("extents");
    if (!e.is_array() || e.empty()) {
      throw InvalidConfig("grid extents must be an array");
    }
    tc.extents = Eigen::VectorXd(static_cast<int>(e.size()));
    for (int i = 0; i < tc.extents.size(); ++i) {
      tc.extents(i) = e[i].get<double>();
    }
    tc.pointsPerAxis = g.at("pointsPerAxis").get<int>();
    if (!t.contains("jRange")) throw InvalidConfig("transform needs 'jRange'");
    const json& jr = t.at("jRange");
    if (!jr.is_array() || jr.size() != 2) {
      throw InvalidConfig("jRange must be [lo, hi]");
    }
    tc.jLo = jr[0].get<int>();
    tc.jHi = jr[1].get<int>();
    if (t.contains("kWindow")) tc.kWindow = t.at("kWindow").get<int>();
    if (t.contains("dropTol")) tc.dropTol = t.at("dropTol").get<double>();
    if (!t.contains("signal")) throw InvalidConfig("transform needs 'signal'");
    const json& s = t.at("signal");
    check_keys(s, {"type", "inner", "outer"}, "transform.signal");
    if (!s.contains("type")) throw InvalidConfig("signal needs 'type'");
    tc.signalType = s.at("type").get<std::string>();
    if (tc.signalType == "radialBump") {
      if (!s.contains("inner") || !s.contains("outer")) {
        throw InvalidConfig("radialBump signal needs 'inner' and 'outer'");
      }
      tc.inner = s.at("inner").get<double>();
      tc.outer = s.at("outer").get<double>();
      if (!(0.0 < tc.inner && tc.inner < tc.outer)) {
        throw InvalidConfig("radialBump needs 0 < inner < outer");
      }
    } else if (tc.signalType != "psi") {
      throw InvalidConfig("signal type must be radialBump or psi");
    }
    rc.transform = tc;
  }
  return rc;
}

// ---------------------------------------------------------------------------
// Construction from a parsed config

bool is_quincunx(const Eigen::MatrixXd& m) {
  if (m.rows() != 2 || m.cols() != 2) return false;
  Eigen::MatrixXd q(2, 2);
  q << 1.0, -1.0, 1.0, 1.0;
  return (m - q).cwiseAbs().maxCoeff() < 1e-12;
}

BandlimitedGenerator build_generator(const RunConfig& rc,
                                     const DilationMatrix& matrix,
                                     const AssociatedNorm& norm) {
  const GeneratorConfig& gc = *rc.generator;
  if (gc.type == "tent") {
    if (!is_quincunx(matrix.entries())) {
      throw InvalidConfig("tent generator requires the quincunx matrix");
    }
    return quincunx_tent_generator();
  }
  if (gc.type == "radial") {
    RadialProfile profile = RadialProfile::Cosine;
    if (gc.profile == "linear") profile = RadialProfile::Linear;
    if (gc.profile == "cubic") profile = RadialProfile::Cubic;
    return radial_profile_generator(norm, gc.c, profile);
  }
  return smooth_generator(norm, gc.c, gc.d);
}

LatticePair build_lattice(const RunConfig& rc, const DilationMatrix& matrix,
                          const AssociatedNorm& norm, int mUnder) {
  const LatticeConfig& lc = *rc.lattice;
  const int c = lc.c.value_or(rc.generator ? rc.generator->c : 1);
  if (lc.mode == "special") {
    return special_lattice(matrix, norm, c);
  }
  if (lc.mode == "crude") {
    const double bound = crude_lattice_norm_bound(matrix, norm, c, mUnder);
    const int n = matrix.dim();
    return lattice_pair(Lattice(bound * Eigen::MatrixXd::Identity(n, n)));
  }
  if (lc.mode == "hexagonal") {
    if (matrix.dim() != 2) {
      throw InvalidConfig("hexagonal lattice mode needs n = 2");
    }
    // Hexagonal packing of the support ellipsoid: generators of length 2 in
    // unit-ball coordinates.
    Eigen::MatrixXd hex(2, 2);
    hex << 2.0, 1.0, 0.0, std::sqrt(3.0);
    const Eigen::MatrixXd gammaStar =
        matrix_power(norm.B, c) * norm.eigQ *
        norm.eigLambda.cwiseSqrt().cwiseInverse().asDiagonal() * hex;
    Lattice star(gammaStar);
    Lattice gamma = dual_lattice(star);
    return LatticePair{std::move(gamma), std::move(star)};
  }
  return lattice_pair(Lattice(*lc.basis));
}

struct BuiltObjects {
  DilationMatrix matrix;
  AssociatedNorm norm;
  std::optional<BandlimitedGenerator> psi;
  std::optional<LatticePair> lattice;
  std::optional<DualCoefficients> coeffs;
  std::optional<DualFramePair> pair;
};

BuiltObjects build_objects(const RunConfig& rc, bool needPair,
                           bool strictPair) {
  BuiltObjects out{validate_expansive(rc.matrix),
                   AssociatedNorm{},
                   {},
                   {},
                   {},
                   {}};
  out.norm = build_associated_norm(out.matrix, rc.normKMax, rc.normTol);
  if (!needPair) return out;

  if (!rc.generator) throw InvalidConfig("config needs 'generator'");
  if (!rc.lattice) throw InvalidConfig("config needs 'lattice'");
  out.psi = build_generator(rc, out.matrix, out.norm);

  const int d = out.psi->support().d();
  DualCoefficients coeffs = DualCoefficients::special(d);
  if (rc.coefficients) {
    if (rc.coefficients->size() != 2 * d + 1) {
      throw InvalidConfig("coefficients must have 2d+1 entries");
    }
    coeffs.b = *rc.coefficients;
  }
  out.coeffs = coeffs;

  out.lattice = build_lattice(rc, out.matrix, out.norm, coeffs.m_under());
  out.pair = strictPair ? make_dual(*out.psi, coeffs, *out.lattice)
                        : make_dual_unchecked(*out.psi, coeffs, *out.lattice);
  return out;
}

// ---------------------------------------------------------------------------
// Report sections

json matrix_section(const DilationMatrix& m) {
  json out;
  out["entries"] = matrix_to_json(m.entries());
  out["dim"] = m.dim();
  out["detAbs"] = m.det_abs();
  json eigs = json::array();
  for (int i = 0; i < m.eigenvalues().size(); ++i) {
    eigs.push_back({{"re", m.eigenvalues()(i).real()},
                    {"im", m.eigenvalues()(i).imag()},
                    {"modulus", std::abs(m.eigenvalues()(i))}});
  }
  out["eigenvalues"] = std::move(eigs);
  return out;
}

json norm_section(const AssociatedNorm& n) {
  json out;
  out["K"] = matrix_to_json(n.K);
  out["k"] = n.k;
  out["lambda"] = n.lambda;
  out["eigenvalues"] = vector_to_json(n.eigLambda);
  out["eigenvectors"] = matrix_to_json(n.eigQ);
  out["maxSemiAxis"] = n.maxSemiAxis;
  return out;
}

json lattice_section(const LatticePair& p) {
  json out;
  out["gamma"] = {{"basis", matrix_to_json(p.gamma.basis())},
                  {"determinant", p.gamma.determinant()}};
  out["gammaStar"] = {{"basis", matrix_to_json(p.gammaStar.basis())},
                      {"determinant", p.gammaStar.determinant()}};
  return out;
}

json pair_section(const DualFramePair& pair) {
  json out;
  out["coefficients"] = vector_to_json(pair.coeffs.b);
  out["mOver"] = pair.coeffs.m_over();
  out["mUnder"] = pair.coeffs.m_under();
  out["psiSupport"] = {{"c", pair.psi.support().c()},
                       {"d", pair.psi.support().d()},
                       {"boundingRadius", pair.psi.support().bounding_radius()}};
  out["phiSupport"] = {{"c", pair.phi.support().c()},
                       {"d", pair.phi.support().d()},
                       {"boundingRadius", pair.phi.support().bounding_radius()}};
  // Time-domain weights of phi = sum_j w_j psi(A^{-j} x).
  json weights = json::array();
  const double dGamma = pair.lattice_determinant();
  const double detA = pair.psi.dilation().det_abs();
  for (int j = -pair.coeffs.m_under(); j <= pair.coeffs.m_over(); ++j) {
    weights.push_back({{"j", j},
                       {"weight", dGamma * pair.coeffs.at(j) *
                                      std::pow(detA, -double(j))}});
  }
  out["timeDomainWeights"] = std::move(weights);
  return out;
}

json verification_section(const VerificationReport& r) {
  json out;
  out["partitionMaxErr"] = r.partitionMaxErr;
  out["calderonMaxErr"] = r.calderonMaxErr;
  out["crossTermMaxAbs"] = r.crossTermMaxAbs;
  out["C1"] = r.c1;
  out["C2"] = r.c2;
  out["C1phi"] = r.c1Phi;
  out["C2phi"] = r.c2Phi;
  out["besselC2"] = r.besselC2;
  out["sampleCount"] = r.sampleCount;
  out["seed"] = r.seed;
  out["tolerances"] = {{"partition", r.tolerances.partition},
                       {"calderon", r.tolerances.calderon},
                       {"crossTerm", r.tolerances.crossTerm}};
  out["passed"] = {{"partition", r.partitionPassed},
                   {"calderon", r.calderonPassed},
                   {"crossTerm", r.crossTermPassed},
                   {"bounds", r.boundsPassed}};
  out["allPassed"] = r.all_passed();
  return out;
}

json base_report(const char* command, const json& config) {
  json report;
  report["schemaVersion"] = "1";
  report["command"] = command;
  report["config"] = config;
  return report;
}

CommandResult guarded(const char* command, const json& config,
                      const std::function<void(json&)>& body) {
  CommandResult result;
  result.report = base_report(command, config);
  const auto start = Clock::now();
  try {
    body(result.report);
  } catch (const SeparationFailure& e) {
    result.exitCode = 1;
    result.error = std::string("separation failure: ") + e.what();
  } catch (const Error& e) {
    result.exitCode = 2;
    result.error = e.what();
  } catch (const json::exception& e) {
    result.exitCode = 2;
    result.error = std::string("config error: ") + e.what();
  }
  result.report["timings"] = {{"totalMs", elapsed_ms(start)}};
  if (!result.error.empty()) result.report["error"] = result.error;
  return result;
}

std::complex<double> radial_bump(const Eigen::VectorXd& xi, double inner,
                                 double outer) {
  const double r = xi.norm();
  auto eta = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  // Normalized so the peak is O(1).
  return {eta(r - inner) * eta(outer - r) *
              std::exp(4.0 / (outer - inner)),
          0.0};
}

}  // namespace

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot read config file: " + path);
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    throw InvalidConfig("config is not valid JSON: " + std::string(e.what()));
  }
  return config;
}

CommandResult run_inspect(const json& config, const RunOptions&) {
  return guarded("inspect", config, [&](json& report) {
    const RunConfig rc = parse_config(config);
    const BuiltObjects built = build_objects(rc, false, false);
    report["matrix"] = matrix_section(built.matrix);
    report["norm"] = norm_section(built.norm);
  });
}

CommandResult run_build(const json& config, const RunOptions&) {
  return guarded("build", config, [&](json& report) {
    const RunConfig rc = parse_config(config);
    const BuiltObjects built = build_objects(rc, true, true);
    report["matrix"] = matrix_section(built.matrix);
    report["norm"] = norm_section(built.norm);
    report["lattice"] = lattice_section(*built.lattice);
    report["pair"] = pair_section(*built.pair);
  });
}

CommandResult run_verify(const json& config, const RunOptions& opts) {
  bool passed = true;
  CommandResult result = guarded("verify", config, [&](json& report) {
    const RunConfig rc = parse_config(config);
    const BuiltObjects built = build_objects(rc, true, false);
    report["matrix"] = matrix_section(built.matrix);
    report["norm"] = norm_section(built.norm);
    report["lattice"] = lattice_section(*built.lattice);
    report["pair"] = pair_section(*built.pair);

    SampleSpec spec{rc.samples, rc.seed, built.pair->psi.support(),
                    opts.parallel};
    const VerificationReport vr =
        full_report(*built.pair, spec, rc.tolerances);
    report["verification"] = verification_section(vr);
    passed = vr.all_passed();
  });
  if (result.exitCode == 0 && !passed) {
    result.exitCode = 1;
    result.error = "verification failed";
    result.report["error"] = result.error;
  }
  return result;
}

CommandResult run_transform(const json& config, const RunOptions&) {
  return guarded("transform", config, [&](json& report) {
    const RunConfig rc = parse_config(config);
    if (!rc.transform) throw InvalidConfig("config needs 'transform'");
    const BuiltObjects built = build_objects(rc, true, true);
    report["matrix"] = matrix_section(built.matrix);
    report["lattice"] = lattice_section(*built.lattice);

    const TransformConfig& tc = *rc.transform;
    if (static_cast<int>(tc.extents.size()) != built.matrix.dim()) {
      throw InvalidConfig("grid extents dimension must match the matrix");
    }
    const DualFramePair& pair = *built.pair;
    auto signal = [&](const Eigen::VectorXd& xi) -> std::complex<double> {
      if (tc.signalType == "psi") return {pair.psi(xi), 0.0};
      return radial_bump(xi, tc.inner, tc.outer);
    };
    const FrequencyGrid fhat =
        FrequencyGrid::from_function(tc.extents, tc.pointsPerAxis, signal);
    AnalyzeOptions opt{tc.jLo, tc.jHi, tc.kWindow, tc.dropTol};
    const RoundtripResult rt = roundtrip_error(fhat, pair, opt);
    report["transform"] = {{"relErr", rt.relErr},
                           {"coverage", rt.coverage},
                           {"coverageWarning", rt.coverageWarning},
                           {"coefficientCount", rt.coefficientCount},
                           {"pointsPerAxis", tc.pointsPerAxis},
                           {"kWindow", tc.kWindow},
                           {"jRange", {tc.jLo, tc.jHi}}};
  });
}

namespace {

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidConfig("cannot write file: " + path);
  out << header << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      out << buf << (i + 1 == row.size() ? "" : ",");
    }
    out << "\n";
  }
}

}  // namespace

CommandResult run_export(const json& config, const RunOptions& opts) {
  return guarded("export", config, [&](json& report) {
    if (opts.outPath.empty()) throw InvalidConfig("export needs --out");
    if (opts.what.empty()) throw InvalidConfig("export needs --what");
    const int res = opts.resolution;
    if (res < 2) throw InvalidConfig("resolution must be >= 2");
    const RunConfig rc = parse_config(config);

    if (opts.what == "shells") {
      const BuiltObjects built = build_objects(rc, false, false);
      if (built.matrix.dim() != 2) {
        throw InvalidConfig("shells export needs n = 2");
      }
      std::vector<std::vector<double>> rows;
      for (int m = 0; m <= 3; ++m) {
        const Eigen::MatrixXd bm =
            matrix_power(built.norm.B, -m).transpose() * built.norm.K *
            matrix_power(built.norm.B, -m);
        for (int i = 0; i < res; ++i) {
          const double theta = 2.0 * 3.14159265358979323846 * i / res;
          Eigen::VectorXd u(2);
          u << std::cos(theta), std::sin(theta);
          const double r = 1.0 / std::sqrt(u.dot(bm * u));
          rows.push_back({double(m), r * u(0), r * u(1)});
        }
      }
      write_csv(opts.outPath, "shell,x1,x2", rows);
      report["export"] = {{"what", "shells"}, {"rows", rows.size()}};
      return;
    }

    if (opts.what == "lattice") {
      const BuiltObjects built = build_objects(rc, true, true);
      std::vector<std::vector<double>> rows;
      const int n = built.matrix.dim();
      auto emit = [&](const Lattice& l, double tag) {
        Eigen::VectorXi k = Eigen::VectorXi::Constant(n, -res);
        while (true) {
          const Eigen::VectorXd p = l.point(k);
          std::vector<double> row{tag};
          for (int i = 0; i < n; ++i) row.push_back(double(k(i)));
          for (int i = 0; i < n; ++i) row.push_back(p(i));
          rows.push_back(std::move(row));
          int axis = 0;
          while (axis < n && k(axis) == res) {
            k(axis) = -res;
            ++axis;
          }
          if (axis == n) break;
          ++k(axis);
        }
      };
      emit(built.lattice->gamma, 0.0);
      emit(built.lattice->gammaStar, 1.0);
      std::string header = "lattice";
      for (int i = 1; i <= n; ++i) header += ",k" + std::to_string(i);
      for (int i = 1; i <= n; ++i) header += ",x" + std::to_string(i);
      write_csv(opts.outPath, header, rows);
      report["export"] = {{"what", "lattice"}, {"rows", rows.size()}};
      return;
    }

    if (opts.what != "psi" && opts.what != "phi") {
      throw InvalidConfig("--what must be psi, phi, shells or lattice");
    }
    const BuiltObjects built = build_objects(rc, true, true);
    const BandlimitedGenerator& gen =
        opts.what == "psi" ? built.pair->psi : built.pair->phi;
    const int n = built.matrix.dim();
    if (n > 2) throw InvalidConfig("grid export needs n <= 2");
    const Eigen::VectorXd hw = gen.support().support_box_halfwidths();
    std::vector<std::vector<double>> rows;
    if (n == 1) {
      for (int i = 0; i < res; ++i) {
        Eigen::VectorXd xi(1);
        xi << -hw(0) + 2.0 * hw(0) * i / (res - 1);
        rows.push_back({xi(0), gen(xi)});
      }
      write_csv(opts.outPath, "x1,value", rows);
    } else {
      for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) {
          Eigen::VectorXd xi(2);
          xi << -hw(0) + 2.0 * hw(0) * i / (res - 1),
              -hw(1) + 2.0 * hw(1) * j / (res - 1);
          rows.push_back({xi(0), xi(1), gen(xi)});
        }
      }
      write_csv(opts.outPath, "x1,x2,value", rows);
    }
    report["export"] = {{"what", opts.what}, {"rows", rows.size()}};
  });
}

}  // namespace dualframe::cli
