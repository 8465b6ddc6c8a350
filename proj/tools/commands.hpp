#pragma once

// Subcommand implementations for the tdho tool. Each returns a process exit
// code (0 ok, 1 a verification failed, 2 bad configuration) and writes a
// human-readable log to the given stream.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tdho/tdho.hpp"

namespace tdho::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2 };

/// Which oscillator to run, and its parameters.
struct FamilyParams {
  std::string family = "linear-mass";
  double m0 = 1.0;
  double mu = 1.0;
  double omega0 = 1.0;
  double Omega0 = 0.0;
  double eps = 1e-3;
  double t_end = std::numeric_limits<double>::quiet_NaN();
  std::string profile_path;
};

struct BuiltProfile {
  ParamProfile profile;
  std::optional<SolvableSpec> spec;  // set for the solvable families
};

inline double default_t_end(const std::string& family) {
  return (family == "condi" || family == "condi-g") ? 1.5 : 2.0;
}

inline BuiltProfile make_profile(const FamilyParams& fp) {
  const double t_end = std::isnan(fp.t_end) ? default_t_end(fp.family) : fp.t_end;
  const auto freq = [w = fp.omega0](double) { return w; };
  const auto freq_rate = [](double) { return 0.0; };
  if (fp.family == "linear-mass") return {ParamProfile::linear_mass(fp.m0, fp.mu, fp.omega0, {0.0, t_end}), {}};
  if (fp.family == "constant") return {ParamProfile::constant(fp.m0, fp.omega0, {0.0, t_end}), {}};
  if (fp.family == "exact-adiabatic")
    return {ParamProfile::exact_adiabatic(fp.m0, fp.mu, fp.m0 * fp.omega0, {0.0, t_end}), {}};
  if (fp.family == "condi") {
    if (!(fp.omega0 > 0)) throw Error(ErrorKind::InvalidSpec, "omega0 must be positive");
    auto fam = build_condi_family(freq, fp.m0, {fp.eps, t_end}, freq_rate);
    return {fam.profile, fam.spec};
  }
  if (fp.family == "condi-g") {
    if (!(fp.omega0 > 0)) throw Error(ErrorKind::InvalidSpec, "omega0 must be positive");
    auto fam = build_condi_g_family(freq, SolvableSpec::generalized_from_m0(fp.m0, fp.Omega0),
                                    {fp.eps, t_end}, freq_rate);
    return {fam.profile, fam.spec};
  }
  if (fp.family == "tabulated") {
    if (fp.profile_path.empty())
      throw Error(ErrorKind::ConfigError, "tabulated family needs --profile PATH");
    std::ifstream in(fp.profile_path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + fp.profile_path);
    return {read_profile_csv(in), {}};
  }
  throw Error(ErrorKind::ConfigError, "unknown family '" + fp.family + "'");
}

/// "a:b:step" -> a, a+step, ..., up to b (inclusive within rounding).
inline std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = io::split(spec, ':');
  if (parts.size() != 3) throw Error(ErrorKind::ConfigError, "grid must be a:b:step");
  double v[3];
  for (int i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      v[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "bad grid component '" + parts[i] + "'");
    }
  }
  const double a = v[0], b = v[1], step = v[2];
  if (!(step > 0) || !std::isfinite(a) || !std::isfinite(b) || !(b >= a))
    throw Error(ErrorKind::ConfigError, "grid needs a <= b and step > 0");
  const long n = static_cast<long>(std::floor((b - a) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) grid.push_back(a + static_cast<double>(i) * step);
  return grid;
}

inline std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  for (const auto& s : io::split(spec, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "bad integer '" + s + "' in list");
    }
  }
  if (out.empty()) throw Error(ErrorKind::ConfigError, "empty list");
  return out;
}

/// Resolved parameters of a run, echoed as `# key=value` lines and hashed.
class RunRecord {
 public:
  explicit RunRecord(std::string command) : command_(std::move(command)) {}

  RunRecord& add(const std::string& key, const std::string& value) {
    items_.emplace_back(key, value);
    return *this;
  }
  RunRecord& add(const std::string& key, double value) { return add(key, io::format_double(value)); }
  RunRecord& add(const std::string& key, int value) { return add(key, std::to_string(value)); }

  std::string hash() const {
    std::string canon = command_;
    for (const auto& [k, v] : items_) canon += '\n' + k + '=' + v;
    return io::hex64(io::fnv1a(canon));
  }

  void write_header(std::ostream& out) const {
    out << "# tdho " << kVersion << '\n';
    out << "# command=" << command_ << '\n';
    out << "# config_hash=" << hash() << '\n';
    for (const auto& [k, v] : items_) out << "# " << k << '=' << v << '\n';
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> items_;
};

inline void record_family(RunRecord& rec, const FamilyParams& fp) {
  rec.add("family", fp.family);
  if (fp.family == "tabulated") {
    rec.add("profile", fp.profile_path);
    return;
  }
  rec.add("m0", fp.m0).add("mu", fp.mu).add("omega0", fp.omega0).add("Omega0", fp.Omega0);
  rec.add("eps", fp.eps).add("t_end", std::isnan(fp.t_end) ? default_t_end(fp.family) : fp.t_end);
}

inline std::ofstream open_output(const std::string& path) {
  if (path.empty()) throw Error(ErrorKind::ConfigError, "--out is required");
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  return out;
}

inline int report_error(std::ostream& log, const Error& e) {
  log << "error: " << e.what() << '\n';
  return kConfigError;
}

// ---------------------------------------------------------------------------
// figure1: Omega'^2(t') of the linear-mass oscillator m = m0 + mu t.

struct Figure1Config {
  double m0 = 1.0;
  double mu = 1.0;
  double omega0 = 1.0;
  std::string grid = "0.05:1.0:0.005";
  std::string out = "figure1.csv";
  double sing_tol = 1e-8;
  bool script = true;
};

struct Figure1Row {
  double t_prime, m_prime, pipeline, closed_form;
  int segment;
};

inline std::vector<Figure1Row> figure1_rows(const Figure1Config& cfg,
                                            std::vector<double>* singular_points = nullptr) {
  if (!(cfg.m0 > 0) || !(cfg.mu > 0) || !(cfg.omega0 > 0))
    throw Error(ErrorKind::ConfigError, "m0, mu, omega0 must be positive");
  if (!(cfg.sing_tol > 0)) throw Error(ErrorKind::ConfigError, "sing_tol must be positive");
  const auto grid = parse_grid(cfg.grid);
  const double k0 = 0.5 * std::log(cfg.m0 * cfg.omega0);
  if (grid.front() < k0)
    throw Error(ErrorKind::ConfigError,
                "grid starts before t' = kappa(0) = " + io::format_double(k0));
  // t' = kappa(t) inverted exactly for the domain end
  const double t_hi = (std::exp(2 * grid.back()) / cfg.omega0 - cfg.m0) / cfg.mu;
  const double t_end = std::max(t_hi * (1 + 1e-9) + 1e-9, 1e-6);
  const auto profile = ParamProfile::linear_mass(cfg.m0, cfg.mu, cfg.omega0, {0.0, t_end});
  const Reparam rp = build_reparam(profile);
  const Segmentation seg = segment_chain(rp);
  if (singular_points) *singular_points = seg.singular_points;
  ChainOptions opts;
  opts.sing_tol = cfg.sing_tol;
  std::vector<Figure1Row> rows;
  rows.reserve(grid.size());
  for (double tp : grid) {
    const double s = std::sin(2 * rp.delta_tilde(tp));
    if (!(std::abs(s) > cfg.sing_tol))
      throw Error(ErrorKind::ConfigError,
                  "grid point t'=" + io::format_double(tp) + " sits on a singularity of m'");
    rows.push_back({tp, generalized_osc(rp, tp, opts).m_prime, omega_prime_sq(rp, tp, opts),
                    linear_mass_printed_omega_prime_sq(cfg.m0, cfg.mu, cfg.omega0, tp),
                    seg.segment_of(tp)});
  }
  return rows;
}

inline void write_figure1_script(std::ostream& gp, const std::string& csv_path,
                                 const std::vector<double>& singular_points) {
  gp << "# gnuplot script; usage: gnuplot -p " << csv_path << ".gp\n";
  gp << "set datafile separator ','\n";
  gp << "set key autotitle columnhead\n";
  gp << "set xlabel \"t'\"\n";
  gp << "set ylabel \"Omega'^2\"\n";
  gp << "set yrange [-20:20]\n";
  gp << "set grid\n";
  for (double z : singular_points)
    gp << "set arrow from " << io::format_double(z) << ", graph 0 to " << io::format_double(z)
       << ", graph 1 nohead dashtype 2\n";
  gp << "plot '" << csv_path << "' using 1:3 with lines lw 2, \\\n";
  gp << "     '' using 1:4 with lines dashtype 3\n";
}

inline int cmd_figure1(const Figure1Config& cfg, std::ostream& log) {
  try {
    std::vector<double> singular;
    const auto rows = figure1_rows(cfg, &singular);
    RunRecord rec("figure1");
    rec.add("m0", cfg.m0).add("mu", cfg.mu).add("omega0", cfg.omega0).add("grid", cfg.grid);
    rec.add("sing_tol", cfg.sing_tol);
    auto out = open_output(cfg.out);
    rec.write_header(out);
    out << "t_prime,m_prime,omega_prime_sq_pipeline,omega_prime_sq_reference_closed_form,"
           "segment_index\n";
    for (const auto& r : rows)
      out << io::format_double(r.t_prime) << ',' << io::format_double(r.m_prime) << ','
          << io::format_double(r.pipeline) << ',' << io::format_double(r.closed_form) << ','
          << r.segment << '\n';
    if (cfg.script) {
      std::ofstream gp(cfg.out + ".gp");
      write_figure1_script(gp, cfg.out, singular);
    }

    // sign of Omega'^2 per segment, in grid order
    std::vector<std::pair<int, int>> signs;  // (segment, sign)
    bool uniform = true;
    for (const auto& r : rows) {
      const int sg = r.pipeline > 0 ? 1 : -1;
      if (signs.empty() || signs.back().first != r.segment) {
        signs.emplace_back(r.segment, sg);
      } else if (signs.back().second != sg) {
        uniform = false;
      }
    }
    bool alternates = uniform;
    for (std::size_t i = 1; i < signs.size(); ++i)
      alternates = alternates && signs[i].second != signs[i - 1].second;
    log << "wrote " << rows.size() << " rows to " << cfg.out << '\n';
    log << "singular points of m' (t'):";
    for (double z : singular) log << ' ' << io::format_double(z);
    log << '\n';
    log << "sign of Omega'^2 alternates between singular points: " << (alternates ? "yes" : "no")
        << '\n';
    return kOk;
  } catch (const Error& e) {
    return report_error(log, e);
  }
}

// ---------------------------------------------------------------------------
// verify: factorization, connection matrix, route equivalence, classical.

struct VerifyConfig {
  FamilyParams family{};
  int N = 60;
  int K = 16;
  std::optional<double> t{};
  double step_tol = 1e-8;
  double threshold_factorization = 1e-3;
  double threshold_amn = 1e-6;
  double threshold_routes = 1e-6;
  double threshold_wronskian = 1e-7;
  double threshold_classical = 1e-6;
  double threshold_det = 1e-10;
  double threshold_adiabatic = 1e-8;
};

struct CheckResult {
  std::string name;
  double value;
  double threshold;
  bool pass() const { return value < threshold; }
};

/// max |S^dagger (S(t+h) - S(t-h))/2h - A(t)| over sample times in the
/// interior of the domain.
inline double amn_fd_defect(const Reparam& rp, int N, int samples = 10, double h = 1e-5) {
  const Interval d = rp.domain();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = d.lo + 2 * h + (d.length() - 4 * h) * (i + 0.5) / samples;
    const double k0 = rp.kappa0();
    const auto S = instantaneous_basis<double>(N, rp.kappa(t), k0, 10.0).entries;
    const auto Sp = instantaneous_basis<double>(N, rp.kappa(t + h), k0, 10.0).entries;
    const auto Sm = instantaneous_basis<double>(N, rp.kappa(t - h), k0, 10.0).entries;
    const CMatrix<double> fd = S.adjoint() * (Sp - Sm) / (2 * h);
    const Eigen::MatrixXd A = amn_matrix(rp, t, N);
    worst = std::max(worst, (fd - A.cast<std::complex<double>>()).cwiseAbs().maxCoeff());
  }
  return worst;
}

struct RouteDefects {
  double canonical_shift = 0.0;  // vs omega_prime_sq
  double universal = 0.0;        // vs omega_prime_sq where cos 2delta~ > 0
  int points = 0;
  int universal_points = 0;
};

/// Compares the three routes to Omega'^2 at `per_segment` points of each
/// segment (cell midpoints, which never hit a singular point).
inline RouteDefects route_defects(const Reparam& rp, int per_segment = 100,
                                  const ChainOptions& opts = {}) {
  RouteDefects out;
  const auto seg = segment_chain(rp);
  for (const auto& s : seg.segments) {
    for (int i = 0; i < per_segment; ++i) {
      const double tp = s.lo + s.length() * (i + 0.5) / per_segment;
      const double direct = omega_prime_sq(rp, tp, opts);
      const auto shifted = canonical_shift(generalized_osc(rp, tp, opts),
                                           beta_over_alpha_rate(rp, tp, opts));
      out.canonical_shift = std::max(out.canonical_shift, std::abs(shifted.Omega_prime_sq - direct));
      ++out.points;
      if (std::cos(2 * rp.delta_tilde(tp)) > 0) {
        const auto uni = universal_form(rp, tp, opts);
        out.universal = std::max(out.universal, std::abs(uni.Omega_sq - direct));
        ++out.universal_points;
      }
    }
  }
  return out;
}

/// Classical checks over [domain.lo, t]: Wronskian drift of two solutions,
/// and the chain residual on the part of the trajectory inside the segment
/// of kappa(t) (from 5% into the segment when it starts at a singular point).
struct ClassicalDefects {
  double wronskian = 0.0;
  double residual = 0.0;
  double det = 0.0;
};

inline ClassicalDefects classical_defects(const Reparam& rp, double t, double ode_tol = 1e-10,
                                          int samples = 200) {
  const Interval d = rp.domain();
  ClassicalDefects out;
  std::vector<double> grid;
  for (int i = 0; i <= samples; ++i) grid.push_back(d.lo + (t - d.lo) * i / samples);
  grid.back() = t;
  const auto a = solve_classical(rp.profile(), 1.0, 0.0, {d.lo, t}, ode_tol, grid);
  const auto b = solve_classical(rp.profile(), 0.0, 1.0, {d.lo, t}, ode_tol, grid);
  out.wronskian = wronskian_drift(a, b);

  double t_start = d.lo;
  if (!rp.exact_adiabatic()) {
    const auto seg = segment_chain(rp);
    const int idx = seg.segment_of(rp.kappa(t));
    if (idx < 0) throw Error(ErrorKind::SegmentViolation, "t sits on a singular point", t);
    const Interval s = seg.segments[idx];
    double tp_start = std::max(s.lo, rp.kappa(d.lo));
    if (seg.is_singular(s.lo) && tp_start == s.lo) tp_start = s.lo + 0.05 * (rp.kappa(t) - s.lo);
    t_start = rp.inverse(tp_start);
  }
  std::vector<double> inner;
  for (int i = 0; i <= samples; ++i) inner.push_back(t_start + (t - t_start) * i / samples);
  inner.back() = t;
  const auto c = solve_classical(rp.profile(), 0.3, 0.7, {d.lo, t}, ode_tol, inner);
  const auto mapped = map_through_chain(c, rp);
  out.residual = mapped.residual;
  out.det = mapped.det_defect;
  return out;
}

inline int cmd_verify(const VerifyConfig& cfg, std::ostream& log) {
  try {
    if (cfg.N < 2) throw Error(ErrorKind::ConfigError, "N must be at least 2");
    if (cfg.K < 1) throw Error(ErrorKind::ConfigError, "trusted block must be at least 1");
    if (!(cfg.step_tol > 0)) throw Error(ErrorKind::ConfigError, "step_tol must be positive");
    const auto built = make_profile(cfg.family);
    const auto& profile = built.profile;
    const Interval dom = profile.domain();
    const double t = cfg.t.value_or(dom.lo + 0.25 * dom.length());
    const Reparam frame = build_frame(profile);
    if (!frame.exact_adiabatic() && !frame.invertible()) build_reparam(profile);

    std::vector<CheckResult> checks;
    log << "family " << cfg.family.family << " on [" << io::format_double(dom.lo) << ", "
        << io::format_double(dom.hi) << "], t = " << io::format_double(t) << '\n';

    FactorizationOptions fo;
    fo.N = cfg.N;
    fo.K = cfg.K;
    fo.step.step_tol = cfg.step_tol;
    if (built.spec) fo.closed_form_Omega0 = built.spec->Omega0;
    const auto rep = check_factorization_uuu(profile, t, fo);
    const int K = rep.K;
    log << "factorization N=" << rep.N << " K=" << K << " steps=" << rep.steps << '\n';
    if (frame.exact_adiabatic()) {
      log << "chain: ExactAdiabatic (kappa_dot = 0); chain checks skipped\n";
      checks.push_back({"factorization_U_vs_U0", rep.defect_uuu, cfg.threshold_adiabatic});
    } else {
      checks.push_back({"factorization_uuu", rep.defect_uuu, cfg.threshold_factorization});
      checks.push_back({"factorization_uu_prime", rep.defect_uu_prime, cfg.threshold_factorization});
      if (!std::isnan(rep.defect_closed_form))
        checks.push_back({"closed_form_u_prime", rep.defect_closed_form, cfg.threshold_factorization});
    }
    checks.push_back({"unitarity", rep.unitarity_defect, 1e-6});
    checks.push_back({"amn_finite_difference", amn_fd_defect(frame, std::min(cfg.N, 20)),
                      cfg.threshold_amn});
    if (!frame.exact_adiabatic()) {
      const auto routes = route_defects(frame);
      checks.push_back({"route_canonical_shift", routes.canonical_shift, cfg.threshold_routes});
      checks.push_back({"route_universal_form", routes.universal, cfg.threshold_routes});
    }
    const auto cl = classical_defects(frame, t);
    checks.push_back({"classical_wronskian", cl.wronskian, cfg.threshold_wronskian});
    checks.push_back({frame.exact_adiabatic() ? "classical_frame_drift" : "classical_chain_residual",
                      cl.residual,
                      frame.exact_adiabatic() ? cfg.threshold_adiabatic : cfg.threshold_classical});
    checks.push_back({"classical_map_determinant", cl.det, cfg.threshold_det});

    bool ok = true;
    for (const auto& c : checks) {
      ok = ok && c.pass();
      log << std::left << std::setw(28) << c.name << ' ' << std::setw(24)
          << io::format_double(c.value) << " < " << std::setw(8) << io::format_double(c.threshold)
          << ' ' << (c.pass() ? "PASS" : "FAIL") << '\n';
    }
    log << (ok ? "all checks passed" : "some checks FAILED") << '\n';
    return ok ? kOk : kVerificationFailed;
  } catch (const Error& e) {
    return report_error(log, e);
  }
}

// ---------------------------------------------------------------------------
// family: tabulate a solvable family.

inline FamilyParams condi_params() {
  FamilyParams fp;
  fp.family = "condi";
  return fp;
}

struct FamilyConfig {
  FamilyParams family = condi_params();
  int samples = 301;
  std::string out = "family.csv";
};

inline int cmd_family(const FamilyConfig& cfg, std::ostream& log) {
  try {
    const auto& fp = cfg.family;
    if (fp.family != "condi" && fp.family != "condi-g")
      throw Error(ErrorKind::ConfigError, "family must be condi or condi-g");
    if (cfg.samples < 4) throw Error(ErrorKind::ConfigError, "need at least 4 samples");
    const auto built = make_profile(fp);
    const Interval dom = built.profile.domain();
    std::vector<double> times;
    for (int i = 0; i < cfg.samples; ++i)
      times.push_back(i + 1 == cfg.samples ? dom.hi
                                           : dom.lo + dom.length() * i / (cfg.samples - 1));
    const SolvableFamily fam{built.profile, *built.spec};
    const double residual = family_chain_residual(fam);

    RunRecord rec("family");
    record_family(rec, fp);
    rec.add("samples", cfg.samples);
    auto out = open_output(cfg.out);
    rec.write_header(out);
    write_profile_csv(out, built.profile, times);

    std::ofstream meta(cfg.out + ".meta.txt");
    meta << "family " << fp.family << '\n';
    meta << "m0 " << io::format_double(fam.spec.m0) << '\n';
    meta << "Omega0 " << io::format_double(fam.spec.Omega0) << '\n';
    meta << "zeta " << io::format_double(fam.spec.zeta) << '\n';
    meta << "kappa0 " << io::format_double(fam.spec.kappa0) << '\n';
    meta << "eps " << io::format_double(dom.lo) << '\n';
    meta << "t_end " << io::format_double(dom.hi) << '\n';
    meta << (fam.spec.Omega0 > 0 ? "chain_residual_abs_OmegaSq_mSq_minus_Omega0Sq "
                                 : "chain_residual_abs_OmegaSq ")
         << io::format_double(residual) << '\n';
    meta << "config_hash " << rec.hash() << '\n';
    log << "wrote " << times.size() << " samples to " << cfg.out << " (chain residual "
        << io::format_double(residual) << ")\n";
    return kOk;
  } catch (const Error& e) {
    return report_error(log, e);
  }
}

// ---------------------------------------------------------------------------
// equivalence: factorization defects against the truncation N.

struct EquivalenceConfig {
  FamilyParams family{};
  double t = 0.5;
  std::string n_list = "40,60,80";
  int K = 16;
  double step_tol = 1e-8;
  bool allow_cross_segment = false;
  std::string out = "equivalence.csv";
};

inline int cmd_equivalence(const EquivalenceConfig& cfg, std::ostream& log) {
  try {
    const auto Ns = parse_int_list(cfg.n_list);
    if (cfg.K < 1) throw Error(ErrorKind::ConfigError, "trusted block must be at least 1");
    const auto built = make_profile(cfg.family);
    std::vector<FactorizationReport> reports;
    for (int N : Ns) {
      if (N < 2) throw Error(ErrorKind::ConfigError, "N must be at least 2");
      FactorizationOptions fo;
      fo.N = N;
      fo.K = cfg.K;
      fo.step.step_tol = cfg.step_tol;
      fo.allow_cross_segment = cfg.allow_cross_segment;
      reports.push_back(check_factorization_uuu(built.profile, cfg.t, fo));
    }
    RunRecord rec("equivalence");
    record_family(rec, cfg.family);
    rec.add("t", cfg.t).add("n_list", cfg.n_list).add("trusted_block", cfg.K);
    rec.add("step_tol", cfg.step_tol).add("allow_cross_segment", cfg.allow_cross_segment ? "1" : "0");
    auto out = open_output(cfg.out);
    rec.write_header(out);
    out << "N,defect_uuu,defect_uu_prime,unitarity_defect\n";
    bool decreasing = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      out << r.N << ',' << io::format_double(r.defect_uuu) << ','
          << io::format_double(r.defect_uu_prime) << ',' << io::format_double(r.unitarity_defect)
          << '\n';
      if (i > 0) decreasing = decreasing && r.defect_uuu < reports[i - 1].defect_uuu;
    }
    log << "wrote " << reports.size() << " rows to " << cfg.out << "; defect_uuu "
        << (decreasing ? "strictly decreases" : "does not strictly decrease") << " over N\n";
    return kOk;
  } catch (const Error& e) {
    return report_error(log, e);
  }
}

}  // namespace tdho::cli
