// crcurv: prescribed Webster curvature analysis on the CR three-sphere.
//
// Subcommands
//   calibrate        measure the normalization constants, emit the block
//   analyze          full existence pipeline (geometric or abstract mode)
//   verify           profile / Green / functional self-checks, pass-fail
//   flow             reduced concentration dynamics over admissible tuples
//   export-abstract  write the critical-point data as an abstract data file
//
// Settings resolve in three layers: built-in defaults, then a --config file
// of 'key = value' lines, then explicit flags. Reports are JSON on stdout
// (or --out); human-readable progress goes to stderr so redirections stay
// clean. Exit codes: 0 success, 1 verification failure, and one code per
// library error category (see exit_code_for).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "crcurv/abstract_io.hpp"
#include "crcurv/bubbles.hpp"
#include "crcurv/criterion.hpp"
#include "crcurv/curvature.hpp"
#include "crcurv/errors.hpp"
#include "crcurv/flow.hpp"
#include "crcurv/geometry.hpp"
#include "crcurv/heisenberg.hpp"
#include "crcurv/numerics.hpp"
#include "crcurv/report.hpp"
#include "crcurv/sphere.hpp"

namespace {

using namespace crcurv;

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::input: return 2;
    case Errc::calibration: return 3;
    case Errc::c0_violation: return 4;
    case Errc::c1_violation: return 5;
    case Errc::consistency: return 6;
    case Errc::quadrature: return 7;
    case Errc::domain: return 8;
    case Errc::internal: return 9;
  }
  return 9;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::input: return "input";
    case Errc::calibration: return "calibration";
    case Errc::c0_violation: return "C0 violation";
    case Errc::c1_violation: return "C1 violation";
    case Errc::consistency: return "consistency";
    case Errc::quadrature: return "quadrature";
    case Errc::domain: return "domain";
    case Errc::internal: return "internal";
  }
  return "internal";
}

struct RunSettings {
  std::string mode = "geometric";
  std::string k_expr;
  std::string data;
  std::uint64_t seed = 0;
  int refine = 64;
  std::string out;
  std::string csv;
  std::string tuple;
  int samples = 200;
  int multistart = 200;
  double c0_tol = 1e-8;
  double c1_tol = 1e-8;
  double grad_tol = 1e-10;
  double degen_tol = 1e-6;
};

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(Errc::input, where + ": expected a number, got '" + text + "'");
  }
}

long long parse_int(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(Errc::input, where + ": expected an integer, got '" + text + "'");
  }
}

void apply_setting(RunSettings& cfg, const std::string& key, const std::string& value,
                   const std::string& where) {
  if (key == "mode")
    cfg.mode = value;
  else if (key == "k-expr")
    cfg.k_expr = value;
  else if (key == "data")
    cfg.data = value;
  else if (key == "seed")
    cfg.seed = static_cast<std::uint64_t>(parse_int(value, where));
  else if (key == "refine")
    cfg.refine = static_cast<int>(parse_int(value, where));
  else if (key == "out")
    cfg.out = value;
  else if (key == "csv")
    cfg.csv = value;
  else if (key == "tuple")
    cfg.tuple = value;
  else if (key == "samples")
    cfg.samples = static_cast<int>(parse_int(value, where));
  else if (key == "multistart")
    cfg.multistart = static_cast<int>(parse_int(value, where));
  else if (key == "c0-tol")
    cfg.c0_tol = parse_double(value, where);
  else if (key == "c1-tol")
    cfg.c1_tol = parse_double(value, where);
  else if (key == "grad-tol")
    cfg.grad_tol = parse_double(value, where);
  else if (key == "degen-tol")
    cfg.degen_tol = parse_double(value, where);
  else
    fail(Errc::input, where + ": unknown configuration key '" + key + "'");
}

void apply_config_file(const std::string& path, RunSettings& cfg) {
  std::ifstream in(path);
  if (!in) fail(Errc::input, "cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::input, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(Errc::input, where + ": empty key");
    apply_setting(cfg, key, value, where);
  }
}

void validate_settings(const RunSettings& cfg) {
  if (cfg.mode != "geometric" && cfg.mode != "abstract")
    fail(Errc::input, "mode must be 'geometric' or 'abstract', got '" + cfg.mode + "'");
  if (cfg.refine < 8 || cfg.refine > 512)
    fail(Errc::input, "refine must lie in [8, 512], got " + std::to_string(cfg.refine));
  if (cfg.samples < 2) fail(Errc::input, "samples must be at least 2");
  if (cfg.multistart < 1) fail(Errc::input, "multistart must be at least 1");
  for (double tol : {cfg.c0_tol, cfg.c1_tol, cfg.grad_tol, cfg.degen_tol})
    if (!(tol > 0.0) || !std::isfinite(tol)) fail(Errc::input, "tolerances must be positive");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::input, "cannot open output file '" + path + "'");
  f << content;
  f.flush();
  if (!f) fail(Errc::input, "failed writing '" + path + "'");
}

CurvatureFunction parse_K(const std::string& text) {
  if (text.empty())
    fail(Errc::input, "geometric mode needs a curvature candidate (--k-expr)");
  if (text.rfind("constant:", 0) == 0 || text.rfind("affine:", 0) == 0)
    return CurvatureFunction::from_family(text);
  return CurvatureFunction::from_expression(text);
}

struct GeometricRun {
  Calibration cal;
  CurvatureFunction K;
  std::vector<CriticalPointRecord> records;
  AbstractCriticalData data;
  std::vector<std::string> warnings;
};

GeometricRun run_geometric(const RunSettings& cfg) {
  GeometricRun g{Calibration::compute(cfg.refine), parse_K(cfg.k_expr), {}, {}, {}};
  CriticalPointConfig pc;
  pc.multistart = cfg.multistart;
  pc.seed = cfg.seed;
  pc.grad_tol = cfg.grad_tol;
  pc.degeneracy_tol = cfg.degen_tol;
  g.records = find_critical_points(g.K, g.cal.kappa, pc, &g.warnings);
  const GreenData green{g.cal.c_G, {}};
  g.data = make_abstract(g.records, green);
  return g;
}

AbstractCriticalData load_abstract(const RunSettings& cfg) {
  if (cfg.data.empty()) fail(Errc::input, "abstract mode needs a data file (--data)");
  return parse_abstract_file(cfg.data);
}

std::string tuple_label_list(const AbstractCriticalData& data, const std::vector<int>& tuple) {
  std::string out;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += data.points[static_cast<std::size_t>(tuple[i])].label;
  }
  return out;
}

constexpr const char* kConventionNote = "tuples are enumerated as unordered sets of distinct points";

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(const RunSettings& cfg) {
  RunReport rep;
  rep.mode = "calibrate";
  rep.seed = cfg.seed;
  rep.refine = cfg.refine;
  rep.calibration = Calibration::compute(cfg.refine);
  write_output(cfg.out, render_report_json(rep));
  std::fprintf(stderr, "c1 = %.12g (residual %.3e), S = %.12g, c2 = %.12g\n",
               rep.calibration->c1, rep.calibration->c1_residual, rep.calibration->S,
               rep.calibration->c2);
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const RunSettings& cfg) {
  RunReport rep;
  rep.mode = cfg.mode;
  rep.seed = cfg.seed;
  rep.refine = cfg.refine;

  AbstractCriticalData data;
  if (cfg.mode == "geometric") {
    GeometricRun g = run_geometric(cfg);
    rep.k_description = g.K.description();
    rep.calibration = std::move(g.cal);
    rep.critical_points = std::move(g.records);
    rep.warnings = std::move(g.warnings);
    rep.c0 = check_C0(rep.critical_points, cfg.c0_tol);
    data = std::move(g.data);
    if (!rep.c0->pass) {
      rep.abstract = std::move(data);
      write_output(cfg.out, render_report_json(rep));
      std::string msg;
      for (const std::string& v : rep.c0->violations) msg += (msg.empty() ? "" : "; ") + v;
      std::cerr << "error (C0 violation): " << msg << "\n";
      return exit_code_for(Errc::c0_violation);
    }
  } else {
    data = load_abstract(cfg);
    rep.k_description = "abstract data: " + cfg.data;
  }

  const CriterionTols tols{cfg.c0_tol, cfg.c1_tol, 20};
  const bool use_mu = !data.mu.empty();
  rep.criterion = use_mu ? check_theorem_general(data, tols) : check_theorem_main(data, tols);
  rep.warnings.push_back(kConventionNote);
  rep.abstract = std::move(data);
  write_output(cfg.out, render_report_json(rep));
  std::cerr << criterion_conclusion(*rep.criterion) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// export-abstract

int cmd_export_abstract(const RunSettings& cfg) {
  if (cfg.out.empty()) fail(Errc::input, "export-abstract needs --out");
  const AbstractCriticalData data =
      cfg.mode == "geometric" ? run_geometric(cfg).data : load_abstract(cfg);
  write_output(cfg.out, serialize_abstract(data));
  std::cerr << "wrote " << data.points.size() << " points to " << cfg.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// flow

std::vector<int> parse_tuple_selector(const AbstractCriticalData& data, const std::string& text) {
  std::vector<int> tuple;
  std::stringstream ss(text);
  std::string label;
  while (std::getline(ss, label, ',')) {
    label = trim(label);
    const int idx = data.point_index(label);
    if (idx < 0) fail(Errc::input, "tuple selector names unknown point '" + label + "'");
    tuple.push_back(idx);
  }
  if (tuple.empty()) fail(Errc::input, "empty tuple selector");
  std::sort(tuple.begin(), tuple.end());
  if (std::adjacent_find(tuple.begin(), tuple.end()) != tuple.end())
    fail(Errc::input, "tuple selector repeats a point");
  return tuple;
}

std::string trajectory_csv(const AbstractCriticalData& data, const TrajectoryRecord& t) {
  const InteractionMatrix im = build_matrix(data, t.points);
  const std::size_t p = t.points.size();
  std::string out = "s";
  for (std::size_t i = 0; i < p; ++i) out += ",Lambda_" + std::to_string(i + 1);
  out += ",energy\n";
  char buf[64];
  for (const FlowState& st : t.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", st.s);
    out += buf;
    double energy = 0.0;
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c)
        energy += st.lambda_inv[r] * im.m[r * p + c] * st.lambda_inv[c];
    for (std::size_t r = 0; r < p; ++r) {
      std::snprintf(buf, sizeof buf, ",%.17g", st.lambda_inv[r]);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", energy);
    out += buf;
  }
  return out;
}

int cmd_flow(const RunSettings& cfg) {
  RunReport rep;
  rep.mode = "flow";
  rep.seed = cfg.seed;
  rep.refine = cfg.refine;

  AbstractCriticalData data;
  if (cfg.mode == "geometric") {
    GeometricRun g = run_geometric(cfg);
    rep.k_description = g.K.description();
    data = std::move(g.data);
  } else {
    data = load_abstract(cfg);
    rep.k_description = "abstract data: " + cfg.data;
  }

  std::vector<std::vector<int>> chosen;
  if (!cfg.tuple.empty()) {
    chosen.push_back(parse_tuple_selector(data, cfg.tuple));
  } else {
    for (const TupleVerdict& v : enumerate_F1(data, cfg.c1_tol, 20, cfg.c0_tol))
      if (!v.pruned) chosen.push_back(v.points);
  }
  if (!cfg.csv.empty() && cfg.tuple.empty())
    fail(Errc::input, "--csv needs --tuple to select one trajectory");

  FlowConfig fc;
  fc.samples = cfg.samples;
  for (const std::vector<int>& tup : chosen) {
    TrajectoryRecord rec = classify_tuple(data, tup, fc);
    std::fprintf(stderr, "tuple (%s): rho = %.6g, %s, agrees with the spectral verdict\n",
                 tuple_label_list(data, tup).c_str(), rec.rho, flow_outcome_name(rec.outcome));
    rep.trajectories.push_back(std::move(rec));
  }
  if (!cfg.csv.empty()) write_output(cfg.csv, trajectory_csv(data, rep.trajectories.front()));

  rep.warnings.push_back(kConventionNote);
  rep.abstract = std::move(data);
  write_output(cfg.out, render_report_json(rep));
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct SuiteSink {
  bool all_pass = true;
  std::vector<std::string>* warnings = nullptr;

  void line(bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) {
      all_pass = false;
      if (warnings) warnings->push_back(name + ": " + detail);
    }
  }
};

std::string fmt(const char* spec, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, spec, a, b, c);
  return buf;
}

HPoint verify_sample_point(std::uint64_t i) {
  return HPoint{cd{-2.0 + 4.0 * num::halton(i, 2), -2.0 + 4.0 * num::halton(i, 3)},
                -4.0 + 8.0 * num::halton(i, 5)};
}

void suite_profile_identity(const Calibration& cal, SuiteSink& sink) {
  const double lambdas[] = {0.5, 1.0, 3.0};
  double worst = 0.0;
  for (double lam : lambdas) {
    const ScalarFieldH f = bubble_field(cal.c1, lam);
    for (std::uint64_t i = 1; i <= 334; ++i) {
      const HPoint p = verify_sample_point(i);
      const double v = f.value(p);
      worst = std::max(worst, std::abs(sublaplacian_H(f, p) - v * v * v) / (v * v * v));
    }
  }
  sink.line(worst < 1e-8, "profile identity (analytic)",
            fmt("max rel residual %.3e over 1002 points (tol 1e-8)", worst));

  double worst_fd = 0.0;
  for (double lam : lambdas) {
    const ScalarFieldH f = bubble_field(cal.c1, lam);
    for (std::uint64_t i = 1; i <= 40; ++i) {
      const HPoint p = verify_sample_point(i);
      const double v = f.value(p);
      worst_fd =
          std::max(worst_fd, std::abs(sublaplacian_H_fd(f.value, p) - v * v * v) / (v * v * v));
    }
  }
  sink.line(worst_fd < 1e-4, "profile identity (finite differences)",
            fmt("max rel residual %.3e over 120 points (tol 1e-4)", worst_fd));
}

void suite_h_profile(const Calibration& cal, SuiteSink& sink) {
  const TruncatedBubble tb{Bubble::make(SpherePoint::from(cd{0.0, 0.0}, cd{1.0, 0.0}), 50.0), 0.5};
  const HProfile prof = h_profile(cal, tb, 64);
  bool finite = true, zero_inside = true;
  double worst_far = 0.0;
  for (const HProfileSample& s : prof) {
    finite = finite && std::isfinite(s.h);
    if (s.distance <= 0.49 * tb.r) zero_inside = zero_inside && std::abs(s.h) < 1e-12;
    if (s.distance >= 1.02 * tb.r)
      worst_far = std::max(worst_far, std::abs(s.h * s.distance * s.distance / cal.c_G - 1.0));
  }
  sink.line(finite && zero_inside && worst_far < 0.02, "glued profile trace",
            fmt("vanishes inside the taper, matches the Green tail to %.3e (tol 2e-2)",
                worst_far));
}

void suite_green_identity(const Calibration& cal, const RunSettings& cfg, SuiteSink& sink,
                          std::vector<double>* gaps) {
  const SpherePoint bases[] = {quasi_random_sphere_point(1, 7), quasi_random_sphere_point(2, 7),
                               quasi_random_sphere_point(3, 7)};
  const Bubble probes[] = {Bubble::make(quasi_random_sphere_point(11, 7), 3.0),
                           Bubble::make(quasi_random_sphere_point(12, 7), 1.3)};
  double worst = 0.0;
  for (const SpherePoint& a : bases) {
    const double g0 = green_identity_gap_const(cal, a, cfg.refine);
    gaps->push_back(g0);
    worst = std::max(worst, g0);
    for (const Bubble& b : probes) {
      const double g = green_identity_gap(cal, a, b, cfg.refine);
      gaps->push_back(g);
      worst = std::max(worst, g);
    }
  }
  sink.line(worst < 1e-3, "Green reproduction",
            fmt("max rel defect %.3e over 3 functions x 3 base points (tol 1e-3)", worst));
}

void suite_j_constancy(const Calibration& cal, const RunSettings& cfg, SuiteSink& sink) {
  const CurvatureFunction K = CurvatureFunction::from_family("constant:2");
  const double lambdas[] = {0.7, 1.5, 2.5, 4.0, 8.0};
  const double expected = std::sqrt(cal.S / 2.0);
  double lo = 0.0, hi = 0.0, worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    BubbleConfiguration one;
    one.alpha = {1.0};
    one.bubbles = {Bubble::make(quasi_random_sphere_point(static_cast<std::uint64_t>(21 + i), 7),
                                lambdas[i])};
    const double j = functional_J(cal, one, K, cfg.refine).value;
    lo = i == 0 ? j : std::min(lo, j);
    hi = i == 0 ? j : std::max(hi, j);
    worst = std::max(worst, std::abs(j / expected - 1.0));
  }
  const double spread = (hi - lo) / expected;
  sink.line(spread < 1e-3 && worst < 1e-3, "functional constancy",
            fmt("rel spread %.3e over 5 placements, defect vs closed form %.3e (tol 1e-3)",
                spread, worst));
}

void suite_expansion(const Calibration& cal, const RunSettings& cfg, SuiteSink& sink,
                     RunReport& rep) {
  const CurvatureFunction K = CurvatureFunction::from_family("constant:1");
  const SpherePoint n = SpherePoint::from(cd{0.0, 0.0}, cd{1.0, 0.0});
  const SpherePoint s = SpherePoint::from(cd{0.0, 0.0}, cd{-1.0, 0.0});
  double gaps[2] = {0.0, 0.0};
  const double lambdas[] = {20.0, 40.0};
  for (int i = 0; i < 2; ++i) {
    BubbleConfiguration pair;
    pair.bubbles = {Bubble::make(n, lambdas[i]), Bubble::make(s, lambdas[i])};
    pair.alpha = alpha_equilibrium({K.value(n), K.value(s)});
    ExpansionReport er = verify_expansion(cal, pair, K, cfg.refine);
    gaps[i] = er.relative_gap;
    if (i == 1) rep.expansion = std::move(er);
  }
  sink.line(std::isfinite(gaps[0]) && std::isfinite(gaps[1]) && gaps[1] < gaps[0],
            "interaction expansion",
            fmt("rel gap %.3e at the base scale, %.3e after doubling (must decrease)", gaps[0],
                gaps[1]));
}

int cmd_verify(const RunSettings& cfg) {
  RunReport rep;
  rep.mode = "verify";
  rep.seed = cfg.seed;
  rep.refine = cfg.refine;
  const Calibration cal = Calibration::compute(cfg.refine);
  rep.calibration = cal;

  SuiteSink sink;
  sink.warnings = &rep.warnings;
  suite_profile_identity(cal, sink);
  suite_h_profile(cal, sink);
  suite_green_identity(cal, cfg, sink, &rep.green_gaps);
  suite_j_constancy(cal, cfg, sink);
  suite_expansion(cal, cfg, sink, rep);

  if (!cfg.out.empty()) write_output(cfg.out, render_report_json(rep));
  return sink.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prescribed Webster curvature analysis on the CR three-sphere"};
  app.require_subcommand(1);

  RunSettings flags;
  std::string config_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "settings file of 'key = value' lines");
    sub->add_option("--mode", flags.mode, "geometric | abstract");
    sub->add_option("--k-expr", flags.k_expr,
                    "curvature candidate: expression in x1,y1,x2,y2 or a family "
                    "'constant:c' / 'affine:c,cx1,cy1,cx2,cy2'");
    sub->add_option("--data", flags.data, "abstract critical data file");
    sub->add_option("--seed", flags.seed, "multistart seed");
    sub->add_option("--refine", flags.refine, "quadrature nodes per axis at the fine level");
    sub->add_option("--out", flags.out, "report path (default: stdout)");
    sub->add_option("--csv", flags.csv, "trajectory CSV path (flow)");
    sub->add_option("--tuple", flags.tuple, "comma-separated labels selecting one tuple (flow)");
    sub->add_option("--samples", flags.samples, "trajectory sample budget");
    sub->add_option("--multistart", flags.multistart, "critical point search starts");
    sub->add_option("--c0-tol", flags.c0_tol, "membership margin tolerance");
    sub->add_option("--c1-tol", flags.c1_tol, "interaction eigenvalue tolerance");
    sub->add_option("--grad-tol", flags.grad_tol, "criticality tolerance");
    sub->add_option("--degen-tol", flags.degen_tol, "degeneracy tolerance");
  };

  CLI::App* c_calibrate =
      app.add_subcommand("calibrate", "measure the normalization constants");
  CLI::App* c_analyze = app.add_subcommand("analyze", "run the existence criterion end to end");
  CLI::App* c_verify = app.add_subcommand("verify", "run the analytic self-check suites");
  CLI::App* c_flow = app.add_subcommand("flow", "integrate the reduced concentration dynamics");
  CLI::App* c_export =
      app.add_subcommand("export-abstract", "write critical-point data as an abstract file");
  for (CLI::App* sub : {c_calibrate, c_analyze, c_verify, c_flow, c_export}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunSettings cfg;
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    // Explicit flags override the config file.
    if (sub->count("--mode")) cfg.mode = flags.mode;
    if (sub->count("--k-expr")) cfg.k_expr = flags.k_expr;
    if (sub->count("--data")) cfg.data = flags.data;
    if (sub->count("--seed")) cfg.seed = flags.seed;
    if (sub->count("--refine")) cfg.refine = flags.refine;
    if (sub->count("--out")) cfg.out = flags.out;
    if (sub->count("--csv")) cfg.csv = flags.csv;
    if (sub->count("--tuple")) cfg.tuple = flags.tuple;
    if (sub->count("--samples")) cfg.samples = flags.samples;
    if (sub->count("--multistart")) cfg.multistart = flags.multistart;
    if (sub->count("--c0-tol")) cfg.c0_tol = flags.c0_tol;
    if (sub->count("--c1-tol")) cfg.c1_tol = flags.c1_tol;
    if (sub->count("--grad-tol")) cfg.grad_tol = flags.grad_tol;
    if (sub->count("--degen-tol")) cfg.degen_tol = flags.degen_tol;
    validate_settings(cfg);

    if (sub->get_name() == "calibrate") return cmd_calibrate(cfg);
    if (sub->get_name() == "analyze") return cmd_analyze(cfg);
    if (sub->get_name() == "verify") return cmd_verify(cfg);
    if (sub->get_name() == "flow") return cmd_flow(cfg);
    if (sub->get_name() == "export-abstract") return cmd_export_abstract(cfg);
    fail(Errc::internal, "unhandled subcommand");
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(Errc::internal);
  }
}
