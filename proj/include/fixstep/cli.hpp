#pragma once

// Config parsing, CSV output and command dispatch for the fixstep tool.
//
// Config files are flat key = value lines grouped under [objective],
// [method] and [run] headers. '#' starts a comment. Lists are whitespace
// separated; matrix rows are separated by ';'.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fixstep/certification.hpp"
#include "fixstep/descent.hpp"
#include "fixstep/errors.hpp"
#include "fixstep/metrics.hpp"
#include "fixstep/objectives.hpp"
#include "fixstep/random.hpp"

namespace fixstep::cli {

enum class Command { Run, Certify, Sweep, WorstCase, MinCond };

constexpr std::string_view command_name(Command c) noexcept {
  switch (c) {
    case Command::Run: return "run";
    case Command::Certify: return "certify";
    case Command::Sweep: return "sweep";
    case Command::WorstCase: return "worst-case";
    case Command::MinCond: return "min-cond";
  }
  return "unknown";
}

inline std::optional<Command> parse_command(std::string_view s) {
  for (auto c : {Command::Run, Command::Certify, Command::Sweep, Command::WorstCase, Command::MinCond}) {
    if (command_name(c) == s) return c;
  }
  return std::nullopt;
}

using Rows = std::vector<std::vector<double>>;

struct ObjectiveConfig {
  std::string kind = "worst-case";  // worst-case | quadratic | random-quadratic | softplus | logcosh
  std::size_t dim = 2;
  double mu = 1.0;
  double L = 3.0;
  std::optional<Rows> Q;
  std::optional<std::vector<double>> b;
  std::size_t terms = 3;

  bool operator==(const ObjectiveConfig&) const = default;
};

struct MethodConfig {
  // gradient | variable-metric | gradient-related | gradient-related-relaxed |
  // inexact | exact-line-search
  std::string kind = "gradient";
  std::optional<Rows> metric;
  std::optional<std::vector<double>> metric_diag;
  std::optional<double> metric_kappa;
  double theta = 0.0;  // degrees
  double c = 1.0;
  double theta_prime = 0.0;  // degrees
  double c1 = 1.0;
  double c2 = 1.0;
  double epsilon = 0.0;
  std::string direction = "random";  // random | adversarial

  bool operator==(const MethodConfig&) const = default;
};

struct RunSection {
  Command command = Command::Run;
  std::optional<double> h;  // empty means hbar
  std::size_t iters = 20;
  std::size_t trials = 100;
  std::size_t grid_points = 25;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::vector<double>> x0;
  std::string out;
  std::string witness = "gradient";  // gradient | variable-metric | inexact | angle-exact-ls
  std::size_t scan_points = 100000;
  bool allow_uncertified = false;

  bool operator==(const RunSection&) const = default;
};

struct RunConfig {
  ObjectiveConfig objective;
  MethodConfig method;
  RunSection run;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline double to_double(const std::string& key, std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + std::string(s) + "'");
  }
  return v;
}

inline std::uint64_t to_uint(const std::string& key, std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  for (std::string tok; in >> tok;) out.push_back(to_double(key, tok));
  if (out.empty()) throw ConfigError(key, "expected at least one number");
  return out;
}

inline Rows to_rows(const std::string& key, const std::string& s) {
  Rows rows;
  std::size_t start = 0;
  for (;;) {
    const auto end = s.find(';', start);
    rows.push_back(to_list(key, s.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw ConfigError(key, "matrix must be square");
  }
  return rows;
}

inline Matrix rows_to_matrix(const Rows& rows) { return Matrix::from_rows(rows); }

inline SpdMatrix spd_from(const std::string& key, const Matrix& m) {
  try {
    return SpdMatrix(m);
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

inline void check_angle(const std::string& key, double degrees) {
  if (!(degrees >= 0.0) || !(degrees < 90.0)) throw ConfigError(key, "must lie in [0, 90) degrees");
  if (Angle::from_degrees(degrees).cos() < kCosFloor) throw ConfigError(key, "cos(theta) below 1e-8");
}

inline bool one_of(const std::string& v, std::initializer_list<std::string_view> options) {
  for (auto o : options) {
    if (v == o) return true;
  }
  return false;
}

}  // namespace detail

/// Cross-field checks shared by parse_config and execute.
inline void validate(const RunConfig& c) {
  const auto& o = c.objective;
  const auto& m = c.method;
  const auto& r = c.run;
  if (!detail::one_of(o.kind, {"worst-case", "quadratic", "random-quadratic", "softplus", "logcosh"})) {
    throw ConfigError("objective.kind", "unknown objective '" + o.kind + "'");
  }
  if (o.dim < 1) throw ConfigError("objective.dim", "must be >= 1");
  if (o.kind == "worst-case" && o.dim < 2) throw ConfigError("objective.dim", "must be >= 2 for worst-case");
  if (!(o.mu > 0.0)) throw ConfigError("objective.mu", "must be > 0");
  if (!(o.L >= o.mu)) throw ConfigError("objective.L", "must be >= mu");
  if (o.terms < 1) throw ConfigError("objective.terms", "must be >= 1");
  std::size_t n = o.dim;
  if (o.kind == "quadratic") {
    if (!o.Q) throw ConfigError("objective.Q", "missing required key for kind quadratic");
    n = o.Q->size();
    detail::spd_from("objective.Q", detail::rows_to_matrix(*o.Q));
    if (o.b && o.b->size() != n) throw ConfigError("objective.b", "length must match Q");
  }

  if (!detail::one_of(m.kind, {"gradient", "variable-metric", "gradient-related",
                               "gradient-related-relaxed", "inexact", "exact-line-search"})) {
    throw ConfigError("method.kind", "unknown method '" + m.kind + "'");
  }
  detail::check_angle("method.theta", m.theta);
  detail::check_angle("method.theta_prime", m.theta_prime);
  if (!(m.c > 0.0)) throw ConfigError("method.c", "must be > 0");
  if (!(m.c1 > 0.0)) throw ConfigError("method.c1", "must be > 0");
  if (m.c1 > m.c2) throw ConfigError("method.c1", "c1 exceeds c2");
  if (!(m.epsilon >= 0.0) || m.epsilon > 1.0 - 1e-8) {
    throw ConfigError("method.epsilon", "must lie in [0,1)");
  }
  if (!detail::one_of(m.direction, {"random", "adversarial"})) {
    throw ConfigError("method.direction", "must be random or adversarial");
  }
  const int metric_sources = (m.metric ? 1 : 0) + (m.metric_diag ? 1 : 0) + (m.metric_kappa ? 1 : 0);
  if (metric_sources > 1) throw ConfigError("method.metric", "give only one of metric, metric_diag, metric_kappa");
  if (m.metric) {
    if (m.metric->size() != n) throw ConfigError("method.metric", "size must match the objective");
    detail::spd_from("method.metric", detail::rows_to_matrix(*m.metric));
  }
  if (m.metric_diag) {
    if (m.kind == "variable-metric" && m.metric_diag->size() != n) {
      throw ConfigError("method.metric_diag", "length must match the objective");
    }
    for (double v : *m.metric_diag) {
      if (!(v > 0.0)) throw ConfigError("method.metric_diag", "entries must be > 0");
    }
  }
  if (m.metric_kappa && !(*m.metric_kappa >= 1.0)) throw ConfigError("method.metric_kappa", "must be >= 1");
  const bool angled = m.kind == "gradient-related" || m.kind == "exact-line-search";
  if (angled && m.theta > 0.0 && n < 2) throw ConfigError("method.theta", "needs dimension >= 2");
  if (m.kind == "gradient-related-relaxed" && m.theta_prime > 0.0 && n < 2) {
    throw ConfigError("method.theta_prime", "needs dimension >= 2");
  }
  if (m.kind == "exact-line-search" && o.kind != "quadratic" && o.kind != "worst-case" &&
      o.kind != "random-quadratic") {
    throw ConfigError("method.kind", "exact-line-search needs a quadratic objective");
  }

  if (r.h && !(*r.h >= 0.0)) throw ConfigError("run.h", "must be >= 0 or hbar");
  if (r.iters < 1) throw ConfigError("run.iters", "must be >= 1");
  if (r.trials < 1) throw ConfigError("run.trials", "must be >= 1");
  if (r.grid_points < 2) throw ConfigError("run.grid_points", "must be >= 2");
  if (r.scan_points < 1) throw ConfigError("run.scan_points", "must be >= 1");
  if (r.x0 && r.x0->size() != n) throw ConfigError("run.x0", "length must match the objective");
  if (!detail::one_of(r.witness, {"gradient", "variable-metric", "inexact", "angle-exact-ls"})) {
    throw ConfigError("run.witness", "unknown witness '" + r.witness + "'");
  }
}

/// Parses and validates a config. Errors name the offending key.
inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, std::string> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no), "malformed section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (!detail::one_of(section, {"objective", "method", "run"})) {
        throw ConfigError(section, "unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    const std::string name = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) throw ConfigError(name, "key outside a section");
    const std::string key = section + "." + name;
    if (seen.count(key)) throw ConfigError(key, "duplicate key");
    if (value.empty()) throw ConfigError(key, "empty value");
    seen[key] = value;
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = seen.find(key);
    if (it == seen.end()) return std::nullopt;
    std::string v = it->second;
    seen.erase(it);
    return v;
  };
  using detail::to_double;
  using detail::to_list;
  using detail::to_rows;
  using detail::to_uint;

  auto kind = take("objective.kind");
  if (!kind) throw ConfigError("objective.kind", "missing required key");
  c.objective.kind = *kind;
  if (auto v = take("objective.dim")) c.objective.dim = to_uint("objective.dim", *v);
  if (auto v = take("objective.mu")) c.objective.mu = to_double("objective.mu", *v);
  if (auto v = take("objective.L")) c.objective.L = to_double("objective.L", *v);
  if (auto v = take("objective.Q")) c.objective.Q = to_rows("objective.Q", *v);
  if (auto v = take("objective.b")) c.objective.b = to_list("objective.b", *v);
  if (auto v = take("objective.terms")) c.objective.terms = to_uint("objective.terms", *v);

  kind = take("method.kind");
  if (!kind) throw ConfigError("method.kind", "missing required key");
  c.method.kind = *kind;
  if (auto v = take("method.metric")) c.method.metric = to_rows("method.metric", *v);
  if (auto v = take("method.metric_diag")) c.method.metric_diag = to_list("method.metric_diag", *v);
  if (auto v = take("method.metric_kappa")) c.method.metric_kappa = to_double("method.metric_kappa", *v);
  if (auto v = take("method.theta")) c.method.theta = to_double("method.theta", *v);
  if (auto v = take("method.c")) c.method.c = to_double("method.c", *v);
  if (auto v = take("method.theta_prime")) c.method.theta_prime = to_double("method.theta_prime", *v);
  if (auto v = take("method.c1")) c.method.c1 = to_double("method.c1", *v);
  if (auto v = take("method.c2")) c.method.c2 = to_double("method.c2", *v);
  if (auto v = take("method.epsilon")) c.method.epsilon = to_double("method.epsilon", *v);
  if (auto v = take("method.direction")) c.method.direction = *v;

  if (auto v = take("run.command")) {
    const auto cmd = parse_command(*v);
    if (!cmd) throw ConfigError("run.command", "unknown command '" + *v + "'");
    c.run.command = *cmd;
  }
  if (auto v = take("run.h"); v && *v != "hbar") c.run.h = to_double("run.h", *v);
  if (auto v = take("run.iters")) c.run.iters = to_uint("run.iters", *v);
  if (auto v = take("run.trials")) c.run.trials = to_uint("run.trials", *v);
  if (auto v = take("run.grid_points")) c.run.grid_points = to_uint("run.grid_points", *v);
  if (auto v = take("run.seed")) c.run.seed = to_uint("run.seed", *v);
  if (auto v = take("run.x0")) c.run.x0 = to_list("run.x0", *v);
  if (auto v = take("run.out")) c.run.out = *v;
  if (auto v = take("run.witness")) c.run.witness = *v;
  if (auto v = take("run.scan_points")) c.run.scan_points = to_uint("run.scan_points", *v);
  if (auto v = take("run.allow_uncertified")) {
    if (*v != "true" && *v != "false") throw ConfigError("run.allow_uncertified", "must be true or false");
    c.run.allow_uncertified = *v == "true";
  }

  if (!seen.empty()) throw ConfigError(seen.begin()->first, "unknown key");
  validate(c);
  return c;
}

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes a config that parse_config reads back to an equal RunConfig.
inline std::string render_config(const RunConfig& c) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
    return s;
  };
  auto rows = [&](const Rows& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? " ; " : "") + list(r[i]);
    return s;
  };
  std::ostringstream out;
  const auto& o = c.objective;
  out << "[objective]\n"
      << "kind = " << o.kind << "\n"
      << "dim = " << o.dim << "\n"
      << "mu = " << format_real(o.mu) << "\n"
      << "L = " << format_real(o.L) << "\n";
  if (o.Q) out << "Q = " << rows(*o.Q) << "\n";
  if (o.b) out << "b = " << list(*o.b) << "\n";
  out << "terms = " << o.terms << "\n";

  const auto& m = c.method;
  out << "\n[method]\n"
      << "kind = " << m.kind << "\n";
  if (m.metric) out << "metric = " << rows(*m.metric) << "\n";
  if (m.metric_diag) out << "metric_diag = " << list(*m.metric_diag) << "\n";
  if (m.metric_kappa) out << "metric_kappa = " << format_real(*m.metric_kappa) << "\n";
  out << "theta = " << format_real(m.theta) << "\n"
      << "c = " << format_real(m.c) << "\n"
      << "theta_prime = " << format_real(m.theta_prime) << "\n"
      << "c1 = " << format_real(m.c1) << "\n"
      << "c2 = " << format_real(m.c2) << "\n"
      << "epsilon = " << format_real(m.epsilon) << "\n"
      << "direction = " << m.direction << "\n";

  const auto& r = c.run;
  out << "\n[run]\n"
      << "command = " << command_name(r.command) << "\n"
      << "h = " << (r.h ? format_real(*r.h) : std::string("hbar")) << "\n"
      << "iters = " << r.iters << "\n"
      << "trials = " << r.trials << "\n"
      << "grid_points = " << r.grid_points << "\n"
      << "seed = " << r.seed << "\n";
  if (r.x0) out << "x0 = " << list(*r.x0) << "\n";
  if (!r.out.empty()) out << "out = " << r.out << "\n";
  out << "witness = " << r.witness << "\n"
      << "scan_points = " << r.scan_points << "\n"
      << "allow_uncertified = " << (r.allow_uncertified ? "true" : "false") << "\n";
  return out.str();
}

inline constexpr std::string_view kCsvHeader =
    "iter,h,gap_before,gap_after,observed_ratio,bound,data_bound,verdict";

inline void write_csv(const RunReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& c : report.certificates) {
    out << c.iter << ',' << format_real(c.h) << ',' << format_real(c.gap_before) << ','
        << format_real(c.gap_after) << ',' << format_real(c.observed_ratio) << ','
        << format_real(c.bound) << ','
        << (c.data_dependent_bound ? format_real(*c.data_dependent_bound) : std::string()) << ','
        << verdict_name(c.verdict) << '\n';
  }
}

inline void emit_csv(const RunReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  write_csv(report, f);
  f.flush();
  if (!f) throw Error("write to " + path + " failed");
}

inline std::string summarize(const RunReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "method=%s mu=%.10g L=%.10g kappa=%.10g hbar=%.10g bound=%.10g worst_ratio=%.10g "
                "steps=%zu fail=%zu uncertified=%zu seed=%llu digest=%s",
                r.method.c_str(), r.mu, r.L, r.kappa, r.hbar, r.bound_at_hbar, r.worst_ratio,
                r.certificates.size(), r.count(Verdict::Fail), r.count(Verdict::Uncertified),
                static_cast<unsigned long long>(r.master_seed), r.config_digest.c_str());
  std::string s = buf;
  if (r.tightness_gap) {
    std::snprintf(buf, sizeof buf, " tightness_gap=%.3g", *r.tightness_gap);
    s += buf;
  }
  s += r.passed ? " PASS" : " FAIL";
  return s;
}

/// Builds the objective described by the config. Random objectives draw
/// from Rng(splitmix64(seed)).
inline Objective build_objective(const RunConfig& c) {
  const auto& o = c.objective;
  if (o.kind == "worst-case") return make_worstcase_quadratic(o.mu, o.L, o.dim);
  if (o.kind == "quadratic") {
    const auto q = detail::spd_from("objective.Q", detail::rows_to_matrix(*o.Q));
    const Vector b = o.b ? Vector(*o.b) : Vector::zeros(q.size());
    return make_quadratic({q, b});
  }
  if (o.kind == "random-quadratic") {
    Rng rng(splitmix64(c.run.seed));
    return make_random_quadratic(o.mu, o.L, o.dim, rng);
  }
  const SmoothParams p{o.mu, o.terms, c.run.seed, {}};
  return make_smooth_nonquadratic(
      o.kind == "softplus" ? SmoothKind::SoftplusRegularized : SmoothKind::LogCoshRegularized, o.dim, p);
}

/// Builds the step plan; the metric for metric_kappa is a random SPD matrix
/// with spectrum in [1, metric_kappa] drawn from Rng(splitmix64(seed + 1)).
inline StepPlan build_plan(const RunConfig& c, const Objective& obj) {
  const auto& m = c.method;
  StepPlan plan = gradient_plan(obj);
  if (m.kind == "variable-metric") {
    SpdMatrix a = SpdMatrix::identity(obj.dim);
    if (m.metric) a = detail::spd_from("method.metric", detail::rows_to_matrix(*m.metric));
    if (m.metric_diag) a = SpdMatrix::diagonal(Vector(*m.metric_diag));
    if (m.metric_kappa) {
      Rng rng(splitmix64(c.run.seed + 1));
      a = random_spd(obj.dim, 1.0, *m.metric_kappa, rng);
    }
    plan = variable_metric_plan(obj, a);
  } else if (m.kind == "gradient-related") {
    plan = gradient_related_plan(obj, Angle::from_degrees(m.theta), m.c);
  } else if (m.kind == "gradient-related-relaxed") {
    plan = gradient_related_relaxed_plan(obj, Angle::from_degrees(m.theta_prime), m.c1, m.c2);
  } else if (m.kind == "inexact") {
    plan = inexact_gradient_plan(obj, m.epsilon);
  } else if (m.kind == "exact-line-search") {
    plan = exact_line_search_plan(obj, Angle::from_degrees(m.theta), m.c);
  }
  if (c.run.h) {
    if (!plan.certifies(*c.run.h) && !c.run.allow_uncertified) {
      throw ConfigError("run.h", "step size " + format_real(*c.run.h) +
                                     " exceeds the certified limit " + format_real(plan.certified_limit()) +
                                     " (use --allow-uncertified)");
    }
    plan = plan.with_uncertified_step(*c.run.h);
  }
  return plan;
}

inline CertifyOptions options_for(const RunConfig& c) {
  CertifyOptions opts;
  opts.adversarial_inexact = c.method.direction == "adversarial";
  opts.allow_uncertified = c.run.allow_uncertified;
  return opts;
}

inline Witness witness_from(const std::string& name) {
  if (name == "variable-metric") return Witness::VariableMetricWitness;
  if (name == "inexact") return Witness::InexactSharp;
  if (name == "angle-exact-ls") return Witness::AngleExactLS;
  return Witness::GradientWitness;
}

/// Runs the configured command, writes the summary to `out` and the CSV to
/// run.out when set. Returns 0 on PASS, 1 on FAIL and 2 on invalid input.
inline int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    const auto& r = c.run;
    if (r.command == Command::MinCond) {
      const auto theta = Angle::from_degrees(c.method.theta);
      const auto res = min_condition_oracle(theta.cos(), r.trials, r.seed, r.scan_points);
      const bool ok = res.best_kappa_found >= res.analytic_min - 1e-8 &&
                      std::abs(res.sr1_kappa - res.analytic_min) <= 1e-10 * res.analytic_min;
      char buf[256];
      std::snprintf(buf, sizeof buf, "theta=%.10g analytic=%.10g best=%.10g sr1=%.10g points=%zu seed=%llu %s",
                    c.method.theta, res.analytic_min, res.best_kappa_found, res.sr1_kappa,
                    res.points_scanned, static_cast<unsigned long long>(r.seed), ok ? "PASS" : "FAIL");
      out << buf << '\n';
      return ok ? 0 : 1;
    }

    RunReport report;
    if (r.command == Command::WorstCase) {
      TightnessParams p;
      p.mu = c.objective.mu;
      p.L = c.objective.L;
      p.dim = c.objective.dim;
      if (c.method.metric_diag) p.metric_diag = *c.method.metric_diag;
      p.epsilon = c.method.epsilon;
      p.theta_degrees = c.method.theta;
      p.steps = r.iters;
      p.seed = r.seed;
      report = tightness_suite(witness_from(r.witness), p);
    } else {
      const Objective obj = build_objective(c);
      const StepPlan plan = build_plan(c, obj);
      const auto opts = options_for(c);
      if (r.command == Command::Run) {
        const Vector x0 = r.x0 ? Vector(*r.x0) : obj.witness ? *obj.witness : random_start(obj, r.seed, 0);
        report = certify_run(obj, plan, x0, r.iters, r.seed, opts);
      } else if (r.command == Command::Certify) {
        report = certify_trials(obj, plan, r.iters, r.trials, r.seed, opts);
      } else {
        report = sweep_step_sizes(obj, plan, r.grid_points, r.trials, r.seed, opts);
      }
    }
    if (!r.out.empty()) emit_csv(report, r.out);
    out << summarize(report) << '\n';
    return report.passed ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace fixstep::cli
