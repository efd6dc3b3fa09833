#include "cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#ifndef CONF_VERSION
#define CONF_VERSION "0.0.0"
#endif

namespace conf::cli {

const char* const kVersion = CONF_VERSION;

namespace {

constexpr double kMargin = 0.01;
constexpr std::size_t kHaltonPoints = 32;
constexpr int kLinePoints = 64;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

json witness_json(const Witness& w) {
  json j{{"point", vec_json(w.point)}, {"reason", w.reason}};
  if (w.matrix.size() > 0) j["matrix"] = mat_json(w.matrix);
  return j;
}

json check_json(const std::string& name, bool pass, double residual) {
  return json{{"name", name}, {"pass", pass}, {"residual", residual}};
}

Frame parse_frame(const std::string& s) {
  if (s == "cartesian") return Frame::Cartesian;
  if (s == "null") return Frame::Null;
  invalid("frame must be cartesian or null, got '" + s + "'");
}

Interval parse_interval(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    invalid("region entries must be [lo, hi] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

// Every non-finite number becomes null; returns how many were found.
std::size_t scrub(json& j) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    j = nullptr;
    return 1;
  }
  std::size_t n = 0;
  if (j.is_structured())
    for (auto& child : j) n += scrub(child);
  return n;
}

std::vector<std::string> reasons_of(const json& checks) {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (c["pass"].get<bool>() || !c.contains("reason")) continue;
    const auto r = c["reason"].get<std::string>();
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

// Assembles the report from its checks and sets the exit code.
Outcome finish(const std::string& command, const JobSpec& job, json checks) {
  Outcome o;
  json report{{"version", kVersion}, {"command", command}, {"job", job_to_json(job)}};
  const std::size_t bad = scrub(checks);
  if (bad > 0) {
    checks.push_back(json{{"name", "finite_report"},
                          {"pass", false},
                          {"residual", static_cast<double>(bad)},
                          {"reason", "non-finite value in report"},
                          {"witness", {{"reason", std::to_string(bad) + " non-finite value(s) replaced by null"}}}});
  }
  bool pass = !checks.empty();
  for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
  report["checks"] = std::move(checks);
  report["pass"] = pass;
  if (!pass) {
    std::string joined;
    for (const auto& r : reasons_of(report["checks"])) joined += (joined.empty() ? "" : "; ") + r;
    report["reason"] = joined;
  }
  o.report = std::move(report);
  o.exit_code = pass ? 0 : 1;
  return o;
}

SmoothMap build_map(const JobSpec& job) {
  return SmoothMap::parse(job.signature(), job.components, job.frame, job.variables);
}

NullRectangle rect_of(const JobSpec& job) {
  if (job.region.size() != 2) invalid("a null rectangle needs two region intervals");
  return {job.region[0].lo, job.region[0].hi, job.region[1].lo, job.region[1].hi};
}

void require_minkowski_plane(const JobSpec& job, const char* command) {
  if (job.n != 2 || job.nu != 1)
    throw Error(ErrorKind::DimensionMismatch, std::string(command) + " needs signature (2,1)");
}

// (s, f(s)) at grid resolution over an interval shrunk by the sampling margin.
json table(const ScalarExpr& f, Interval dom, int k) {
  json rows = json::array();
  const double pad = kMargin * dom.width();
  for (double s : linspace(dom.lo + pad, dom.hi - pad, k)) rows.push_back({s, f.eval(make_vec({s}))});
  return rows;
}

json function_json(const ScalarExpr& f, Interval dom, int k) {
  return {{"expression", f.to_string()}, {"domain", {dom.lo, dom.hi}}, {"table", table(f, dom, k)}};
}

// Errors that mean "the numbers say no" rather than "the job is broken".
bool is_verdict(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotSeparable:
    case ErrorKind::NotConformal:
    case ErrorKind::MixedMonotonicity:
    case ErrorKind::ZeroDerivative:
    case ErrorKind::NotWaveSolution:
    case ErrorKind::NotAffine:
    case ErrorKind::NotEtaOrthogonal:
    case ErrorKind::InsufficientSamples:
    case ErrorKind::SingularJacobian:
      return true;
    default:
      return false;
  }
}

json failed_check(const std::string& name, const Error& e) {
  json c = check_json(name, false, 0.0);
  c["reason"] = e.what();
  c["details"] = {{"error", std::string(to_string(e.kind()))}};
  if (!e.subject().empty()) c["witness"] = {{"reason", e.what()}, {"subject", e.subject()}};
  return c;
}

std::string fmt(double v) {
  char buf[32];
  if (v == 0.0) v = 0.0;  // no "-0"
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<SamplePair> parse_samples(const json& arr, int n) {
  const json& a = arr.is_object() && arr.contains("samples") ? arr["samples"] : arr;
  if (!a.is_array()) invalid("samples must be an array of {x, y} objects");
  std::vector<SamplePair> out;
  for (const auto& s : a) {
    if (!s.is_object() || !s.contains("x") || !s.contains("y")) invalid("each sample needs x and y");
    const auto x = s["x"].get<std::vector<double>>();
    const auto y = s["y"].get<std::vector<double>>();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
      throw Error(ErrorKind::DimensionMismatch, "sample length does not match n = " + std::to_string(n));
    out.push_back({Eigen::Map<const Vec>(x.data(), n), Eigen::Map<const Vec>(y.data(), n)});
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string(), path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SyntaxError, path.string() + ": " + e.what(), path.string());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Jobs

JobSpec job_from_json(const json& j, JobSpec job) {
  if (!j.is_object()) invalid("job must be a JSON object");
  try {
    if (j.contains("signature")) {
      const auto& s = j["signature"];
      if (s.is_array() && s.size() == 2) {
        job.n = s[0].get<int>();
        job.nu = s[1].get<int>();
      } else if (s.is_object()) {
        job.n = s.at("n").get<int>();
        job.nu = s.value("nu", 0);
      } else {
        invalid("signature must be {n, nu} or [n, nu]");
      }
    }
    if (j.contains("frame")) job.frame = parse_frame(j["frame"].get<std::string>());
    if (j.contains("components")) job.components = j["components"].get<std::vector<std::string>>();
    if (j.contains("variables")) job.variables = j["variables"].get<std::vector<std::string>>();
    if (j.contains("region")) {
      job.region.clear();
      for (const auto& iv : j["region"]) job.region.push_back(parse_interval(iv));
    }
    if (j.contains("grid")) job.grid = j["grid"].get<int>();
    if (j.contains("tolerance")) job.tolerance = j["tolerance"].get<double>();
    if (j.contains("preset")) job.preset = j["preset"].get<std::string>();
    if (j.contains("samples")) job.samples = j["samples"];
  } catch (const json::exception& e) {
    invalid(std::string("malformed job: ") + e.what());
  }
  return job;
}

JobSpec load_job_file(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  JobSpec job = job_from_json(j);
  if (j.contains("samples_file")) {
    std::filesystem::path p = j["samples_file"].get<std::string>();
    if (p.is_relative()) p = path.parent_path() / p;
    job.samples = read_json_file(p);
  }
  return job;
}

void finalize_job(JobSpec& job) {
  if (job.preset == "compactification") {
    job.n = 2;
    job.nu = 1;
    job.frame = Frame::Null;
    if (job.components.empty()) job.components = {"2/pi*atan(u)", "2/pi*atan(v)"};
    if (job.region.empty()) job.region = {{-50, 50}, {-50, 50}};
  } else if (job.preset == "identity") {
    if (job.components.empty()) {
      job.components = job.variables.empty()
                           ? (job.frame == Frame::Null ? std::vector<std::string>{"u", "v"}
                                                       : default_coordinate_names(job.n, job.nu))
                           : job.variables;
    }
  } else if (!job.preset.empty()) {
    invalid("unknown preset '" + job.preset + "' (compactification, identity)");
  }
  (void)job.signature();  // validates n and nu
  if (job.region.empty()) job.region.assign(job.n, Interval{-1.0, 1.0});
  if (static_cast<int>(job.region.size()) != job.n)
    throw Error(ErrorKind::DimensionMismatch,
                "region has " + std::to_string(job.region.size()) + " intervals, expected " + std::to_string(job.n));
  for (const auto& iv : job.region)
    if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo < iv.hi))
      invalid("region bounds must be finite with lo < hi");
  if (job.grid < 2) invalid("grid must be at least 2");
  if (!(job.tolerance > 0 && std::isfinite(job.tolerance))) invalid("tolerance must be positive and finite");
}

json job_to_json(const JobSpec& job) {
  json region = json::array();
  for (const auto& iv : job.region) region.push_back({iv.lo, iv.hi});
  json j{{"signature", {{"n", job.n}, {"nu", job.nu}}},
         {"frame", to_string(job.frame)},
         {"components", job.components},
         {"region", region},
         {"grid", job.grid},
         {"tolerance", job.tolerance}};
  if (!job.variables.empty()) j["variables"] = job.variables;
  if (!job.preset.empty()) j["preset"] = job.preset;
  if (job.samples) {
    const json& s = job.samples->is_object() && job.samples->contains("samples") ? (*job.samples)["samples"]
                                                                                 : *job.samples;
    j["sample_count"] = s.size();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_check(const JobSpec& job) {
  const SmoothMap F = build_map(job);
  const double tol = job.tolerance;
  const auto samples = sample_box(job.region, job.grid, kMargin, kHaltonPoints);
  json checks = json::array();

  {
    double worst = 0.0, fmin = INFINITY, fmax = -INFINITY;
    std::size_t failing = 0;
    bool anti = false;
    std::optional<Witness> first;
    for (const auto& p : samples) {
      const auto v = conformality_at(F, p, tol);
      worst = std::max(worst, v.residual);
      fmin = std::min(fmin, v.factor);
      fmax = std::max(fmax, v.factor);
      anti = anti || v.anti_signature;
      if (!v.conformal) {
        ++failing;
        if (!first) first = v.witness;
      }
    }
    json c = check_json("conformality", failing == 0, worst);
    if (first) {
      c["reason"] = first->reason;
      c["witness"] = witness_json(*first);
    }
    c["details"] = {{"samples", samples.size()},
                    {"failing_samples", failing},
                    {"factor_min", fmin},
                    {"factor_max", fmax},
                    {"anti_signature", anti}};
    checks.push_back(std::move(c));
  }

  const auto rep = probe_suite(F, samples, tol);
  {
    json c = check_json("probe_suite", rep.suite_pass, rep.max_residual());
    json probes = json::array();
    for (const auto& pr : rep.probes)
      probes.push_back({{"id", pr.id}, {"expression", pr.expression}, {"max_residual", pr.max_residual}});
    c["details"] = {{"samples", rep.sample_count}, {"probes", probes}};
    if (!rep.suite_pass) c["reason"] = "harmonic probe residual exceeds tolerance";
    checks.push_back(std::move(c));
  }
  {
    json c = check_json("gradient_condition", rep.gradient_condition, 0.0);
    if (!rep.gradient_condition) {
      c["reason"] = "gradient condition violated";
      if (rep.gradient_witness)
        c["witness"] = {{"point", vec_json(*rep.gradient_witness)}, {"reason", "gradient condition violated"}};
    }
    checks.push_back(std::move(c));
  }

  if (job.n == 2 && job.nu == 1 && job.frame == Frame::Null) {
    const auto nl = null_line_check(F, rect_of(job), tol);
    json c = check_json("null_lines", nl.pass, nl.max_variation);
    c["details"] = {{"branch", to_string(nl.branch)},
                    {"orientation", to_string(nl.orientation)},
                    {"lines_preserved", nl.lines_preserved},
                    {"causal_character_preserved", nl.causal_character_preserved},
                    {"lines", nl.lines.size()}};
    if (!nl.lines_preserved)
      c["reason"] = "null lines not preserved";
    else if (!nl.causal_character_preserved)
      c["reason"] = "causal character not preserved";
    checks.push_back(std::move(c));
  }
  return finish("check", job, std::move(checks));
}

Outcome cmd_factor(const JobSpec& job) {
  require_minkowski_plane(job, "factor");
  const SmoothMap F = build_map(job);
  const NullRectangle rect = rect_of(job);
  json checks = json::array();
  try {
    const auto fac = factor_map(F, rect, job.tolerance, job.grid);
    const bool direct = fac.pair.branch == Branch::Direct;
    json c = check_json("factorization", fac.reconstruction_error <= job.tolerance, fac.reconstruction_error);
    c["details"] = {{"branch", to_string(fac.pair.branch)},
                    {"pattern", to_string(fac.pair.pattern)},
                    {"psi", function_json(fac.pair.psi, direct ? rect.u() : rect.v(), job.grid)},
                    {"chi", function_json(fac.pair.chi, direct ? rect.v() : rect.u(), job.grid)}};
    checks.push_back(std::move(c));
  } catch (const Error& e) {
    if (!is_verdict(e.kind())) throw;
    checks.push_back(failed_check("factorization", e));
  }
  return finish("factor", job, std::move(checks));
}

Outcome cmd_decompose(const JobSpec& job) {
  require_minkowski_plane(job, "decompose");
  if (job.components.size() != 1)
    throw Error(ErrorKind::DimensionMismatch, "decompose takes exactly one component X(x, t)");
  const auto vars = job.variables.empty() ? std::vector<std::string>{"x", "t"} : job.variables;
  const ScalarExpr X = ScalarExpr::parse(job.components.front(), vars);
  const NullRectangle rect = rect_of(job);
  json checks = json::array();
  try {
    const auto d = dalembert_decompose(X, rect, job.tolerance, job.grid);
    json c = check_json("dalembert", d.reconstruction_error <= job.tolerance, d.reconstruction_error);
    c["details"] = {{"wave_residual", d.wave_residual},
                    {"base", {{"u", d.base.u}, {"v", d.base.v}}},
                    {"f", function_json(d.f, rect.u(), job.grid)},
                    {"g", function_json(d.g, rect.v(), job.grid)}};
    checks.push_back(std::move(c));
  } catch (const Error& e) {
    if (!is_verdict(e.kind())) throw;
    checks.push_back(failed_check("dalembert", e));
  }
  return finish("decompose", job, std::move(checks));
}

Outcome cmd_fit(const JobSpec& job) {
  const Signature sig = job.signature();
  std::optional<SmoothMap> F;
  std::vector<SamplePair> pairs;
  if (job.samples) {
    pairs = parse_samples(*job.samples, job.n);
  } else {
    if (job.components.empty()) invalid("fit needs samples or map components");
    F = build_map(job);
    if (F->frame() != Frame::Cartesian) invalid("fit works on Cartesian maps");
    for (const auto& p : sample_box(job.region, job.grid, kMargin, kHaltonPoints)) pairs.push_back({p, F->eval(p)});
  }

  json checks = json::array();
  try {
    const auto m = liouville_fit(pairs, sig, job.tolerance);
    json c = check_json("liouville_fit", true, m.fit_residual);
    c["details"] = {{"samples", pairs.size()},
                    {"alpha", m.alpha},
                    {"A", mat_json(m.A)},
                    {"b", vec_json(m.b)},
                    {"orthogonality_residual", m.orthogonality_residual}};
    checks.push_back(std::move(c));
  } catch (const Error& e) {
    if (!is_verdict(e.kind())) throw;
    checks.push_back(failed_check("liouville_fit", e));
  }

  if (F && checks.back()["pass"].get<bool>()) {
    std::vector<Vec> xs;
    for (const auto& p : pairs) xs.push_back(p.x);
    std::vector<std::string> ys;
    for (int j = 1; j <= job.n; ++j) ys.push_back("y" + std::to_string(j));
    const ScalarExpr phi = ScalarExpr::parse("y1^2", ys);
    const auto s = scaling_check(*F, phi, xs, job.tolerance);
    json c = check_json("scaling", s.pass, s.max_deviation);
    c["details"] = {{"probe", phi.to_string()}, {"ratio", s.ratio}, {"alpha_squared", s.model.alpha * s.model.alpha},
                    {"vacuous", s.vacuous}};
    if (!s.pass) c["reason"] = "Laplacian does not scale by alpha^2";
    checks.push_back(std::move(c));
  }
  return finish("fit", job, std::move(checks));
}

Outcome cmd_grid(const JobSpec& job) {
  if (job.n != 2) throw Error(ErrorKind::DimensionMismatch, "grid needs a map of the plane");
  const SmoothMap F = build_map(job);
  const bool null_grid = job.nu == 1;
  const int k = job.grid;

  // Each grid line is a parametrized path in F's source frame.
  using Path = std::function<std::optional<Vec>(double)>;
  struct Line {
    Path at;
    Interval range;
  };
  std::vector<Line> lines;
  auto shrink = [](Interval iv) {
    const double pad = kMargin * iv.width();
    return Interval{iv.lo + pad, iv.hi - pad};
  };

  if (null_grid && job.frame == Frame::Null) {
    const Interval U = shrink(job.region[0]), V = shrink(job.region[1]);
    for (double c : linspace(U.lo, U.hi, k)) lines.push_back({[c](double s) -> std::optional<Vec> { return make_vec({c, s}); }, V});
    for (double c : linspace(V.lo, V.hi, k)) lines.push_back({[c](double s) -> std::optional<Vec> { return make_vec({s, c}); }, U});
  } else if (null_grid) {
    // Null lines through the (x, t) box, clipped to it.
    const Box box{shrink(job.region[0]), shrink(job.region[1])};
    const Event2 corners[] = {{box[0].lo, box[1].lo}, {box[0].lo, box[1].hi}, {box[0].hi, box[1].lo}, {box[0].hi, box[1].hi}};
    const NullRectangle r = bounding_null_rectangle(corners);
    auto inside = [box](Event2 e) -> std::optional<Vec> {
      if (e.x < box[0].lo || e.x > box[0].hi || e.t < box[1].lo || e.t > box[1].hi) return std::nullopt;
      return make_vec({e.x, e.t});
    };
    for (double c : linspace(r.a1(), r.a2(), k)) lines.push_back({[c, inside](double s) { return inside(from_null({c, s})); }, r.v()});
    for (double c : linspace(r.b1(), r.b2(), k)) lines.push_back({[c, inside](double s) { return inside(from_null({s, c})); }, r.u()});
  } else {
    const Interval X = shrink(job.region[0]), Y = shrink(job.region[1]);
    for (double c : linspace(X.lo, X.hi, k)) lines.push_back({[c](double s) -> std::optional<Vec> { return make_vec({c, s}); }, Y});
    for (double c : linspace(Y.lo, Y.hi, k)) lines.push_back({[c](double s) -> std::optional<Vec> { return make_vec({s, c}); }, X});
  }

  // Image polylines in target (X, T); a gap wherever a sample is excluded.
  std::vector<std::vector<std::pair<double, double>>> polylines;
  std::size_t excluded = 0;
  double xmin = INFINITY, xmax = -INFINITY, tmin = INFINITY, tmax = -INFINITY;
  auto extend = [&](double x, double t) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  };
  for (const auto& line : lines) {
    std::vector<std::pair<double, double>> cur;
    auto flush = [&] {
      if (cur.size() >= 2) polylines.push_back(std::move(cur));
      cur.clear();
    };
    for (double s : linspace(line.range.lo, line.range.hi, kLinePoints)) {
      const auto p = line.at(s);
      if (!p) {
        flush();
        continue;
      }
      Vec y;
      try {
        y = F.eval(*p);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DomainError) throw;
        ++excluded;
        flush();
        continue;
      }
      double X = y[0], T = y[1];
      if (job.frame == Frame::Null) {
        const Event2 e = from_null({y[0], y[1]});
        X = e.x;
        T = e.t;
      }
      if (!std::isfinite(X) || !std::isfinite(T)) {
        ++excluded;
        flush();
        continue;
      }
      cur.emplace_back(X, T);
      extend(X, T);
    }
    flush();
  }

  const bool diamond = job.preset == "compactification";
  if (diamond) {
    extend(-1, -1);
    extend(1, 1);
  }
  if (polylines.empty()) throw Error(ErrorKind::DomainError, "no grid line could be evaluated");

  const double w = xmax - xmin, h = tmax - tmin;
  const double px = w > 0 ? 0.05 * w : 1.0, pt = h > 0 ? 0.05 * h : 1.0;
  const double vx = xmin - px, vy = -tmax - pt, vw = w + 2 * px, vh = h + 2 * pt;
  const double stroke = 0.002 * std::max(vw, vh);
  const std::string hash = fnv1a_hex(job_to_json(job).dump());

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(vx) << ' ' << fmt(vy) << ' ' << fmt(vw) << ' '
      << fmt(vh) << "\">\n"
      << "<metadata>" << json{{"generator", "conf"}, {"version", kVersion}, {"job_hash", hash},
                              {"lines", lines.size()}, {"points_per_line", kLinePoints},
                              {"excluded_samples", excluded}}.dump()
      << "</metadata>\n"
      << "<g fill=\"none\" stroke=\"black\" stroke-width=\"" << fmt(stroke) << "\">\n";
  // SVG y grows downward; T is drawn upward.
  for (const auto& pl : polylines) {
    svg << "<polyline points=\"";
    for (std::size_t i = 0; i < pl.size(); ++i) svg << (i ? " " : "") << fmt(pl[i].first) << ',' << fmt(-pl[i].second);
    svg << "\"/>\n";
  }
  svg << "</g>\n";
  if (diamond)
    svg << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"" << fmt(stroke)
        << "\" points=\"1,0 0,-1 -1,0 0,1 1,0\"/>\n";
  svg << "</svg>\n";

  json c = check_json("grid", true, static_cast<double>(excluded));
  c["details"] = {{"lines", lines.size()},
                  {"polylines", polylines.size()},
                  {"points_per_line", kLinePoints},
                  {"excluded_samples", excluded},
                  {"job_hash", hash},
                  {"bounds", {xmin, xmax, tmin, tmax}}};
  json checks = json::array();
  checks.push_back(std::move(c));
  Outcome o = finish("grid", job, std::move(checks));
  o.document = svg.str();
  return o;
}

Outcome error_outcome(const Error& e, const std::optional<JobSpec>& job, const std::string& command) {
  json err{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (e.offset()) err["offset"] = *e.offset();
  if (!e.subject().empty()) err["subject"] = e.subject();
  json report{{"version", kVersion}};
  if (!command.empty()) report["command"] = command;
  if (job) report["job"] = job_to_json(*job);
  report["checks"] = json::array();
  report["pass"] = false;
  report["reason"] = e.what();
  report["error"] = std::move(err);
  return {std::move(report), 2, {}};
}

// ---------------------------------------------------------------------------
// Plumbing

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string(), path.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string(), path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot move output into place at " + path.string(), path.string());
  }
}

namespace {

Interval parse_region_flag(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) invalid("region must be LO:HI, got '" + s + "'");
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || part.empty()) invalid("bad region bound '" + part + "' in '" + s + "'");
    return v;
  };
  return {number(s.substr(0, colon)), number(s.substr(colon + 1))};
}

std::pair<int, int> parse_sig_flag(const std::string& s) {
  int n = 0, nu = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d,%d%c", &n, &nu, &tail) != 2) invalid("signature must be N,NU, got '" + s + "'");
  return {n, nu};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct, verify, factor and draw conformal maps of semi-Euclidean spaces", "conf"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string job_path, sig, frame, out_path, preset, samples_path;
  std::vector<std::string> comps, regions, vars;
  int grid = 17;
  double tol = kDefaultTolerance;

  auto* o_job = app.add_option("--job", job_path, "JSON job file");
  auto* o_sig = app.add_option("--sig", sig, "signature N,NU");
  auto* o_frame = app.add_option("--frame", frame, "cartesian or null")->check(CLI::IsMember({"cartesian", "null"}));
  auto* o_comp = app.add_option("--comp", comps, "component expressions");
  auto* o_vars = app.add_option("--vars", vars, "source coordinate names");
  auto* o_region = app.add_option("--region", regions, "LO:HI per coordinate");
  auto* o_grid = app.add_option("--grid", grid, "samples per axis (default 17)");
  auto* o_tol = app.add_option("--tol", tol, "tolerance (default 1e-8)");
  auto* o_out = app.add_option("--out", out_path, "output file");
  auto* o_preset = app.add_option("--preset", preset, "compactification or identity");
  auto* o_samples = app.add_option("--samples", samples_path, "fit: JSON file of {x, y} pairs");
  (void)o_job;

  const std::pair<const char*, Outcome (*)(const JobSpec&)> commands[] = {
      {"check", cmd_check}, {"factor", cmd_factor}, {"decompose", cmd_decompose}, {"fit", cmd_fit}, {"grid", cmd_grid}};
  const char* blurbs[] = {"conformality, probe suite, gradient condition and null lines",
                          "split a conformal map of a null rectangle into its monotone pair",
                          "d'Alembert split of a wave solution X(x, t)",
                          "Liouville affine fit of a map or of sample pairs",
                          "SVG of the image of the null-coordinate grid"};
  for (std::size_t i = 0; i < std::size(commands); ++i) app.add_subcommand(commands[i].first, blurbs[i])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Outcome (*fn)(const JobSpec&) = nullptr;
  for (const auto& [name, f] : commands)
    if (command == name) fn = f;

  std::optional<JobSpec> job;
  Outcome outcome;
  try {
    JobSpec j = job_path.empty() ? JobSpec{} : load_job_file(job_path);
    if (o_sig->count()) std::tie(j.n, j.nu) = parse_sig_flag(sig);
    if (o_frame->count()) j.frame = parse_frame(frame);
    if (o_comp->count()) j.components = comps;
    if (o_vars->count()) j.variables = vars;
    if (o_region->count()) {
      j.region.clear();
      for (const auto& r : regions) j.region.push_back(parse_region_flag(r));
    }
    if (o_grid->count()) j.grid = grid;
    if (o_tol->count()) j.tolerance = tol;
    if (o_preset->count()) j.preset = preset;
    if (o_samples->count()) j.samples = read_json_file(samples_path);
    finalize_job(j);
    job = j;
    outcome = fn(*job);
  } catch (const Error& e) {
    outcome = error_outcome(e, job, command);
  }

  const std::string report = outcome.report.dump(2) + "\n";
  try {
    if (command == "grid" && outcome.exit_code != 2) {
      if (o_out->count()) {
        write_atomic(out_path, outcome.document);
        out << report;
      } else {
        out << outcome.document;
      }
    } else if (o_out->count()) {
      write_atomic(out_path, report);
    } else {
      out << report;
    }
  } catch (const Error& e) {
    out << error_outcome(e, job, command).report.dump(2) << "\n";
    return 2;
  }
  return outcome.exit_code;
}

}  // namespace conf::cli
