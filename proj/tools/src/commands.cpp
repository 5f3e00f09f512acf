#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "json_report.hpp"
#include "pcl/errors.hpp"
#include "pcl/lie_skewer.hpp"
#include "pcl/marked_box.hpp"
#include "pcl/pentagram.hpp"
#include "pcl/poncelet.hpp"
#include "pcl/steiner.hpp"

namespace pcl::cli {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::string json, svg, csv;
  bool no_timing = false;
};

void add_common(CLI::App* sub, Common& c, bool svg, bool csv) {
  sub->add_option("--seed", c.seed, "Random seed (PCL_SEED overrides)");
  sub->add_option("--json", c.json, "Write the JSON report to this path");
  if (svg) sub->add_option("--svg", c.svg, "Write an SVG figure to this path");
  if (csv) sub->add_option("--csv", c.csv, "Write a CSV table to this path");
  sub->add_flag("--no-timing", c.no_timing, "Report runtime_ms as 0 for byte-identical output");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw UsageError("cannot write '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int finish(RunReport& rep, const Common& c, const Timer& timer, std::ostream& out) {
  rep.runtime_ms = timer.ms();
  rep.timing = !c.no_timing;
  if (!c.json.empty()) write_file(c.json, rep.to_json().dump(2) + "\n");
  out << rep.subcommand << ": " << rep.verdict;
  if (!rep.trials.empty()) out << " (" << rep.trials.size() << " trials, max residual " << rep.residual_max << ")";
  out << "\n";
  return rep.verdict == "verified" || rep.verdict == "completed" ? kSuccess : kFalsified;
}

Vec3<double> point_of(const dsl::Value& v) { return to_double(std::get<Vec3<Rational>>(v)); }

Matrix3<double> matrix_of(const dsl::Value& v) {
  const auto& m = std::get<Matrix3<Rational>>(v);
  Rational big = 0;
  for (const auto& row : m)
    for (const auto& x : row)
      if (abs(x) > big) big = abs(x);
  Matrix3<double> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = sgn(big) == 0 ? 0.0 : Rational(m[i][j] / big).get_d();
  return out;
}

using NumEnv = std::map<std::string, dsl::Value>;

Vec3<double> eval_vec(const dsl::Expr& e, const NumEnv& env, std::vector<Vec3<double>>& joins) {
  if (e.is_leaf()) return point_of(env.at(e.ident));
  if (e.fn == "pole" || e.fn == "polar") {
    const Vec3<double> v = eval_vec(e.args[0], env, joins);
    const Matrix3<double> k = matrix_of(env.at(e.args[1].ident));
    return normalized(e.fn == "polar" ? mul(k, v) : mul(adjugate(k), v));
  }
  const Vec3<double> a = eval_vec(e.args[0], env, joins);
  const Vec3<double> b = eval_vec(e.args[1], env, joins);
  const Vec3<double> r = normalized(cross(a, b));
  if (e.fn == "join") joins.push_back(r);
  return r;
}

bool has_line(const std::vector<SceneLine>& ls, const Vec3<double>& l) {
  for (const auto& x : ls)
    if (proportional(x.l, l, 1e-9)) return true;
  return false;
}

ordered_json config_base(const Common& c) {
  ordered_json j;
  j["seed"] = std::to_string(c.seed);
  return j;
}

// ---- verify / theorem -------------------------------------------------------

struct DslArgs {
  std::size_t trials = 20;
  std::string backend = "rational";
  double tolerance = 1e-9;
};

dsl::Backend backend_of(const std::string& b) {
  if (b == "rational") return dsl::Backend::Rational;
  if (b == "float") return dsl::Backend::Float;
  throw UsageError("backend '" + b + "' does not apply to configuration scripts (use rational or float)");
}

int run_dsl(const dsl::Script& s, const std::string& subcommand, const DslArgs& a, const Common& c,
            std::ostream& out) {
  Timer timer;
  dsl::VerifyOptions opts;
  opts.trials = a.trials;
  opts.seed = c.seed;
  opts.backend = backend_of(a.backend);
  opts.tolerance = a.tolerance;
  const VerificationReport r = dsl::verify(s, opts);

  RunReport rep;
  rep.subcommand = subcommand;
  rep.config = config_base(c);
  rep.config["theorem"] = s.name;
  rep.config["trials"] = std::to_string(a.trials);
  rep.config["backend"] = a.backend;
  if (a.backend == "float") rep.config["tolerance"] = num(a.tolerance);
  absorb(rep, r);

  if (!c.svg.empty()) {
    dsl::Instance inst;
    if (r.witness)
      inst = dsl::instance_from_witness(*r.witness);
    else
      inst = dsl::sample_instance(s, r.trials.empty() ? Rng::derive(Rng::derive(c.seed, 0), 0) : r.trials.front().seed,
                                  opts.sampling);
    Scene scene = dsl_scene(s, inst);
    scene.title = s.name;
    write_file(c.svg, render_svg(scene));
  }
  return finish(rep, c, timer, out);
}

int replay_dsl(const dsl::Script& s, const std::string& path, const Common& c, std::ostream& out) {
  Timer timer;
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
  const ordered_json* values = &j;
  if (j.contains("witnesses")) {
    if (j["witnesses"].empty()) throw UsageError("'" + path + "' holds no witness");
    values = &j["witnesses"][0]["values"];
  }
  const dsl::Instance inst = dsl::instance_from_witness(witness_from_json(*values));
  RunReport rep;
  rep.subcommand = "verify";
  rep.config = config_base(c);
  rep.config["theorem"] = s.name;
  rep.config["replay"] = path;
  Rational worst = 0;
  for (const auto& res : dsl::evaluate(s, inst))
    if (abs(res.value) > abs(worst)) worst = res.value;
  const bool ok = sgn(worst) == 0;
  rep.verdict = ok ? "verified" : "falsified";
  ordered_json t;
  t["index"] = "0";
  t["seed"] = std::to_string(inst.seed);
  t["passed"] = ok ? "true" : "false";
  t["residual"] = worst.get_str();
  t["resamples"] = "0";
  rep.trials.push_back(t);
  rep.residual_max = worst.get_str();
  rep.residual_mean = num(std::fabs(worst.get_d()));
  if (!ok) rep.witnesses.push_back({{"trial", "0"}, {"values", witness_json(dsl::to_witness(inst))}});
  return finish(rep, c, timer, out);
}

Scene polygon_scene(const Polygon<Rational>& p, const Polygon<Rational>& image) {
  Scene scene;
  auto add = [&](const Polygon<Rational>& q, const std::string& color) {
    ScenePolyline pl;
    pl.closed = true;
    pl.color = color;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Vec3<double> v = to_double(q.v[i]);
      if (q.space == Space::Plane) {
        pl.pts.push_back(v);
        scene.points.push_back({v, color, std::to_string(i), "point"});
      } else {
        scene.lines.push_back({v, color, 1.0, "line"});
        pl.pts.push_back(to_double(Vec3<Rational>(cross(q.v[i], q[i + 1]))));
      }
    }
    scene.polylines.push_back(std::move(pl));
  };
  add(p, "#000000");
  add(image, "#d62728");
  scene.fit();
  return scene;
}

int run_theorem(const std::string& id, std::size_t trials, bool trials_set, int n, const DslArgs& a,
                const Common& c, std::ostream& out, std::ostream& err) {
  const auto& dsl_names = dsl::builtin_script_names();
  if (std::find(dsl_names.begin(), dsl_names.end(), id) != dsl_names.end()) {
    DslArgs args = a;
    args.trials = trials_set ? trials : 20;
    return run_dsl(dsl::builtin_script(id), "theorem", args, c, out);
  }

  Timer timer;
  RunReport rep;
  rep.subcommand = "theorem";
  rep.config = config_base(c);
  rep.config["theorem"] = id;
  std::optional<Scene> scene;

  bool found = false;
  for (const auto& th : pentagram_theorems()) {
    if (th.id != id) continue;
    found = true;
    const std::size_t t = trials_set ? trials : 10;
    PentagramOptions opts;
    opts.degenerate_n = n;
    rep.config["trials"] = std::to_string(t);
    if (th.n == 0) rep.config["n"] = std::to_string(n);
    absorb(rep, run_pentagram_theorem(id, t, c.seed, opts));
    if (!c.svg.empty()) {
      Rng rng(Rng::derive(c.seed, 0));
      const Polygon<Rational> p = sample_polygon(th, rng, opts);
      const DiagonalWord w = th.n == 0 ? degenerate_word(n) : th.word;
      scene = polygon_scene(p, t_word(p, w));
    }
  }
  if (!found)
    for (const auto& th : skewer_theorems()) {
      if (th.id != id) continue;
      found = true;
      const std::size_t t = trials_set ? trials : 20;
      rep.config["trials"] = std::to_string(t);
      absorb(rep, run_skewer_theorem(id, t, c.seed));
    }
  if (!found && id == "hesse-sylvester") {
    found = true;
    const auto r = hesse_sylvester_check();
    absorb(rep, hesse_sylvester_report(r));
  }
  if (!found) {
    err << "unknown theorem id '" << id << "'; valid ids:\n";
    for (const auto& v : theorem_ids()) err << "  " << v << "\n";
    return kUsage;
  }
  if (!c.svg.empty()) {
    if (!scene) scene = Scene{};
    scene->title = id;
    write_file(c.svg, render_svg(*scene));
  }
  return finish(rep, c, timer, out);
}

// ---- pappus-curve -----------------------------------------------------------

ordered_json estimate_json(double x, double y, const DimensionEstimate& d) {
  ordered_json e;
  e["x"] = num(x);
  e["y"] = num(y);
  e["estimate"] = num(d.dimension);
  ordered_json scales = ordered_json::array();
  for (const auto& s : d.scales)
    scales.push_back({{"level", std::to_string(s.level)}, {"epsilon", num(s.epsilon)}, {"count", std::to_string(s.count)}});
  e["scales"] = scales;
  return e;
}

struct CurveArgs {
  double x = 0.3, y = 0.2;
  int depth = 12;
  bool dimension = false;
  bool sweep = false;
  int grid = 9;
  int kmin = 3, kmax = 8;
  std::string chart = "affine";
};

int run_pappus_curve(const CurveArgs& a, const Common& c, std::ostream& out) {
  Timer timer;
  RunReport rep;
  rep.subcommand = "pappus-curve";
  rep.verdict = "completed";
  rep.config = config_base(c);
  rep.config["x"] = num(a.x);
  rep.config["y"] = num(a.y);
  rep.config["depth"] = std::to_string(a.depth);
  rep.config["chart"] = a.chart;
  CurveDimensionOptions opts;
  opts.depth = a.depth;
  opts.kmin = a.kmin;
  opts.kmax = a.kmax;
  opts.chart = a.chart == "elliptic" ? DimensionChart::Elliptic : DimensionChart::Affine;
  std::ostringstream csv;
  csv << "x,y,level,epsilon,count,estimate\n";
  auto csv_rows = [&](double x, double y, const DimensionEstimate& d) {
    for (const auto& s : d.scales)
      csv << num(x) << "," << num(y) << "," << s.level << "," << num(s.epsilon) << "," << s.count << ","
          << num(d.dimension) << "\n";
  };

  const MarkedBox<double> box = box_from_coords<double>(a.x, a.y);
  if (!is_convex(box)) throw UsageError("[x, y] does not give a convex marked box");
  const auto pts = curve_points(box, a.depth);
  rep.details["curve_points"] = std::to_string(pts.size());

  if (a.dimension) {
    const DimensionEstimate d = pappus_curve_dimension(a.x, a.y, opts);
    rep.details["dimension"] = estimate_json(a.x, a.y, d);
    csv_rows(a.x, a.y, d);
    out << "dimension estimate at [" << num(a.x) << ", " << num(a.y) << "]: " << num(d.dimension) << "\n";
  }
  if (a.sweep) {
    ordered_json sweep = ordered_json::array();
    double best = 0.0, bx = 0.0, by = 0.0;
    for (int i = 1; i <= a.grid; ++i)
      for (int j = 1; j <= a.grid; ++j) {
        const double x = static_cast<double>(i) / (a.grid + 1), y = static_cast<double>(j) / (a.grid + 1);
        const DimensionEstimate d = pappus_curve_dimension(x, y, opts);
        sweep.push_back(estimate_json(x, y, d));
        csv_rows(x, y, d);
        if (d.dimension > best) {
          best = d.dimension;
          bx = x;
          by = y;
        }
      }
    rep.details["sweep"] = sweep;
    rep.details["sweep_max"] = {{"x", num(bx)}, {"y", num(by)}, {"estimate", num(best)}};
    out << "sweep maximum " << num(best) << " at [" << num(bx) << ", " << num(by) << "]\n";
  }
  if (!c.csv.empty()) write_file(c.csv, csv.str());

  if (!c.svg.empty()) {
    Scene scene;
    scene.title = "pappus curve [" + num(a.x) + ", " + num(a.y) + "]";
    const auto bp = box.points();
    const char* names[] = {"a1", "a3", "b3", "b1", "a2", "b2"};
    for (int i = 0; i < 6; ++i) scene.points.push_back({bp[i], "#000000", names[i], "point"});
    scene.fit(0.4);
    scene.clouds.push_back({pts, "#1f77b4", "curve"});
    scene.lines.push_back({box.line_a(), "#555555", 1.0, "line"});
    scene.lines.push_back({box.line_b(), "#555555", 1.0, "line"});
    write_file(c.svg, render_svg(scene));
  }
  return finish(rep, c, timer, out);
}

// ---- poncelet ---------------------------------------------------------------

Matrix3<double> ellipse_matrix(const Ellipse& e) {
  return {{{1.0 / (e.a * e.a), 0.0, 0.0}, {0.0, 1.0 / (e.b * e.b), 0.0}, {0.0, 0.0, -1.0}}};
}

int run_poncelet(double a1, double a2, int n, std::size_t samples, const Common& c, std::ostream& out) {
  Timer timer;
  const ConfocalFamily family(a1, a2);
  const PonceletSuite suite = run_poncelet_suite(family, n, c.seed, samples);
  RunReport rep;
  rep.subcommand = "poncelet";
  rep.config = config_base(c);
  rep.config["a1"] = num(a1);
  rep.config["a2"] = num(a2);
  rep.config["n"] = std::to_string(n);
  rep.config["samples"] = std::to_string(samples);
  absorb(rep, poncelet_report(suite, c.seed));
  rep.details["caustic"] = {{"lambda", num(suite.caustic.lambda)},
                            {"rho", num(suite.caustic.rho)},
                            {"closure", num(suite.caustic.closure)}};

  if (!c.svg.empty()) {
    const PonceletGrid grid = poncelet_grid(family, n, 0.3);
    Scene scene;
    scene.title = "poncelet grid n=" + std::to_string(n);
    scene.conics.push_back({ellipse_matrix(family.base()), "#000000", "conic table"});
    scene.conics.push_back({ellipse_matrix(family.member(grid.lambda)), "#7f7f7f", "conic caustic"});
    for (const auto& l : grid.lines) scene.lines.push_back({l, "#bbbbbb", 0.75, "line side"});
    for (int k = 0; 2 * k < n; ++k)
      for (const auto& p : grid.concentric(k))
        scene.points.push_back({p, kPalette[k % 10], "", "point P" + std::to_string(k)});
    scene.fit(0.05);
    write_file(c.svg, render_svg(scene));
  }
  return finish(rep, c, timer, out);
}

// ---- steiner ----------------------------------------------------------------

int run_steiner(std::size_t samples, double tol, const Common& c, std::ostream& out) {
  Timer timer;
  RunReport rep;
  rep.subcommand = "steiner";
  rep.config = config_base(c);
  rep.config["samples"] = std::to_string(samples);
  rep.config["tolerance"] = num(tol);
  std::ostringstream csv;
  csv << "index,square_law,secant,doubling\n";
  double worst = 0.0, total = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(Rng::derive(c.seed, i));
    const auto cs = random_gaussian_sample(rng);
    const auto sq = verify_square_law(cs.a, cs.o, tol);
    const auto rs = random_rational_sample(rng, 30);
    const auto db = verify_doubling(rs.a, rs.o);
    const double r = std::max({sq.residual, sq.secant_residual, db.residual});
    const bool passed = r <= tol;
    ok = ok && passed;
    worst = std::max(worst, r);
    total += r;
    ordered_json t;
    t["index"] = std::to_string(i);
    t["seed"] = std::to_string(Rng::derive(c.seed, i));
    t["passed"] = passed ? "true" : "false";
    t["residual"] = num(r);
    t["square_law"] = num(sq.residual);
    t["secant"] = num(sq.secant_residual);
    t["doubling"] = num(db.residual);
    rep.trials.push_back(t);
    csv << i << "," << num(sq.residual) << "," << num(sq.secant_residual) << "," << num(db.residual) << "\n";
  }
  rep.verdict = ok ? "verified" : "falsified";
  rep.residual_max = num(worst);
  rep.residual_mean = num(samples ? total / samples : 0.0);
  if (!c.csv.empty()) write_file(c.csv, csv.str());
  return finish(rep, c, timer, out);
}

// ---- skewer-pentagram -------------------------------------------------------

int run_skewer_pentagram(std::size_t n, std::size_t iters, bool coaxial, double tol, const Common& c,
                         std::ostream& out) {
  Timer timer;
  Rng rng(c.seed);
  const EucLine axis{{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
  std::vector<EucLine> lines = coaxial ? coaxial_lines(axis, n, rng) : random_euclidean_lines(n, rng);
  SkewerPentagramOptions opts;
  opts.record_matrices = false;
  if (coaxial) opts.axis = &axis;
  const SkewerPentagramOrbit orbit = skewer_pentagram_orbit(std::move(lines), iters, opts);

  RunReport rep;
  rep.subcommand = "skewer-pentagram";
  rep.config = config_base(c);
  rep.config["n"] = std::to_string(n);
  rep.config["iterations"] = std::to_string(iters);
  rep.config["coaxial"] = coaxial ? "true" : "false";
  if (coaxial) rep.config["tolerance"] = num(tol);

  std::ostringstream csv;
  csv << "iteration,scale,distance_ratio,cos_product,gram_det,min_sine,coaxial_residual\n";
  ordered_json steps = ordered_json::array();
  double total = 0.0;
  for (const auto& s : orbit.steps) {
    ordered_json e;
    e["iteration"] = std::to_string(s.iteration);
    e["scale"] = num(s.scale);
    e["distance_ratio"] = num(s.distance_ratio);
    e["cos_product"] = num(s.cos_product);
    e["gram_det"] = num(s.gram_det);
    e["min_sine"] = num(s.min_sine);
    if (coaxial) e["coaxial_residual"] = num(s.coaxial_residual);
    steps.push_back(e);
    total += s.coaxial_residual;
    csv << s.iteration << "," << num(s.scale) << "," << num(s.distance_ratio) << "," << num(s.cos_product) << ","
        << num(s.gram_det) << "," << num(s.min_sine) << "," << num(s.coaxial_residual) << "\n";
  }
  rep.details["iterations_completed"] = std::to_string(orbit.iterations_completed);
  rep.details["truncated"] = orbit.truncated ? "true" : "false";
  if (orbit.truncated) rep.details["truncation"] = orbit.truncation;
  rep.details["steps"] = steps;

  if (orbit.truncated)
    rep.verdict = "truncated";
  else if (coaxial && orbit.max_coaxial_residual > tol)
    rep.verdict = "falsified";
  else
    rep.verdict = coaxial ? "verified" : "completed";
  if (coaxial) {
    rep.residual_max = num(orbit.max_coaxial_residual);
    rep.residual_mean = num(orbit.steps.empty() ? 0.0 : total / orbit.steps.size());
  }
  if (!c.csv.empty()) write_file(c.csv, csv.str());
  out << "skewer-pentagram: " << orbit.iterations_completed << "/" << iters << " iterations";
  if (orbit.truncated) out << " (" << orbit.truncation << ")";
  out << "\n";
  return finish(rep, c, timer, out);
}

}  // namespace

std::vector<std::string> theorem_ids() {
  std::vector<std::string> ids = dsl::builtin_script_names();
  for (const auto& t : pentagram_theorems()) ids.push_back(t.id);
  for (const auto& t : skewer_theorems()) ids.push_back(t.id);
  ids.emplace_back("hesse-sylvester");
  return ids;
}

Scene dsl_scene(const dsl::Script& s, const dsl::Instance& inst) {
  Scene scene;
  NumEnv env;
  for (auto& [name, v] : dsl::construct_all(s, inst)) env.emplace(name, v);
  for (const auto& step : s.order) {
    const std::string& name = step.constructed ? s.constructions[step.index].target : s.declarations[step.index].name;
    const dsl::Value& v = env.at(name);
    const auto kind = *s.kind_of(name);
    if (kind == dsl::Kind::Conic)
      scene.conics.push_back({matrix_of(v), "#1f77b4", "conic"});
    else if (kind == dsl::Kind::Line)
      scene.lines.push_back({point_of(v), "#555555", 1.0, "line"});
    else
      scene.points.push_back({point_of(v), step.constructed ? "#1f77b4" : "#000000", name, "point"});
  }
  std::vector<Vec3<double>> joins;
  for (const auto& con : s.constructions) {
    for (const auto& arg : con.expr.args)
      if (!arg.is_leaf()) eval_vec(arg, env, joins);
  }
  for (const auto& j : joins)
    if (!has_line(scene.lines, j)) scene.lines.push_back({j, "#999999", 0.75, "line aux"});

  for (const auto& a : s.assertions) {
    if (a.kind == dsl::AssertKind::Collinear && a.args.size() >= 2) {
      const Vec3<double> l = normalized(cross(point_of(env.at(a.args[0])), point_of(env.at(a.args[1]))));
      scene.lines.push_back({l, "#d62728", 2.0, "line highlight"});
    } else if (a.kind == dsl::AssertKind::Concurrent && a.args.size() >= 2) {
      const Vec3<double> p = normalized(cross(point_of(env.at(a.args[0])), point_of(env.at(a.args[1]))));
      scene.points.push_back({p, "#d62728", "", "point highlight"});
    }
  }
  scene.fit();
  return scene;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pcl: randomized and exact checks of projective configuration theorems"};
  app.name("pcl");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  DslArgs dsl_args;

  auto* verify = app.add_subcommand("verify", "Verify a configuration script");
  std::string script_path, replay_path;
  verify->add_option("script", script_path, "Script file")->required();
  verify->add_option("--trials", dsl_args.trials, "Random instances");
  verify->add_option("--backend", dsl_args.backend, "rational | float")
      ->check(CLI::IsMember({"rational", "float", "complex"}));
  verify->add_option("--tolerance", dsl_args.tolerance, "Float backend residual tolerance");
  verify->add_option("--replay", replay_path, "Re-evaluate the witness of a JSON report");
  add_common(verify, common, true, false);

  auto* theorem = app.add_subcommand("theorem", "Run a built-in theorem by id");
  std::string theorem_id;
  std::size_t theorem_trials = 0;
  int degenerate_n = 2;
  theorem->add_option("id", theorem_id, "Theorem id")->required();
  auto* trials_opt = theorem->add_option("--trials", theorem_trials, "Random instances");
  theorem->add_option("--n", degenerate_n, "n of the 4n-gon for degen-4n")->check(CLI::Range(1, 20));
  theorem->add_option("--backend", dsl_args.backend, "rational | float (configuration scripts)")
      ->check(CLI::IsMember({"rational", "float", "complex"}));
  theorem->add_option("--tolerance", dsl_args.tolerance, "Float backend residual tolerance");
  add_common(theorem, common, true, false);

  auto* curve = app.add_subcommand("pappus-curve", "Pappus curve points, figure and box dimension");
  CurveArgs curve_args;
  curve->add_option("--x", curve_args.x, "Box coordinate x")->required();
  curve->add_option("--y", curve_args.y, "Box coordinate y")->required();
  curve->add_option("--depth", curve_args.depth, "Orbit depth")->check(CLI::Range(0, 20));
  curve->add_flag("--dimension", curve_args.dimension, "Estimate the box dimension");
  curve->add_flag("--sweep", curve_args.sweep, "Dimension over a grid of classes in (0, 1)^2");
  curve->add_option("--grid", curve_args.grid, "Sweep grid size")->check(CLI::Range(1, 50));
  curve->add_option("--kmin", curve_args.kmin, "Coarsest box level");
  curve->add_option("--kmax", curve_args.kmax, "Finest box level");
  curve->add_option("--chart", curve_args.chart, "affine | elliptic")
      ->check(CLI::IsMember({"affine", "elliptic"}));
  add_common(curve, common, true, true);

  auto* poncelet = app.add_subcommand("poncelet", "Confocal billiard checks and the Poncelet grid");
  double a1 = 2.0, a2 = 1.0;
  int period = 5;
  std::size_t poncelet_samples = 50;
  poncelet->add_option("--a1", a1, "Major semi-axis of the table");
  poncelet->add_option("--a2", a2, "Minor semi-axis of the table");
  poncelet->add_option("--n", period, "Odd period")->check(CLI::Range(3, 99));
  poncelet->add_option("--samples", poncelet_samples, "Samples per randomized check");
  add_common(poncelet, common, true, false);

  auto* steiner = app.add_subcommand("steiner", "Square law and doubling map of the Steiner map");
  std::size_t steiner_samples = 50;
  double steiner_tol = 1e-9;
  steiner->add_option("--samples", steiner_samples, "Random triples");
  steiner->add_option("--tolerance", steiner_tol, "Residual tolerance");
  add_common(steiner, common, false, true);

  auto* skp = app.add_subcommand("skewer-pentagram", "Skewer pentagram orbit diagnostics");
  std::size_t skp_n = 7, skp_iters = 1000;
  bool skp_coaxial = false;
  double skp_tol = 1e-9;
  skp->add_option("--n", skp_n, "Number of lines")->check(CLI::Range(4, 100));
  skp->add_option("--iters", skp_iters, "Iterations");
  skp->add_flag("--coaxial", skp_coaxial, "Start from lines meeting a common axis at right angle");
  skp->add_option("--tolerance", skp_tol, "Co-axial membership tolerance");
  add_common(skp, common, false, true);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  if (const char* env = std::getenv("PCL_SEED")) {
    try {
      std::size_t used = 0;
      const std::string text = env;
      common.seed = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      err << "PCL_SEED must be a non-negative integer\n";
      return kUsage;
    }
  }

  try {
    if (verify->parsed()) {
      dsl::Script s = dsl::parse_script(read_file(script_path), script_path);
      if (!replay_path.empty()) return replay_dsl(s, replay_path, common, out);
      return run_dsl(s, "verify", dsl_args, common, out);
    }
    if (theorem->parsed())
      return run_theorem(theorem_id, theorem_trials, trials_opt->count() > 0, degenerate_n, dsl_args, common, out,
                         err);
    if (curve->parsed()) return run_pappus_curve(curve_args, common, out);
    if (poncelet->parsed()) return run_poncelet(a1, a2, period, poncelet_samples, common, out);
    if (steiner->parsed()) return run_steiner(steiner_samples, steiner_tol, common, out);
    if (skp->parsed()) return run_skewer_pentagram(skp_n, skp_iters, skp_coaxial, skp_tol, common, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace pcl::cli
