#include "pcl/dsl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pcl/conic.hpp"
#include "pcl/projective.hpp"
#include "pcl/errors.hpp"
#include "pcl/random.hpp"

namespace pcl::dsl {

const Value* Instance::find(std::string_view name) const {
  for (const auto& [n, v] : values)
    if (n == name) return &v;
  return nullptr;
}

namespace {

using Q = Rational;

template <class T>
using Env = std::map<std::string, std::variant<Vec3<T>, Matrix3<T>>, std::less<>>;

template <class T>
const Vec3<T>& vec(const Env<T>& env, const std::string& name) {
  return std::get<Vec3<T>>(env.at(name));
}

template <class T>
const Matrix3<T>& mat(const Env<T>& env, const std::string& name) {
  return std::get<Matrix3<T>>(env.at(name));
}

template <class T>
Matrix3<T> normalized_matrix(Matrix3<T> m) {
  std::array<T, 9> flat{};
  for (int i = 0; i < 9; ++i) flat[i] = m[i / 3][i % 3];
  ScalarTraits<T>::normalize(std::span<T>(flat));
  for (int i = 0; i < 9; ++i) m[i / 3][i % 3] = flat[i];
  return m;
}

[[noreturn]] void degenerate(const std::string& what) { fail(ErrorKind::ConstructionDegenerate, what); }

template <class T>
std::variant<Vec3<T>, Matrix3<T>> eval_expr(const Expr& e, const Env<T>& env) {
  if (e.is_leaf()) return env.at(e.ident);
  const auto a = eval_expr(e.args[0], env);
  const auto b = eval_expr(e.args[1], env);
  if (e.fn == "join" || e.fn == "meet") {
    const Vec3<T>& x = std::get<Vec3<T>>(a);
    const Vec3<T>& y = std::get<Vec3<T>>(b);
    const Vec3<T> r = cross(x, y);
    if (is_zero_vec(r, max_norm(x) * max_norm(y), kDefaultEps)) degenerate(e.fn + " of coincident arguments");
    return normalized(r);
  }
  const Vec3<T>& v = std::get<Vec3<T>>(a);
  const Matrix3<T>& m = std::get<Matrix3<T>>(b);
  if (e.fn == "polar") return normalized(mul(m, v));
  const Conic<T> c{m};
  if (is_degenerate(c)) degenerate("pole with respect to a degenerate conic");
  return normalized(mul(adjugate(m), v));
}

template <class T>
void run_constructions(const Script& s, Env<T>& env) {
  for (const auto& step : s.order)
    if (step.constructed) {
      const auto& c = s.constructions[step.index];
      env[c.target] = eval_expr(c.expr, env);
    }
}

template <class T>
T assertion_value(const Script& s, const Assertion& a, const Env<T>& env) {
  switch (a.kind) {
    case AssertKind::Collinear:
    case AssertKind::Concurrent:
      return det3(vec(env, a.args[0]), vec(env, a.args[1]), vec(env, a.args[2]));
    case AssertKind::Conconic: {
      std::vector<std::vector<T>> rows;
      for (const auto& n : a.args) rows.push_back(conic_monomials(vec(env, n)));
      return determinant(rows);
    }
    case AssertKind::On: {
      const Kind k0 = *s.kind_of(a.args[0]);
      const Kind k1 = *s.kind_of(a.args[1]);
      if (k1 == Kind::Conic) {
        const Conic<T> c{mat(env, a.args[1])};
        const Vec3<T>& v = vec(env, a.args[0]);
        return k0 == Kind::Point ? c.eval(v) : c.eval_dual(v);
      }
      return dot(vec(env, a.args[0]), vec(env, a.args[1]));
    }
  }
  return ScalarTraits<T>::from_int(0);
}

// ---- sampling --------------------------------------------------------------

struct Sampler {
  const Script& s;
  Rng& rng;
  const SampleOptions& opts;
  Env<Q> env;
  std::map<std::string, Matrix3<Q>, std::less<>> frames;  // conic name -> M with K = M(unit circle)

  Q coord() { return Q(rng.uniform_int(-opts.coord_range, opts.coord_range)); }

  Vec3<Q> random_triple() {
    for (int k = 0; k < 64; ++k) {
      Vec3<Q> v{coord(), coord(), coord()};
      if (!is_zero_vec(v, 1.0, 0.0)) return v;
    }
    degenerate("could not sample a nonzero triple");
  }

  Q random_param() {
    return Q(mpz_class(rng.uniform_int(-opts.coord_range, opts.coord_range)),
             mpz_class(rng.uniform_int(1, opts.coord_range)));
  }

  Vec3<Q> off_carrier(const Vec3<Q>& carrier) {
    for (int k = 0; k < 64; ++k) {
      const Vec3<Q> r = cross(carrier, random_triple());
      if (!is_zero_vec(r, 1.0, 0.0)) return normalized(r);
    }
    degenerate("could not sample an incident object");
  }

  void sample_free(const Declaration& d) {
    const auto carriers = s.carriers_of(d.name);
    if (d.kind == Kind::Conic) {
      Matrix3<Q> m;
      do {
        for (auto& row : m)
          for (auto& x : row) x = Q(rng.uniform_int(-opts.conic_range, opts.conic_range));
      } while (sgn(det(m)) == 0);
      frames[d.name] = m;
      env[d.name] = normalized_matrix(transform_conic(unit_circle<Q>(), m).m);
      return;
    }
    if (carriers.empty()) {
      env[d.name] = normalized(random_triple());
      return;
    }
    const std::string& first = carriers.front();
    if (*s.kind_of(first) == Kind::Conic) {
      const Matrix3<Q>& m = frames.at(first);
      const Q t = random_param();
      if (d.kind == Kind::Point)
        env[d.name] = normalized(mul(m, rational_conic_point(t).coords()));
      else
        env[d.name] = normalized(mul(transpose(adjugate(m)), tangent_at(t).coords()));
      return;
    }
    if (carriers.size() == 1) {
      env[d.name] = off_carrier(vec(env, first));
      return;
    }
    const Vec3<Q> r = cross(vec(env, carriers[0]), vec(env, carriers[1]));
    if (is_zero_vec(r, 1.0, 0.0)) degenerate("coincident carriers");
    env[d.name] = normalized(r);
  }

  void run() {
    for (const auto& step : s.order) {
      if (step.constructed) {
        const auto& c = s.constructions[step.index];
        env[c.target] = eval_expr(c.expr, env);
      } else {
        sample_free(s.declarations[step.index]);
      }
    }
  }
};

/// Incidences implied by the script itself: declared carriers and the
/// top-level arguments of joins and meets.
std::set<std::pair<std::string, std::string>> known_incidences(const Script& s) {
  std::set<std::pair<std::string, std::string>> k;  // (point, line)
  for (const auto& c : s.constraints) {
    const Kind ko = *s.kind_of(c.object);
    const Kind kc = *s.kind_of(c.carrier);
    if (ko == Kind::Point && kc == Kind::Line) k.insert({c.object, c.carrier});
    if (ko == Kind::Line && kc == Kind::Point) k.insert({c.carrier, c.object});
  }
  for (const auto& c : s.constructions) {
    if (c.expr.fn != "join" && c.expr.fn != "meet") continue;
    for (const auto& a : c.expr.args) {
      if (!a.is_leaf()) continue;
      if (c.expr.fn == "join")
        k.insert({a.ident, c.target});
      else
        k.insert({c.target, a.ident});
    }
  }
  return k;
}

bool passes_guards(const Script& s, const Env<Q>& env) {
  std::vector<std::string> points, lines, free_points, free_lines;
  auto classify = [&](const std::string& name, bool is_free) {
    const Kind k = *s.kind_of(name);
    if (k == Kind::Point) {
      points.push_back(name);
      if (is_free) free_points.push_back(name);
    } else if (k == Kind::Line) {
      lines.push_back(name);
      if (is_free) free_lines.push_back(name);
    }
  };
  for (const auto& d : s.declarations) classify(d.name, true);
  for (const auto& c : s.constructions) classify(c.target, false);

  for (const auto* group : {&points, &lines})
    for (std::size_t i = 0; i < group->size(); ++i)
      for (std::size_t j = i + 1; j < group->size(); ++j)
        if (proportional(vec(env, (*group)[i]), vec(env, (*group)[j]))) return false;

  const auto known = known_incidences(s);
  for (const auto& p : free_points)
    for (const auto& l : free_lines)
      if (sgn(dot(vec(env, p), vec(env, l))) == 0 && !known.count({p, l})) return false;

  // no accidental collinear triple of free points (concurrent triple of free
  // lines) unless a named line (point) of the script carries all three
  auto exempt = [&](const std::string& a, const std::string& b, const std::string& c, bool point_triple) {
    const auto& carriers = point_triple ? lines : points;
    for (const auto& x : carriers) {
      auto has = [&](const std::string& y) {
        return point_triple ? known.count({y, x}) > 0 : known.count({x, y}) > 0;
      };
      if (has(a) && has(b) && has(c)) return true;
    }
    return false;
  };
  for (bool point_triple : {true, false}) {
    const auto& g = point_triple ? free_points : free_lines;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j)
        for (std::size_t k = j + 1; k < g.size(); ++k)
          if (sgn(det3(vec(env, g[i]), vec(env, g[j]), vec(env, g[k]))) == 0 &&
              !exempt(g[i], g[j], g[k], point_triple))
            return false;
  }
  return true;
}

template <class T>
Env<T> load(const Script& s, const Instance& inst);

template <>
Env<Q> load<Q>(const Script& s, const Instance& inst) {
  Env<Q> env;
  for (const auto& d : s.declarations) {
    const Value* v = inst.find(d.name);
    if (!v) fail(ErrorKind::UndefinedIdentifier, "instance has no value for '" + d.name + "'");
    env[d.name] = *v;
  }
  return env;
}

template <>
Env<double> load<double>(const Script& s, const Instance& inst) {
  Env<double> env;
  for (const auto& d : s.declarations) {
    const Value* v = inst.find(d.name);
    if (!v) fail(ErrorKind::UndefinedIdentifier, "instance has no value for '" + d.name + "'");
    if (const auto* t = std::get_if<Vec3<Q>>(v)) {
      env[d.name] = to_double(*t);
    } else {
      const auto& m = std::get<Matrix3<Q>>(*v);
      Q big = 0;
      for (const auto& row : m)
        for (const auto& x : row) big = std::max(big, Q(abs(x)));
      Matrix3<double> md{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) md[i][j] = Q(m[i][j] / big).get_d();
      env[d.name] = md;
    }
  }
  return env;
}

}  // namespace

Instance sample_instance(const Script& s, std::uint64_t seed, const SampleOptions& opts) {
  if (opts.coord_range < 1 || opts.conic_range < 1)
    fail(ErrorKind::InvalidArgument, "sampling ranges must be positive");
  for (std::size_t attempt = 0; attempt < opts.max_attempts; ++attempt) {
    Rng rng(Rng::derive(seed, attempt));
    Sampler sm{s, rng, opts, {}, {}};
    try {
      sm.run();
    } catch (const GeometryError&) {
      continue;
    }
    if (!passes_guards(s, sm.env)) continue;
    Instance inst;
    inst.seed = seed;
    inst.attempts = attempt + 1;
    for (const auto& d : s.declarations) inst.values.emplace_back(d.name, sm.env.at(d.name));
    return inst;
  }
  fail(ErrorKind::GenericityExhausted,
       "no generic sample after " + std::to_string(opts.max_attempts) + " attempts");
}

std::vector<AssertionResidual> evaluate(const Script& s, const Instance& inst) {
  Env<Q> env = load<Q>(s, inst);
  run_constructions(s, env);
  std::vector<AssertionResidual> out;
  for (const auto& a : s.assertions) out.push_back({a.text, assertion_value(s, a, env)});
  return out;
}

std::vector<std::pair<std::string, Value>> construct_all(const Script& s, const Instance& inst) {
  Env<Q> env = load<Q>(s, inst);
  run_constructions(s, env);
  std::vector<std::pair<std::string, Value>> out;
  for (const auto& step : s.order) {
    const std::string& name = step.constructed ? s.constructions[step.index].target : s.declarations[step.index].name;
    out.emplace_back(name, env.at(name));
  }
  return out;
}

std::vector<double> evaluate_numeric(const Script& s, const Instance& inst) {
  Env<double> env = load<double>(s, inst);
  run_constructions(s, env);
  std::vector<double> out;
  for (const auto& a : s.assertions) out.push_back(std::fabs(assertion_value(s, a, env)));
  return out;
}

VerificationReport verify(const Script& s, const VerifyOptions& opts) {
  VerificationReport report;
  report.theorem_id = s.name;
  report.trials_requested = opts.trials;
  report.exact = opts.backend == Backend::Rational;
  report.tolerance = report.exact ? 0.0 : opts.tolerance;
  report.seed = opts.seed;
  report.metadata = {{"backend", report.exact ? "rational" : "float"},
                     {"assertions", std::to_string(s.assertions.size())}};
  constexpr std::size_t kMaxResamples = 100;
  for (std::size_t t = 0; t < opts.trials; ++t) {
    bool done = false;
    for (std::size_t r = 0; r <= kMaxResamples && !done; ++r) {
      const std::uint64_t trial_seed = Rng::derive(Rng::derive(opts.seed, t), r);
      Instance inst;
      try {
        inst = sample_instance(s, trial_seed, opts.sampling);
      } catch (const GeometryError& e) {
        if (e.kind() != ErrorKind::GenericityExhausted) throw;
        report.verdict = Verdict::DegenerateRetryExhausted;
        return report;
      }
      TrialResult tr;
      tr.index = t;
      tr.seed = trial_seed;
      tr.resamples = r;
      try {
        if (report.exact) {
          Q worst = 0;
          for (const auto& res : evaluate(s, inst))
            if (abs(res.value) > abs(worst)) worst = res.value;
          tr.passed = sgn(worst) == 0;
          tr.residual_text = worst.get_str();
          tr.residual = std::min(std::fabs(worst.get_d()), 1e300);
        } else {
          double worst = 0.0;
          for (double v : evaluate_numeric(s, inst)) worst = std::max(worst, v);
          tr.passed = worst <= opts.tolerance;
          tr.residual = worst;
          tr.residual_text = format_double(worst);
        }
      } catch (const GeometryError& e) {
        if (e.kind() == ErrorKind::ConstructionDegenerate) continue;
        throw;
      }
      done = true;
      tr.notes = {{"sample_attempts", std::to_string(inst.attempts)}};
      const bool passed = tr.passed;
      report.trials.push_back(std::move(tr));
      ++report.trials_completed;
      if (!passed) {
        report.verdict = Verdict::Falsified;
        report.witness = to_witness(inst);
        return report;
      }
    }
    if (!done) {
      report.verdict = Verdict::DegenerateRetryExhausted;
      return report;
    }
  }
  report.verdict = Verdict::Verified;
  return report;
}

// ---- serialization ---------------------------------------------------------

std::string format_value(const Value& v) {
  if (const auto* t = std::get_if<Vec3<Q>>(&v)) return pcl::to_string(*t);
  const auto& m = std::get<Matrix3<Q>>(v);
  std::string out = "[";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out += m[i][j].get_str();
      out += (j < 2) ? "," : (i < 2 ? ";" : "]");
    }
  return out;
}

Value parse_value(std::string_view text) {
  std::vector<Q> nums;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    Q q;
    if (q.set_str(cur, 10) != 0) fail(ErrorKind::SyntaxError, "bad rational '" + cur + "'");
    q.canonicalize();
    nums.push_back(q);
    cur.clear();
  };
  for (char c : text) {
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ':' || c == ',' || c == ';' || c == ' ')
      flush();
    else
      cur.push_back(c);
  }
  flush();
  if (nums.size() == 3) return Vec3<Q>{nums[0], nums[1], nums[2]};
  if (nums.size() == 9) {
    Matrix3<Q> m;
    for (int i = 0; i < 9; ++i) m[i / 3][i % 3] = nums[i];
    return m;
  }
  fail(ErrorKind::SyntaxError, "expected 3 or 9 rationals in '" + std::string(text) + "'");
}

Witness to_witness(const Instance& inst) {
  Witness w{{"seed", std::to_string(inst.seed)}, {"attempts", std::to_string(inst.attempts)}};
  for (const auto& [name, v] : inst.values) w.emplace_back(name, format_value(v));
  return w;
}

Instance instance_from_witness(const Witness& w) {
  Instance inst;
  for (const auto& [name, text] : w) {
    if (name == "seed")
      inst.seed = std::stoull(text);
    else if (name == "attempts")
      inst.attempts = std::stoull(text);
    else
      inst.values.emplace_back(name, parse_value(text));
  }
  return inst;
}

}  // namespace pcl::dsl
