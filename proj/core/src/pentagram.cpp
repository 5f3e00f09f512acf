#include "pcl/pentagram.hpp"

#include <algorithm>
#include <cctype>

namespace pcl {

DiagonalWord parse_word(const std::string& text) {
  DiagonalWord w;
  for (char c : text) {
    if (c == 'T' || c == 't' || c == ' ') continue;
    if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0')
      fail(ErrorKind::InvalidArgument, std::string("bad letter '") + c + "' in diagonal word");
    w.push_back(c - '0');
  }
  return w;
}

std::string word_name(const DiagonalWord& w) {
  std::string s = "T";
  for (int k : w) s += std::to_string(k);
  return s;
}

DiagonalWord degenerate_word(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "need n >= 1");
  DiagonalWord w;
  for (int i = 0; i < 4 * n - 3; ++i) w.push_back(i % 2 == 0 ? 1 : 2);
  return w;
}

const std::vector<PentagramTheorem>& pentagram_theorems() {
  using F = PolygonFamily;
  using C = PentagramClaim;
  static const std::vector<PentagramTheorem> list{
      {"6-T2", "inscribed 6-gon P: P ~ T2(P)", F::Inscribed, 6, {2}, C::Equivalent},
      {"7-T212", "inscribed 7-gon P: P ~ T212(P)", F::Inscribed, 7, {2, 1, 2}, C::Equivalent},
      {"8-T21212", "inscribed 8-gon P: P ~ T21212(P)", F::Inscribed, 8, {2, 1, 2, 1, 2}, C::Equivalent},
      {"9c-T313", "circumscribed 9-gon P: P ~ T313(P)", F::Circumscribed, 9, {3, 1, 3}, C::Equivalent},
      {"12-T3434343", "inscribed 12-gon P: P ~ T3434343(P)", F::Inscribed, 12, {3, 4, 3, 4, 3, 4, 3},
       C::Equivalent},
      {"8-T3-circ", "inscribed 8-gon P: T3(P) circumscribed", F::Inscribed, 8, {3}, C::Circumscribed},
      {"10-T313-circ", "inscribed 10-gon P: T313(P) circumscribed", F::Inscribed, 10, {3, 1, 3},
       C::Circumscribed},
      {"12-T31313-circ", "inscribed 12-gon P: T31313(P) circumscribed", F::Inscribed, 12, {3, 1, 3, 1, 3},
       C::Circumscribed},
      {"pentagon-T2", "pentagon P: inscribed, circumscribed, P ~ T2(P)", F::Pentagon, 5, {2}, C::PentagonChain},
      {"12-T535353-relabel", "inscribed 12-gon P: T535353(P) inscribed", F::Inscribed, 12, {5, 3, 5, 3, 5, 3},
       C::Inscribed},
      {"degen-4n", "4n-gon on two lines: T1T2...T1 (4n-3 letters) on two lines", F::TwoLines, 0, {},
       C::DegenerateInscribed},
  };
  return list;
}

const PentagramTheorem& pentagram_theorem(const std::string& id) {
  for (const auto& th : pentagram_theorems())
    if (th.id == id) return th;
  fail(ErrorKind::NotFound, "unknown pentagram theorem '" + id + "'");
}

namespace {

std::vector<Rational> distinct_params(Rng& rng, std::size_t n, long bound) {
  std::vector<Rational> t;
  while (t.size() < n) {
    Rational r = rng.rational(bound);
    if (std::find(t.begin(), t.end(), r) == t.end()) t.push_back(r);
  }
  std::sort(t.begin(), t.end());
  return t;
}

Vec3<Rational> random_vec(Rng& rng, long bound) {
  return from_ints<Rational>(rng.uniform_int(-bound, bound), rng.uniform_int(-bound, bound),
                             rng.uniform_int(1, bound));
}

Polygon<Rational> two_line_polygon(Rng& rng, int n4, long bound) {
  const Vec3<Rational> a0 = random_vec(rng, bound), a1 = random_vec(rng, bound);
  const Vec3<Rational> b0 = random_vec(rng, bound), b1 = random_vec(rng, bound);
  if (proportional(a0, a1) || proportional(b0, b1) || proportional(cross(a0, a1), cross(b0, b1)))
    fail(ErrorKind::DegenerateInput, "carrier lines coincide");
  const auto s = distinct_params(rng, static_cast<std::size_t>(n4) / 2, bound);
  const auto u = distinct_params(rng, static_cast<std::size_t>(n4) / 2, bound);
  Polygon<Rational> p;
  for (std::size_t j = 0; j < s.size(); ++j) {
    p.v.push_back(normalized(a0 + scaled(a1, s[j])));
    p.v.push_back(normalized(b0 + scaled(b1, u[j])));
  }
  for (const auto& q : p.v)
    if (is_zero_vec(q)) fail(ErrorKind::DegenerateInput, "zero vertex");
  return p;
}

Polygon<Rational> generic_pentagon(Rng& rng, long bound) {
  Polygon<Rational> p;
  for (int i = 0; i < 5; ++i) p.v.push_back(random_vec(rng, bound));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k)
        if (dependent(p.v[i], p.v[j], p.v[k])) fail(ErrorKind::DegenerateInput, "three collinear vertices");
  return p;
}

Witness polygon_witness(const Polygon<Rational>& p) {
  Witness w;
  for (std::size_t i = 0; i < p.size(); ++i) w.emplace_back("P" + std::to_string(i + 1), to_string(p.v[i]));
  return w;
}

TrialOutcome boolean_outcome(bool ok) {
  TrialOutcome out;
  out.passed = ok;
  out.residual = ok ? 0.0 : 1.0;
  out.residual_text = ok ? "0" : "1";
  return out;
}

void note_equivalence(TrialOutcome& out, const std::optional<Equivalence<Rational>>& e) {
  if (!e) return;
  out.notes.emplace_back("shift", std::to_string(e->labeling.shift));
  out.notes.emplace_back("reflected", e->labeling.reflected ? "true" : "false");
}

}  // namespace

Polygon<Rational> sample_polygon(const PentagramTheorem& th, Rng& rng, const PentagramOptions& opts) {
  switch (th.family) {
    case PolygonFamily::Inscribed:
      return inscribed_ngon(distinct_params(rng, static_cast<std::size_t>(th.n), opts.param_bound));
    case PolygonFamily::Circumscribed:
      return circumscribed_ngon(distinct_params(rng, static_cast<std::size_t>(th.n), opts.param_bound));
    case PolygonFamily::Pentagon:
      return generic_pentagon(rng, opts.param_bound);
    case PolygonFamily::TwoLines:
      return two_line_polygon(rng, 4 * opts.degenerate_n, opts.param_bound);
  }
  fail(ErrorKind::InvalidArgument, "unknown polygon family");
}

VerificationReport run_pentagram_theorem(const std::string& id, std::size_t trials, std::uint64_t seed,
                                         const PentagramOptions& opts) {
  const PentagramTheorem& th = pentagram_theorem(id);
  const DiagonalWord word = th.family == PolygonFamily::TwoLines ? degenerate_word(opts.degenerate_n) : th.word;
  auto trial = [&](Rng& rng) {
    const auto p = sample_polygon(th, rng, opts);
    const auto image = t_word(p, word);
    TrialOutcome out;
    switch (th.claim) {
      case PentagramClaim::Equivalent: {
        const auto e = polygon_equivalence(p, image);
        out = boolean_outcome(e.has_value());
        note_equivalence(out, e);
        break;
      }
      case PentagramClaim::Inscribed:
        out = boolean_outcome(is_inscribed(image));
        break;
      case PentagramClaim::Circumscribed:
        out = boolean_outcome(is_circumscribed(image));
        break;
      case PentagramClaim::DegenerateInscribed:
        out = boolean_outcome(is_inscribed_degenerate(image));
        break;
      case PentagramClaim::PentagonChain: {
        const auto through = conic_through_five(std::span<const Vec3<Rational>>(p.v));
        const auto s = sides(p);
        const auto tangent = conic_through_five(std::span<const Vec3<Rational>>(s));
        const auto e = polygon_equivalence(p, image);
        out = boolean_outcome(!is_degenerate(through) && !is_degenerate(tangent) && e.has_value());
        note_equivalence(out, e);
        break;
      }
    }
    if (!out.passed) out.witness = polygon_witness(p);
    return out;
  };
  auto report = run_trials(id, trials, seed, true, 0.0, trial);
  report.metadata.emplace_back("word", word_name(word));
  report.metadata.emplace_back("statement", th.statement);
  if (th.family == PolygonFamily::TwoLines) report.metadata.emplace_back("n", std::to_string(opts.degenerate_n));
  return report;
}

}  // namespace pcl
