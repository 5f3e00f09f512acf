#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "pcl/dsl/script.hpp"
#include "pcl/errors.hpp"

namespace pcl::dsl {

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::Point: return "point";
    case Kind::Line: return "line";
    case Kind::Conic: return "conic";
  }
  return "?";
}

std::optional<Kind> Script::kind_of(std::string_view n) const {
  for (const auto& d : declarations)
    if (d.name == n) return d.kind;
  for (const auto& c : constructions)
    if (c.target == n) return c.kind;
  return std::nullopt;
}

bool Script::is_free(std::string_view n) const {
  return std::any_of(declarations.begin(), declarations.end(),
                     [&](const Declaration& d) { return d.name == n; });
}

std::vector<std::string> Script::carriers_of(std::string_view n) const {
  std::vector<std::string> out;
  for (const auto& c : constraints)
    if (c.object == n) out.push_back(c.carrier);
  return out;
}

namespace {

enum class Tok { Ident, Semi, Comma, LParen, RParen, Equals, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  SourcePos pos;
};

[[noreturn]] void fail_at(ErrorKind kind, SourcePos pos, const std::string& msg) {
  fail(kind, std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + msg);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    Token t;
    t.pos = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.text.push_back(src[i]);
        advance();
      }
      t.type = Tok::Ident;
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case ';': t.type = Tok::Semi; break;
      case ',': t.type = Tok::Comma; break;
      case '(': t.type = Tok::LParen; break;
      case ')': t.type = Tok::RParen; break;
      case '=': t.type = Tok::Equals; break;
      default: fail_at(ErrorKind::SyntaxError, pos, std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(1, c);
    advance();
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = pos;
  out.push_back(end);
  return out;
}

const std::set<std::string, std::less<>> kKeywords{"point", "line",      "conic",      "on",
                                                   "assert", "collinear", "concurrent", "conconic",
                                                   "join",  "meet",      "pole",       "polar"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  void parse(Script& s) {
    while (peek().type != Tok::End) statement(s);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  const Token& expect(Tok type, const char* what) {
    if (peek().type != type) fail_at(ErrorKind::SyntaxError, peek().pos, std::string("expected ") + what);
    return take();
  }

  std::string identifier() {
    const Token& t = expect(Tok::Ident, "identifier");
    if (kKeywords.count(t.text)) fail_at(ErrorKind::SyntaxError, t.pos, "keyword '" + t.text + "' used as identifier");
    return t.text;
  }

  void statement(Script& s) {
    const Token& head = peek();
    if (head.type != Tok::Ident) fail_at(ErrorKind::SyntaxError, head.pos, "expected statement");
    if (head.text == "point" || head.text == "line" || head.text == "conic") {
      take();
      const Kind k = head.text == "point" ? Kind::Point : head.text == "line" ? Kind::Line : Kind::Conic;
      do {
        const SourcePos p = peek().pos;
        s.declarations.push_back({identifier(), k, p});
      } while (peek().type == Tok::Ident);
      expect(Tok::Semi, "';'");
    } else if (head.text == "on") {
      const SourcePos p = take().pos;
      Constraint c;
      c.pos = p;
      c.object = identifier();
      c.carrier = identifier();
      expect(Tok::Semi, "';'");
      s.constraints.push_back(std::move(c));
    } else if (head.text == "assert") {
      const SourcePos p = take().pos;
      Assertion a;
      a.pos = p;
      const Token& kind = expect(Tok::Ident, "assertion kind");
      std::size_t arity = 0;
      if (kind.text == "on") {
        a.kind = AssertKind::On;
        arity = 2;
      } else if (kind.text == "collinear") {
        a.kind = AssertKind::Collinear;
        arity = 3;
      } else if (kind.text == "concurrent") {
        a.kind = AssertKind::Concurrent;
        arity = 3;
      } else if (kind.text == "conconic") {
        a.kind = AssertKind::Conconic;
        arity = 6;
      } else {
        fail_at(ErrorKind::SyntaxError, kind.pos, "unknown assertion '" + kind.text + "'");
      }
      a.text = kind.text;
      for (std::size_t k = 0; k < arity; ++k) {
        a.args.push_back(identifier());
        a.text += " " + a.args.back();
      }
      expect(Tok::Semi, "';'");
      s.assertions.push_back(std::move(a));
    } else {
      Construction c;
      c.pos = head.pos;
      c.target = identifier();
      expect(Tok::Equals, "'='");
      c.expr = call();
      expect(Tok::Semi, "';'");
      s.constructions.push_back(std::move(c));
    }
  }

  Expr call() {
    Expr e;
    e.pos = peek().pos;
    const Token& fn = expect(Tok::Ident, "function name");
    if (fn.text != "join" && fn.text != "meet" && fn.text != "pole" && fn.text != "polar")
      fail_at(ErrorKind::SyntaxError, fn.pos, "unknown function '" + fn.text + "'");
    e.fn = fn.text;
    expect(Tok::LParen, "'('");
    do {
      if (!e.args.empty()) take();
      e.args.push_back(argument());
    } while (peek().type == Tok::Comma);
    expect(Tok::RParen, "')'");
    return e;
  }

  Expr argument() {
    if (peek().type == Tok::Ident && toks_[pos_ + 1].type == Tok::LParen) return call();
    Expr leaf;
    leaf.pos = peek().pos;
    leaf.ident = identifier();
    return leaf;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void collect_leaves(const Expr& e, std::vector<const Expr*>& out) {
  if (e.is_leaf()) {
    out.push_back(&e);
    return;
  }
  for (const auto& a : e.args) collect_leaves(a, out);
}

struct Checker {
  Script& s;
  std::map<std::string, Kind, std::less<>> kinds;

  Kind infer(const Expr& e) {
    if (e.is_leaf()) {
      auto it = kinds.find(e.ident);
      if (it == kinds.end()) fail_at(ErrorKind::UndefinedIdentifier, e.pos, "'" + e.ident + "' is not defined");
      return it->second;
    }
    if (e.args.size() != 2)
      fail_at(ErrorKind::TypeMismatch, e.pos, e.fn + " takes two arguments");
    const Kind a = infer(e.args[0]);
    const Kind b = infer(e.args[1]);
    auto want = [&](Kind x, Kind y, Kind result) {
      if (a != x || b != y)
        fail_at(ErrorKind::TypeMismatch, e.pos,
                e.fn + " expects (" + std::string(to_string(x)) + ", " + std::string(to_string(y)) + ")");
      return result;
    };
    if (e.fn == "join") return want(Kind::Point, Kind::Point, Kind::Line);
    if (e.fn == "meet") return want(Kind::Line, Kind::Line, Kind::Point);
    if (e.fn == "pole") return want(Kind::Line, Kind::Conic, Kind::Point);
    return want(Kind::Point, Kind::Conic, Kind::Line);
  }

  void define(const std::string& name, Kind k, SourcePos pos) {
    if (!kinds.emplace(name, k).second) fail_at(ErrorKind::SyntaxError, pos, "redefinition of '" + name + "'");
  }

  Kind lookup(const std::string& name, SourcePos pos) const {
    auto it = kinds.find(name);
    if (it == kinds.end()) fail_at(ErrorKind::UndefinedIdentifier, pos, "'" + name + "' is not defined");
    return it->second;
  }

  void run() {
    for (const auto& d : s.declarations) define(d.name, d.kind, d.pos);
    // construction kinds are syntactic, so register them before checking bodies
    for (auto& c : s.constructions) {
      const std::string& fn = c.expr.fn;
      c.kind = (fn == "join" || fn == "polar") ? Kind::Line : Kind::Point;
      define(c.target, c.kind, c.pos);
    }
    for (auto& c : s.constructions) infer(c.expr);

    for (const auto& c : s.constraints) {
      const Kind obj = lookup(c.object, c.pos);
      const Kind car = lookup(c.carrier, c.pos);
      if (!s.is_free(c.object))
        fail_at(ErrorKind::UnsupportedConstraint, c.pos, "constructed object '" + c.object + "' cannot be constrained");
      if (obj == Kind::Conic)
        fail_at(ErrorKind::UnsupportedConstraint, c.pos, "conics cannot be constrained");
      if (obj == car) fail_at(ErrorKind::TypeMismatch, c.pos, "'on' needs objects of different kinds");
    }
    for (const auto& d : s.declarations) {
      if (d.kind == Kind::Conic) continue;
      std::size_t same_dual = 0, conics = 0;
      for (const auto& car : s.carriers_of(d.name)) {
        if (*s.kind_of(car) == Kind::Conic)
          ++conics;
        else
          ++same_dual;
      }
      if (conics > 1 || (conics == 1 && same_dual > 0) || same_dual > 2)
        fail_at(ErrorKind::UnsupportedConstraint, d.pos,
                "'" + d.name + "' has an overdetermined or irrational set of carriers");
    }
    for (const auto& a : s.assertions) {
      std::vector<Kind> ks;
      for (const auto& name : a.args) ks.push_back(lookup(name, a.pos));
      auto all = [&](Kind k) { return std::all_of(ks.begin(), ks.end(), [&](Kind x) { return x == k; }); };
      bool ok = true;
      switch (a.kind) {
        case AssertKind::On:
          ok = ks[0] != ks[1] && !(ks[0] == Kind::Conic);
          break;
        case AssertKind::Collinear:
        case AssertKind::Conconic:
          ok = all(Kind::Point);
          break;
        case AssertKind::Concurrent:
          ok = all(Kind::Line);
          break;
      }
      if (!ok) fail_at(ErrorKind::TypeMismatch, a.pos, "argument kinds do not fit '" + a.text + "'");
    }
  }
};

void topo_sort(Script& s) {
  // nodes: declarations then constructions; edges dependency -> dependent
  std::map<std::string, std::size_t, std::less<>> id;
  std::vector<Step> nodes;
  for (std::size_t i = 0; i < s.declarations.size(); ++i) {
    id[s.declarations[i].name] = nodes.size();
    nodes.push_back({false, i});
  }
  for (std::size_t i = 0; i < s.constructions.size(); ++i) {
    id[s.constructions[i].target] = nodes.size();
    nodes.push_back({true, i});
  }
  std::vector<std::set<std::size_t>> deps(nodes.size());
  for (const auto& c : s.constraints) deps[id.at(c.object)].insert(id.at(c.carrier));
  for (const auto& c : s.constructions) {
    std::vector<const Expr*> leaves;
    collect_leaves(c.expr, leaves);
    for (const auto* l : leaves) deps[id.at(c.target)].insert(id.at(l->ident));
  }
  std::vector<bool> done(nodes.size(), false);
  std::size_t placed = 0;
  while (placed < nodes.size()) {
    bool progress = false;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (done[v]) continue;
      if (std::all_of(deps[v].begin(), deps[v].end(), [&](std::size_t d) { return done[d]; })) {
        done[v] = true;
        s.order.push_back(nodes[v]);
        ++placed;
        progress = true;
      }
    }
    if (!progress) {
      std::string names;
      for (const auto& [name, v] : id)
        if (!done[v]) names += (names.empty() ? "" : ", ") + name;
      SourcePos pos;
      for (const auto& c : s.constructions)
        if (!done[id.at(c.target)]) {
          pos = c.pos;
          break;
        }
      fail_at(ErrorKind::CyclicDefinition, pos, "dependency cycle among " + names);
    }
  }
}

}  // namespace

Script parse_script(std::string_view text, std::string name) {
  Script s;
  s.name = std::move(name);
  Parser(lex(text)).parse(s);
  Checker{s, {}}.run();
  if (s.assertions.empty()) fail(ErrorKind::NoAssertion, "script has no assertion");
  topo_sort(s);
  return s;
}

}  // namespace pcl::dsl
