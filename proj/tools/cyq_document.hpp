#pragma once

// The .cyq workbench format: line-oriented, INI-like sections, exact rationals.
//
//   document := { line }
//   line     := blank | '#' comment | '[' section ']' | entry
//
// Entries per section (COMB is a signed sum of [rational] word terms, a word
// being a run of names; MATRIX is '[' row { ';' row } ']'):
//
//   [base]       factor NAME poly R.. weight R
//   [bimodule]   gen NAME : SRC -> TGT deg INT
//                left FACTOR ^ INT GEN = COMB        (x^k . GEN)
//                right GEN FACTOR ^ INT = COMB       (GEN . x^k)
//   [eta]        COMB                                (two-letter words, summed)
//   [potential]  COMB                                (cyclic words, summed)
//   [differential] d GEN = COMB                      (replaces the constructed d(GEN))
//   [quiver]     vertex NAME..  |  arrow NAME : SRC -> TGT
//   [controls]   lmax | bar_trunc | h_trunc | d | max_degree = INT
//                degrees = INT .. INT
//   [dgcat]      object NAME..  |  morphism NAME : X -> Y deg INT [weight INT]
//                compose G F = COMB  |  d F = COMB  |  weight_bound INT
//   [modules]    module NAME degrees INT.. [d MATRIX] { act MATRIX }
//                helper NAME degrees ..              (as module, not an object)
//                shift NAME = SRC by INT  |  cone NAME = SRC -> TGT MATRIX
//                map NAME : X -> Y deg INT MATRIX
//   [contracted] NAME..
//   [square]     objects NAME..
//   [roofs]      roof NAME : N -> X' -> X ; a = COMB ; s = COMB ; b = COMB ; f = COMB
//   [phi]        cell INT : NAME.. = R  |  perturb INT : NAME.. = R  (square connecting side only)
//   [pretraces]  OBJECT = R..
//   [hses]       complex B|A|C lo INT dims INT..  |  diff NAME INT MATRIX
//                map i|p|h INT MATRIX

#include <cyq/rational.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyq::cli {

/// Source position; ignored by equality so that re-parsed documents compare equal.
struct Pos {
  int line = 0, column = 0;
  friend bool operator==(const Pos&, const Pos&) { return true; }
};

struct ParseError : std::runtime_error {
  Pos pos;
  std::vector<std::string> expected;
  ParseError(Pos p, const std::string& what, std::vector<std::string> exp = {})
      : std::runtime_error(render(p, what, exp)), pos(p), expected(std::move(exp)) {}

  static std::string render(Pos p, const std::string& what, const std::vector<std::string>& exp) {
    std::string s = std::to_string(p.line) + ":" + std::to_string(p.column) + ": " + what;
    if (!exp.empty()) {
      s += "; expected one of {";
      for (std::size_t k = 0; k < exp.size(); ++k) s += (k ? ", " : "") + exp[k];
      s += "}";
    }
    return s;
  }
};

struct ReferenceError : ParseError {
  using ParseError::ParseError;
};

struct DuplicateError : ParseError {
  using ParseError::ParseError;
};

struct Term {
  Pos pos;
  Rational coef;
  std::vector<std::string> word;
  friend bool operator==(const Term&, const Term&) = default;
};
using Comb = std::vector<Term>;

struct Name {
  Pos pos;
  std::string text;
  friend bool operator==(const Name&, const Name&) = default;
};
using Names = std::vector<Name>;

struct Factor {
  Pos pos;
  std::string name;
  std::vector<Rational> poly;
  Rational weight;
  friend bool operator==(const Factor&, const Factor&) = default;
};

struct Gen {
  Pos pos;
  std::string name, source, target;
  int degree = 0;
  friend bool operator==(const Gen&, const Gen&) = default;
};

struct Action {
  Pos pos;
  bool left = true;
  std::string factor;
  int power = 0;
  std::string generator;
  Comb image;
  friend bool operator==(const Action&, const Action&) = default;
};

struct Arrow {
  Pos pos;
  std::string name, source, target;
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

struct Mor {
  Pos pos;
  std::string name, source, target;
  int degree = 0, weight = 0;
  friend bool operator==(const Mor&, const Mor&) = default;
};

struct Rule {
  Pos pos;
  std::vector<std::string> args;  // {g, f} for compose, {f} for d
  Comb value;
  friend bool operator==(const Rule&, const Rule&) = default;
};

using Rows = std::vector<std::vector<Rational>>;

struct Module {
  enum class Kind { plain, shift, cone };
  Pos pos;
  Kind kind = Kind::plain;
  bool helper = false;
  std::string name;
  std::vector<int> degrees;
  std::optional<Rows> d;
  std::vector<Rows> actions;
  std::string from, to;  // shift source; cone source and target
  int by = 0;
  Rows f;
  friend bool operator==(const Module&, const Module&) = default;
};

struct MapDecl {
  Pos pos;
  std::string name, source, target;
  int degree = 0;
  Rows m;
  friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

struct Roof {
  Pos pos;
  std::string name, n, x_prime, x;
  Comb a, s, b, f;
  friend bool operator==(const Roof&, const Roof&) = default;
};

struct CellValue {
  Pos pos;
  int p = 0;
  std::vector<std::string> chain;
  Rational value;
  bool perturb = false;
  friend bool operator==(const CellValue&, const CellValue&) = default;
};

struct Pretrace {
  Pos pos;
  std::string object;
  std::vector<Rational> values;
  friend bool operator==(const Pretrace&, const Pretrace&) = default;
};

struct ComplexDecl {
  Pos pos;
  int lo = 0;
  std::vector<std::size_t> dims;
  std::map<int, Rows> d;
  friend bool operator==(const ComplexDecl&, const ComplexDecl&) = default;
};

struct Controls {
  std::optional<std::size_t> lmax, bar_trunc, h_trunc;
  std::optional<int> d, max_degree;
  std::optional<std::pair<int, int>> degrees;
  friend bool operator==(const Controls&, const Controls&) = default;
};

struct Document {
  std::vector<Factor> factors;
  std::vector<Gen> generators;
  std::vector<Action> actions;
  Comb eta, potential;
  std::vector<Rule> overrides;
  Names vertices;
  std::vector<Arrow> arrows;
  Controls controls;
  Names objects;
  std::vector<Mor> morphisms;
  std::vector<Rule> compositions, differentials;
  std::optional<std::size_t> weight_bound;
  std::vector<Module> modules;
  std::vector<MapDecl> maps;
  Names contracted, square_objects;
  std::vector<Roof> roofs;
  std::vector<CellValue> phi;
  std::vector<Pretrace> pretraces;
  std::map<std::string, ComplexDecl> complexes;           // B, A, C
  std::map<std::string, std::map<int, Rows>> hses_maps;  // i, p, h
  std::set<std::string> sections;                        // headers seen, in canonical order on output

  bool has(const std::string& s) const { return sections.count(s) > 0; }
  friend bool operator==(const Document&, const Document&) = default;
};

inline const std::vector<std::string>& section_names() {
  static const std::vector<std::string> names = {"base",   "bimodule",   "eta",    "potential", "differential", "quiver",
                                                 "controls", "dgcat",    "modules", "contracted", "square",
                                                 "roofs",  "phi",        "pretraces", "hses"};
  return names;
}

namespace detail {

enum class Tok { name, number, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  Pos pos;
};

inline bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*' || c == '.' || c == '\'';
}

inline std::vector<Token> lex(const std::string& line, int lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return Pos{lineno, static_cast<int>(k) + 1}; };
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      if (i < line.size() && line[i] == '_') {  // identity names such as 1_P
        while (i < line.size() && name_char(line[i])) ++i;
        out.push_back({Tok::name, line.substr(start, i - start), at(start)});
        continue;
      }
      if (i + 1 < line.size() && line[i] == '/' && std::isdigit(static_cast<unsigned char>(line[i + 1]))) {
        ++i;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      }
      out.push_back({Tok::number, line.substr(start, i - start), at(start)});
      continue;
    }
    if (name_start(c)) {
      ++i;
      while (i < line.size() && (name_char(line[i]) && !(line[i] == '.' && i + 1 < line.size() && line[i + 1] == '.')))
        ++i;
      out.push_back({Tok::name, line.substr(start, i - start), at(start)});
      continue;
    }
    if (line.compare(i, 2, "->") == 0 || line.compare(i, 2, "..") == 0) {
      out.push_back({Tok::punct, line.substr(i, 2), at(i)});
      i += 2;
      continue;
    }
    if (std::string("[];:=+-^").find(c) != std::string::npos) {
      out.push_back({Tok::punct, std::string(1, c), at(i)});
      ++i;
      continue;
    }
    throw ParseError(at(i), std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", at(line.size())});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[k_]; }
  bool at_end() const { return peek().kind == Tok::end; }
  bool is(const std::string& p) const { return peek().kind != Tok::number && peek().text == p; }
  bool accept(const std::string& p) {
    if (!is(p)) return false;
    ++k_;
    return true;
  }

  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    const Token& t = peek();
    throw ParseError(t.pos, t.kind == Tok::end ? "unexpected end of line" : "unexpected '" + t.text + "'", expected);
  }

  void expect(const std::string& p) {
    if (!accept(p)) fail({"'" + p + "'"});
  }
  Pos expect_keyword(const std::string& p) {
    Pos at = peek().pos;
    if (peek().kind != Tok::name || peek().text != p) fail({p});
    ++k_;
    return at;
  }
  std::string name() {
    if (peek().kind != Tok::name) fail({"name"});
    return toks_[k_++].text;
  }
  Rational rational() {
    const bool neg = accept("-");
    if (peek().kind != Tok::number) fail({"number"});
    Rational r(toks_[k_++].text);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  int integer() {
    const Pos at = peek().pos;
    const Rational r = rational();
    if (r.get_den() != 1 || !r.get_num().fits_sint_p()) throw ParseError(at, "expected an integer");
    return static_cast<int>(r.get_num().get_si());
  }
  std::size_t count() {
    const Pos at = peek().pos;
    const int v = integer();
    if (v < 0) throw ParseError(at, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }
  void finish() {
    if (!at_end()) fail({"end of line"});
  }

  /// term { ('+' | '-') term }, term := [rational] name {name}; a lone 0 is the empty sum.
  Comb comb() {
    Comb out;
    bool first = true;
    for (;;) {
      Rational sign = 1;
      if (accept("-")) sign = -1;
      else if (!first && !accept("+")) break;
      else if (first) accept("+");
      const Pos at = peek().pos;
      Rational c = 1;
      bool has_number = false;
      if (peek().kind == Tok::number) {
        c = Rational(toks_[k_++].text);
        c.canonicalize();
        has_number = true;
      }
      std::vector<std::string> word;
      while (peek().kind == Tok::name) word.push_back(toks_[k_++].text);
      if (word.empty()) {
        if (!(has_number && sgn(c) == 0)) fail({"name"});
      } else {
        out.push_back({at, sign * c, std::move(word)});
      }
      first = false;
      if (!is("+") && !is("-")) break;
    }
    return out;
  }

  Rows matrix() {
    expect("[");
    Rows rows(1);
    while (!accept("]")) {
      if (accept(";")) {
        rows.emplace_back();
        continue;
      }
      if (peek().kind != Tok::number && !is("-")) fail({"number", "';'", "']'"});
      rows.back().push_back(rational());
    }
    if (rows.size() == 1 && rows[0].empty()) return {};
    for (const auto& r : rows)
      if (r.size() != rows[0].size()) throw ParseError(peek().pos, "matrix rows have different lengths");
    return rows;
  }

 private:
  std::vector<Token> toks_;
  std::size_t k_ = 0;
};

inline Names names_to_end(Cursor& c) {
  Names out;
  while (!c.at_end()) {
    const Pos at = c.peek().pos;
    out.push_back({at, c.name()});
  }
  return out;
}

}  // namespace detail

/// Checks every name reference; throws ReferenceError or DuplicateError at the offending line.
inline void check_references(const Document& doc) {
  auto unique = [](const auto& items, auto key, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& it : items)
      if (!seen.insert(key(it)).second) throw DuplicateError(it.pos, "duplicate " + what + " '" + key(it) + "'");
    return seen;
  };
  auto need = [](const std::set<std::string>& pool, const std::string& n, Pos at, const std::string& what) {
    if (!pool.count(n)) throw ReferenceError(at, "undeclared " + what + " '" + n + "'");
  };
  auto comb_refs = [&](const std::set<std::string>& pool, const Comb& c, const std::string& what) {
    for (const auto& t : c)
      for (const auto& n : t.word) need(pool, n, t.pos, what);
  };
  auto name_set = [](const Names& names, const std::string& what) {
    std::set<std::string> out;
    for (const auto& n : names)
      if (!out.insert(n.text).second) throw DuplicateError(n.pos, "duplicate " + what + " '" + n.text + "'");
    return out;
  };

  const auto factors = unique(doc.factors, [](const Factor& f) { return f.name; }, "factor");
  const auto gens = unique(doc.generators, [](const Gen& g) { return g.name; }, "generator");
  for (const auto& g : doc.generators) {
    need(factors, g.source, g.pos, "factor");
    need(factors, g.target, g.pos, "factor");
  }
  for (const auto& a : doc.actions) {
    need(factors, a.factor, a.pos, "factor");
    need(gens, a.generator, a.pos, "generator");
    comb_refs(gens, a.image, "generator");
  }
  comb_refs(gens, doc.eta, "generator");

  const auto vertices = name_set(doc.vertices, "vertex");
  const auto arrows = unique(doc.arrows, [](const Arrow& a) { return a.name; }, "arrow");
  for (const auto& a : doc.arrows) {
    need(vertices, a.source, a.pos, "vertex");
    need(vertices, a.target, a.pos, "vertex");
  }
  // The potential is written in quiver arrows when a quiver is given.
  for (const auto& t : doc.potential)
    for (const auto& n : t.word)
      if (!(doc.arrows.empty() ? gens : arrows).count(n))
        throw ReferenceError(t.pos, "undeclared " + std::string(doc.arrows.empty() ? "generator" : "arrow") + " '" +
                                        n + "' in the potential");

  std::set<std::string> objects = name_set(doc.objects, "object"), morphisms;
  for (const auto& o : objects) morphisms.insert("1_" + o);
  for (const auto& m : doc.morphisms) {
    if (!morphisms.insert(m.name).second) throw DuplicateError(m.pos, "duplicate morphism '" + m.name + "'");
    need(objects, m.source, m.pos, "object");
    need(objects, m.target, m.pos, "object");
  }
  for (const auto* rules : {&doc.compositions, &doc.differentials})
    for (const auto& r : *rules) {
      for (const auto& n : r.args) need(morphisms, n, r.pos, "morphism");
      comb_refs(morphisms, r.value, "morphism");
    }

  std::set<std::string> modules;
  for (const auto& m : doc.modules) {
    if (objects.count(m.name) || !modules.insert(m.name).second)
      throw DuplicateError(m.pos, "duplicate module '" + m.name + "'");
    if (m.kind != Module::Kind::plain) need(modules, m.from, m.pos, "module");
    if (m.kind == Module::Kind::cone) need(modules, m.to, m.pos, "module");
    if (m.helper) continue;
    objects.insert(m.name);
    morphisms.insert("1_" + m.name);
  }
  for (const auto& m : doc.maps) {
    if (!morphisms.insert(m.name).second) throw DuplicateError(m.pos, "duplicate morphism '" + m.name + "'");
    need(objects, m.source, m.pos, "object");
    need(objects, m.target, m.pos, "object");
  }
  for (const auto* list : {&doc.contracted, &doc.square_objects}) {
    name_set(*list, "object");
    for (const auto& o : *list) need(objects, o.text, o.pos, "object");
  }
  unique(doc.roofs, [](const Roof& r) { return r.name; }, "roof");
  // Morphisms of module categories other than named maps are generated, so
  // roof and phi terms are resolved when the category is built.
  const bool generated = !doc.modules.empty();
  for (const auto& r : doc.roofs) {
    for (const auto* o : {&r.n, &r.x_prime, &r.x}) need(objects, *o, r.pos, "object");
    if (!generated)
      for (const auto* c : {&r.a, &r.s, &r.b, &r.f}) comb_refs(morphisms, *c, "morphism");
  }
  if (!generated)
    for (const auto& c : doc.phi)
      for (const auto& n : c.chain) need(morphisms, n, c.pos, "morphism");
  unique(doc.pretraces, [](const Pretrace& p) { return p.object; }, "pretrace");
  for (const auto& p : doc.pretraces) need(objects, p.object, p.pos, "object");
}

inline Document parse_input(const std::string& text) {
  using detail::Cursor;
  Document doc;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto once = [](bool& flag, Pos at, const std::string& what) {
    if (flag) throw DuplicateError(at, "duplicate " + what);
    flag = true;
  };
  std::map<std::string, bool> control_seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Cursor c(detail::lex(line, lineno));
    if (c.at_end()) continue;
    const Pos at = c.peek().pos;
    if (c.accept("[")) {
      section = c.name();
      if (std::find(section_names().begin(), section_names().end(), section) == section_names().end())
        throw ParseError(at, "unknown section '" + section + "'", section_names());
      c.expect("]");
      c.finish();
      doc.sections.insert(section);
      continue;
    }
    if (section.empty()) throw ParseError(at, "entry outside a section", {"'['"});

    if (section == "base") {
      Factor f{at, {}, {}, {}};
      c.expect_keyword("factor");
      f.name = c.name();
      c.expect_keyword("poly");
      while (!c.at_end() && !(c.peek().kind == detail::Tok::name)) f.poly.push_back(c.rational());
      c.expect_keyword("weight");
      f.weight = c.rational();
      doc.factors.push_back(std::move(f));
    } else if (section == "bimodule") {
      if (c.peek().text == "gen") {
        c.expect_keyword("gen");
        Gen g{at, c.name(), {}, {}, 0};
        c.expect(":");
        g.source = c.name();
        c.expect("->");
        g.target = c.name();
        c.expect_keyword("deg");
        g.degree = c.integer();
        doc.generators.push_back(std::move(g));
      } else if (c.peek().text == "left") {
        c.expect_keyword("left");
        Action a{at, true, c.name(), 0, {}, {}};
        c.expect("^");
        a.power = c.integer();
        a.generator = c.name();
        c.expect("=");
        a.image = c.comb();
        doc.actions.push_back(std::move(a));
      } else if (c.peek().text == "right") {
        c.expect_keyword("right");
        Action a{at, false, {}, 0, c.name(), {}};
        a.factor = c.name();
        c.expect("^");
        a.power = c.integer();
        c.expect("=");
        a.image = c.comb();
        doc.actions.push_back(std::move(a));
      } else {
        c.fail({"gen", "left", "right"});
      }
    } else if (section == "eta" || section == "potential") {
      auto t = c.comb();
      auto& dst = section == "eta" ? doc.eta : doc.potential;
      dst.insert(dst.end(), t.begin(), t.end());
    } else if (section == "differential") {
      c.expect_keyword("d");
      Rule r{at, {c.name()}, {}};
      c.expect("=");
      r.value = c.comb();
      doc.overrides.push_back(std::move(r));
    } else if (section == "quiver") {
      if (c.peek().text == "vertex") {
        c.expect_keyword("vertex");
        for (auto& v : detail::names_to_end(c)) doc.vertices.push_back(std::move(v));
      } else if (c.peek().text == "arrow") {
        c.expect_keyword("arrow");
        Arrow a{at, c.name(), {}, {}};
        c.expect(":");
        a.source = c.name();
        c.expect("->");
        a.target = c.name();
        doc.arrows.push_back(std::move(a));
      } else {
        c.fail({"vertex", "arrow"});
      }
    } else if (section == "controls") {
      const std::string key = c.name();
      bool& seen = control_seen[key];
      c.expect("=");
      auto& k = doc.controls;
      if (key == "lmax") k.lmax = c.count();
      else if (key == "bar_trunc") k.bar_trunc = c.count();
      else if (key == "h_trunc") k.h_trunc = c.count();
      else if (key == "d") k.d = c.integer();
      else if (key == "max_degree") k.max_degree = c.integer();
      else if (key == "degrees") {
        const int lo = c.integer();
        c.expect("..");
        k.degrees = std::make_pair(lo, c.integer());
      } else {
        throw ParseError(at, "unknown control '" + key + "'",
                         {"lmax", "bar_trunc", "h_trunc", "d", "max_degree", "degrees"});
      }
      once(seen, at, "control '" + key + "'");
    } else if (section == "dgcat") {
      const std::string kw = c.peek().kind == detail::Tok::name ? c.peek().text : "";
      if (kw == "object") {
        c.expect_keyword("object");
        for (auto& o : detail::names_to_end(c)) doc.objects.push_back(std::move(o));
      } else if (kw == "morphism") {
        c.expect_keyword("morphism");
        Mor m{at, c.name(), {}, {}, 0, 0};
        c.expect(":");
        m.source = c.name();
        c.expect("->");
        m.target = c.name();
        c.expect_keyword("deg");
        m.degree = c.integer();
        if (!c.at_end()) {
          c.expect_keyword("weight");
          m.weight = static_cast<int>(c.count());
        }
        doc.morphisms.push_back(std::move(m));
      } else if (kw == "compose") {
        c.expect_keyword("compose");
        Rule r{at, {c.name(), c.name()}, {}};
        c.expect("=");
        r.value = c.comb();
        doc.compositions.push_back(std::move(r));
      } else if (kw == "d") {
        c.expect_keyword("d");
        Rule r{at, {c.name()}, {}};
        c.expect("=");
        r.value = c.comb();
        doc.differentials.push_back(std::move(r));
      } else if (kw == "weight_bound") {
        c.expect_keyword("weight_bound");
        if (doc.weight_bound) throw DuplicateError(at, "duplicate weight_bound");
        doc.weight_bound = c.count();
      } else {
        c.fail({"object", "morphism", "compose", "d", "weight_bound"});
      }
    } else if (section == "modules") {
      const std::string kw = c.peek().kind == detail::Tok::name ? c.peek().text : "";
      if (kw == "module" || kw == "helper") {
        c.expect_keyword(kw);
        Module m;
        m.pos = at;
        m.helper = kw == "helper";
        m.name = c.name();
        c.expect_keyword("degrees");
        while (!c.at_end() && c.peek().kind != detail::Tok::name) m.degrees.push_back(c.integer());
        if (!c.at_end() && c.peek().text == "d") {
          c.expect_keyword("d");
          m.d = c.matrix();
        }
        while (!c.at_end()) {
          c.expect_keyword("act");
          m.actions.push_back(c.matrix());
        }
        doc.modules.push_back(std::move(m));
      } else if (kw == "shift") {
        c.expect_keyword("shift");
        Module m;
        m.pos = at;
        m.kind = Module::Kind::shift;
        m.name = c.name();
        c.expect("=");
        m.from = c.name();
        c.expect_keyword("by");
        m.by = c.integer();
        doc.modules.push_back(std::move(m));
      } else if (kw == "cone") {
        c.expect_keyword("cone");
        Module m;
        m.pos = at;
        m.kind = Module::Kind::cone;
        m.name = c.name();
        c.expect("=");
        m.from = c.name();
        c.expect("->");
        m.to = c.name();
        m.f = c.matrix();
        doc.modules.push_back(std::move(m));
      } else if (kw == "map") {
        c.expect_keyword("map");
        MapDecl m{at, c.name(), {}, {}, 0, {}};
        c.expect(":");
        m.source = c.name();
        c.expect("->");
        m.target = c.name();
        c.expect_keyword("deg");
        m.degree = c.integer();
        m.m = c.matrix();
        doc.maps.push_back(std::move(m));
      } else {
        c.fail({"module", "helper", "shift", "cone", "map"});
      }
    } else if (section == "contracted") {
      for (auto& o : detail::names_to_end(c)) doc.contracted.push_back(std::move(o));
    } else if (section == "square") {
      c.expect_keyword("objects");
      for (auto& o : detail::names_to_end(c)) doc.square_objects.push_back(std::move(o));
    } else if (section == "roofs") {
      c.expect_keyword("roof");
      Roof r;
      r.pos = at;
      r.name = c.name();
      c.expect(":");
      r.n = c.name();
      c.expect("->");
      r.x_prime = c.name();
      c.expect("->");
      r.x = c.name();
      for (auto [key, dst] : {std::pair{"a", &r.a}, std::pair{"s", &r.s}, std::pair{"b", &r.b}, std::pair{"f", &r.f}}) {
        c.expect(";");
        c.expect_keyword(key);
        c.expect("=");
        *dst = c.comb();
      }
      doc.roofs.push_back(std::move(r));
    } else if (section == "phi") {
      const bool perturb = c.peek().text == "perturb";
      if (!perturb && c.peek().text != "cell") c.fail({"cell", "perturb"});
      c.expect_keyword(perturb ? "perturb" : "cell");
      CellValue v{at, c.integer(), {}, {}, perturb};
      c.expect(":");
      while (c.peek().kind == detail::Tok::name) v.chain.push_back(c.name());
      c.expect("=");
      v.value = c.rational();
      doc.phi.push_back(std::move(v));
    } else if (section == "pretraces") {
      Pretrace p{at, c.name(), {}};
      c.expect("=");
      while (!c.at_end()) p.values.push_back(c.rational());
      doc.pretraces.push_back(std::move(p));
    } else if (section == "hses") {
      const std::string kw = c.peek().kind == detail::Tok::name ? c.peek().text : "";
      if (kw == "complex") {
        c.expect_keyword("complex");
        const Pos np = c.peek().pos;
        const std::string n = c.name();
        if (n != "B" && n != "A" && n != "C") throw ParseError(np, "unknown complex '" + n + "'", {"A", "B", "C"});
        if (doc.complexes.count(n) && doc.complexes.at(n).pos.line) throw DuplicateError(at, "duplicate complex '" + n + "'");
        ComplexDecl& cx = doc.complexes[n];
        cx.pos = at;
        c.expect_keyword("lo");
        cx.lo = c.integer();
        c.expect_keyword("dims");
        while (!c.at_end()) cx.dims.push_back(c.count());
      } else if (kw == "diff") {
        c.expect_keyword("diff");
        const std::string n = c.name();
        if (!doc.complexes.count(n)) throw ReferenceError(at, "undeclared complex '" + n + "'");
        const int k = c.integer();
        if (!doc.complexes.at(n).d.emplace(k, c.matrix()).second)
          throw DuplicateError(at, "duplicate differential of '" + n + "' in degree " + std::to_string(k));
      } else if (kw == "map") {
        c.expect_keyword("map");
        const Pos np = c.peek().pos;
        const std::string n = c.name();
        if (n != "i" && n != "p" && n != "h") throw ParseError(np, "unknown map '" + n + "'", {"h", "i", "p"});
        const int k = c.integer();
        if (!doc.hses_maps[n].emplace(k, c.matrix()).second)
          throw DuplicateError(at, "duplicate block of '" + n + "' in degree " + std::to_string(k));
      } else {
        c.fail({"complex", "diff", "map"});
      }
    }
    c.finish();
  }
  check_references(doc);
  return doc;
}

// ---------------------------------------------------------------------------
// canonical serialisation

namespace detail {

inline std::string rat(const Rational& r) { return r.get_str(); }

inline std::string comb(const Comb& c) {
  if (c.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Rational& x = c[k].coef;
    if (k) s += sgn(x) < 0 ? " - " : " + ";
    else if (sgn(x) < 0) s += "-";
    const Rational a = abs(x);
    if (a != 1) s += rat(a) + " ";
    for (std::size_t j = 0; j < c[k].word.size(); ++j) s += (j ? " " : "") + c[k].word[j];
  }
  return s;
}

inline std::string matrix(const Rows& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (r) s += "; ";
    for (std::size_t j = 0; j < m[r].size(); ++j) s += (j ? " " : "") + rat(m[r][j]);
  }
  return s + "]";
}

inline std::string join(const Names& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + v[k].text;
  return s;
}

}  // namespace detail

inline std::string serialize(const Document& doc) {
  using detail::comb;
  using detail::matrix;
  using detail::rat;
  std::ostringstream os;
  for (const auto& sec : section_names()) {
    if (!doc.has(sec)) continue;
    os << "[" << sec << "]\n";
    if (sec == "base") {
      for (const auto& f : doc.factors) {
        os << "factor " << f.name << " poly";
        for (const auto& x : f.poly) os << " " << rat(x);
        os << " weight " << rat(f.weight) << "\n";
      }
    } else if (sec == "bimodule") {
      for (const auto& g : doc.generators)
        os << "gen " << g.name << " : " << g.source << " -> " << g.target << " deg " << g.degree << "\n";
      for (const auto& a : doc.actions) {
        if (a.left) os << "left " << a.factor << "^" << a.power << " " << a.generator;
        else os << "right " << a.generator << " " << a.factor << "^" << a.power;
        os << " = " << comb(a.image) << "\n";
      }
    } else if (sec == "eta") {
      if (!doc.eta.empty()) os << comb(doc.eta) << "\n";
    } else if (sec == "potential") {
      if (!doc.potential.empty()) os << comb(doc.potential) << "\n";
    } else if (sec == "differential") {
      for (const auto& r : doc.overrides) os << "d " << r.args[0] << " = " << comb(r.value) << "\n";
    } else if (sec == "quiver") {
      if (!doc.vertices.empty()) os << "vertex " << detail::join(doc.vertices) << "\n";
      for (const auto& a : doc.arrows) os << "arrow " << a.name << " : " << a.source << " -> " << a.target << "\n";
    } else if (sec == "controls") {
      const auto& k = doc.controls;
      if (k.lmax) os << "lmax = " << *k.lmax << "\n";
      if (k.bar_trunc) os << "bar_trunc = " << *k.bar_trunc << "\n";
      if (k.h_trunc) os << "h_trunc = " << *k.h_trunc << "\n";
      if (k.d) os << "d = " << *k.d << "\n";
      if (k.max_degree) os << "max_degree = " << *k.max_degree << "\n";
      if (k.degrees) os << "degrees = " << k.degrees->first << " .. " << k.degrees->second << "\n";
    } else if (sec == "dgcat") {
      if (!doc.objects.empty()) os << "object " << detail::join(doc.objects) << "\n";
      for (const auto& m : doc.morphisms) {
        os << "morphism " << m.name << " : " << m.source << " -> " << m.target << " deg " << m.degree;
        if (m.weight) os << " weight " << m.weight;
        os << "\n";
      }
      for (const auto& r : doc.compositions) os << "compose " << r.args[0] << " " << r.args[1] << " = " << comb(r.value) << "\n";
      for (const auto& r : doc.differentials) os << "d " << r.args[0] << " = " << comb(r.value) << "\n";
      if (doc.weight_bound) os << "weight_bound " << *doc.weight_bound << "\n";
    } else if (sec == "modules") {
      for (const auto& m : doc.modules) {
        switch (m.kind) {
          case Module::Kind::plain: {
            os << (m.helper ? "helper " : "module ") << m.name << " degrees";
            for (auto d : m.degrees) os << " " << d;
            if (m.d) os << " d " << matrix(*m.d);
            for (const auto& a : m.actions) os << " act " << matrix(a);
            break;
          }
          case Module::Kind::shift:
            os << "shift " << m.name << " = " << m.from << " by " << m.by;
            break;
          case Module::Kind::cone:
            os << "cone " << m.name << " = " << m.from << " -> " << m.to << " " << matrix(m.f);
            break;
        }
        os << "\n";
      }
      for (const auto& m : doc.maps)
        os << "map " << m.name << " : " << m.source << " -> " << m.target << " deg " << m.degree << " " << matrix(m.m)
           << "\n";
    } else if (sec == "contracted") {
      if (!doc.contracted.empty()) os << detail::join(doc.contracted) << "\n";
    } else if (sec == "square") {
      if (!doc.square_objects.empty()) os << "objects " << detail::join(doc.square_objects) << "\n";
    } else if (sec == "roofs") {
      for (const auto& r : doc.roofs)
        os << "roof " << r.name << " : " << r.n << " -> " << r.x_prime << " -> " << r.x << " ; a = " << comb(r.a)
           << " ; s = " << comb(r.s) << " ; b = " << comb(r.b) << " ; f = " << comb(r.f) << "\n";
    } else if (sec == "phi") {
      for (const auto& v : doc.phi) {
        os << (v.perturb ? "perturb " : "cell ") << v.p << " :";
        for (const auto& n : v.chain) os << " " << n;
        os << " = " << rat(v.value) << "\n";
      }
    } else if (sec == "pretraces") {
      for (const auto& p : doc.pretraces) {
        os << p.object << " =";
        for (const auto& x : p.values) os << " " << rat(x);
        os << "\n";
      }
    } else if (sec == "hses") {
      for (const auto& [n, cx] : doc.complexes) {
        os << "complex " << n << " lo " << cx.lo << " dims";
        for (auto d : cx.dims) os << " " << d;
        os << "\n";
        for (const auto& [k, m] : cx.d) os << "diff " << n << " " << k << " " << matrix(m) << "\n";
      }
      for (const auto& [n, blocks] : doc.hses_maps)
        for (const auto& [k, m] : blocks) os << "map " << n << " " << k << " " << matrix(m) << "\n";
    }
  }
  return os.str();
}

}  // namespace cyq::cli
