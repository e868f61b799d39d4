#include "lq/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace lq {

GradeRef conj(GradeRef g) {
  g.conjugated = !g.conjugated;
  return g;
}

GradeExpr conj(GradeExpr e) {
  for (auto& t : e.terms) t.ref = conj(t.ref);
  return e;
}

GradeExpr grade_expr(GradeRef r) {
  GradeExpr e;
  e.terms.push_back({+1, std::move(r)});
  return e;
}

FormulaPtr atom(std::string name, bool negated) {
  auto f = std::make_shared<Formula>();
  f->kind = Conn::Atom;
  f->name = std::move(name);
  f->negated = negated;
  return f;
}

FormulaPtr negate_atom(const FormulaPtr& a) {
  if (!a || a->kind != Conn::Atom)
    throw DomainError("primitive negation applies to atoms only");
  return atom(a->name, !a->negated);
}

FormulaPtr unary(Conn k, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(a);
  return f;
}

FormulaPtr binary(Conn k, FormulaPtr l, FormulaPtr r) {
  if (k == Conn::Ent || k == Conn::EntDual) {
    auto ok = [](const FormulaPtr& x) { return is_literal(x) || is_qubit_shape(x); };
    if (!ok(l) || !ok(r))
      throw ParseError("@ / sect operands must be qubit formulas or literals");
  }
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

FormulaPtr graded(Conn k, FormulaPtr l, FormulaPtr r, GradeRef g0, GradeRef g1) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(l);
  f->right = std::move(r);
  f->g0 = std::move(g0);
  f->g1 = std::move(g1);
  return f;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Conn::Atom:
      return a->name == b->name && a->negated == b->negated;
    case Conn::Not:
      return equal(a->left, b->left);
    case Conn::GradedAnd:
    case Conn::GradedOr:
      if (!(a->g0 == b->g0 && a->g1 == b->g1)) return false;
      [[fallthrough]];
    default:
      return equal(a->left, b->left) && equal(a->right, b->right);
  }
}

bool is_literal(const FormulaPtr& f) { return f && f->kind == Conn::Atom; }

bool is_qubit_shape(const FormulaPtr& f) {
  if (!f || f->kind != Conn::And) return false;
  const auto& l = f->left;
  const auto& r = f->right;
  return is_literal(l) && is_literal(r) && l->name == r->name &&
         l->negated != r->negated;
}

FormulaPtr qubit_literal(const FormulaPtr& f) {
  if (is_literal(f)) return f;
  if (is_qubit_shape(f)) return f->left;
  throw DomainError("not a qubit formula or literal");
}

FormulaPtr qubit_of(const FormulaPtr& lit) {
  return binary(Conn::And, lit, negate_atom(lit));
}

bool equal(const GradedSequent& a, const GradedSequent& b, double eval_tol) {
  if (a.ante.size() != b.ante.size() || a.cons.size() != b.cons.size())
    return false;
  for (size_t i = 0; i < a.ante.size(); ++i)
    if (!equal(a.ante[i], b.ante[i])) return false;
  for (size_t i = 0; i < a.cons.size(); ++i)
    if (!equal(a.cons[i], b.cons[i])) return false;
  if (a.label.kind != b.label.kind) return false;
  switch (a.label.kind) {
    case SequentLabel::Kind::None: return true;
    case SequentLabel::Kind::Grade: return a.label.grade == b.label.grade;
    case SequentLabel::Kind::Eval:
      return std::abs(a.label.eval - b.label.eval) <= eval_tol;
  }
  return false;
}

const DerivStep* Derivation::find(int id) const {
  for (const auto& s : steps)
    if (s.id == id) return &s;
  return nullptr;
}

bool DeclarationSet::has_atom(const std::string& n) const {
  return std::find(atoms.begin(), atoms.end(), n) != atoms.end();
}
bool DeclarationSet::has_grade(const std::string& n) const {
  return std::find(grades.begin(), grades.end(), n) != grades.end();
}
int DeclarationSet::atom_index(const std::string& n) const {
  auto it = std::find(atoms.begin(), atoms.end(), n);
  return it == atoms.end() ? -1 : int(it - atoms.begin());
}
GradeRef DeclarationSet::grade_for_atom_index(int i) const {
  if (i < 0 || size_t(i) >= grades.size())
    throw DomainError("no grade declared for atom index " + std::to_string(i));
  return GradeRef{grades[size_t(i)], false};
}
int DeclarationSet::partner_atom_index(int i) const {
  if (atoms.size() != 2 || i < 0 || i > 1) return -1;
  return 1 - i;
}
const FormulaPtr* DeclarationSet::qubit(const std::string& n) const {
  for (const auto& [name, lit] : qubits)
    if (name == n) return &lit;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  End, Ident, Number,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Colon, Caret, Star, Plus, Minus, Eq,
  Amp, At, Arrow, Coarrow, Turnstile,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }
  bool at(Tok k) const { return cur_.kind == k; }
  bool at_ident(std::string_view s) const {
    return cur_.kind == Tok::Ident && cur_.text == s;
  }
  Token expect(Tok k, const std::string& what) {
    if (cur_.kind != k) fail("expected " + what);
    return take();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(cur_.pos) +
                     (cur_.text.empty() ? "" : " near '" + cur_.text + "'"));
  }

 private:
  void advance() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else {
        break;
      }
    }
    cur_ = Token{Tok::End, "", i_};
    if (i_ >= src_.size()) return;
    size_t start = i_;
    char c = src_[i_];
    auto one = [&](Tok k) {
      cur_ = Token{k, std::string(1, c), start};
      ++i_;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      cur_ = Token{Tok::Ident, std::string(src_.substr(i_, j - i_)), start};
      i_ = j;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.' ||
              src_[j] == 'e' || src_[j] == 'E' ||
              ((src_[j] == '+' || src_[j] == '-') && j > i_ &&
               (src_[j - 1] == 'e' || src_[j - 1] == 'E'))))
        ++j;
      cur_ = Token{Tok::Number, std::string(src_.substr(i_, j - i_)), start};
      i_ = j;
      return;
    }
    switch (c) {
      case '(': one(Tok::LParen); return;
      case ')': one(Tok::RParen); return;
      case '{': one(Tok::LBrace); return;
      case '}': one(Tok::RBrace); return;
      case '[': one(Tok::LBracket); return;
      case ']': one(Tok::RBracket); return;
      case ',': one(Tok::Comma); return;
      case ';': one(Tok::Semi); return;
      case ':': one(Tok::Colon); return;
      case '^': one(Tok::Caret); return;
      case '*': one(Tok::Star); return;
      case '+': one(Tok::Plus); return;
      case '=': one(Tok::Eq); return;
      case '&': one(Tok::Amp); return;
      case '@': one(Tok::At); return;
      case '-':
        if (i_ + 1 < src_.size() && src_[i_ + 1] == '>') {
          cur_ = Token{Tok::Arrow, "->", start};
          i_ += 2;
        } else {
          one(Tok::Minus);
        }
        return;
      case '<':
        if (i_ + 1 < src_.size() && src_[i_ + 1] == '-') {
          cur_ = Token{Tok::Coarrow, "<-", start};
          i_ += 2;
        } else {
          throw ParseError("stray '<' at offset " + std::to_string(start));
        }
        return;
      case '|':
        if (i_ + 1 < src_.size() && src_[i_ + 1] == '-') {
          cur_ = Token{Tok::Turnstile, "|-", start};
          i_ += 2;
        } else {
          throw ParseError("stray '|' at offset " + std::to_string(start));
        }
        return;
      default:
        throw ParseError("unexpected character '" + std::string(1, c) +
                         "' at offset " + std::to_string(start));
    }
  }

  std::string_view src_;
  size_t i_ = 0;
  Token cur_;
};

const std::set<std::string> kReserved = {
    "v",    "par",   "not",  "sect", "atom", "grade", "qubit",
    "bind", "md",    "proof", "in",  "by",   "with",  "norm",
    "strict", "none"};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view src, const DeclarationSet* decls)
      : lx_(src), decls_(decls) {}

  Lexer lx_;
  const DeclarationSet* decls_;

  GradeRef parse_grade_ref() {
    Token t = lx_.expect(Tok::Ident, "grade symbol");
    if (!decls_->has_grade(t.text))
      throw ParseError("undeclared grade symbol '" + t.text + "'");
    GradeRef g{t.text, false};
    if (lx_.at(Tok::Star)) {
      lx_.take();
      g.conjugated = true;
    }
    return g;
  }

  GradeExpr parse_grade_expr() {
    GradeExpr e;
    int sign = +1;
    if (lx_.at(Tok::Minus)) {
      lx_.take();
      sign = -1;
    } else if (lx_.at(Tok::Plus)) {
      lx_.take();
    }
    e.terms.push_back({sign, parse_grade_ref()});
    while (lx_.at(Tok::Plus) || lx_.at(Tok::Minus)) {
      sign = lx_.take().kind == Tok::Plus ? +1 : -1;
      e.terms.push_back({sign, parse_grade_ref()});
    }
    return e;
  }

  FormulaPtr parse_primary() {
    if (lx_.at(Tok::LParen)) {
      lx_.take();
      FormulaPtr f = parse_formula();
      lx_.expect(Tok::RParen, "')'");
      return f;
    }
    if (lx_.at_ident("not")) {
      lx_.take();
      return unary(Conn::Not, parse_primary());
    }
    Token t = lx_.expect(Tok::Ident, "formula");
    if (kReserved.count(t.text))
      throw ParseError("reserved word '" + t.text + "' used as a formula");
    FormulaPtr f;
    if (const FormulaPtr* lit = decls_->qubit(t.text)) {
      f = qubit_of(*lit);
    } else if (decls_->has_atom(t.text)) {
      f = atom(t.text);
    } else {
      throw ParseError("undeclared symbol '" + t.text + "'");
    }
    while (lx_.at(Tok::Caret)) {
      lx_.take();
      f = negate_atom(f);  // throws on non-atoms
    }
    return f;
  }

  // One level of binary connectives; nesting requires parentheses.
  FormulaPtr parse_formula() {
    FormulaPtr l = parse_primary();
    std::optional<Conn> op;
    GradeRef g0, g1;
    if (lx_.at(Tok::Amp)) {
      lx_.take();
      if (lx_.at(Tok::LBracket)) {
        lx_.take();
        g0 = parse_grade_ref();
        lx_.expect(Tok::Comma, "','");
        g1 = parse_grade_ref();
        lx_.expect(Tok::RBracket, "']'");
        op = Conn::GradedAnd;
      } else {
        op = Conn::And;
      }
    } else if (lx_.at_ident("v")) {
      lx_.take();
      if (lx_.at(Tok::LBracket)) {
        lx_.take();
        g0 = parse_grade_ref();
        lx_.expect(Tok::Comma, "','");
        g1 = parse_grade_ref();
        lx_.expect(Tok::RBracket, "']'");
        op = Conn::GradedOr;
      } else {
        op = Conn::Or;
      }
    } else if (lx_.at(Tok::Star)) {
      lx_.take();
      op = Conn::Times;
    } else if (lx_.at_ident("par")) {
      lx_.take();
      op = Conn::Par;
    } else if (lx_.at(Tok::At)) {
      lx_.take();
      op = Conn::Ent;
    } else if (lx_.at_ident("sect")) {
      lx_.take();
      op = Conn::EntDual;
    } else if (lx_.at(Tok::Arrow)) {
      lx_.take();
      op = Conn::Implies;
    } else if (lx_.at(Tok::Coarrow)) {
      lx_.take();
      op = Conn::CoImplies;
    }
    if (!op) return l;
    FormulaPtr r = parse_primary();
    if (is_binary_op_ahead())
      lx_.fail("binary connectives do not associate; parenthesize");
    if (*op == Conn::GradedAnd || *op == Conn::GradedOr)
      return graded(*op, l, r, g0, g1);
    return binary(*op, l, r);
  }

  bool is_binary_op_ahead() {
    return lx_.at(Tok::Amp) || lx_.at(Tok::Star) || lx_.at(Tok::At) ||
           lx_.at(Tok::Arrow) || lx_.at(Tok::Coarrow) || lx_.at_ident("v") ||
           lx_.at_ident("par") || lx_.at_ident("sect");
  }

  std::vector<FormulaPtr> parse_formula_list() {
    std::vector<FormulaPtr> out;
    out.push_back(parse_formula());
    while (lx_.at(Tok::Comma)) {
      lx_.take();
      out.push_back(parse_formula());
    }
    return out;
  }

  double parse_number() {
    Token t = lx_.expect(Tok::Number, "number");
    double v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw ParseError("bad number '" + t.text + "'");
    return v;
  }

  GradedSequent parse_sequent() {
    GradedSequent s;
    if (!lx_.at(Tok::Turnstile)) s.ante = parse_formula_list();
    lx_.expect(Tok::Turnstile, "'|-'");
    if (lx_.at(Tok::LBrace)) {
      lx_.take();
      s.label.kind = SequentLabel::Kind::Grade;
      s.label.grade = parse_grade_expr();
      lx_.expect(Tok::RBrace, "'}'");
    } else if (lx_.at(Tok::LBracket)) {
      lx_.take();
      s.label.kind = SequentLabel::Kind::Eval;
      s.label.eval = parse_number();
      lx_.expect(Tok::RBracket, "']'");
      if (s.label.eval < 0.0 || s.label.eval > 1.0)
        throw ParseError("evaluation outside [0,1]");
    }
    if (!sequent_side_done()) s.cons = parse_formula_list();
    check_label(s);
    return s;
  }

  bool sequent_side_done() {
    return lx_.at(Tok::End) || lx_.at(Tok::Semi) || lx_.at_ident("by");
  }

  static void check_label(const GradedSequent& s) {
    switch (s.label.kind) {
      case SequentLabel::Kind::Grade:
        if (s.ante.empty() == s.cons.empty())
          throw ParseError(
              "grade label requires exactly one empty sequent side");
        break;
      case SequentLabel::Kind::Eval:
        if (s.ante.empty() || s.cons.empty())
          throw ParseError(
              "evaluation label requires both sequent sides non-empty");
        break;
      case SequentLabel::Kind::None:
        break;
    }
  }
};

std::complex<double> parse_complex_literal(Lexer& lx) {
  auto signed_number = [&lx]() {
    double sign = 1.0;
    if (lx.at(Tok::Minus)) {
      lx.take();
      sign = -1.0;
    } else if (lx.at(Tok::Plus)) {
      lx.take();
    }
    Token t = lx.expect(Tok::Number, "number");
    double v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw ParseError("bad number '" + t.text + "'");
    return sign * v;
  };
  double a = signed_number();
  // forms: a | ai | a+bi | a-bi
  if (lx.at_ident("i")) {
    lx.take();
    return {0.0, a};
  }
  if (lx.at(Tok::Plus) || lx.at(Tok::Minus)) {
    double b = signed_number();
    if (!lx.at_ident("i")) throw ParseError("expected 'i' in complex literal");
    lx.take();
    return {a, b};
  }
  return {a, 0.0};
}

}  // namespace

FormulaPtr parse_formula(const std::string& text, const DeclarationSet& decls) {
  Parser p(text, &decls);
  FormulaPtr f = p.parse_formula();
  if (!p.lx_.at(Tok::End)) p.lx_.fail("trailing input after formula");
  return f;
}

GradedSequent parse_sequent(const std::string& text, const DeclarationSet& decls) {
  Parser p(text, &decls);
  GradedSequent s = p.parse_sequent();
  if (!p.lx_.at(Tok::End)) p.lx_.fail("trailing input after sequent");
  return s;
}

// Rule names are validated here against the full table so a typo in a script
// fails at parse time, not at check time.
namespace detail {
bool known_rule_name(const std::string& n);
}

Script parse_script(const std::string& document) {
  Script sc;
  Parser p(document, &sc.decls);
  Lexer& lx = p.lx_;
  while (!lx.at(Tok::End)) {
    if (lx.at_ident("atom")) {
      lx.take();
      for (;;) {
        Token t = lx.expect(Tok::Ident, "atom name");
        if (kReserved.count(t.text))
          throw ParseError("reserved word '" + t.text + "' as atom name");
        if (sc.decls.has_atom(t.text))
          throw ParseError("atom '" + t.text + "' declared twice");
        sc.decls.atoms.push_back(t.text);
        if (lx.at(Tok::Comma)) { lx.take(); continue; }
        break;
      }
      lx.expect(Tok::Semi, "';'");
    } else if (lx.at_ident("grade")) {
      lx.take();
      for (;;) {
        Token t = lx.expect(Tok::Ident, "grade name");
        if (sc.decls.has_grade(t.text))
          throw ParseError("grade '" + t.text + "' declared twice");
        sc.decls.grades.push_back(t.text);
        if (lx.at(Tok::Comma)) { lx.take(); continue; }
        break;
      }
      lx.expect(Tok::Semi, "';'");
    } else if (lx.at_ident("qubit")) {
      lx.take();
      Token name = lx.expect(Tok::Ident, "qubit name");
      lx.expect(Tok::Eq, "'='");
      FormulaPtr lit = p.parse_primary();
      if (!is_literal(lit))
        throw ParseError("qubit abbreviation needs an atom or negated atom");
      lx.expect(Tok::Semi, "';'");
      if (sc.decls.qubit(name.text) || sc.decls.has_atom(name.text))
        throw ParseError("symbol '" + name.text + "' declared twice");
      sc.decls.qubits.emplace_back(name.text, lit);
    } else if (lx.at_ident("bind")) {
      lx.take();
      Token sym = lx.expect(Tok::Ident, "grade symbol");
      if (!sc.decls.has_grade(sym.text))
        throw ParseError("bind of undeclared grade '" + sym.text + "'");
      lx.expect(Tok::Eq, "'='");
      std::complex<double> z = parse_complex_literal(lx);
      lx.expect(Tok::Semi, "';'");
      sc.env.binds.emplace_back(sym.text, z);
    } else if (lx.at_ident("md")) {
      lx.take();
      Token m = lx.expect(Tok::Ident, "md mode");
      if (m.text != "norm" && m.text != "strict" && m.text != "none")
        throw ParseError("md mode must be norm, strict or none");
      sc.env.md_mode = m.text;
      lx.expect(Tok::Semi, "';'");
    } else if (lx.at_ident("proof")) {
      lx.take();
      Derivation d;
      d.name = lx.expect(Tok::Ident, "proof name").text;
      if (!lx.at_ident("in")) lx.fail("expected 'in'");
      lx.take();
      d.ruleset = lx.expect(Tok::Ident, "ruleset name").text;
      while (lx.at(Tok::Plus)) {
        lx.take();
        d.ruleset += "+" + lx.expect(Tok::Ident, "ruleset flag").text;
      }
      lx.expect(Tok::LBrace, "'{'");
      std::set<int> seen;
      while (!lx.at(Tok::RBrace)) {
        DerivStep st;
        Token idt = lx.expect(Tok::Number, "step id");
        st.id = std::atoi(idt.text.c_str());
        if (st.id <= 0 || seen.count(st.id))
          throw ParseError("bad or duplicate step id '" + idt.text + "'");
        lx.expect(Tok::Colon, "':'");
        st.conclusion = p.parse_sequent();
        if (!lx.at_ident("by")) lx.fail("expected 'by'");
        lx.take();
        std::string rule = lx.expect(Tok::Ident, "rule name").text;
        while (lx.at(Tok::Minus)) {
          lx.take();
          rule += "-" + lx.expect(Tok::Ident, "rule name").text;
        }
        if (!detail::known_rule_name(rule))
          throw ParseError("rule name '" + rule + "' unknown to any ruleset");
        st.rule = rule;
        if (lx.at(Tok::LParen)) {
          lx.take();
          if (!lx.at(Tok::RParen)) {
            for (;;) {
              Token pr = lx.expect(Tok::Number, "premise id");
              int pid = std::atoi(pr.text.c_str());
              if (!seen.count(pid))
                throw ParseError("dangling premise reference '#" + pr.text +
                                 "' in step " + std::to_string(st.id));
              st.premises.push_back(pid);
              if (lx.at(Tok::Comma)) { lx.take(); continue; }
              break;
            }
          }
          lx.expect(Tok::RParen, "')'");
        }
        if (lx.at_ident("with")) {
          lx.take();
          if (!lx.at_ident("md")) lx.fail("expected 'md' after 'with'");
          lx.take();
          st.md = true;
        }
        lx.expect(Tok::Semi, "';'");
        seen.insert(st.id);
        d.steps.push_back(std::move(st));
      }
      lx.expect(Tok::RBrace, "'}'");
      sc.proofs.push_back(std::move(d));
    } else {
      lx.fail("expected a declaration or proof block");
    }
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  return std::string(buf, p);
}

std::string render_ref(const GradeRef& g) {
  return g.symbol + (g.conjugated ? "*" : "");
}

const char* infix(Conn k) {
  switch (k) {
    case Conn::And: return " & ";
    case Conn::Or: return " v ";
    case Conn::Times: return " * ";
    case Conn::Par: return " par ";
    case Conn::Ent: return " @ ";
    case Conn::EntDual: return " sect ";
    case Conn::Implies: return " -> ";
    case Conn::CoImplies: return " <- ";
    default: return "?";
  }
}

std::string render_rec(const FormulaPtr& f, const DeclarationSet* decls,
                       bool need_parens) {
  if (decls) {
    for (const auto& [name, lit] : decls->qubits)
      if (equal(f, qubit_of(lit))) return name;
  }
  switch (f->kind) {
    case Conn::Atom:
      return f->name + (f->negated ? "^" : "");
    case Conn::Not: {
      std::string inner = render_rec(f->left, decls, true);
      return "not " + inner;
    }
    case Conn::GradedAnd:
    case Conn::GradedOr: {
      std::string op = (f->kind == Conn::GradedAnd ? " &[" : " v[");
      std::string s = render_rec(f->left, decls, true) + op + render_ref(f->g0) +
                      "," + render_ref(f->g1) + "] " +
                      render_rec(f->right, decls, true);
      return need_parens ? "(" + s + ")" : s;
    }
    default: {
      std::string s = render_rec(f->left, decls, true) + infix(f->kind) +
                      render_rec(f->right, decls, true);
      return need_parens ? "(" + s + ")" : s;
    }
  }
}

}  // namespace

std::string render_grade_expr(const GradeExpr& e) {
  std::string s;
  for (size_t i = 0; i < e.terms.size(); ++i) {
    const auto& t = e.terms[i];
    if (t.sign < 0)
      s += "-";
    else if (i > 0)
      s += "+";
    s += render_ref(t.ref);
  }
  return s;
}

std::string render_complex(std::complex<double> z) {
  std::string s = shortest(z.real());
  s += (z.imag() < 0 || std::signbit(z.imag())) ? "-" : "+";
  s += shortest(std::abs(z.imag()));
  s += "i";
  return s;
}

std::string render(const FormulaPtr& f, const DeclarationSet* decls) {
  return render_rec(f, decls, false);
}

std::string render(const GradedSequent& s, const DeclarationSet* decls) {
  std::string out;
  for (size_t i = 0; i < s.ante.size(); ++i) {
    if (i) out += ", ";
    out += render(s.ante[i], decls);
  }
  if (!s.ante.empty()) out += " ";
  out += "|-";
  switch (s.label.kind) {
    case SequentLabel::Kind::Grade:
      out += "{" + render_grade_expr(s.label.grade) + "}";
      break;
    case SequentLabel::Kind::Eval:
      out += "[" + shortest(s.label.eval) + "]";
      break;
    case SequentLabel::Kind::None:
      break;
  }
  for (size_t i = 0; i < s.cons.size(); ++i) {
    out += (i ? ", " : " ");
    out += render(s.cons[i], decls);
  }
  return out;
}

std::string render(const Derivation& d, const DeclarationSet* decls) {
  std::string out = "proof " + d.name + " in " + d.ruleset + " {\n";
  for (const auto& st : d.steps) {
    out += "  " + std::to_string(st.id) + ": " + render(st.conclusion, decls) +
           " by " + st.rule;
    if (!st.premises.empty()) {
      out += "(";
      for (size_t i = 0; i < st.premises.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(st.premises[i]);
      }
      out += ")";
    }
    if (st.md) out += " with md";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

std::string render(const Script& sc) {
  std::string out;
  auto list = [](const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += v[i];
    }
    return s;
  };
  if (!sc.decls.atoms.empty()) out += "atom " + list(sc.decls.atoms) + ";\n";
  if (!sc.decls.grades.empty()) out += "grade " + list(sc.decls.grades) + ";\n";
  for (const auto& [name, lit] : sc.decls.qubits)
    out += "qubit " + name + " = " + render(lit) + ";\n";
  for (const auto& [sym, z] : sc.env.binds)
    out += "bind " + sym + " = " + render_complex(z) + ";\n";
  if (!sc.env.binds.empty() || sc.env.md_mode != "norm")
    out += "md " + sc.env.md_mode + ";\n";
  for (const auto& d : sc.proofs) {
    out += "\n";
    out += render(d, &sc.decls);
  }
  return out;
}

}  // namespace lq
