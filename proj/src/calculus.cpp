#include "lq/calculus.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "lq/evaluation.hpp"

namespace lq {

namespace {

struct RuleNameEntry {
  RuleId id;
  const char* name;
};

constexpr RuleNameEntry kRuleNames[] = {
    {RuleId::IdAxiom, "id-axiom"},
    {RuleId::GandAxiom, "gand-axiom"},
    {RuleId::GorAxiom, "gor-axiom"},
    {RuleId::AtAxiom, "at-axiom"},
    {RuleId::Assume, "assume"},
    {RuleId::GandForm, "gand-form"},
    {RuleId::GandRefl, "gand-refl"},
    {RuleId::GorForm, "gor-form"},
    {RuleId::GorRefl, "gor-refl"},
    {RuleId::NegForm, "neg-form"},
    {RuleId::NegRefl, "neg-refl"},
    {RuleId::AndForm, "and-form"},
    {RuleId::AndRefl, "and-refl"},
    {RuleId::OrForm, "or-form"},
    {RuleId::OrRefl, "or-refl"},
    {RuleId::TimesForm, "times-form"},
    {RuleId::TimesRefl, "times-refl"},
    {RuleId::ParForm, "par-form"},
    {RuleId::ParRefl, "par-refl"},
    {RuleId::ImpForm, "imp-form"},
    {RuleId::ImpRefl, "imp-refl"},
    {RuleId::CoimpForm, "coimp-form"},
    {RuleId::CoimpRefl, "coimp-refl"},
    {RuleId::AtForm, "at-form"},
    {RuleId::AtRefl, "at-refl"},
    {RuleId::SectForm, "sect-form"},
    {RuleId::SectRefl, "sect-refl"},
    {RuleId::QCut, "qcut"},
    {RuleId::Cut, "cut"},
    {RuleId::Epr, "epr"},
    {RuleId::ExchL, "exch-l"},
    {RuleId::ExchR, "exch-r"},
    {RuleId::WeakL, "weak-l"},
    {RuleId::WeakR, "weak-r"},
    {RuleId::ContrL, "contr-l"},
    {RuleId::ContrR, "contr-r"},
};

}  // namespace

const char* rule_name(RuleId r) {
  for (const auto& e : kRuleNames)
    if (e.id == r) return e.name;
  return "?";
}

std::optional<RuleId> rule_from_name(const std::string& n) {
  for (const auto& e : kRuleNames)
    if (n == e.name) return e.id;
  return std::nullopt;
}

namespace detail {
bool known_rule_name(const std::string& n) {
  return rule_from_name(n).has_value();
}
}  // namespace detail

bool RuleSet::contains(RuleId r) const {
  switch (r) {
    case RuleId::Assume: return true;
    case RuleId::ExchL:
    case RuleId::ExchR: return exchange;
    case RuleId::WeakL:
    case RuleId::WeakR: return weakening;
    case RuleId::ContrL:
    case RuleId::ContrR: return contraction;
    case RuleId::QCut: return quantum_cut;
    case RuleId::Cut: return classical_cut;
    case RuleId::Epr: return epr;
    default: return connective_rules.count(r) > 0;
  }
}

namespace {

RuleSet preset_b() {
  RuleSet rs;
  rs.name = "B";
  rs.connective_rules = {
      RuleId::IdAxiom,   RuleId::AndForm,   RuleId::AndRefl, RuleId::OrForm,
      RuleId::OrRefl,    RuleId::NegForm,   RuleId::NegRefl, RuleId::ImpForm,
      RuleId::ImpRefl,   RuleId::CoimpForm, RuleId::CoimpRefl,
      RuleId::TimesForm, RuleId::TimesRefl, RuleId::ParForm, RuleId::ParRefl,
  };
  rs.exchange = true;
  rs.classical_cut = true;
  return rs;
}

RuleSet preset_lq() {
  RuleSet rs;
  rs.name = "Lq";
  rs.connective_rules = {
      RuleId::IdAxiom,  RuleId::GandAxiom, RuleId::GorAxiom, RuleId::GandForm,
      RuleId::GandRefl, RuleId::GorForm,   RuleId::GorRefl,  RuleId::NegForm,
      RuleId::NegRefl,
  };
  rs.quantum_cut = true;
  rs.graded = true;
  return rs;
}

RuleSet preset_l2q() {
  RuleSet rs;
  rs.name = "L2q";
  rs.connective_rules = {
      RuleId::IdAxiom,   RuleId::AtAxiom,   RuleId::AndForm, RuleId::AndRefl,
      RuleId::OrForm,    RuleId::OrRefl,    RuleId::NegForm, RuleId::NegRefl,
      RuleId::TimesForm, RuleId::TimesRefl, RuleId::ParForm, RuleId::ParRefl,
      RuleId::AtForm,    RuleId::AtRefl,    RuleId::SectForm,
      RuleId::SectRefl,
  };
  rs.classical_cut = true;
  rs.epr = true;
  return rs;
}

}  // namespace

RuleSet make_ruleset(const std::string& spec) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= spec.size()) {
    size_t plus = spec.find('+', start);
    if (plus == std::string::npos) {
      parts.push_back(spec.substr(start));
      break;
    }
    parts.push_back(spec.substr(start, plus - start));
    start = plus + 1;
  }
  if (parts.empty() || parts[0].empty())
    throw RuleError(RuleError::Code::UnknownRule, "empty ruleset name");

  RuleSet rs;
  const std::string& base = parts[0];
  if (base == "B") {
    rs = preset_b();
  } else if (base == "BL") {
    rs = preset_b();
    rs.left_contexts = true;
  } else if (base == "BR") {
    rs = preset_b();
    rs.right_contexts = true;
  } else if (base == "BLR" || base == "BRL") {
    rs = preset_b();
    rs.left_contexts = rs.right_contexts = true;
  } else if (base == "BS") {
    rs = preset_b();
    rs.weakening = rs.contraction = true;
  } else if (base == "BSL") {
    rs = preset_b();
    rs.weakening = rs.contraction = rs.left_contexts = true;
  } else if (base == "BSR") {
    rs = preset_b();
    rs.weakening = rs.contraction = rs.right_contexts = true;
  } else if (base == "BSRL" || base == "BSLR") {
    rs = preset_b();
    rs.weakening = rs.contraction = true;
    rs.left_contexts = rs.right_contexts = true;
  } else if (base == "Lq") {
    rs = preset_lq();
  } else if (base == "L2q") {
    rs = preset_l2q();
  } else {
    throw RuleError(RuleError::Code::UnknownRule,
                    "unknown ruleset preset '" + base + "'");
  }
  for (size_t i = 1; i < parts.size(); ++i) {
    const std::string& f = parts[i];
    if (f == "exchange")
      rs.exchange = true;
    else if (f == "weakening")
      rs.weakening = true;
    else if (f == "contraction")
      rs.contraction = true;
    else if (f == "left-contexts")
      rs.left_contexts = true;
    else if (f == "right-contexts")
      rs.right_contexts = true;
    else
      throw RuleError(RuleError::Code::UnknownRule,
                      "unknown ruleset flag '" + f + "'");
  }
  rs.name = spec;
  return rs;
}

// ---------------------------------------------------------------------------
// apply_rule

namespace {

using Code = RuleError::Code;
using FList = std::vector<FormulaPtr>;

[[noreturn]] void shape(const std::string& m) {
  throw RuleError(Code::ShapeMismatch, m);
}
[[noreturn]] void labfail(const std::string& m) {
  throw RuleError(Code::LabelMismatch, m);
}

void need_n(const std::vector<GradedSequent>& p, size_t n) {
  if (p.size() != n)
    throw RuleError(Code::PremiseCount,
                    "rule expects " + std::to_string(n) + " premise(s), got " +
                        std::to_string(p.size()));
}

void need_unlabelled(const GradedSequent& s) {
  if (s.label.kind != SequentLabel::Kind::None)
    labfail("rule operates on unlabelled sequents");
}

double need_eval(const GradedSequent& s) {
  if (s.label.kind != SequentLabel::Kind::Eval)
    labfail("rule needs an evaluation label");
  return s.label.eval;
}

bool lists_equal(const FList& a, const FList& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

FList cat(FList a, const FList& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

GradedSequent mk(FList ante, FList cons,
                 SequentLabel lab = SequentLabel{}) {
  GradedSequent s;
  s.ante = std::move(ante);
  s.cons = std::move(cons);
  s.label = lab;
  return s;
}

SequentLabel eval_label(double v) {
  SequentLabel l;
  l.kind = SequentLabel::Kind::Eval;
  l.eval = v;
  return l;
}

SequentLabel grade_label(GradeExpr e) {
  SequentLabel l;
  l.kind = SequentLabel::Kind::Grade;
  l.grade = std::move(e);
  return l;
}

void gate_left(const RuleSet& rs, bool nonempty) {
  if (nonempty && !rs.left_contexts)
    shape("active formula carries a left context (visibility)");
}
void gate_right(const RuleSet& rs, bool nonempty) {
  if (nonempty && !rs.right_contexts)
    shape("active formula carries a right context (visibility)");
}

bool valid_pos(int k, size_t n) { return k >= 0 && size_t(k) < n; }

// The two literal actives of an entanglement formula.
std::pair<FormulaPtr, FormulaPtr> ent_literals(const FormulaPtr& e) {
  return {qubit_literal(e->left), qubit_literal(e->right)};
}

GradedSequent axiom(const RuleSet& rs, RuleId rule, const RuleParams& q) {
  const GradedSequent& t = q.target;
  auto label_ok = [&] {
    if (t.label.kind == SequentLabel::Kind::None) return true;
    return rs.graded && t.label.kind == SequentLabel::Kind::Eval &&
           t.label.eval >= 0.0 && t.label.eval <= 1.0;
  };
  switch (rule) {
    case RuleId::IdAxiom:
      if (t.ante.size() != 1 || t.cons.size() != 1 ||
          !equal(t.ante[0], t.cons[0]))
        shape("identity axiom is A |- A");
      if (!label_ok()) labfail("identity axiom label not admissible here");
      return t;
    case RuleId::GandAxiom: {
      if (t.ante.size() != 1 || t.cons.size() != 1 ||
          t.ante[0]->kind != Conn::GradedAnd)
        shape("graded-and axiom is p0 &[g0,g1] p1 |- p_i");
      const auto& f = t.ante[0];
      if (!equal(t.cons[0], f->left) && !equal(t.cons[0], f->right))
        shape("graded-and axiom consequent must be an operand");
      if (!label_ok()) labfail("axiom label not admissible");
      return t;
    }
    case RuleId::GorAxiom: {
      if (t.ante.size() != 1 || t.cons.size() != 1 ||
          t.cons[0]->kind != Conn::GradedOr)
        shape("graded-or axiom is p_i |- p0 v[g0,g1] p1");
      const auto& f = t.cons[0];
      if (!equal(t.ante[0], f->left) && !equal(t.ante[0], f->right))
        shape("graded-or axiom antecedent must be an operand");
      if (!label_ok()) labfail("axiom label not admissible");
      return t;
    }
    case RuleId::AtAxiom: {
      if (t.ante.size() != 1 || t.ante[0]->kind != Conn::Ent ||
          t.cons.size() != 2)
        shape("@-axiom is Q_A @ Q_B |- A, B");
      need_unlabelled(t);
      auto [x, y] = ent_literals(t.ante[0]);
      bool pos = equal(t.cons[0], x) && equal(t.cons[1], y);
      bool neg = equal(t.cons[0], negate_atom(x)) &&
                 equal(t.cons[1], negate_atom(y));
      if (!pos && !neg) shape("@-axiom consequent must be the operand literals");
      return t;
    }
    default:
      return t;  // Assume
  }
}

}  // namespace

GradedSequent apply_rule(const RuleSet& rs, RuleId rule,
                         const std::vector<GradedSequent>& p,
                         const RuleParams& q, const DeclarationSet* decls) {
  if (!rs.contains(rule))
    throw RuleError(Code::NotInRuleset,
                    "rule " + std::string(rule_name(rule)) +
                        " not in ruleset " + rs.name);
  const double tol = tolerance();
  switch (rule) {
    case RuleId::IdAxiom:
    case RuleId::GandAxiom:
    case RuleId::GorAxiom:
    case RuleId::AtAxiom:
    case RuleId::Assume:
      need_n(p, 0);
      return axiom(rs, rule, q);

    case RuleId::GandForm: {
      need_n(p, 2);
      if (!q.has_grades) shape("graded formation needs grade labels");
      if (p[0].cons.size() != 1 || p[1].cons.size() != 1)
        shape("graded-and formation premises need a single consequent");
      if (!lists_equal(p[0].ante, p[1].ante))
        shape("graded-and formation premises need equal antecedents");
      if (q.variant == 1) {
        // Empty-antecedent form: |-{g0} p0 and |-{g1} p1 yield the bare
        // assertion of the compound.
        if (!p[0].ante.empty())
          shape("assertion-form gand needs empty antecedents");
        if (p[0].label.kind != SequentLabel::Kind::Grade ||
            p[1].label.kind != SequentLabel::Kind::Grade ||
            !(p[0].label.grade == grade_expr(q.g0)) ||
            !(p[1].label.grade == grade_expr(q.g1)))
          labfail("assertion-form gand premises carry the connective grades");
        return mk({}, {graded(Conn::GradedAnd, p[0].cons[0], p[1].cons[0],
                              q.g0, q.g1)});
      }
      double v0 = need_eval(p[0]), v1 = need_eval(p[1]);
      if (q.md && std::abs(v0 + v1 - 1.0) > tol)
        throw RuleError(Code::SideCondition, "MD side condition v0+v1=1 fails");
      return mk(p[0].ante,
                {graded(Conn::GradedAnd, p[0].cons[0], p[1].cons[0], q.g0, q.g1)},
                eval_label(v0 + v1));
    }
    case RuleId::GandRefl: {
      need_n(p, 1);
      if (!q.has_grades || !q.other) shape("missing operand or grades");
      double v = need_eval(p[0]);
      if (p[0].ante.size() != 1)
        shape("graded-and reflection premise needs a single antecedent");
      FormulaPtr f = q.variant == 0
                         ? graded(Conn::GradedAnd, p[0].ante[0], q.other, q.g0, q.g1)
                         : graded(Conn::GradedAnd, q.other, p[0].ante[0], q.g0, q.g1);
      return mk({f}, p[0].cons, eval_label(v));
    }
    case RuleId::GorForm: {
      need_n(p, 2);
      if (!q.has_grades) shape("graded formation needs grade labels");
      if (p[0].ante.size() != 1 || p[1].ante.size() != 1)
        shape("graded-or formation premises need a single antecedent");
      if (!lists_equal(p[0].cons, p[1].cons))
        shape("graded-or formation premises need equal consequents");
      if (q.variant == 1) {
        if (!p[0].cons.empty())
          shape("assertion-form gor needs empty consequents");
        if (p[0].label.kind != SequentLabel::Kind::Grade ||
            p[1].label.kind != SequentLabel::Kind::Grade ||
            !(p[0].label.grade == grade_expr(q.g0)) ||
            !(p[1].label.grade == grade_expr(q.g1)))
          labfail("assertion-form gor premises carry the connective grades");
        return mk({graded(Conn::GradedOr, p[0].ante[0], p[1].ante[0], q.g0,
                          q.g1)},
                  {});
      }
      double v0 = need_eval(p[0]), v1 = need_eval(p[1]);
      if (q.md && std::abs(v0 + v1 - 1.0) > tol)
        throw RuleError(Code::SideCondition, "MD side condition v0+v1=1 fails");
      return mk({graded(Conn::GradedOr, p[0].ante[0], p[1].ante[0], q.g0, q.g1)},
                p[0].cons, eval_label(v0 + v1));
    }
    case RuleId::GorRefl: {
      need_n(p, 1);
      if (!q.has_grades || !q.other) shape("missing operand or grades");
      double v = need_eval(p[0]);
      if (p[0].cons.size() != 1)
        shape("graded-or reflection premise needs a single consequent");
      FormulaPtr f = q.variant == 0
                         ? graded(Conn::GradedOr, p[0].cons[0], q.other, q.g0, q.g1)
                         : graded(Conn::GradedOr, q.other, p[0].cons[0], q.g0, q.g1);
      return mk(p[0].ante, {f}, eval_label(v));
    }

    case RuleId::NegForm: {
      need_n(p, 1);
      if (rs.graded) {
        // p_i |-{z_i*}  =>  |-{z_j} not p_i   with p_j the partner atom.
        if (!decls) shape("graded negation needs the script declarations");
        if (p[0].ante.size() != 1 || !p[0].cons.empty() ||
            p[0].ante[0]->kind != Conn::Atom || p[0].ante[0]->negated)
          shape("graded neg-form premise is p_i |-{z_i*}");
        int i = decls->atom_index(p[0].ante[0]->name);
        int j = decls->partner_atom_index(i);
        if (i < 0 || j < 0) shape("graded negation needs a two-atom signature");
        GradeExpr want = grade_expr(conj(decls->grade_for_atom_index(i)));
        if (p[0].label.kind != SequentLabel::Kind::Grade ||
            !(p[0].label.grade == want))
          labfail("graded neg-form premise label must be the conjugated grade");
        return mk({}, {unary(Conn::Not, p[0].ante[0])},
                  grade_label(grade_expr(decls->grade_for_atom_index(j))));
      }
      if (p[0].ante.empty()) shape("neg-form premise needs an antecedent");
      need_unlabelled(p[0]);
      FList gamma(p[0].ante.begin(), p[0].ante.end() - 1);
      gate_left(rs, !gamma.empty());
      gate_right(rs, !p[0].cons.empty());
      return mk(gamma, cat({unary(Conn::Not, p[0].ante.back())}, p[0].cons));
    }
    case RuleId::NegRefl: {
      need_n(p, 1);
      if (rs.graded) {
        if (!decls) shape("graded negation needs the script declarations");
        if (p[0].cons.size() != 1 || !p[0].ante.empty() ||
            p[0].cons[0]->kind != Conn::Atom || p[0].cons[0]->negated)
          shape("graded neg-refl premise is |-{z_i} p_i");
        int i = decls->atom_index(p[0].cons[0]->name);
        int j = decls->partner_atom_index(i);
        if (i < 0 || j < 0) shape("graded negation needs a two-atom signature");
        GradeExpr want = grade_expr(decls->grade_for_atom_index(i));
        if (p[0].label.kind != SequentLabel::Kind::Grade ||
            !(p[0].label.grade == want))
          labfail("graded neg-refl premise label must be the atom's grade");
        return mk({unary(Conn::Not, p[0].cons[0])}, {},
                  grade_label(grade_expr(conj(decls->grade_for_atom_index(j)))));
      }
      if (p[0].cons.empty()) shape("neg-refl premise needs a consequent");
      need_unlabelled(p[0]);
      FList delta(p[0].cons.begin() + 1, p[0].cons.end());
      gate_left(rs, !p[0].ante.empty());
      gate_right(rs, !delta.empty());
      return mk(cat(p[0].ante, {unary(Conn::Not, p[0].cons[0])}), delta);
    }

    case RuleId::AndForm: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (!lists_equal(p[0].ante, p[1].ante))
        shape("and-form premises need equal antecedents");
      if (p[0].cons.size() != p[1].cons.size() || !valid_pos(q.pos, p[0].cons.size()))
        shape("and-form premises must differ only in the active formula");
      for (size_t i = 0; i < p[0].cons.size(); ++i)
        if (int(i) != q.pos && !equal(p[0].cons[i], p[1].cons[i]))
          shape("and-form premises must differ only in the active formula");
      gate_right(rs, p[0].cons.size() > 1);
      FList cons = p[0].cons;
      cons[size_t(q.pos)] =
          binary(Conn::And, p[0].cons[size_t(q.pos)], p[1].cons[size_t(q.pos)]);
      return mk(p[0].ante, cons);
    }
    case RuleId::AndRefl: {
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (!q.other || !valid_pos(q.pos, p[0].ante.size()))
        shape("and-refl needs the missing operand");
      gate_left(rs, p[0].ante.size() > 1);
      FList ante = p[0].ante;
      const FormulaPtr& x = p[0].ante[size_t(q.pos)];
      ante[size_t(q.pos)] = q.variant == 0 ? binary(Conn::And, x, q.other)
                                           : binary(Conn::And, q.other, x);
      return mk(ante, p[0].cons);
    }
    case RuleId::OrForm: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (!lists_equal(p[0].cons, p[1].cons))
        shape("or-form premises need equal consequents");
      if (p[0].ante.size() != p[1].ante.size() || !valid_pos(q.pos, p[0].ante.size()))
        shape("or-form premises must differ only in the active formula");
      for (size_t i = 0; i < p[0].ante.size(); ++i)
        if (int(i) != q.pos && !equal(p[0].ante[i], p[1].ante[i]))
          shape("or-form premises must differ only in the active formula");
      gate_left(rs, p[0].ante.size() > 1);
      FList ante = p[0].ante;
      ante[size_t(q.pos)] =
          binary(Conn::Or, p[0].ante[size_t(q.pos)], p[1].ante[size_t(q.pos)]);
      return mk(ante, p[0].cons);
    }
    case RuleId::OrRefl: {
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (!q.other || !valid_pos(q.pos, p[0].cons.size()))
        shape("or-refl needs the missing operand");
      gate_right(rs, p[0].cons.size() > 1);
      FList cons = p[0].cons;
      const FormulaPtr& x = p[0].cons[size_t(q.pos)];
      cons[size_t(q.pos)] = q.variant == 0 ? binary(Conn::Or, x, q.other)
                                           : binary(Conn::Or, q.other, x);
      return mk(p[0].ante, cons);
    }

    case RuleId::TimesForm: {
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (p[0].ante.size() < 2 || !valid_pos(q.pos, p[0].ante.size() - 1))
        shape("times-form needs an adjacent antecedent pair");
      gate_left(rs, p[0].ante.size() > 2);
      FList ante;
      for (size_t i = 0; i < p[0].ante.size(); ++i) {
        if (int(i) == q.pos) {
          ante.push_back(
              binary(Conn::Times, p[0].ante[i], p[0].ante[i + 1]));
          ++i;
        } else {
          ante.push_back(p[0].ante[i]);
        }
      }
      return mk(ante, p[0].cons);
    }
    case RuleId::TimesRefl: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (p[0].cons.empty() || p[1].cons.empty())
        shape("times-refl premises need consequents");
      FList rest0(p[0].cons.begin() + 1, p[0].cons.end());
      FList rest1(p[1].cons.begin() + 1, p[1].cons.end());
      gate_right(rs, !rest0.empty() || !rest1.empty());
      return mk(cat(p[0].ante, p[1].ante),
                cat({binary(Conn::Times, p[0].cons[0], p[1].cons[0])},
                    cat(rest0, rest1)));
    }
    case RuleId::ParForm: {
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (p[0].cons.size() < 2 || !valid_pos(q.pos, p[0].cons.size() - 1))
        shape("par-form needs an adjacent consequent pair");
      gate_right(rs, p[0].cons.size() > 2);
      FList cons;
      for (size_t i = 0; i < p[0].cons.size(); ++i) {
        if (int(i) == q.pos) {
          cons.push_back(binary(Conn::Par, p[0].cons[i], p[0].cons[i + 1]));
          ++i;
        } else {
          cons.push_back(p[0].cons[i]);
        }
      }
      return mk(p[0].ante, cons);
    }
    case RuleId::ParRefl: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (p[0].ante.empty() || p[1].ante.empty())
        shape("par-refl premises need antecedents");
      FList rest0(p[0].ante.begin() + 1, p[0].ante.end());
      FList rest1(p[1].ante.begin() + 1, p[1].ante.end());
      gate_left(rs, !rest0.empty() || !rest1.empty());
      return mk(cat({binary(Conn::Par, p[0].ante[0], p[1].ante[0])},
                    cat(rest0, rest1)),
                cat(p[0].cons, p[1].cons));
    }

    case RuleId::ImpForm: {
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (p[0].ante.empty() || p[0].cons.empty())
        shape("imp-form premise is A |- B");
      FList gamma(p[0].ante.begin(), p[0].ante.end() - 1);
      FList delta(p[0].cons.begin() + 1, p[0].cons.end());
      gate_left(rs, !gamma.empty());
      gate_right(rs, !delta.empty());
      return mk(gamma,
                cat({binary(Conn::Implies, p[0].ante.back(), p[0].cons[0])},
                    delta));
    }
    case RuleId::ImpRefl: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (p[0].cons.empty() || p[1].ante.empty())
        shape("imp-refl premises are |- A and B |- Delta");
      FList delta0(p[0].cons.begin() + 1, p[0].cons.end());
      FList gamma1(p[1].ante.begin() + 1, p[1].ante.end());
      gate_left(rs, !p[0].ante.empty() || !gamma1.empty());
      gate_right(rs, !delta0.empty());
      return mk(cat({binary(Conn::Implies, p[0].cons[0], p[1].ante[0])},
                    cat(p[0].ante, gamma1)),
                cat(delta0, p[1].cons));
    }
    case RuleId::CoimpForm: {
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (p[0].ante.size() != 1 || p[0].cons.size() != 1)
        shape("coimp-form premise is B |- A");
      return mk({binary(Conn::CoImplies, p[0].cons[0], p[0].ante[0])}, {});
    }
    case RuleId::CoimpRefl: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (p[0].ante.size() != 1 || !p[0].cons.empty() || p[1].cons.size() != 1)
        shape("coimp-refl premises are C |- and Gamma |- D");
      return mk(p[1].ante,
                {binary(Conn::CoImplies, p[0].ante[0], p[1].cons[0])});
    }

    case RuleId::AtForm: {
      if (!q.op1 || !q.op2) shape("at-form needs the entangled operands");
      FormulaPtr ent = binary(Conn::Ent, q.op1, q.op2);
      if (q.variant == 0) {
        need_n(p, 2);
        need_unlabelled(p[0]);
        need_unlabelled(p[1]);
        auto [x, y] = ent_literals(ent);
        if (!lists_equal(p[0].ante, p[1].ante))
          shape("at-form premises need equal antecedents");
        if (p[0].cons.size() != 2 || p[1].cons.size() != 2 ||
            !equal(p[0].cons[0], x) || !equal(p[0].cons[1], y) ||
            !equal(p[1].cons[0], negate_atom(x)) ||
            !equal(p[1].cons[1], negate_atom(y)))
          shape("at-form premises are Gamma |- A,B and Gamma |- A^,B^");
        return mk(p[0].ante, {ent});
      }
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (p[0].cons.size() != 2 || !equal(p[0].cons[0], q.op1) ||
          !equal(p[0].cons[1], q.op2))
        shape("at-form premise is Gamma |- Q_A, Q_B");
      return mk(p[0].ante, {ent});
    }
    case RuleId::AtRefl: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (!q.op1 || !q.op2) shape("at-refl needs the entangled operands");
      FormulaPtr ent = binary(Conn::Ent, q.op1, q.op2);
      auto [x, y] = ent_literals(ent);
      FormulaPtr a0, a1;
      switch (q.variant) {
        case 0: a0 = x; a1 = y; break;
        case 1: a0 = negate_atom(x); a1 = negate_atom(y); break;
        default: a0 = q.op1; a1 = q.op2; break;
      }
      if (p[0].ante.size() != 1 || p[1].ante.size() != 1 ||
          !equal(p[0].ante[0], a0) || !equal(p[1].ante[0], a1))
        shape("at-refl premises are A |- Delta and B |- Delta'");
      return mk({ent}, cat(p[0].cons, p[1].cons));
    }
    case RuleId::SectForm: {
      if (!q.op1 || !q.op2) shape("sect-form needs the operands");
      FormulaPtr sec = binary(Conn::EntDual, q.op1, q.op2);
      auto [x, y] = ent_literals(sec);
      if (q.variant == 0) {
        need_n(p, 2);
        need_unlabelled(p[0]);
        need_unlabelled(p[1]);
        if (!lists_equal(p[0].cons, p[1].cons))
          shape("sect-form premises need equal consequents");
        if (p[0].ante.size() != 2 || p[1].ante.size() != 2 ||
            !equal(p[0].ante[0], x) || !equal(p[0].ante[1], y) ||
            !equal(p[1].ante[0], negate_atom(x)) ||
            !equal(p[1].ante[1], negate_atom(y)))
          shape("sect-form premises are A,B |- Delta and A^,B^ |- Delta");
        return mk({sec}, p[0].cons);
      }
      need_n(p, 1);
      need_unlabelled(p[0]);
      if (p[0].ante.size() != 2 || !equal(p[0].ante[0], q.op1) ||
          !equal(p[0].ante[1], q.op2))
        shape("sect-form premise is Q_A, Q_B |- Delta");
      return mk({sec}, p[0].cons);
    }
    case RuleId::SectRefl: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (!q.op1 || !q.op2) shape("sect-refl needs the operands");
      FormulaPtr sec = binary(Conn::EntDual, q.op1, q.op2);
      auto [x, y] = ent_literals(sec);
      FormulaPtr a0, a1;
      switch (q.variant) {
        case 0: a0 = x; a1 = y; break;
        case 1: a0 = negate_atom(x); a1 = negate_atom(y); break;
        default: a0 = q.op1; a1 = q.op2; break;
      }
      if (p[0].cons.size() != 1 || p[1].cons.size() != 1 ||
          !equal(p[0].cons[0], a0) || !equal(p[1].cons[0], a1))
        shape("sect-refl premises are Gamma |- A and Gamma' |- B");
      return mk(cat(p[0].ante, p[1].ante), {sec});
    }

    case RuleId::QCut: {
      need_n(p, 2);
      double v0 = need_eval(p[0]), v1 = need_eval(p[1]);
      if (std::abs(v0 - v1) > tol)
        labfail("quantum cut premises carry different evaluations");
      if (p[0].cons.size() != 1 || p[1].ante.size() != 1 ||
          !equal(p[0].cons[0], p[1].ante[0]))
        shape("quantum cut premises are Gamma |-v phi and phi |-v Delta");
      return mk(p[0].ante, p[1].cons, eval_label(v0));
    }
    case RuleId::Cut: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (p[0].cons.empty() || p[1].ante.empty())
        shape("cut premises are Gamma |- A and A |- Delta");
      if (!equal(p[0].cons.back(), p[1].ante.front()))
        shape("cut formula must close the first premise and open the second");
      FList delta0(p[0].cons.begin(), p[0].cons.end() - 1);
      FList sigma(p[1].ante.begin() + 1, p[1].ante.end());
      gate_right(rs, !delta0.empty());
      gate_left(rs, !sigma.empty());
      return mk(cat(p[0].ante, sigma), cat(delta0, p[1].cons));
    }
    case RuleId::Epr: {
      need_n(p, 2);
      need_unlabelled(p[0]);
      need_unlabelled(p[1]);
      if (p[0].cons.size() != 1 || p[0].cons[0]->kind != Conn::Ent)
        shape("EPR first premise is Gamma |- Q_A @ Q_B (no contexts)");
      const FormulaPtr& ent = p[0].cons[0];
      if (!is_qubit_shape(ent->left))
        shape("EPR needs an unmeasured qubit as first @ operand");
      if (p[1].ante.size() != 1 || p[1].cons.size() != 1 ||
          !equal(p[1].ante[0], ent->left))
        shape("EPR second premise is Q_A |- A (no contexts)");
      const FormulaPtr& lit = p[1].cons[0];
      FormulaPtr base = ent->left->left;
      if (!is_literal(lit) ||
          !(equal(lit, base) || equal(lit, negate_atom(base))))
        shape("EPR cuts one literal of the measured qubit");
      return mk(p[0].ante, {binary(Conn::Ent, lit, ent->right)});
    }

    case RuleId::ExchL: {
      need_n(p, 1);
      if (!valid_pos(q.pos, p[0].ante.size() > 0 ? p[0].ante.size() - 1 : 0))
        shape("exch-l needs an adjacent antecedent pair");
      GradedSequent s = p[0];
      std::swap(s.ante[size_t(q.pos)], s.ante[size_t(q.pos) + 1]);
      return s;
    }
    case RuleId::ExchR: {
      need_n(p, 1);
      if (!valid_pos(q.pos, p[0].cons.size() > 0 ? p[0].cons.size() - 1 : 0))
        shape("exch-r needs an adjacent consequent pair");
      GradedSequent s = p[0];
      std::swap(s.cons[size_t(q.pos)], s.cons[size_t(q.pos) + 1]);
      return s;
    }
    case RuleId::WeakL: {
      need_n(p, 1);
      if (!q.extra || q.pos < 0 || size_t(q.pos) > p[0].ante.size())
        shape("weak-l needs the weakening formula and position");
      GradedSequent s = p[0];
      s.ante.insert(s.ante.begin() + q.pos, q.extra);
      return s;
    }
    case RuleId::WeakR: {
      need_n(p, 1);
      if (!q.extra || q.pos < 0 || size_t(q.pos) > p[0].cons.size())
        shape("weak-r needs the weakening formula and position");
      GradedSequent s = p[0];
      s.cons.insert(s.cons.begin() + q.pos, q.extra);
      return s;
    }
    case RuleId::ContrL: {
      need_n(p, 1);
      if (!valid_pos(q.pos, p[0].ante.size() > 0 ? p[0].ante.size() - 1 : 0) ||
          !equal(p[0].ante[size_t(q.pos)], p[0].ante[size_t(q.pos) + 1]))
        shape("contr-l needs two adjacent equal antecedent formulas");
      GradedSequent s = p[0];
      s.ante.erase(s.ante.begin() + q.pos + 1);
      return s;
    }
    case RuleId::ContrR: {
      need_n(p, 1);
      if (!valid_pos(q.pos, p[0].cons.size() > 0 ? p[0].cons.size() - 1 : 0) ||
          !equal(p[0].cons[size_t(q.pos)], p[0].cons[size_t(q.pos) + 1]))
        shape("contr-r needs two adjacent equal consequent formulas");
      GradedSequent s = p[0];
      s.cons.erase(s.cons.begin() + q.pos + 1);
      return s;
    }
  }
  shape("unhandled rule");
}

// ---------------------------------------------------------------------------
// check_derivation

namespace {

enum class Cmp { Equal, LabelDiff, ShapeDiff };

Cmp compare_sequent(const GradedSequent& a, const GradedSequent& b) {
  if (a.ante.size() != b.ante.size() || a.cons.size() != b.cons.size())
    return Cmp::ShapeDiff;
  for (size_t i = 0; i < a.ante.size(); ++i)
    if (!equal(a.ante[i], b.ante[i])) return Cmp::ShapeDiff;
  for (size_t i = 0; i < a.cons.size(); ++i)
    if (!equal(a.cons[i], b.cons[i])) return Cmp::ShapeDiff;
  if (equal(a, b, tolerance())) return Cmp::Equal;
  return Cmp::LabelDiff;
}

// Finite candidate parameter sets for a claimed rule instance; the forward
// application filters.
std::vector<RuleParams> infer_params(RuleId rule,
                                     const std::vector<GradedSequent>& prem,
                                     const GradedSequent& c, bool md) {
  std::vector<RuleParams> out;
  auto push = [&out](RuleParams q) { out.push_back(std::move(q)); };
  switch (rule) {
    case RuleId::IdAxiom:
    case RuleId::GandAxiom:
    case RuleId::GorAxiom:
    case RuleId::AtAxiom:
    case RuleId::Assume: {
      RuleParams q;
      q.target = c;
      push(q);
      break;
    }
    case RuleId::GandForm:
      if (c.cons.size() == 1 && c.cons[0]->kind == Conn::GradedAnd) {
        for (int v : {0, 1}) {
          RuleParams q;
          q.variant = v;
          q.g0 = c.cons[0]->g0;
          q.g1 = c.cons[0]->g1;
          q.has_grades = true;
          q.md = md;
          push(q);
        }
      }
      break;
    case RuleId::GandRefl:
      if (c.ante.size() == 1 && c.ante[0]->kind == Conn::GradedAnd) {
        for (int v : {0, 1}) {
          RuleParams q;
          q.variant = v;
          q.other = v == 0 ? c.ante[0]->right : c.ante[0]->left;
          q.g0 = c.ante[0]->g0;
          q.g1 = c.ante[0]->g1;
          q.has_grades = true;
          push(q);
        }
      }
      break;
    case RuleId::GorForm:
      if (c.ante.size() == 1 && c.ante[0]->kind == Conn::GradedOr) {
        for (int v : {0, 1}) {
          RuleParams q;
          q.variant = v;
          q.g0 = c.ante[0]->g0;
          q.g1 = c.ante[0]->g1;
          q.has_grades = true;
          q.md = md;
          push(q);
        }
      }
      break;
    case RuleId::GorRefl:
      if (c.cons.size() == 1 && c.cons[0]->kind == Conn::GradedOr) {
        for (int v : {0, 1}) {
          RuleParams q;
          q.variant = v;
          q.other = v == 0 ? c.cons[0]->right : c.cons[0]->left;
          q.g0 = c.cons[0]->g0;
          q.g1 = c.cons[0]->g1;
          q.has_grades = true;
          push(q);
        }
      }
      break;
    case RuleId::NegForm:
    case RuleId::NegRefl:
    case RuleId::TimesRefl:
    case RuleId::ParRefl:
    case RuleId::ImpForm:
    case RuleId::ImpRefl:
    case RuleId::CoimpForm:
    case RuleId::CoimpRefl:
    case RuleId::QCut:
    case RuleId::Cut:
    case RuleId::Epr:
      push(RuleParams{});
      break;
    case RuleId::AndForm:
      for (size_t k = 0; k < c.cons.size(); ++k)
        if (c.cons[k]->kind == Conn::And) {
          RuleParams q;
          q.pos = int(k);
          push(q);
        }
      break;
    case RuleId::AndRefl:
      for (size_t k = 0; k < c.ante.size(); ++k)
        if (c.ante[k]->kind == Conn::And)
          for (int v : {0, 1}) {
            RuleParams q;
            q.pos = int(k);
            q.variant = v;
            q.other = v == 0 ? c.ante[k]->right : c.ante[k]->left;
            push(q);
          }
      break;
    case RuleId::OrForm:
      for (size_t k = 0; k < c.ante.size(); ++k)
        if (c.ante[k]->kind == Conn::Or) {
          RuleParams q;
          q.pos = int(k);
          push(q);
        }
      break;
    case RuleId::OrRefl:
      for (size_t k = 0; k < c.cons.size(); ++k)
        if (c.cons[k]->kind == Conn::Or)
          for (int v : {0, 1}) {
            RuleParams q;
            q.pos = int(k);
            q.variant = v;
            q.other = v == 0 ? c.cons[k]->right : c.cons[k]->left;
            push(q);
          }
      break;
    case RuleId::TimesForm:
      for (size_t k = 0; k < c.ante.size(); ++k)
        if (c.ante[k]->kind == Conn::Times) {
          RuleParams q;
          q.pos = int(k);
          push(q);
        }
      break;
    case RuleId::ParForm:
      for (size_t k = 0; k < c.cons.size(); ++k)
        if (c.cons[k]->kind == Conn::Par) {
          RuleParams q;
          q.pos = int(k);
          push(q);
        }
      break;
    case RuleId::AtForm:
      if (c.cons.size() == 1 && c.cons[0]->kind == Conn::Ent)
        for (int v : {0, 1}) {
          RuleParams q;
          q.variant = v;
          q.op1 = c.cons[0]->left;
          q.op2 = c.cons[0]->right;
          push(q);
        }
      break;
    case RuleId::AtRefl:
      if (c.ante.size() == 1 && c.ante[0]->kind == Conn::Ent)
        for (int v : {0, 1, 2}) {
          RuleParams q;
          q.variant = v;
          q.op1 = c.ante[0]->left;
          q.op2 = c.ante[0]->right;
          push(q);
        }
      break;
    case RuleId::SectForm:
      if (c.ante.size() == 1 && c.ante[0]->kind == Conn::EntDual)
        for (int v : {0, 1}) {
          RuleParams q;
          q.variant = v;
          q.op1 = c.ante[0]->left;
          q.op2 = c.ante[0]->right;
          push(q);
        }
      break;
    case RuleId::SectRefl:
      if (c.cons.size() == 1 && c.cons[0]->kind == Conn::EntDual)
        for (int v : {0, 1, 2}) {
          RuleParams q;
          q.variant = v;
          q.op1 = c.cons[0]->left;
          q.op2 = c.cons[0]->right;
          push(q);
        }
      break;
    case RuleId::ExchL:
      for (size_t k = 0; k + 1 < c.ante.size(); ++k) {
        RuleParams q;
        q.pos = int(k);
        push(q);
      }
      break;
    case RuleId::ExchR:
      for (size_t k = 0; k + 1 < c.cons.size(); ++k) {
        RuleParams q;
        q.pos = int(k);
        push(q);
      }
      break;
    case RuleId::WeakL:
      for (size_t k = 0; k < c.ante.size(); ++k) {
        RuleParams q;
        q.pos = int(k);
        q.extra = c.ante[k];
        push(q);
      }
      break;
    case RuleId::WeakR:
      for (size_t k = 0; k < c.cons.size(); ++k) {
        RuleParams q;
        q.pos = int(k);
        q.extra = c.cons[k];
        push(q);
      }
      break;
    case RuleId::ContrL:
      if (!prem.empty())
        for (size_t k = 0; k + 1 < prem[0].ante.size(); ++k) {
          RuleParams q;
          q.pos = int(k);
          push(q);
        }
      break;
    case RuleId::ContrR:
      if (!prem.empty())
        for (size_t k = 0; k + 1 < prem[0].cons.size(); ++k) {
          RuleParams q;
          q.pos = int(k);
          push(q);
        }
      break;
  }
  return out;
}

const char* status_of(Code c) {
  switch (c) {
    case Code::SideCondition: return "side-condition-failed";
    case Code::LabelMismatch: return "label-mismatch";
    case Code::NotInRuleset: return "rule-absent";
    default: return "shape-mismatch";
  }
}

int severity(const std::string& status) {
  if (status == "side-condition-failed") return 3;
  if (status == "label-mismatch") return 2;
  return 1;
}

}  // namespace

CheckReport check_derivation(const RuleSet& rs, const Derivation& d,
                             const DeclarationSet* decls, const GradeEnv* env) {
  CheckReport rep;
  rep.name = d.name;
  rep.ruleset = rs.name;
  rep.accepted = true;
  std::map<int, const GradedSequent*> byid;
  for (const auto& st : d.steps) {
    NodeDiag diag{st.id, st.rule, "ok", ""};
    std::vector<GradedSequent> prem;
    bool premise_ok = true;
    for (int pid : st.premises) {
      auto it = byid.find(pid);
      if (it == byid.end()) {
        diag.status = "bad-premise";
        diag.message = "premise #" + std::to_string(pid) + " not in scope";
        premise_ok = false;
        break;
      }
      prem.push_back(*it->second);
    }
    auto rid = rule_from_name(st.rule);
    if (!premise_ok) {
      // reported already
    } else if (!rid) {
      diag.status = "shape-mismatch";
      diag.message = "unknown rule '" + st.rule + "'";
    } else if (*rid == RuleId::Assume) {
      if (!st.premises.empty()) {
        diag.status = "shape-mismatch";
        diag.message = "assumptions take no premises";
      } else {
        diag.status = "assumed";
      }
    } else if (!rs.contains(*rid)) {
      diag.status = "rule-absent";
      diag.message = "rule not in ruleset " + rs.name;
    } else {
      auto candidates = infer_params(*rid, prem, st.conclusion, st.md);
      std::string best_status = "shape-mismatch";
      std::string best_msg = "conclusion does not match the rule schema";
      bool ok = false;
      for (const auto& q : candidates) {
        try {
          GradedSequent out = apply_rule(rs, *rid, prem, q, decls);
          switch (compare_sequent(out, st.conclusion)) {
            case Cmp::Equal:
              ok = true;
              break;
            case Cmp::LabelDiff:
              if (severity("label-mismatch") > severity(best_status)) {
                best_status = "label-mismatch";
                best_msg = "conclusion label differs from the rule's output";
              }
              break;
            case Cmp::ShapeDiff:
              if (best_msg == "conclusion does not match the rule schema")
                best_msg = "conclusion differs from the rule's output";
              break;
          }
        } catch (const RuleError& e) {
          if (severity(status_of(e.code)) > severity(best_status)) {
            best_status = status_of(e.code);
            best_msg = e.what();
          }
        } catch (const DomainError& e) {
          if (best_msg == "conclusion does not match the rule schema")
            best_msg = e.what();
        }
        if (ok) break;
      }
      if (ok && st.md && env) {
        MdReport mr = md_check(*env);
        if (mr.norm_residual > tolerance()) {
          ok = false;
          best_status = "side-condition-failed";
          best_msg = "grade environment violates MD normalization";
        }
      }
      if (!ok) {
        diag.status = best_status;
        diag.message = best_msg;
      }
    }
    if (diag.status != "ok" && diag.status != "assumed") {
      rep.accepted = false;
      if (!rep.first_failure) rep.first_failure = st.id;
    }
    rep.nodes.push_back(diag);
    byid[st.id] = &st.conclusion;
  }
  if (!d.steps.empty() &&
      d.steps.back().conclusion.label.kind == SequentLabel::Kind::Eval)
    rep.root_eval = d.steps.back().conclusion.label.eval;
  return rep;
}

std::string CheckReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["ruleset"] = ruleset;
  j["verdict"] = accepted ? "accepted" : "rejected";
  if (first_failure) j["first_failure"] = *first_failure;
  if (root_eval) j["root_eval"] = *root_eval;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes) {
    nlohmann::json jn;
    jn["id"] = n.id;
    jn["rule"] = n.rule;
    jn["status"] = n.status;
    jn["message"] = n.message;
    j["nodes"].push_back(jn);
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Dualities

GradedSequent star_dual(const GradedSequent& s) {
  if (s.ante.empty() == s.cons.empty())
    throw DomainError("star dual needs a one-sided sequent");
  if (s.label.kind != SequentLabel::Kind::Grade)
    throw DomainError("star dual needs a grade label");
  GradedSequent out;
  out.ante = s.cons;
  out.cons = s.ante;
  out.label.kind = SequentLabel::Kind::Grade;
  out.label.grade = conj(s.label.grade);
  return out;
}

FormulaPtr perp_dual(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::Atom:
      return atom(f->name, !f->negated);
    case Conn::Not:
      return unary(Conn::Not, perp_dual(f->left));
    case Conn::And:
      return binary(Conn::Or, perp_dual(f->left), perp_dual(f->right));
    case Conn::Or:
      return binary(Conn::And, perp_dual(f->left), perp_dual(f->right));
    case Conn::Times:
      return binary(Conn::Par, perp_dual(f->left), perp_dual(f->right));
    case Conn::Par:
      return binary(Conn::Times, perp_dual(f->left), perp_dual(f->right));
    case Conn::Implies:
      return binary(Conn::CoImplies, perp_dual(f->left), perp_dual(f->right));
    case Conn::CoImplies:
      return binary(Conn::Implies, perp_dual(f->left), perp_dual(f->right));
    case Conn::Ent:
      return binary(Conn::EntDual, f->left, f->right);
    case Conn::EntDual:
      return binary(Conn::Ent, f->left, f->right);
    case Conn::GradedAnd:
    case Conn::GradedOr:
      throw DomainError("perp dual is undefined on graded connectives");
  }
  throw DomainError("perp dual: unknown connective");
}

GradedSequent perp_dual(const GradedSequent& s) {
  if (s.label.kind != SequentLabel::Kind::None)
    throw DomainError("perp dual is defined on unlabelled sequents");
  GradedSequent out;
  for (const auto& f : s.cons) out.ante.push_back(perp_dual(f));
  for (const auto& f : s.ante) out.cons.push_back(perp_dual(f));
  return out;
}

namespace {

FormulaPtr partner_atom(const FormulaPtr& a, const DeclarationSet& decls) {
  if (a->kind != Conn::Atom || a->negated)
    throw DomainError("perp-prime needs plain declared atoms");
  int i = decls.atom_index(a->name);
  int j = decls.partner_atom_index(i);
  if (i < 0 || j < 0)
    throw DomainError("perp-prime needs a two-atom signature");
  return atom(decls.atoms[size_t(j)]);
}

// Simultaneous operand+grade swap back to declaration order; an identity of
// the graded connectives the calculus uses when rewriting duals.
FormulaPtr normalize_graded(const FormulaPtr& f, const DeclarationSet& decls) {
  if ((f->kind != Conn::GradedAnd && f->kind != Conn::GradedOr) ||
      f->left->kind != Conn::Atom || f->right->kind != Conn::Atom)
    return f;
  int il = decls.atom_index(f->left->name);
  int ir = decls.atom_index(f->right->name);
  if (il < 0 || ir < 0 || il <= ir) return f;
  return graded(f->kind, f->right, f->left, f->g1, f->g0);
}

}  // namespace

FormulaPtr perp_prime_dual(const FormulaPtr& f, const DeclarationSet& decls) {
  if (f->kind != Conn::GradedAnd && f->kind != Conn::GradedOr)
    throw DomainError("perp-prime is defined on the graded fragment");
  Conn k = f->kind == Conn::GradedAnd ? Conn::GradedOr : Conn::GradedAnd;
  FormulaPtr out = graded(k, partner_atom(f->left, decls),
                          partner_atom(f->right, decls), f->g1, f->g0);
  return normalize_graded(out, decls);
}

GradedSequent perp_prime_dual(const GradedSequent& s,
                              const DeclarationSet& decls) {
  if (s.ante.empty() == s.cons.empty())
    throw DomainError("perp-prime acts on one-sided sequents");
  const std::vector<FormulaPtr>& side = s.ante.empty() ? s.cons : s.ante;
  if (side.size() != 1)
    throw DomainError("perp-prime acts on single-formula sequents");
  const FormulaPtr& f = side[0];
  GradedSequent out;
  if (f->kind == Conn::Atom) {
    if (s.label.kind != SequentLabel::Kind::Grade ||
        s.label.grade.terms.size() != 1 || s.label.grade.terms[0].sign != 1)
      throw DomainError("perp-prime on atoms needs a single-grade label");
    int i = decls.atom_index(f->name);
    int j = decls.partner_atom_index(i);
    if (f->negated || i < 0 || j < 0)
      throw DomainError("perp-prime needs a two-atom signature");
    GradeRef own = decls.grade_for_atom_index(i);
    if (s.label.grade.terms[0].ref.symbol != own.symbol)
      throw DomainError("label grade must belong to the asserted atom");
    GradeRef dual = decls.grade_for_atom_index(j);
    dual.conjugated = !s.label.grade.terms[0].ref.conjugated;
    FormulaPtr pf = atom(decls.atoms[size_t(j)]);
    if (s.ante.empty())
      out.ante.push_back(pf);
    else
      out.cons.push_back(pf);
    out.label = SequentLabel{};
    out.label.kind = SequentLabel::Kind::Grade;
    out.label.grade = grade_expr(dual);
    return out;
  }
  if (f->kind == Conn::GradedAnd || f->kind == Conn::GradedOr) {
    if (s.label.kind != SequentLabel::Kind::None)
      throw DomainError("perp-prime on compounds needs an unlabelled sequent");
    Conn k = f->kind == Conn::GradedAnd ? Conn::GradedOr : Conn::GradedAnd;
    FormulaPtr g = graded(k, partner_atom(f->left, decls),
                          partner_atom(f->right, decls), conj(f->g1),
                          conj(f->g0));
    g = normalize_graded(g, decls);
    if (s.ante.empty())
      out.ante.push_back(g);
    else
      out.cons.push_back(g);
    return out;
  }
  throw DomainError("perp-prime is undefined on this sequent");
}

}  // namespace lq
