#include <algorithm>
#include <map>

#include "lq/calculus.hpp"
#include "lq/evaluation.hpp"

namespace lq {

namespace {

struct ProofNode {
  std::string rule;
  GradedSequent conclusion;
  std::vector<ProofNode> children;
  int height() const {
    int h = 0;
    for (const auto& c : children) h = std::max(h, c.height());
    return h + 1;
  }
};

struct Expansion {
  RuleId rule;
  std::vector<GradedSequent> subgoals;
};

GradedSequent mk(std::vector<FormulaPtr> ante, std::vector<FormulaPtr> cons,
                 SequentLabel lab = SequentLabel{}) {
  GradedSequent s;
  s.ante = std::move(ante);
  s.cons = std::move(cons);
  s.label = lab;
  return s;
}

SequentLabel evl(double v) {
  SequentLabel l;
  l.kind = SequentLabel::Kind::Eval;
  l.eval = v;
  return l;
}

SequentLabel grl(GradeExpr e) {
  SequentLabel l;
  l.kind = SequentLabel::Kind::Grade;
  l.grade = std::move(e);
  return l;
}

class Prover {
 public:
  Prover(const RuleSet& rs, const DeclarationSet* decls, const GradeEnv* env)
      : rs_(rs), decls_(decls), env_(env) {}

  std::optional<ProofNode> prove(const GradedSequent& goal, int remaining) {
    if (remaining <= 0) return std::nullopt;
    std::string key = render(goal);
    auto it = memo_.find(key);
    if (it != memo_.end() && it->second >= remaining) return std::nullopt;
    if (auto leaf = try_axioms(goal)) return leaf;
    for (const auto& ex : expansions(goal)) {
      ProofNode node{rule_name(ex.rule), goal, {}};
      bool ok = true;
      for (const auto& sub : ex.subgoals) {
        auto child = prove(sub, remaining - 1);
        if (!child) {
          ok = false;
          break;
        }
        node.children.push_back(std::move(*child));
      }
      if (ok) return node;
    }
    int& slot = memo_[key];
    slot = std::max(slot, remaining);
    return std::nullopt;
  }

 private:
  std::optional<ProofNode> try_axioms(const GradedSequent& goal) {
    for (RuleId r : {RuleId::IdAxiom, RuleId::GandAxiom, RuleId::GorAxiom,
                     RuleId::AtAxiom}) {
      if (!rs_.contains(r)) continue;
      RuleParams q;
      q.target = goal;
      try {
        apply_rule(rs_, r, {}, q, decls_);
        return ProofNode{rule_name(r), goal, {}};
      } catch (const RuleError&) {
      } catch (const DomainError&) {
      }
    }
    return std::nullopt;
  }

  std::vector<Expansion> expansions(const GradedSequent& g) {
    std::vector<Expansion> out;
    const bool unl = g.label.kind == SequentLabel::Kind::None;
    const bool ev = g.label.kind == SequentLabel::Kind::Eval;
    auto has = [&](RuleId r) { return rs_.contains(r); };
    auto splice_ante = [&](size_t k, std::vector<FormulaPtr> repl) {
      GradedSequent s = g;
      s.ante.erase(s.ante.begin() + long(k));
      s.ante.insert(s.ante.begin() + long(k), repl.begin(), repl.end());
      return s;
    };
    auto splice_cons = [&](size_t k, std::vector<FormulaPtr> repl) {
      GradedSequent s = g;
      s.cons.erase(s.cons.begin() + long(k));
      s.cons.insert(s.cons.begin() + long(k), repl.begin(), repl.end());
      return s;
    };
    using FL = std::vector<FormulaPtr>;

    if (unl && has(RuleId::AndForm))
      for (size_t k = 0; k < g.cons.size(); ++k)
        if (g.cons[k]->kind == Conn::And &&
            (g.cons.size() == 1 || rs_.right_contexts))
          out.push_back({RuleId::AndForm,
                         {splice_cons(k, {g.cons[k]->left}),
                          splice_cons(k, {g.cons[k]->right})}});
    if (unl && has(RuleId::AndRefl))
      for (size_t k = 0; k < g.ante.size(); ++k)
        if (g.ante[k]->kind == Conn::And &&
            (g.ante.size() == 1 || rs_.left_contexts)) {
          out.push_back({RuleId::AndRefl, {splice_ante(k, {g.ante[k]->left})}});
          out.push_back({RuleId::AndRefl, {splice_ante(k, {g.ante[k]->right})}});
        }
    if (unl && has(RuleId::OrForm))
      for (size_t k = 0; k < g.ante.size(); ++k)
        if (g.ante[k]->kind == Conn::Or &&
            (g.ante.size() == 1 || rs_.left_contexts))
          out.push_back({RuleId::OrForm,
                         {splice_ante(k, {g.ante[k]->left}),
                          splice_ante(k, {g.ante[k]->right})}});
    if (unl && has(RuleId::OrRefl))
      for (size_t k = 0; k < g.cons.size(); ++k)
        if (g.cons[k]->kind == Conn::Or &&
            (g.cons.size() == 1 || rs_.right_contexts)) {
          out.push_back({RuleId::OrRefl, {splice_cons(k, {g.cons[k]->left})}});
          out.push_back({RuleId::OrRefl, {splice_cons(k, {g.cons[k]->right})}});
        }
    if (unl && has(RuleId::TimesForm))
      for (size_t k = 0; k < g.ante.size(); ++k)
        if (g.ante[k]->kind == Conn::Times &&
            (g.ante.size() == 1 || rs_.left_contexts))
          out.push_back({RuleId::TimesForm,
                         {splice_ante(k, {g.ante[k]->left, g.ante[k]->right})}});
    if (unl && has(RuleId::TimesRefl) && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::Times)
      for (size_t split = 0; split <= g.ante.size(); ++split)
        out.push_back(
            {RuleId::TimesRefl,
             {mk(FL(g.ante.begin(), g.ante.begin() + long(split)),
                 {g.cons[0]->left}),
              mk(FL(g.ante.begin() + long(split), g.ante.end()),
                 {g.cons[0]->right})}});
    if (unl && has(RuleId::ParForm))
      for (size_t k = 0; k < g.cons.size(); ++k)
        if (g.cons[k]->kind == Conn::Par &&
            (g.cons.size() == 1 || rs_.right_contexts))
          out.push_back({RuleId::ParForm,
                         {splice_cons(k, {g.cons[k]->left, g.cons[k]->right})}});
    if (unl && has(RuleId::ParRefl) && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::Par)
      for (size_t split = 0; split <= g.cons.size(); ++split)
        out.push_back(
            {RuleId::ParRefl,
             {mk({g.ante[0]->left},
                 FL(g.cons.begin(), g.cons.begin() + long(split))),
              mk({g.ante[0]->right},
                 FL(g.cons.begin() + long(split), g.cons.end()))}});

    if (has(RuleId::NegForm) && g.ante.empty() && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::Not) {
      if (!rs_.graded && unl)
        out.push_back({RuleId::NegForm, {mk({g.cons[0]->left}, {})}});
      if (rs_.graded && decls_ && g.label.kind == SequentLabel::Kind::Grade &&
          g.cons[0]->left->kind == Conn::Atom && !g.cons[0]->left->negated) {
        int i = decls_->atom_index(g.cons[0]->left->name);
        int j = decls_->partner_atom_index(i);
        if (i >= 0 && j >= 0 &&
            g.label.grade == grade_expr(decls_->grade_for_atom_index(j)))
          out.push_back(
              {RuleId::NegForm,
               {mk({g.cons[0]->left}, {},
                   grl(grade_expr(conj(decls_->grade_for_atom_index(i)))))}});
      }
    }
    if (has(RuleId::NegRefl) && g.cons.empty() && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::Not) {
      if (!rs_.graded && unl)
        out.push_back({RuleId::NegRefl, {mk({}, {g.ante[0]->left})}});
      if (rs_.graded && decls_ && g.label.kind == SequentLabel::Kind::Grade &&
          g.ante[0]->left->kind == Conn::Atom && !g.ante[0]->left->negated) {
        int i = decls_->atom_index(g.ante[0]->left->name);
        int j = decls_->partner_atom_index(i);
        if (i >= 0 && j >= 0 &&
            g.label.grade ==
                grade_expr(conj(decls_->grade_for_atom_index(j))))
          out.push_back(
              {RuleId::NegRefl,
               {mk({}, {g.ante[0]->left},
                   grl(grade_expr(decls_->grade_for_atom_index(i))))}});
      }
    }

    if (unl && has(RuleId::ImpForm) && g.ante.empty() && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::Implies)
      out.push_back(
          {RuleId::ImpForm, {mk({g.cons[0]->left}, {g.cons[0]->right})}});
    if (unl && has(RuleId::ImpRefl) && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::Implies)
      out.push_back({RuleId::ImpRefl,
                     {mk({}, {g.ante[0]->left}),
                      mk({g.ante[0]->right}, g.cons)}});
    if (unl && has(RuleId::CoimpForm) && g.cons.empty() && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::CoImplies)
      out.push_back(
          {RuleId::CoimpForm, {mk({g.ante[0]->right}, {g.ante[0]->left})}});
    if (unl && has(RuleId::CoimpRefl) && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::CoImplies)
      out.push_back({RuleId::CoimpRefl,
                     {mk({g.cons[0]->left}, {}),
                      mk(g.ante, {g.cons[0]->right})}});

    if (unl && has(RuleId::AtForm) && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::Ent) {
      const FormulaPtr& e = g.cons[0];
      FormulaPtr x = qubit_literal(e->left), y = qubit_literal(e->right);
      out.push_back({RuleId::AtForm,
                     {mk(g.ante, {x, y}),
                      mk(g.ante, {negate_atom(x), negate_atom(y)})}});
      out.push_back({RuleId::AtForm, {mk(g.ante, {e->left, e->right})}});
    }
    if (unl && has(RuleId::AtRefl) && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::Ent) {
      const FormulaPtr& e = g.ante[0];
      FormulaPtr x = qubit_literal(e->left), y = qubit_literal(e->right);
      for (size_t split = 0; split <= g.cons.size(); ++split) {
        FL d0(g.cons.begin(), g.cons.begin() + long(split));
        FL d1(g.cons.begin() + long(split), g.cons.end());
        out.push_back({RuleId::AtRefl, {mk({x}, d0), mk({y}, d1)}});
        out.push_back({RuleId::AtRefl,
                       {mk({negate_atom(x)}, d0), mk({negate_atom(y)}, d1)}});
        out.push_back({RuleId::AtRefl, {mk({e->left}, d0), mk({e->right}, d1)}});
      }
    }
    if (unl && has(RuleId::SectForm) && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::EntDual) {
      const FormulaPtr& e = g.ante[0];
      FormulaPtr x = qubit_literal(e->left), y = qubit_literal(e->right);
      out.push_back({RuleId::SectForm,
                     {mk({x, y}, g.cons),
                      mk({negate_atom(x), negate_atom(y)}, g.cons)}});
      out.push_back({RuleId::SectForm, {mk({e->left, e->right}, g.cons)}});
    }
    if (unl && has(RuleId::SectRefl) && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::EntDual) {
      const FormulaPtr& e = g.cons[0];
      FormulaPtr x = qubit_literal(e->left), y = qubit_literal(e->right);
      for (size_t split = 0; split <= g.ante.size(); ++split) {
        FL a0(g.ante.begin(), g.ante.begin() + long(split));
        FL a1(g.ante.begin() + long(split), g.ante.end());
        out.push_back({RuleId::SectRefl, {mk(a0, {x}), mk(a1, {y})}});
        out.push_back({RuleId::SectRefl,
                       {mk(a0, {negate_atom(x)}), mk(a1, {negate_atom(y)})}});
        out.push_back({RuleId::SectRefl, {mk(a0, {e->left}), mk(a1, {e->right})}});
      }
    }

    // Graded formation backward needs an env to determine premise labels.
    if (ev && env_ && has(RuleId::GandForm) && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::GradedAnd) {
      const FormulaPtr& f = g.cons[0];
      try {
        double v0 = std::norm(env_->value(f->g0));
        double v1 = std::norm(env_->value(f->g1));
        if (std::abs(v0 + v1 - g.label.eval) <= tolerance())
          out.push_back({RuleId::GandForm,
                         {mk(g.ante, {f->left}, evl(v0)),
                          mk(g.ante, {f->right}, evl(v1))}});
      } catch (const EnvError&) {
      }
    }
    if (ev && has(RuleId::GandRefl) && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::GradedAnd) {
      out.push_back(
          {RuleId::GandRefl, {mk({g.ante[0]->left}, g.cons, g.label)}});
      out.push_back(
          {RuleId::GandRefl, {mk({g.ante[0]->right}, g.cons, g.label)}});
    }
    if (ev && env_ && has(RuleId::GorForm) && g.ante.size() == 1 &&
        g.ante[0]->kind == Conn::GradedOr) {
      const FormulaPtr& f = g.ante[0];
      try {
        double v0 = std::norm(env_->value(f->g0));
        double v1 = std::norm(env_->value(f->g1));
        if (std::abs(v0 + v1 - g.label.eval) <= tolerance())
          out.push_back({RuleId::GorForm,
                         {mk({f->left}, g.cons, evl(v0)),
                          mk({f->right}, g.cons, evl(v1))}});
      } catch (const EnvError&) {
      }
    }
    if (ev && has(RuleId::GorRefl) && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::GradedOr) {
      out.push_back({RuleId::GorRefl, {mk(g.ante, {g.cons[0]->left}, g.label)}});
      out.push_back(
          {RuleId::GorRefl, {mk(g.ante, {g.cons[0]->right}, g.label)}});
    }

    // EPR backward is schema-determined; cut and qcut are not searched.
    if (unl && has(RuleId::Epr) && g.cons.size() == 1 &&
        g.cons[0]->kind == Conn::Ent && is_literal(g.cons[0]->left)) {
      FormulaPtr q = qubit_of(g.cons[0]->left);
      out.push_back({RuleId::Epr,
                     {mk(g.ante, {binary(Conn::Ent, q, g.cons[0]->right)}),
                      mk({q}, {g.cons[0]->left})}});
    }

    if (has(RuleId::ExchL))
      for (size_t k = 0; k + 1 < g.ante.size(); ++k) {
        GradedSequent s = g;
        std::swap(s.ante[k], s.ante[k + 1]);
        out.push_back({RuleId::ExchL, {s}});
      }
    if (has(RuleId::ExchR))
      for (size_t k = 0; k + 1 < g.cons.size(); ++k) {
        GradedSequent s = g;
        std::swap(s.cons[k], s.cons[k + 1]);
        out.push_back({RuleId::ExchR, {s}});
      }
    if (has(RuleId::WeakL))
      for (size_t k = 0; k < g.ante.size(); ++k) {
        GradedSequent s = g;
        s.ante.erase(s.ante.begin() + long(k));
        if (!(s.ante.empty() && s.label.kind == SequentLabel::Kind::Eval))
          out.push_back({RuleId::WeakL, {s}});
      }
    if (has(RuleId::WeakR))
      for (size_t k = 0; k < g.cons.size(); ++k) {
        GradedSequent s = g;
        s.cons.erase(s.cons.begin() + long(k));
        if (!(s.cons.empty() && s.label.kind == SequentLabel::Kind::Eval))
          out.push_back({RuleId::WeakR, {s}});
      }
    if (has(RuleId::ContrL) && g.ante.size() < 8)
      for (size_t k = 0; k < g.ante.size(); ++k) {
        GradedSequent s = g;
        s.ante.insert(s.ante.begin() + long(k), g.ante[k]);
        out.push_back({RuleId::ContrL, {s}});
      }
    if (has(RuleId::ContrR) && g.cons.size() < 8)
      for (size_t k = 0; k < g.cons.size(); ++k) {
        GradedSequent s = g;
        s.cons.insert(s.cons.begin() + long(k), g.cons[k]);
        out.push_back({RuleId::ContrR, {s}});
      }
    return out;
  }

  const RuleSet& rs_;
  const DeclarationSet* decls_;
  const GradeEnv* env_;
  std::map<std::string, int> memo_;  // render key -> exhausted remaining depth
};

int emit(const ProofNode& n, Derivation& d, int& next_id) {
  std::vector<int> prem;
  for (const auto& c : n.children) prem.push_back(emit(c, d, next_id));
  DerivStep st;
  st.id = next_id++;
  st.conclusion = n.conclusion;
  st.rule = n.rule;
  st.premises = std::move(prem);
  d.steps.push_back(std::move(st));
  return d.steps.back().id;
}

}  // namespace

SearchOutcome bounded_search(const RuleSet& rs, const GradedSequent& goal,
                             int max_depth, const DeclarationSet* decls,
                             const GradeEnv* env) {
  if (max_depth < 1 || max_depth > kSearchDepthCap)
    throw DomainError("search depth must lie in [1, " +
                      std::to_string(kSearchDepthCap) + "]");
  Prover prover(rs, decls, env);
  SearchOutcome out;
  auto node = prover.prove(goal, max_depth);
  if (!node) {
    out.found = false;
    out.depth = max_depth;
    return out;
  }
  out.found = true;
  out.depth = node->height();
  out.derivation.name = "search";
  out.derivation.ruleset = rs.name;
  int next_id = 1;
  emit(*node, out.derivation, next_id);
  return out;
}

}  // namespace lq
