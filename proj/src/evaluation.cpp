#include "lq/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace lq {

double tolerance() {
  static const double tol = [] {
    if (const char* s = std::getenv("LQ_TOLERANCE")) {
      char* end = nullptr;
      double v = std::strtod(s, &end);
      if (end != s && v > 0.0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

std::complex<double> GradeEnv::value(const GradeRef& r) const {
  for (const auto& [sym, z] : binds)
    if (sym == r.symbol) return r.conjugated ? std::conj(z) : z;
  throw EnvError("unbound grade symbol '" + r.symbol + "'");
}

bool GradeEnv::bound(const std::string& sym) const {
  for (const auto& [s, z] : binds)
    if (s == sym) return true;
  return false;
}

GradeEnv make_env(const EnvSpec& spec) {
  GradeEnv env;
  env.binds = spec.binds;
  if (spec.md_mode == "norm")
    env.mode = MdMode::Norm;
  else if (spec.md_mode == "strict")
    env.mode = MdMode::Strict;
  else if (spec.md_mode == "none")
    env.mode = MdMode::None;
  else
    throw EnvError("unknown md mode '" + spec.md_mode + "'");
  return env;
}

MdReport md_check(const GradeEnv& env) {
  MdReport r;
  double norm = 0.0;
  for (const auto& [sym, z] : env.binds) norm += std::norm(z);
  r.norm_residual = std::abs(norm - 1.0);
  if (env.binds.size() >= 2) {
    const auto& z0 = env.binds[0].second;
    const auto& z1 = env.binds[1].second;
    r.cross_residual = std::abs(std::conj(z0) * z1 + std::conj(z1) * z0);
  }
  switch (env.mode) {
    case MdMode::Norm:
      r.pass = r.norm_residual <= tolerance();
      break;
    case MdMode::Strict:
      r.pass = r.norm_residual <= tolerance() && r.cross_residual <= tolerance();
      break;
    case MdMode::None:
      r.pass = true;
      break;
  }
  return r;
}

std::complex<double> eval_expr(const GradeExpr& e, const GradeEnv& env) {
  std::complex<double> acc = 0.0;
  for (const auto& t : e.terms) acc += double(t.sign) * env.value(t.ref);
  return acc;
}

std::complex<double> glue(const GradeExpr& f, const GradeExpr& g,
                          const GradeEnv& env) {
  return eval_expr(f, env) * eval_expr(g, env);
}

namespace {

// Grade expression induced by one side of an evaluated sequent.
GradeExpr side_expr(const std::vector<FormulaPtr>& side,
                    const DeclarationSet& decls) {
  if (side.empty()) throw DomainError("evaluated sequents are two-sided");
  if (side.size() == 1) {
    const FormulaPtr& f = side[0];
    if (f->kind == Conn::Atom && !f->negated) {
      int i = decls.atom_index(f->name);
      if (i < 0) throw DomainError("atom '" + f->name + "' not declared");
      return grade_expr(decls.grade_for_atom_index(i));
    }
    if (f->kind == Conn::GradedAnd && is_literal(f->left) &&
        is_literal(f->right) && !f->left->negated && !f->right->negated) {
      GradeExpr e;
      e.terms.push_back({+1, f->g0});
      e.terms.push_back({+1, f->g1});
      return e;
    }
    throw DomainError("sequent side is outside the evaluated shapes");
  }
  // Full atom list in declaration order.
  if (side.size() != decls.atoms.size())
    throw DomainError("sequent side is outside the evaluated shapes");
  GradeExpr e;
  for (size_t i = 0; i < side.size(); ++i) {
    const FormulaPtr& f = side[i];
    if (f->kind != Conn::Atom || f->negated || f->name != decls.atoms[i])
      throw DomainError("sequent side is outside the evaluated shapes");
    e.terms.push_back({+1, decls.grade_for_atom_index(int(i))});
  }
  return e;
}

}  // namespace

double evaluate(const GradedSequent& s, const GradeEnv& env,
                const DeclarationSet& decls) {
  if (s.ante.empty() || s.cons.empty())
    throw DomainError("evaluate needs a two-sided sequent");
  GradeExpr f = conj(side_expr(s.ante, decls));  // *-dual of the antecedent
  GradeExpr g = side_expr(s.cons, decls);
  return std::abs(glue(f, g, env));
}

double t_norm(TNorm kind, double x, double y) {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw DomainError("t_norm arguments must lie in [0,1]");
  switch (kind) {
    case TNorm::Lukasiewicz: return std::max(x + y - 1.0, 0.0);
    case TNorm::Goedel: return std::min(x, y);
    case TNorm::Product: return x * y;
  }
  return 0.0;
}

HResult h_combine(double v0, double v1) {
  if (v0 < 0.0 || v1 < 0.0)
    throw DomainError("h_combine arguments must be non-negative");
  HResult r;
  double sum = v0 + v1;
  r.value = 1.0 - std::max(1.0 - sum, 0.0);
  if (std::abs(sum - 1.0) <= tolerance())
    r.regime = HResult::Regime::Qubit;
  else if (sum < 1.0)
    r.regime = HResult::Regime::Qumix;
  else
    r.regime = HResult::Regime::Outside;
  return r;
}

}  // namespace lq
