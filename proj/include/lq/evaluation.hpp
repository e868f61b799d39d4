#ifndef LQ_EVALUATION_HPP
#define LQ_EVALUATION_HPP

#include <complex>
#include <string>
#include <vector>

#include "lq/syntax.hpp"

namespace lq {

struct EnvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Comparison tolerance for all numeric checks; LQ_TOLERANCE overrides the
// 1e-9 default (read once).
double tolerance();

enum class MdMode { Norm, Strict, None };

struct GradeEnv {
  MdMode mode = MdMode::Norm;
  std::vector<std::pair<std::string, std::complex<double>>> binds;

  std::complex<double> value(const GradeRef& r) const;  // throws EnvError
  bool bound(const std::string& sym) const;
};

GradeEnv make_env(const EnvSpec& spec);

struct MdReport {
  double norm_residual = 0.0;   // | sum |z_i|^2 - 1 |
  double cross_residual = 0.0;  // | z0* z1 + z1* z0 | over the first two binds
  bool pass = false;
};

MdReport md_check(const GradeEnv& env);

std::complex<double> eval_expr(const GradeExpr& e, const GradeEnv& env);

// Gluing of the *-dual-side expression f with the assertion-side expression
// g: the plain complex product eval(f) * eval(g). No algebraic simplification.
std::complex<double> glue(const GradeExpr& f, const GradeExpr& g,
                          const GradeEnv& env);

// Truth value of a two-sided sequent whose sides reduce to grade expressions:
// a single non-negated atom (its grade), the full declared atom list in
// declaration order (the grade sum), or a single graded conjunction of the
// two atoms (also the grade sum). Anything else throws DomainError.
double evaluate(const GradedSequent& s, const GradeEnv& env,
                const DeclarationSet& decls);

enum class TNorm { Lukasiewicz, Goedel, Product };

double t_norm(TNorm kind, double x, double y);  // throws DomainError off [0,1]

struct HResult {
  double value = 0.0;
  enum class Regime { Qumix, Qubit, Outside } regime = Regime::Qumix;
};

// H(v0,v1) = 1 - max(1-(v0+v1), 0); the regime classifies v0+v1 against 1.
HResult h_combine(double v0, double v1);  // throws DomainError on negatives

}  // namespace lq

#endif
