#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lq/evaluation.hpp"

using namespace lq;

namespace {

GradeEnv env_of(std::complex<double> z0, std::complex<double> z1,
                MdMode mode) {
  GradeEnv e;
  e.mode = mode;
  e.binds = {{"z0", z0}, {"z1", z1}};
  return e;
}

const double kR = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("md_check residuals and modes") {
  MdReport r = md_check(env_of({1, 0}, {0, 0}, MdMode::Strict));
  CHECK(r.pass);
  CHECK(r.norm_residual == doctest::Approx(0.0));
  CHECK(r.cross_residual == doctest::Approx(0.0));

  // z0 = 1/sqrt(2), z1 = i/sqrt(2): cross term i/2 - i/2 = 0.
  r = md_check(env_of({kR, 0}, {0, kR}, MdMode::Strict));
  CHECK(r.pass);
  CHECK(r.cross_residual <= 1e-12);

  // The cat state passes normalization but fails the cross constraint.
  r = md_check(env_of({kR, 0}, {kR, 0}, MdMode::Norm));
  CHECK(r.pass);
  r = md_check(env_of({kR, 0}, {kR, 0}, MdMode::Strict));
  CHECK_FALSE(r.pass);
  CHECK(r.cross_residual == doctest::Approx(1.0));
}

TEST_CASE("md_check rejects unbound symbols via eval_expr") {
  GradeEnv env = env_of({1, 0}, {0, 0}, MdMode::Norm);
  GradeExpr e = grade_expr(GradeRef{"z7", false});
  CHECK_THROWS_AS(eval_expr(e, env), EnvError);
}

TEST_CASE("gluing is the plain complex product") {
  GradeExpr sum_conj;
  sum_conj.terms = {{+1, {"z0", true}}, {+1, {"z1", true}}};
  GradeExpr sum;
  sum.terms = {{+1, {"z0", false}}, {+1, {"z1", false}}};

  GradeEnv strict = env_of({kR, 0}, {0, kR}, MdMode::Strict);
  CHECK(std::abs(glue(sum_conj, sum, strict) - std::complex<double>(1, 0)) <=
        1e-12);

  // Gamma |- p0 with the trivial strict env gives exactly v0 = 1.
  GradeExpr z0only = grade_expr(GradeRef{"z0", false});
  GradeEnv basis = env_of({1, 0}, {0, 0}, MdMode::Strict);
  CHECK(glue(sum_conj, z0only, basis).real() == doctest::Approx(1.0));

  // For every strict env the real part of the glue is v0; the cross term is
  // purely imaginary (the constraint kills only the symmetrized product).
  GradeEnv s2 = env_of({0.6, 0}, {0, 0.8}, MdMode::Strict);
  auto g = glue(sum_conj, z0only, s2);
  CHECK(g.real() == doctest::Approx(0.36));

  // z_i* glued with z_i is v_i.
  GradeExpr z0c = grade_expr(GradeRef{"z0", true});
  CHECK(glue(z0c, z0only, s2).real() == doctest::Approx(0.36));
  CHECK(std::abs(glue(z0c, z0only, s2).imag()) <= 1e-12);
}

TEST_CASE("evaluate the sequent shapes of the calculus") {
  auto decls = lqtest::two_atom_decls();
  GradeEnv cat = env_of({kR, 0}, {kR, 0}, MdMode::Norm);
  CHECK(evaluate(parse_sequent("p0 |- p0", decls), cat, decls) ==
        doctest::Approx(0.5));
  CHECK(evaluate(parse_sequent("p0 |- p0", decls),
                 env_of({1, 0}, {0, 0}, MdMode::Norm),
                 decls) == doctest::Approx(1.0));

  GradeEnv strict = env_of({kR, 0}, {0, kR}, MdMode::Strict);
  CHECK(evaluate(parse_sequent("p0, p1 |- p0, p1", decls), strict, decls) ==
        doctest::Approx(1.0));
  // The compound conjunction is asserted with the same grade sum.
  CHECK(evaluate(parse_sequent("p0, p1 |- p0 &[z0,z1] p1", decls), strict,
                 decls) == doctest::Approx(1.0));

  CHECK_THROWS_AS(
      evaluate(parse_sequent("p0 |-", decls), strict, decls), DomainError);
  CHECK_THROWS_AS(
      evaluate(parse_sequent("not p0 |- p0", decls), strict, decls),
      DomainError);
  CHECK_THROWS_AS(
      evaluate(parse_sequent("p1, p0 |- p0", decls), strict, decls),
      DomainError);
}

TEST_CASE("gluing normalization and phase invariance") {
  auto decls = lqtest::two_atom_decls();
  GradedSequent idgam = parse_sequent("p0, p1 |- p0, p1", decls);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 6.28318);
  for (int i = 0; i < 1000; ++i) {
    GradeEnv env = lqtest::random_strict_env(rng);
    double v = evaluate(idgam, env, decls);
    CHECK(std::abs(v - 1.0) <= 1e-9);

    double phi = uni(rng);
    GradeEnv shifted = env;
    for (auto& [sym, z] : shifted.binds) z *= std::polar(1.0, phi);
    CHECK(std::abs(evaluate(idgam, shifted, decls) - v) <= 1e-9);
  }
}

TEST_CASE("identity evaluations sum to one under normalization") {
  auto decls = lqtest::two_atom_decls();
  GradedSequent s0 = parse_sequent("p0 |- p0", decls);
  GradedSequent s1 = parse_sequent("p1 |- p1", decls);
  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) {
    GradeEnv env = lqtest::random_norm_env(rng);
    CHECK(std::abs(evaluate(s0, env, decls) + evaluate(s1, env, decls) - 1.0) <=
          1e-9);
  }
}

TEST_CASE("reference T-norms") {
  CHECK(t_norm(TNorm::Lukasiewicz, 0.5, 0.5) == doctest::Approx(0.0));
  CHECK(t_norm(TNorm::Goedel, 0.3, 0.7) == doctest::Approx(0.3));
  CHECK(t_norm(TNorm::Product, 1.0, 0.42) == doctest::Approx(0.42));
  CHECK_THROWS_AS(t_norm(TNorm::Goedel, -0.1, 0.5), DomainError);
  CHECK_THROWS_AS(t_norm(TNorm::Goedel, 0.1, 1.5), DomainError);
}

TEST_CASE("no T-norm satisfies MD while the H-combination does") {
  for (TNorm k : {TNorm::Lukasiewicz, TNorm::Goedel, TNorm::Product})
    CHECK(t_norm(k, 0.5, 0.5) != doctest::Approx(1.0));
  CHECK(h_combine(0.5, 0.5).value == doctest::Approx(1.0));
}

TEST_CASE("H-combination value and regime") {
  auto r = h_combine(0.5, 0.5);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.regime == HResult::Regime::Qubit);

  r = h_combine(0.3, 0.3);
  CHECK(r.value == doctest::Approx(0.6));
  CHECK(r.regime == HResult::Regime::Qumix);

  r = h_combine(0.0, 0.0);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.regime == HResult::Regime::Qumix);

  r = h_combine(0.9, 0.8);
  CHECK(r.value == doctest::Approx(1.0));  // saturates
  CHECK(r.regime == HResult::Regime::Outside);

  CHECK_THROWS_AS(h_combine(-0.1, 0.2), DomainError);
}

TEST_CASE("H reduces to 1 whenever v0+v1 = 1") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double v0 = uni(rng);
    auto r = h_combine(v0, 1.0 - v0);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.regime == HResult::Regime::Qubit);
  }
}
