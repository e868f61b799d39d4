#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lq/syntax.hpp"

using namespace lq;

TEST_CASE("formula parsing maps the grammar onto the AST") {
  auto decls = lqtest::two_atom_decls();
  FormulaPtr f = parse_formula("p0 &[z0,z1] p1", decls);
  REQUIRE(f->kind == Conn::GradedAnd);
  CHECK(f->left->name == "p0");
  CHECK(f->right->name == "p1");
  CHECK(f->g0.symbol == "z0");
  CHECK_FALSE(f->g0.conjugated);
  CHECK(f->g1.symbol == "z1");

  FormulaPtr g = parse_formula("p0 v[z0*,z1*] p1", decls);
  REQUIRE(g->kind == Conn::GradedOr);
  CHECK(g->g0.conjugated);
}

TEST_CASE("bell-shape and entanglement formulas") {
  Script sc = parse_script("atom A, B;\nqubit Q_A = A;\nqubit Q_B = B;\n");
  FormulaPtr bell = parse_formula("(A par B) & (A^ par B^)", sc.decls);
  REQUIRE(bell->kind == Conn::And);
  CHECK(bell->left->kind == Conn::Par);
  CHECK(bell->right->left->negated);

  FormulaPtr ent = parse_formula("Q_A @ Q_B", sc.decls);
  REQUIRE(ent->kind == Conn::Ent);
  CHECK(is_qubit_shape(ent->left));
  CHECK(equal(ent->left, qubit_of(atom("A"))));

  // A literal operand is allowed (the measured-qubit case); a compound
  // non-qubit operand is not.
  CHECK_NOTHROW(parse_formula("A @ Q_B", sc.decls));
  CHECK_THROWS_AS(parse_formula("(A par B) @ Q_B", sc.decls), ParseError);
}

TEST_CASE("parser rejects bad inputs") {
  auto decls = lqtest::two_atom_decls();
  CHECK_THROWS_AS(parse_formula("q7", decls), ParseError);
  CHECK_THROWS_AS(parse_formula("p0 &[z9,z1] p1", decls), ParseError);
  CHECK_THROWS_AS(parse_formula("p0 & p1 & p0", decls), ParseError);
  CHECK_THROWS_AS(parse_formula("p0 &", decls), ParseError);
  CHECK_THROWS_AS(parse_sequent("p0 |-{z0} p0", decls), ParseError);
  CHECK_THROWS_AS(parse_sequent("p0 |-[1.5] p0", decls), ParseError);
  CHECK_THROWS_AS(parse_sequent("|-[0.5] p0", decls), ParseError);
  CHECK_THROWS_AS(parse_sequent("|-{z0}", decls), ParseError);
}

TEST_CASE("sequent labels") {
  auto decls = lqtest::two_atom_decls();
  GradedSequent s = parse_sequent("|-{z0} p0", decls);
  CHECK(s.ante.empty());
  CHECK(s.label.kind == SequentLabel::Kind::Grade);
  CHECK(render(s) == "|-{z0} p0");

  GradedSequent t = parse_sequent("p0 |-[0.5] p0", decls);
  CHECK(t.label.kind == SequentLabel::Kind::Eval);
  CHECK(t.label.eval == doctest::Approx(0.5));

  GradedSequent u = parse_sequent("p0, p1 |- p0, p1", decls);
  CHECK(u.label.kind == SequentLabel::Kind::None);
  CHECK(u.ante.size() == 2);
}

TEST_CASE("grade order distinguishes formulas") {
  auto decls = lqtest::two_atom_decls();
  CHECK_FALSE(equal(parse_formula("p0 &[z0,z1] p1", decls),
                    parse_formula("p0 &[z1,z0] p1", decls)));
}

TEST_CASE("primitive negation is involutive") {
  for (bool neg : {false, true}) {
    FormulaPtr a = atom("p0", neg);
    CHECK(equal(negate_atom(negate_atom(a)), a));
  }
}

TEST_CASE("canonical rendering round-trips") {
  auto decls = lqtest::two_atom_decls();
  CHECK(render(parse_formula("p0&[z0,z1]p1", decls)) == "p0 &[z0,z1] p1");
  CHECK(render(parse_formula("not (p0 & p1)", decls)) == "not (p0 & p1)");

  Script sc = parse_script("atom A, B;\nqubit Q_A = A;\nqubit Q_B = B;\n");
  FormulaPtr ent = parse_formula("Q_A @ Q_B", sc.decls);
  CHECK(render(ent, &sc.decls) == "Q_A @ Q_B");
  CHECK(render(ent) == "(A & A^) @ (B & B^)");
}

TEST_CASE("roundtrip over random formulas") {
  auto decls = lqtest::two_atom_decls();
  std::mt19937 rng(20240811);
  for (int i = 0; i < 1000; ++i) {
    FormulaPtr f = lqtest::random_formula(rng, 6);
    std::string text = render(f);
    CAPTURE(text);
    FormulaPtr g = parse_formula(text, decls);
    CHECK(equal(f, g));
  }
}

TEST_CASE("roundtrip over random sequents") {
  auto decls = lqtest::two_atom_decls();
  std::mt19937 rng(37);
  std::uniform_int_distribution<int> nside(0, 3), lab(0, 3);
  std::uniform_real_distribution<double> ev(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    GradedSequent s;
    int na = nside(rng), nc = nside(rng);
    for (int k = 0; k < na; ++k)
      s.ante.push_back(lqtest::random_formula(rng, 3));
    for (int k = 0; k < nc; ++k)
      s.cons.push_back(lqtest::random_formula(rng, 3));
    if (na > 0 && nc > 0 && lab(rng) == 0) {
      s.label.kind = SequentLabel::Kind::Eval;
      s.label.eval = ev(rng);
    } else if ((na == 0) != (nc == 0) && lab(rng) == 1) {
      s.label.kind = SequentLabel::Kind::Grade;
      s.label.grade.terms = {{+1, {"z0", false}}, {+1, {"z1", true}}};
    }
    std::string text = render(s);
    CAPTURE(text);
    CHECK(equal(parse_sequent(text, decls), s, 1e-12));
  }
}

TEST_CASE("script parsing and dangling references") {
  CHECK(parse_script("").proofs.empty());
  CHECK(parse_script("").decls.atoms.empty());

  CHECK_THROWS_WITH_AS(
      parse_script("atom A;\nproof t in B {\n  1: A |- A by cut(9, 9);\n}\n"),
      doctest::Contains("dangling premise reference"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_script("atom A;\nproof t in B {\n  1: A |- A by no-such-rule;\n}\n"),
      doctest::Contains("unknown to any ruleset"), ParseError);
}

TEST_CASE("script rendering is idempotent") {
  const char* text =
      "atom p0, p1;\n"
      "grade z0, z1;\n"
      "bind z0 = 0.70710678+0i;\n"
      "bind z1 = 0+0.70710678i;\n"
      "md strict;\n"
      "\n"
      "proof t in Lq {\n"
      "  1: p0 |-[0.5] p0 by id-axiom;\n"
      "}\n";
  std::string once = render(parse_script(text));
  std::string twice = render(parse_script(once));
  CHECK(once == twice);
}

TEST_CASE("env blocks parse complex literals") {
  Script sc = parse_script(
      "grade z0, z1;\nbind z0 = 0.6-0.0i;\nbind z1 = 0.8i;\nmd none;\n");
  CHECK(sc.env.binds.size() == 2);
  CHECK(sc.env.binds[1].second == std::complex<double>(0.0, 0.8));
  CHECK(sc.env.md_mode == "none");
}
