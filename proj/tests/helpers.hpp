#ifndef LQ_TEST_HELPERS_HPP
#define LQ_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <random>

#include "lq/evaluation.hpp"
#include "lq/syntax.hpp"

namespace lqtest {

inline lq::DeclarationSet two_atom_decls() {
  return lq::parse_script("atom p0, p1;\ngrade z0, z1;\n").decls;
}

// Environment satisfying both MD equations: z0 = c e^{ia}, z1 = s e^{ib}
// with c^2+s^2 = 1 and a-b = pi/2, which kills the cross term exactly.
inline lq::GradeEnv random_strict_env(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double theta = uni(rng) * (3.14159265358979323846 / 2.0);
  double alpha = uni(rng) * 2.0 * 3.14159265358979323846;
  double beta = alpha + (uni(rng) < 0.5 ? 1.0 : -1.0) *
                            (3.14159265358979323846 / 2.0);
  lq::GradeEnv env;
  env.mode = lq::MdMode::Strict;
  env.binds = {{"z0", std::polar(std::cos(theta), alpha)},
               {"z1", std::polar(std::sin(theta), beta)}};
  return env;
}

// Environment satisfying only the normalization constraint.
inline lq::GradeEnv random_norm_env(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double theta = uni(rng) * (3.14159265358979323846 / 2.0);
  lq::GradeEnv env;
  env.mode = lq::MdMode::Norm;
  env.binds = {{"z0", std::polar(std::cos(theta), uni(rng) * 6.28318)},
               {"z1", std::polar(std::sin(theta), uni(rng) * 6.28318)}};
  return env;
}

// Random formula over the two-atom signature, any connective, depth-capped.
inline lq::FormulaPtr random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 1 ? 1 : 11);
  using lq::Conn;
  int k = pick(rng);
  auto lit = [&rng]() {
    std::uniform_int_distribution<int> a(0, 1), neg(0, 1);
    return lq::atom(a(rng) ? "p1" : "p0", neg(rng) != 0);
  };
  switch (k) {
    case 0:
    case 1:
      return lit();
    case 2:
      return lq::unary(Conn::Not, random_formula(rng, depth - 1));
    case 3: {
      lq::GradeRef g0{"z0", false}, g1{"z1", false};
      std::uniform_int_distribution<int> c(0, 3);
      int cc = c(rng);
      if (cc & 1) g0.conjugated = true;
      if (cc & 2) std::swap(g0, g1);
      return lq::graded(Conn::GradedAnd, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1), g0, g1);
    }
    case 4: {
      lq::GradeRef g0{"z0", true}, g1{"z1", true};
      return lq::graded(Conn::GradedOr, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1), g0, g1);
    }
    case 5: {
      // Entanglement needs qubit or literal operands.
      auto q = [&]() {
        auto l = lit();
        std::uniform_int_distribution<int> b(0, 1);
        return b(rng) ? lq::qubit_of(l) : l;
      };
      std::uniform_int_distribution<int> b(0, 1);
      return lq::binary(b(rng) ? Conn::Ent : Conn::EntDual, q(), q());
    }
    case 6:
      return lq::binary(Conn::And, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1));
    case 7:
      return lq::binary(Conn::Or, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1));
    case 8:
      return lq::binary(Conn::Times, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1));
    case 9:
      return lq::binary(Conn::Par, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1));
    case 10:
      return lq::binary(Conn::Implies, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1));
    default:
      return lq::binary(Conn::CoImplies, random_formula(rng, depth - 1),
                        random_formula(rng, depth - 1));
  }
}

}  // namespace lqtest

#endif
