#ifndef LQ_SYNTAX_HPP
#define LQ_SYNTAX_HPP

#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lq {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Domain violation of an operation (dual outside its fragment, sequent shape
// the evaluator does not define, ...). Distinct from ParseError so the CLI can
// map it to its own exit code.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Grades

struct GradeRef {
  std::string symbol;
  bool conjugated = false;
  friend bool operator==(const GradeRef&, const GradeRef&) = default;
};

GradeRef conj(GradeRef g);

// Formal signed sum of grade references, e.g. z0+z1 or z0*+z1*.
struct GradeExpr {
  struct Term {
    int sign = +1;
    GradeRef ref;
    friend bool operator==(const Term&, const Term&) = default;
  };
  std::vector<Term> terms;
  friend bool operator==(const GradeExpr&, const GradeExpr&) = default;
};

GradeExpr conj(GradeExpr e);
GradeExpr grade_expr(GradeRef r);

// ---------------------------------------------------------------------------
// Formulas

enum class Conn {
  Atom,
  GradedAnd,  // &[g0,g1]
  GradedOr,   // v[g0,g1]
  And,
  Or,
  Times,  // *
  Par,    // par
  Ent,    // @
  EntDual,  // sect
  Not,
  Implies,    // ->
  CoImplies,  // <-
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Conn kind = Conn::Atom;
  std::string name;      // Atom only
  bool negated = false;  // Atom only: primitive negation (the ^ superscript)
  FormulaPtr left, right;  // binary nodes; Not uses left only
  GradeRef g0, g1;         // GradedAnd / GradedOr only
};

FormulaPtr atom(std::string name, bool negated = false);
FormulaPtr negate_atom(const FormulaPtr& a);  // involutive; atoms only
FormulaPtr unary(Conn k, FormulaPtr a);
FormulaPtr binary(Conn k, FormulaPtr l, FormulaPtr r);
FormulaPtr graded(Conn k, FormulaPtr l, FormulaPtr r, GradeRef g0, GradeRef g1);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool is_literal(const FormulaPtr& f);      // atom, possibly primitive-negated
bool is_qubit_shape(const FormulaPtr& f);  // lit & lit^ over one atom name

// First operand of a qubit-shaped conjunction, or the literal itself.
// Throws DomainError on anything else.
FormulaPtr qubit_literal(const FormulaPtr& f);
FormulaPtr qubit_of(const FormulaPtr& lit);  // lit & lit^

// ---------------------------------------------------------------------------
// Sequents

struct SequentLabel {
  enum class Kind { None, Grade, Eval } kind = Kind::None;
  GradeExpr grade;    // Kind::Grade
  double eval = 0.0;  // Kind::Eval, in [0,1]
};

struct GradedSequent {
  std::vector<FormulaPtr> ante, cons;
  SequentLabel label;
};

bool equal(const GradedSequent& a, const GradedSequent& b, double eval_tol);

// ---------------------------------------------------------------------------
// Derivations

struct DerivStep {
  int id = 0;
  GradedSequent conclusion;
  std::string rule;
  std::vector<int> premises;  // ids of earlier steps
  bool md = false;            // "with md" side condition asserted on the step
};

struct Derivation {
  std::string name;
  std::string ruleset;  // as declared in the script header
  std::vector<DerivStep> steps;
  const DerivStep* find(int id) const;
};

// ---------------------------------------------------------------------------
// Declarations and scripts

struct DeclarationSet {
  std::vector<std::string> atoms;   // declaration order = grade association
  std::vector<std::string> grades;
  std::vector<std::pair<std::string, FormulaPtr>> qubits;  // name -> literal

  bool has_atom(const std::string& n) const;
  bool has_grade(const std::string& n) const;
  int atom_index(const std::string& n) const;  // -1 when absent
  // Grade positionally associated with the i-th atom. Throws DomainError when
  // there is no grade at that index.
  GradeRef grade_for_atom_index(int i) const;
  // The other atom of a two-atom signature; -1 when the signature does not
  // have exactly two atoms.
  int partner_atom_index(int i) const;
  const FormulaPtr* qubit(const std::string& n) const;
};

struct EnvSpec {
  std::vector<std::pair<std::string, std::complex<double>>> binds;
  std::string md_mode = "norm";  // norm | strict | none
};

struct Script {
  DeclarationSet decls;
  EnvSpec env;
  std::vector<Derivation> proofs;
};

FormulaPtr parse_formula(const std::string& text, const DeclarationSet& decls);
GradedSequent parse_sequent(const std::string& text, const DeclarationSet& decls);
Script parse_script(const std::string& document);

// Canonical printers. parse(render(x)) is structurally equal to x; rendering
// is idempotent on the byte level after one round. When a DeclarationSet is
// given, conjunctions matching a declared qubit abbreviation are re-sugared.
std::string render(const FormulaPtr& f, const DeclarationSet* decls = nullptr);
std::string render(const GradedSequent& s, const DeclarationSet* decls = nullptr);
std::string render(const Derivation& d, const DeclarationSet* decls = nullptr);
std::string render(const Script& s);
std::string render_grade_expr(const GradeExpr& e);
std::string render_complex(std::complex<double> z);

}  // namespace lq

#endif
