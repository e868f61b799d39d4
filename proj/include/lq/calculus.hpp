#ifndef LQ_CALCULUS_HPP
#define LQ_CALCULUS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lq/syntax.hpp"

namespace lq {

struct GradeEnv;

enum class RuleId {
  IdAxiom, GandAxiom, GorAxiom, AtAxiom, Assume,
  GandForm, GandRefl, GorForm, GorRefl, NegForm, NegRefl,
  AndForm, AndRefl, OrForm, OrRefl,
  TimesForm, TimesRefl, ParForm, ParRefl,
  ImpForm, ImpRefl, CoimpForm, CoimpRefl,
  AtForm, AtRefl, SectForm, SectRefl,
  QCut, Cut, Epr,
  ExchL, ExchR, WeakL, WeakR, ContrL, ContrR,
};

const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& n);

struct RuleSet {
  std::string name;
  std::set<RuleId> connective_rules;  // logical rules and axioms
  bool exchange = false, weakening = false, contraction = false;
  bool left_contexts = false, right_contexts = false;
  bool quantum_cut = false, classical_cut = false, epr = false;
  bool graded = false;  // Lq-style evaluation/grade labels

  bool contains(RuleId r) const;
};

// Presets: B, BL, BR, BLR (alias BRL), BS, BSL, BSR, BSRL, Lq, L2q; any of
// them may be extended with +exchange, +weakening, +contraction,
// +left-contexts, +right-contexts. Throws RuleError on unknown names.
RuleSet make_ruleset(const std::string& spec);

struct RuleError : std::runtime_error {
  enum class Code {
    NotInRuleset,
    PremiseCount,
    ShapeMismatch,
    LabelMismatch,
    SideCondition,
    UnknownRule,
  };
  Code code;
  RuleError(Code c, const std::string& m) : std::runtime_error(m), code(c) {}
};

struct RuleParams {
  int variant = 0;
  int pos = 0;
  FormulaPtr other;       // missing operand of a one-premise refl rule
  FormulaPtr op1, op2;    // @ / sect operands
  GradeRef g0, g1;        // graded connective labels
  bool has_grades = false;
  bool md = false;        // assert v0+v1=1 on gand/gor formation
  FormulaPtr extra;       // weakening formula
  GradedSequent target;   // axiom instance for zero-premise rules
};

// Forward application: the unique conclusion of `rule` on `premises`, or a
// RuleError. `decls` is needed only by the graded negation rules.
GradedSequent apply_rule(const RuleSet& rs, RuleId rule,
                         const std::vector<GradedSequent>& premises,
                         const RuleParams& params = {},
                         const DeclarationSet* decls = nullptr);

struct NodeDiag {
  int id = 0;
  std::string rule;
  std::string status;  // ok | assumed | rule-absent | shape-mismatch |
                       // label-mismatch | side-condition-failed | bad-premise
  std::string message;
};

struct CheckReport {
  std::string name, ruleset;
  bool accepted = false;
  std::optional<int> first_failure;
  std::vector<NodeDiag> nodes;
  std::string to_json() const;
  // Evaluation label of the final step, when present.
  std::optional<double> root_eval;
};

// Replays apply_rule at every node; accepted iff every node reconstructs.
// All failures are reported, not only the first. When an env is supplied,
// asserted MD side conditions are additionally checked against it.
CheckReport check_derivation(const RuleSet& rs, const Derivation& d,
                             const DeclarationSet* decls = nullptr,
                             const GradeEnv* env = nullptr);

// ---------------------------------------------------------------------------
// Dualities

// (|-{g} Gamma)* = Gamma |-{g*}: sides swapped, grade refs conjugated, atoms
// and grade order untouched. One-sided grade-labelled sequents only.
GradedSequent star_dual(const GradedSequent& s);

// Primitive negation of every atom, each connective replaced by its
// symmetric (& <-> v, * <-> par, -> <-> <-, @ <-> sect), sequent sense
// inverted. @ / sect operands are left untouched. Graded connectives are out
// of the domain.
FormulaPtr perp_dual(const FormulaPtr& f);
GradedSequent perp_dual(const GradedSequent& s);

// Grade-aware duality: on an atomic graded assertion it negates the atom to
// its declared partner, swaps to the partner grade and conjugates; on a
// graded conjunction/disjunction it swaps the connective, the operands'
// partners and the grade pair. Sequent results are normalized back to
// declaration order (simultaneous operand+grade swap).
FormulaPtr perp_prime_dual(const FormulaPtr& f, const DeclarationSet& decls);
GradedSequent perp_prime_dual(const GradedSequent& s,
                              const DeclarationSet& decls);

// ---------------------------------------------------------------------------
// Bounded backward proof search

struct SearchOutcome {
  bool found = false;
  int depth = 0;  // height of the found derivation, or the exhausted bound
  Derivation derivation;
};

// Backward search over the ruleset's schemas, capped at `max_depth` (tree
// height; at most kSearchDepthCap). Cut rules are not searched backward, so
// "exhausted" is evidence of underivability, not proof. An env lets the
// graded formation rules determine premise labels.
inline constexpr int kSearchDepthCap = 12;
SearchOutcome bounded_search(const RuleSet& rs, const GradedSequent& goal,
                             int max_depth,
                             const DeclarationSet* decls = nullptr,
                             const GradeEnv* env = nullptr);

}  // namespace lq

#endif
