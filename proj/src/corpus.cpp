#include "lq/corpus.hpp"

#include "json.hpp"
#include "lq/evaluation.hpp"

namespace lq {

namespace {

// Each entry replays one derivation displayed in the source calculus, with
// the verdicts it is expected to get under the listed rulesets.
std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> out;

  out.push_back(CorpusEntry{
      "qubit_theorem",
      "the compound proposition p0 &[z0,z1] p1 is derivable with truth 1",
      "atom p0, p1;\n"
      "grade z0, z1;\n"
      "\n"
      "proof qubit_theorem in Lq {\n"
      "  1: p0 |-[0.5] p0 by id-axiom;\n"
      "  2: p1 |-[0.5] p1 by id-axiom;\n"
      "  3: p0 &[z0,z1] p1 |-[0.5] p0 by gand-refl(1);\n"
      "  4: p0 &[z0,z1] p1 |-[0.5] p1 by gand-refl(2);\n"
      "  5: p0 &[z0,z1] p1 |-[1] p0 &[z0,z1] p1 by gand-form(3, 4) with md;\n"
      "}\n",
      {{"Lq", true}},
      1.0,
      {}});

  out.push_back(CorpusEntry{
      "at_noncommutativity_via_exchange",
      "commuting @ needs the exchange rule, absent from L2q",
      "atom A, B;\n"
      "qubit Q_A = A;\n"
      "qubit Q_B = B;\n"
      "\n"
      "proof at_noncommutativity_via_exchange in L2q {\n"
      "  1: A |- A by id-axiom;\n"
      "  2: B |- B by id-axiom;\n"
      "  3: Q_A @ Q_B |- A, B by at-refl(1, 2);\n"
      "  4: Q_A @ Q_B |- B, A by exch-r(3);\n"
      "  5: A^ |- A^ by id-axiom;\n"
      "  6: B^ |- B^ by id-axiom;\n"
      "  7: Q_A @ Q_B |- A^, B^ by at-refl(5, 6);\n"
      "  8: Q_A @ Q_B |- B^, A^ by exch-r(7);\n"
      "  9: Q_A @ Q_B |- Q_B @ Q_A by at-form(4, 8);\n"
      "}\n",
      {{"L2q", false}, {"L2q+exchange", true}},
      std::nullopt,
      {"exch-r"}});

  out.push_back(CorpusEntry{
      "at_commutativity_b_perp",
      "@ commutes in the B = A^ case without structural rules",
      "atom A;\n"
      "qubit Q_A = A;\n"
      "qubit Q_Ac = A^;\n"
      "\n"
      "proof at_commutativity_b_perp in L2q {\n"
      "  1: A |- A by id-axiom;\n"
      "  2: A^ |- A^ by id-axiom;\n"
      "  3: Q_A @ Q_Ac |- A, A^ by at-refl(1, 2);\n"
      "  4: Q_A @ Q_Ac |- A^, A by at-refl(2, 1);\n"
      "  5: Q_A @ Q_Ac |- A par A^ by par-form(3);\n"
      "  6: Q_A @ Q_Ac |- A^ par A by par-form(4);\n"
      "  7: Q_A @ Q_Ac |- (A par A^) & (A^ par A) by and-form(5, 6);\n"
      "}\n",
      {{"L2q", true}},
      std::nullopt,
      {}});

  out.push_back(CorpusEntry{
      "epr_measurement",
      "cutting one member of an entangled pair and re-forming the par",
      "atom A, B;\n"
      "qubit Q_A = A;\n"
      "qubit Q_B = B;\n"
      "\n"
      "proof epr_measurement in L2q {\n"
      "  1: |- Q_A @ Q_B by assume;\n"
      "  2: Q_A @ Q_B |- A, B by at-axiom;\n"
      "  3: |- A, B by cut(1, 2);\n"
      "  4: |- A par B by par-form(3);\n"
      "}\n",
      {{"L2q", true}},
      std::nullopt,
      {}});

  out.push_back(CorpusEntry{
      "epr_rule",
      "the EPR meta-rule proves the collapsed pair from one measurement",
      "atom A, B;\n"
      "qubit Q_A = A;\n"
      "qubit Q_B = B;\n"
      "\n"
      "proof epr_rule in L2q {\n"
      "  1: |- Q_A @ Q_B by assume;\n"
      "  2: A |- A by id-axiom;\n"
      "  3: Q_A |- A by and-refl(2);\n"
      "  4: |- A @ Q_B by epr(1, 3);\n"
      "}\n",
      {{"L2q", true}},
      std::nullopt,
      {}});

  out.push_back(CorpusEntry{
      "at_idempotence_contraction",
      "Q_A @ Q_A |- Q_A goes through only with contraction",
      "atom A;\n"
      "qubit Q_A = A;\n"
      "\n"
      "proof at_idempotence_contraction in L2q {\n"
      "  1: Q_A |- Q_A by id-axiom;\n"
      "  2: Q_A |- Q_A by id-axiom;\n"
      "  3: Q_A @ Q_A |- Q_A, Q_A by at-refl(1, 2);\n"
      "  4: Q_A @ Q_A |- Q_A by contr-r(3);\n"
      "}\n",
      {{"L2q", false}, {"L2q+contraction", true}},
      std::nullopt,
      {"contr-r"}});

  out.push_back(CorpusEntry{
      "at_idempotence_weakening",
      "Q_A |- Q_A @ Q_A goes through only with weakening",
      "atom A;\n"
      "qubit Q_A = A;\n"
      "\n"
      "proof at_idempotence_weakening in L2q {\n"
      "  1: Q_A |- Q_A by id-axiom;\n"
      "  2: Q_A |- Q_A, Q_A by weak-r(1);\n"
      "  3: Q_A |- Q_A @ Q_A by at-form(2);\n"
      "}\n",
      {{"L2q", false}, {"L2q+weakening", true}},
      std::nullopt,
      {"weak-r"}});

  out.push_back(CorpusEntry{
      "epr_from_cut",
      "simulating the EPR rule by cut needs weakening and contraction",
      "atom A, B;\n"
      "qubit Q_A = A;\n"
      "qubit Q_B = B;\n"
      "\n"
      "proof epr_from_cut in L2q {\n"
      "  1: |- Q_A @ Q_B by assume;\n"
      "  2: Q_A |- A by assume;\n"
      "  3: Q_A @ Q_B |- A, B by at-axiom;\n"
      "  4: |- A, B by cut(1, 3);\n"
      "  5: |- A, B, Q_A by weak-r(4);\n"
      "  6: |- A, B, A by cut(5, 2);\n"
      "  7: |- A, A, B by exch-r(6);\n"
      "  8: |- A, B by contr-r(7);\n"
      "}\n",
      {{"L2q", false},
       {"L2q+exchange", false},
       {"L2q+contraction", false},
       {"L2q+exchange+contraction", false}},
      std::nullopt,
      {"weak-r"}});

  out.push_back(CorpusEntry{
      "cut_from_epr",
      "the EPR rule admits no contexts, so cut cannot be simulated by it",
      "atom A, B;\n"
      "qubit Q_A = A;\n"
      "qubit Q_B = B;\n"
      "\n"
      "proof cut_from_epr in L2q {\n"
      "  1: |- Q_A @ Q_B by assume;\n"
      "  2: Q_A @ Q_B |- A, B by at-axiom;\n"
      "  3: Q_A @ Q_B, Q_A |- A, B by weak-l(2);\n"
      "  4: Q_A @ Q_B |- A @ Q_B, B by epr(1, 3);\n"
      "}\n",
      {{"L2q", false},
       {"L2q+exchange", false},
       {"L2q+contraction", false},
       {"L2q+exchange+contraction", false},
       {"L2q+exchange+weakening+contraction", false}},
      std::nullopt,
      {"epr"}});

  return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = build_corpus();
  return c;
}

const CorpusEntry* corpus_find(const std::string& name) {
  for (const auto& e : corpus())
    if (e.name == name) return &e;
  return nullptr;
}

ReplayResult replay_named(const std::string& name) {
  const CorpusEntry* entry = corpus_find(name);
  if (!entry) throw DomainError("unknown corpus entry '" + name + "'");
  Script sc = parse_script(entry->script);
  if (sc.proofs.size() != 1)
    throw DomainError("corpus entry must hold one derivation");
  ReplayResult res;
  res.name = name;
  res.all_match = true;
  for (const auto& run : entry->runs) {
    RuleSet rs = make_ruleset(run.ruleset);
    CheckReport rep = check_derivation(rs, sc.proofs[0], &sc.decls);
    bool match = rep.accepted == run.expect_accepted;
    if (match && run.expect_accepted && entry->expect_root_eval) {
      match = rep.root_eval &&
              std::abs(*rep.root_eval - *entry->expect_root_eval) <= tolerance();
    }
    if (match && !run.expect_accepted) {
      for (const auto& want : entry->expect_flagged_rules) {
        bool flagged = false;
        for (const auto& n : rep.nodes)
          if (n.rule == want && n.status != "ok" && n.status != "assumed")
            flagged = true;
        if (!flagged) match = false;
      }
    }
    res.all_match = res.all_match && match;
    res.runs.push_back(ReplayRun{run, std::move(rep), match});
  }
  return res;
}

std::string ReplayResult::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["match"] = all_match;
  j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json jr;
    jr["ruleset"] = r.run.ruleset;
    jr["expected"] = r.run.expect_accepted ? "accepted" : "rejected";
    jr["actual"] = r.report.accepted ? "accepted" : "rejected";
    jr["match"] = r.match;
    jr["report"] = nlohmann::json::parse(r.report.to_json());
    j["runs"].push_back(jr);
  }
  return j.dump(2);
}

}  // namespace lq
