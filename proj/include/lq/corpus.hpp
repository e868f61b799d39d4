#ifndef LQ_CORPUS_HPP
#define LQ_CORPUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "lq/calculus.hpp"

namespace lq {

struct CorpusRun {
  std::string ruleset;
  bool expect_accepted = false;
};

struct CorpusEntry {
  std::string name;
  std::string title;
  std::string script;
  std::vector<CorpusRun> runs;
  std::optional<double> expect_root_eval;  // on accepting runs
  // Rules that must appear among the failure diagnostics of rejecting runs.
  std::vector<std::string> expect_flagged_rules;
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry* corpus_find(const std::string& name);

struct ReplayRun {
  CorpusRun run;
  CheckReport report;
  bool match = false;
};

struct ReplayResult {
  std::string name;
  std::vector<ReplayRun> runs;
  bool all_match = false;
  std::string to_json() const;
};

ReplayResult replay_named(const std::string& name);  // throws DomainError

}  // namespace lq

#endif
