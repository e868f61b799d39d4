// Command-line front end: check proof scripts, evaluate sequents, compute
// duals, audit lattices, replay the built-in corpus.
//
// Exit codes: 0 success/accepted, 1 checked-and-rejected (or expectation
// failed), 2 usage or parse error, 3 numeric or environment error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lq/calculus.hpp"
#include "lq/corpus.hpp"
#include "lq/evaluation.hpp"
#include "lq/lattice.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lq::ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Default two-atom signature for standalone sequents when no env file is
// given.
lq::Script default_script() {
  return lq::parse_script("atom p0, p1;\ngrade z0, z1;\n");
}

lq::Script load_env_script(const std::string& path) {
  return lq::parse_script(slurp(path));
}

int run_check(const std::string& path, const std::string& ruleset_override) {
  lq::Script sc = lq::parse_script(slurp(path));
  lq::GradeEnv env = lq::make_env(sc.env);
  bool all_accepted = true;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& proof : sc.proofs) {
    std::string rs_name =
        ruleset_override.empty() ? proof.ruleset : ruleset_override;
    lq::RuleSet rs = lq::make_ruleset(rs_name);
    const lq::GradeEnv* envp = sc.env.binds.empty() ? nullptr : &env;
    lq::CheckReport rep = lq::check_derivation(rs, proof, &sc.decls, envp);
    all_accepted = all_accepted && rep.accepted;
    out.push_back(nlohmann::json::parse(rep.to_json()));
    std::cerr << proof.name << " [" << rs_name << "]: "
              << (rep.accepted ? "accepted" : "rejected") << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return all_accepted ? 0 : 1;
}

int run_eval(const std::string& sequent_text, const std::string& env_path) {
  lq::Script sc = env_path.empty() ? default_script() : load_env_script(env_path);
  lq::GradedSequent s = lq::parse_sequent(sequent_text, sc.decls);
  lq::GradeEnv env = lq::make_env(sc.env);
  lq::MdReport md = lq::md_check(env);
  if (!md.pass) throw lq::EnvError("grade environment fails its MD mode");
  double v = lq::evaluate(s, env, sc.decls);
  nlohmann::json j;
  j["sequent"] = lq::render(s, &sc.decls);
  j["value"] = v;
  std::cout << j.dump(2) << "\n";
  std::cerr << "evaluate: " << v << "\n";
  return 0;
}

int run_dual(const std::string& sequent_text, const std::string& kind,
             const std::string& env_path) {
  lq::Script sc = env_path.empty() ? default_script() : load_env_script(env_path);
  lq::GradedSequent s = lq::parse_sequent(sequent_text, sc.decls);
  lq::GradedSequent out;
  if (kind == "star")
    out = lq::star_dual(s);
  else if (kind == "perp")
    out = lq::perp_dual(s);
  else if (kind == "perpprime")
    out = lq::perp_prime_dual(s, sc.decls);
  else
    throw CLI::ValidationError("--kind must be star, perp or perpprime");
  nlohmann::json j;
  j["input"] = lq::render(s, &sc.decls);
  j["kind"] = kind;
  j["dual"] = lq::render(out, &sc.decls);
  std::cout << j.dump(2) << "\n";
  std::cerr << lq::render(out, &sc.decls) << "\n";
  return 0;
}

lq::GradeEnv env_or_cat(const std::string& path) {
  if (path.empty()) {
    lq::EnvSpec spec;
    const double r = 1.0 / std::sqrt(2.0);
    spec.binds = {{"z0", {r, 0.0}}, {"z1", {r, 0.0}}};
    spec.md_mode = "norm";
    return lq::make_env(spec);
  }
  return lq::make_env(load_env_script(path).env);
}

int run_lattice(const std::string& builder, const std::string& env_path,
                const std::string& env2_path, bool laws, bool parallel,
                const std::string& dot_path, const std::string& expect) {
  lq::FiniteLattice l = [&] {
    if (builder == "proj2") return lq::build_proj2();
    if (builder == "proj_closure")
      return lq::build_proj_closure({{"P0", lq::projector(2, 0).m},
                                     {"P1", lq::projector(2, 1).m},
                                     {"P+", lq::plus_projector().m}});
    if (builder == "benzene")
      return lq::build_benzene(
          lq::tensor(lq::projector(2, 0), lq::projector(2, 0)).m,
          lq::tensor(lq::projector(2, 0), lq::projector(2, 1)).m);
    if (builder == "lq2") return lq::build_lq2(env_or_cat(env_path));
    if (builder == "lm2") return lq::build_lm2(env_or_cat(env_path));
    if (builder == "l2q4") {
      if (env2_path.empty())
        throw CLI::ValidationError("l2q4 needs --env and --env2");
      return lq::build_l2q4(env_or_cat(env_path), env_or_cat(env2_path));
    }
    throw CLI::ValidationError("unknown lattice builder '" + builder + "'");
  }();
  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    out << lq::hasse_dot(l);
    std::cerr << "wrote " << dot_path << "\n";
  }
  int rc = 0;
  if (laws) {
    lq::LawReport rep = lq::check_laws(l, parallel);
    std::cout << rep.to_json(l) << "\n";
    for (const auto& [name, r] : rep.laws)
      std::cerr << l.name() << " " << name << ": "
                << (r.pass ? "pass" : "fail") << "\n";
    if (expect == "pass")
      for (const auto& [name, r] : rep.laws)
        if (!r.pass) rc = 1;
  } else if (dot_path.empty()) {
    std::cout << lq::hasse_dot(l);
  }
  return rc;
}

int run_replay(const std::string& name) {
  std::vector<std::string> names;
  if (name == "all") {
    for (const auto& e : lq::corpus()) names.push_back(e.name);
  } else {
    names.push_back(name);
  }
  bool all = true;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& n : names) {
    lq::ReplayResult r = lq::replay_named(n);
    all = all && r.all_match;
    out.push_back(nlohmann::json::parse(r.to_json()));
    for (const auto& run : r.runs)
      std::cerr << n << " [" << run.run.ruleset << "]: expected "
                << (run.run.expect_accepted ? "accepted" : "rejected")
                << ", got " << (run.report.accepted ? "accepted" : "rejected")
                << (run.match ? "" : "  <-- MISMATCH") << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return all ? 0 : 1;
}

int run_corpus_list() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : lq::corpus()) {
    nlohmann::json j;
    j["name"] = e.name;
    j["title"] = e.title;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : e.runs) {
      runs.push_back({{"ruleset", r.ruleset},
                      {"expected", r.expect_accepted ? "accepted" : "rejected"}});
    }
    j["runs"] = runs;
    out.push_back(j);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof kernel, evaluator and lattice auditor for the graded "
               "sequent calculi Lq and L2q"};
  app.require_subcommand(1);

  std::string script_path, ruleset, sequent_text, env_path, env2_path;
  std::string dual_kind = "star", builder, replay_name, dot_path, expect;
  bool laws = false, parallel = false;

  auto* check = app.add_subcommand("check", "check a proof script");
  check->add_option("script", script_path)->required();
  check->add_option("--ruleset", ruleset, "override the scripts' rulesets");

  auto* eval = app.add_subcommand("eval", "evaluate a sequent");
  eval->add_option("sequent", sequent_text)->required();
  eval->add_option("--env", env_path, "env file with bind/md lines");

  auto* dual = app.add_subcommand("dual", "dualize a sequent");
  dual->add_option("sequent", sequent_text)->required();
  dual->add_option("--kind", dual_kind, "star | perp | perpprime");
  dual->add_option("--env", env_path);

  auto* lattice = app.add_subcommand("lattice", "build and audit a lattice");
  lattice->add_option("builder", builder,
                      "proj2 | proj_closure | benzene | lq2 | lm2 | l2q4")
      ->required();
  lattice->add_option("--env", env_path);
  lattice->add_option("--env2", env2_path);
  lattice->add_flag("--laws", laws, "run the law audit");
  lattice->add_flag("--parallel", parallel, "partitioned law audit");
  lattice->add_option("--dot", dot_path, "write the Hasse diagram");
  lattice->add_option("--expect", expect, "pass: exit 1 when any law fails");

  auto* replay = app.add_subcommand("replay", "replay the built-in corpus");
  replay->add_option("name", replay_name, "entry name or 'all'")->required();

  app.add_subcommand("corpus-list", "list corpus entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(script_path, ruleset);
    if (eval->parsed()) return run_eval(sequent_text, env_path);
    if (dual->parsed()) return run_dual(sequent_text, dual_kind, env_path);
    if (lattice->parsed())
      return run_lattice(builder, env_path, env2_path, laws, parallel,
                         dot_path, expect);
    if (replay->parsed()) return run_replay(replay_name);
    return run_corpus_list();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const lq::RuleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lq::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
