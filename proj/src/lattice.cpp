#include "lq/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lq {

FiniteLattice FiniteLattice::build(std::string name,
                                   std::vector<LatticeElement> elems,
                                   std::vector<std::pair<int, int>> leq_pairs,
                                   std::vector<int> ortho) {
  FiniteLattice l;
  l.name_ = std::move(name);
  l.elems_ = std::move(elems);
  const size_t n = l.elems_.size();
  if (n == 0) throw LatticeError("empty lattice");
  l.leq_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) l.leq_[i][i] = true;
  for (auto [a, b] : leq_pairs) {
    if (a < 0 || b < 0 || size_t(a) >= n || size_t(b) >= n)
      throw LatticeError("order pair out of range");
    l.leq_[size_t(a)][size_t(b)] = true;
  }
  // Transitive closure, then antisymmetry.
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (l.leq_[i][k])
        for (size_t j = 0; j < n; ++j)
          if (l.leq_[k][j]) l.leq_[i][j] = true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j && l.leq_[i][j] && l.leq_[j][i])
        throw LatticeError("order is not antisymmetric: " +
                           l.elems_[i].label + " and " + l.elems_[j].label);
  // Bounds.
  for (size_t i = 0; i < n; ++i) {
    bool bot = true, top = true;
    for (size_t j = 0; j < n; ++j) {
      bot = bot && l.leq_[i][j];
      top = top && l.leq_[j][i];
    }
    if (bot) l.bottom_ = int(i);
    if (top) l.top_ = int(i);
  }
  if (l.bottom_ < 0 || l.top_ < 0)
    throw LatticeError("lattice must be bounded");
  // GLB/LUB for every pair.
  l.meet_.assign(n, std::vector<int>(n, -1));
  l.join_.assign(n, std::vector<int>(n, -1));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      int glb = -1, lub = -1;
      for (size_t x = 0; x < n; ++x) {
        if (l.leq_[x][a] && l.leq_[x][b] && (glb < 0 || l.leq_[size_t(glb)][x]))
          glb = int(x);
        if (l.leq_[a][x] && l.leq_[b][x] && (lub < 0 || l.leq_[x][size_t(lub)]))
          lub = int(x);
      }
      // Verify the candidates really bound every other candidate.
      if (glb >= 0)
        for (size_t x = 0; x < n; ++x)
          if (l.leq_[x][a] && l.leq_[x][b] && !l.leq_[x][size_t(glb)]) {
            glb = -1;
            break;
          }
      if (lub >= 0)
        for (size_t x = 0; x < n; ++x)
          if (l.leq_[a][x] && l.leq_[b][x] && !l.leq_[size_t(lub)][x]) {
            lub = -1;
            break;
          }
      if (glb < 0 || lub < 0)
        throw LatticeError("pair without " +
                           std::string(glb < 0 ? "meet" : "join") + ": " +
                           l.elems_[a].label + ", " + l.elems_[b].label);
      l.meet_[a][b] = glb;
      l.join_[a][b] = lub;
    }
  // Optional orthocomplement map: must be involutive and order-reversing.
  if (!ortho.empty()) {
    if (ortho.size() != n) throw LatticeError("ortho map size mismatch");
    for (size_t i = 0; i < n; ++i) {
      int oi = ortho[i];
      if (oi < 0 || size_t(oi) >= n || ortho[size_t(oi)] != int(i))
        throw LatticeError("ortho map is not involutive");
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (l.leq_[i][j] &&
            !l.leq_[size_t(ortho[j])][size_t(ortho[i])])
          throw LatticeError("ortho map is not order-reversing");
    l.ortho_ = std::move(ortho);
  }
  return l;
}

int FiniteLattice::index_of(const std::string& label) const {
  for (size_t i = 0; i < elems_.size(); ++i)
    if (elems_[i].label == label) return int(i);
  return -1;
}

// ---------------------------------------------------------------------------
// Law audit

namespace {

// The two distributivity directions are scanned separately, meet-over-join
// first, so the reported witness is the first counterexample of that law
// as the calculus states it.
int meet_over_join_bad(const FiniteLattice& l, int a, int b, int c) {
  return l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c));
}

int join_over_meet_bad(const FiniteLattice& l, int a, int b, int c) {
  return l.join(a, l.meet(b, c)) != l.meet(l.join(a, b), l.join(a, c));
}

bool modular_bad(const FiniteLattice& l, int a, int b, int c) {
  return l.leq(a, c) && l.join(a, l.meet(b, c)) != l.meet(l.join(a, b), c);
}

enum class TripleLaw { Modular, MeetOverJoin, JoinOverMeet };

LawResult scan_triples(const FiniteLattice& l, bool parallel,
                       int (*bad)(const FiniteLattice&, int, int, int),
                       TripleLaw law) {
  const int n = l.size();
  const long long total = (long long)n * n * n;
  long long first = -1;
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
      long long local = -1;
#pragma omp for schedule(static)
      for (long long t = 0; t < total; ++t) {
        if (local >= 0) continue;
        int a = int(t / (n * (long long)n));
        int b = int((t / n) % n);
        int c = int(t % n);
        if (bad(l, a, b, c)) local = t;
      }
#pragma omp critical
      if (local >= 0 && (first < 0 || local < first)) first = local;
    }
#else
    parallel = false;
#endif
  }
  if (!parallel) {
    for (long long t = 0; t < total && first < 0; ++t) {
      int a = int(t / (n * (long long)n));
      int b = int((t / n) % n);
      int c = int(t % n);
      if (bad(l, a, b, c)) first = t;
    }
  }
  LawResult r;
  if (first >= 0) {
    int a = int(first / (n * (long long)n));
    int b = int((first / n) % n);
    int c = int(first % n);
    r.pass = false;
    r.witness = {a, b, c};
    int lhs = -1, rhs = -1;
    switch (law) {
      case TripleLaw::MeetOverJoin:
        lhs = l.meet(a, l.join(b, c));
        rhs = l.join(l.meet(a, b), l.meet(a, c));
        break;
      case TripleLaw::JoinOverMeet:
        lhs = l.join(a, l.meet(b, c));
        rhs = l.meet(l.join(a, b), l.join(a, c));
        break;
      case TripleLaw::Modular:
        lhs = l.join(a, l.meet(b, c));
        rhs = l.meet(l.join(a, b), c);
        break;
    }
    r.detail = "lhs=" + l.label(lhs) + " rhs=" + l.label(rhs);
  }
  return r;
}

int modular_adapter(const FiniteLattice& l, int a, int b, int c) {
  return modular_bad(l, a, b, c) ? 1 : 0;
}

}  // namespace

LawReport check_laws(const FiniteLattice& l, bool parallel) {
  LawReport rep;
  rep.lattice = l.name();
  const int n = l.size();

  {
    LawResult r;
    for (int a = 0; a < n && r.pass; ++a) {
      bool has = false;
      for (int x = 0; x < n && !has; ++x)
        has = l.meet(a, x) == l.bottom() && l.join(a, x) == l.top();
      if (!has) {
        r.pass = false;
        r.witness = {a};
        r.detail = "no complement";
      }
    }
    rep.laws["complemented"] = r;
  }

  {
    LawResult r;
    if (!l.has_ortho()) {
      r.pass = false;
      r.detail = "no orthocomplement map defined";
    } else {
      for (int a = 0; a < n && r.pass; ++a) {
        if (l.meet(a, l.ortho(a)) != l.bottom() ||
            l.join(a, l.ortho(a)) != l.top()) {
          r.pass = false;
          r.witness = {a};
          r.detail = "complement law fails";
        }
      }
      // Involution and order reversal were validated at build time.
    }
    rep.laws["orthocomplemented"] = r;
  }

  rep.laws["modular"] =
      scan_triples(l, parallel, modular_adapter, TripleLaw::Modular);

  {
    LawResult r;
    if (!l.has_ortho()) {
      r.pass = false;
      r.detail = "requires an orthocomplement";
    } else {
      for (int a = 0; a < n && r.pass; ++a)
        for (int c = 0; c < n && r.pass; ++c)
          if (l.leq(a, c) && l.join(a, l.meet(l.ortho(a), c)) != c) {
            r.pass = false;
            r.witness = {a, c};
            r.detail = "lhs=" + l.label(l.join(a, l.meet(l.ortho(a), c))) +
                       " rhs=" + l.label(c);
          }
    }
    rep.laws["orthomodular"] = r;
  }

  {
    LawResult r = scan_triples(l, parallel, meet_over_join_bad,
                               TripleLaw::MeetOverJoin);
    if (r.pass)
      r = scan_triples(l, parallel, join_over_meet_bad,
                       TripleLaw::JoinOverMeet);
    rep.laws["distributive"] = r;
  }
  return rep;
}

std::string LawReport::to_json(const FiniteLattice& l) const {
  nlohmann::json j;
  j["lattice"] = lattice;
  nlohmann::json laws_json;
  for (const auto& [name, r] : laws) {
    nlohmann::json jr;
    jr["pass"] = r.pass;
    if (!r.witness.empty()) {
      nlohmann::json w = nlohmann::json::array();
      for (int id : r.witness) w.push_back(l.label(id));
      jr["witness"] = w;
    }
    if (!r.detail.empty()) jr["detail"] = r.detail;
    laws_json[name] = jr;
  }
  j["laws"] = laws_json;
  return j.dump(2);
}

// ---------------------------------------------------------------------------

std::string hasse_dot(const FiniteLattice& l) {
  const int n = l.size();
  auto covers = [&](int a, int b) {
    if (a == b || !l.leq(a, b)) return false;
    for (int c = 0; c < n; ++c)
      if (c != a && c != b && l.leq(a, c) && l.leq(c, b)) return false;
    return true;
  };
  std::vector<int> order;
  for (int i = 0; i < n; ++i) order.push_back(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return l.label(a) < l.label(b); });
  std::string out = "digraph hasse {\n  rankdir=BT;\n";
  for (int i : order) out += "  \"" + l.label(i) + "\";\n";
  std::vector<std::pair<std::string, std::string>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (covers(a, b)) edges.emplace_back(l.label(a), l.label(b));
  std::sort(edges.begin(), edges.end());
  for (const auto& [lo, hi] : edges)
    out += "  \"" + lo + "\" -> \"" + hi + "\";\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Cx principal_sqrt(Cx z) { return std::sqrt(z); }

Cx lambda_at(const GradeEnv& env, int i) {
  if (i < 0 || size_t(i) >= env.binds.size())
    throw EnvError("grade environment must bind index " + std::to_string(i));
  return env.binds[size_t(i)].second;
}

}  // namespace

Mat weak_meet(const GradeEnv& env, int i, int j) {
  Cx li = lambda_at(env, i), lj = lambda_at(env, j);
  Mat oi = li * projector(2, i).m;
  Mat oj = lj * projector(2, j).m;
  if (i == j && std::abs(li) <= tolerance())
    throw EnvError("scaled meet undefined for a vanishing grade");
  if (i != j) return Mat::Zero(2, 2);
  Cx denom = principal_sqrt(li) * principal_sqrt(lj);
  return Mat((1.0 / denom) * (oi * oj));
}

// ---------------------------------------------------------------------------
// Builders

FiniteLattice build_proj2() {
  std::vector<LatticeElement> e = {
      {"0", Mat(Mat::Zero(2, 2))},
      {"P0", projector(2, 0).m},
      {"P1", projector(2, 1).m},
      {"I", Mat(identity(2))},
  };
  return FiniteLattice::build("proj2", std::move(e),
                              {{0, 1}, {0, 2}, {1, 3}, {2, 3}},
                              {3, 2, 1, 0});
}

FiniteLattice build_proj_closure(
    const std::vector<std::pair<std::string, Mat>>& projectors) {
  const double tol = tolerance();
  auto same = [&](const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff() <= tol;
  };
  std::vector<LatticeElement> elems;
  elems.push_back({"0", Mat(Mat::Zero(2, 2))});
  auto add = [&](const std::string& label, const Mat& m) {
    for (const auto& e : elems)
      if (same(*e.payload, m)) return;
    elems.push_back({label, m});
  };
  for (const auto& [label, m] : projectors) {
    Operator check(m, OpKind::Projector);  // validates
    (void)check;
    add(label, m);
  }
  // Close under orthocomplement; meets/joins of distinct one-dimensional
  // ranges in C^2 are already 0 and I.
  size_t given = elems.size();
  for (size_t i = 1; i < given; ++i)
    add(elems[i].label + "'", Mat(identity(2) - *elems[i].payload));
  add("I", identity(2));
  const int n = int(elems.size());
  std::vector<std::pair<int, int>> leq;
  auto rank = [&](const Mat& m) { return int(std::lround(m.trace().real())); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const Mat &ma = *elems[size_t(a)].payload, &mb = *elems[size_t(b)].payload;
      if (same(mb * ma, ma) && rank(ma) <= rank(mb)) leq.emplace_back(a, b);
    }
  std::vector<int> ortho(size_t(n), -1);
  for (int a = 0; a < n; ++a) {
    Mat comp = identity(2) - *elems[size_t(a)].payload;
    for (int b = 0; b < n; ++b)
      if (same(*elems[size_t(b)].payload, comp)) ortho[size_t(a)] = b;
  }
  for (int o : ortho)
    if (o < 0) throw LatticeError("closure misses an orthocomplement");
  return FiniteLattice::build("proj_closure", std::move(elems), std::move(leq),
                              std::move(ortho));
}

FiniteLattice build_benzene(const Mat& p, const Mat& q) {
  const double tol = tolerance();
  Operator vp(p, OpKind::Projector);
  Operator vq(q, OpKind::Projector);
  (void)vp;
  (void)vq;
  if ((p * q).cwiseAbs().maxCoeff() > tol)
    throw LatticeError("benzene needs orthogonal projectors");
  Eigen::Index d = p.rows();
  std::vector<LatticeElement> e = {
      {"0", Mat(Mat::Zero(d, d))}, {"P", p},
      {"Q", q},                    {"Q'", Mat(identity(d) - q)},
      {"P'", Mat(identity(d) - p)}, {"I", Mat(identity(d))},
  };
  // Hexagon: 0 < P < Q' < I and 0 < Q < P' < I.
  return FiniteLattice::build(
      "benzene", std::move(e),
      {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}}, {5, 4, 3, 2, 1, 0});
}

namespace {

void need_two_nonzero(const GradeEnv& env) {
  if (env.binds.size() < 2)
    throw EnvError("builder needs an environment binding two grades");
  if (std::abs(env.binds[0].second) <= tolerance() ||
      std::abs(env.binds[1].second) <= tolerance())
    throw EnvError("builder needs nonzero grades");
  double norm = std::norm(env.binds[0].second) + std::norm(env.binds[1].second);
  if (std::abs(norm - 1.0) > tolerance())
    throw EnvError("grade environment fails MD normalization");
}

}  // namespace

FiniteLattice build_lq2(const GradeEnv& env) {
  need_two_nonzero(env);
  Cx l0 = env.binds[0].second, l1 = env.binds[1].second;
  Mat o0 = l0 * projector(2, 0).m;
  Mat o1 = l1 * projector(2, 1).m;
  std::vector<LatticeElement> e = {
      {"0", Mat(Mat::Zero(2, 2))},
      {"O0", o0},
      {"O1", o1},
      {"Ihat", Mat(o0 + o1)},
  };
  return FiniteLattice::build("lq2", std::move(e),
                              {{0, 1}, {0, 2}, {1, 3}, {2, 3}},
                              {3, 2, 1, 0});
}

FiniteLattice build_lm2(const GradeEnv& env) {
  need_two_nonzero(env);
  Cx l0 = env.binds[0].second, l1 = env.binds[1].second;
  std::vector<LatticeElement> e = {
      {"0", Mat(Mat::Zero(2, 2))},
      {"O0", Mat(l0 * projector(2, 0).m)},
      {"O1", Mat(l1 * projector(2, 1).m)},
      {"P0", projector(2, 0).m},
      {"P1", projector(2, 1).m},
      {"I2", Mat(identity(2))},
  };
  // Range-measure order: mu(O_i) = |lambda_i|^2 < 1 = mu(P_i) puts O_i
  // strictly below P_i; equal measures would leave them incomparable.
  std::vector<std::pair<int, int>> leq = {{0, 1}, {0, 2}, {3, 5}, {4, 5}};
  if (std::norm(l0) < 1.0 - tolerance()) leq.emplace_back(1, 3);
  if (std::norm(l1) < 1.0 - tolerance()) leq.emplace_back(2, 4);
  return FiniteLattice::build("lm2", std::move(e), std::move(leq));
}

FiniteLattice build_l2q4(const GradeEnv& env, const GradeEnv& env_prime) {
  need_two_nonzero(env);
  need_two_nonzero(env_prime);
  double m0 = std::norm(env.binds[0].second);
  double m0p = std::norm(env_prime.binds[0].second);
  if (m0p > m0 + tolerance())
    throw EnvError("l2q4 needs |lambda0'|^2 <= |lambda0|^2; orient the pair");
  std::vector<LatticeElement> e = {
      {"0", std::nullopt},  {"O0'", std::nullopt}, {"O1", std::nullopt},
      {"O0", std::nullopt}, {"O1'", std::nullopt}, {"I4", std::nullopt},
  };
  // Chains 0 < O0' < O0 < I4 and 0 < O1 < O1' < I4; the second is forced by
  // the two normalization constraints.
  std::vector<std::pair<int, int>> leq = {{0, 1}, {0, 2}, {3, 5}, {4, 5}};
  if (m0p < m0 - tolerance()) {
    leq.emplace_back(1, 3);
    leq.emplace_back(2, 4);
  } else {
    // Equal measures: the primed pair coincides in measure; keep both chains
    // but with incomparable middles.
    leq.emplace_back(1, 5);
    leq.emplace_back(2, 5);
    leq.emplace_back(0, 3);
    leq.emplace_back(0, 4);
  }
  return FiniteLattice::build("l2q4", std::move(e), std::move(leq));
}

FiniteLattice build_boolean(int k) {
  if (k < 1 || k > 10) throw LatticeError("boolean lattice size out of range");
  const int n = 1 << k;
  std::vector<LatticeElement> e;
  e.reserve(size_t(n));
  for (int s = 0; s < n; ++s) {
    std::string label = "s";
    for (int b = 0; b < k; ++b) label += (s >> b) & 1 ? '1' : '0';
    e.push_back({label, std::nullopt});
  }
  std::vector<std::pair<int, int>> leq;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if ((a & b) == a && a != b) leq.emplace_back(a, b);
  std::vector<int> ortho(static_cast<size_t>(n), 0);
  for (int a = 0; a < n; ++a) ortho[size_t(a)] = (n - 1) & ~a;
  return FiniteLattice::build("boolean" + std::to_string(k), std::move(e),
                              std::move(leq), std::move(ortho));
}

FiniteLattice build_diamond(int atoms) {
  if (atoms < 1 || atoms > 500) throw LatticeError("diamond size out of range");
  std::vector<LatticeElement> e;
  e.push_back({"0", std::nullopt});
  for (int i = 0; i < atoms; ++i)
    e.push_back({"a" + std::to_string(i), std::nullopt});
  e.push_back({"1", std::nullopt});
  std::vector<std::pair<int, int>> leq;
  for (int i = 1; i <= atoms; ++i) {
    leq.emplace_back(0, i);
    leq.emplace_back(i, atoms + 1);
  }
  return FiniteLattice::build("diamond" + std::to_string(atoms), std::move(e),
                              std::move(leq));
}

}  // namespace lq
