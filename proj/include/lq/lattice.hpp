#ifndef LQ_LATTICE_HPP
#define LQ_LATTICE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lq/hilbert.hpp"

namespace lq {

struct LatticeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LatticeElement {
  std::string label;
  std::optional<Mat> payload;  // operator, when the builder has one
};

// Finite bounded lattice. The order is validated at construction (reflexive,
// antisymmetric, transitive, every pair with a GLB and LUB); meets and joins
// are precomputed from the order. Payloads are cross-validation data, never
// the source of truth.
class FiniteLattice {
 public:
  static FiniteLattice build(std::string name,
                             std::vector<LatticeElement> elems,
                             std::vector<std::pair<int, int>> leq_pairs,
                             std::vector<int> ortho = {});

  const std::string& name() const { return name_; }
  int size() const { return int(elems_.size()); }
  const std::string& label(int i) const { return elems_[size_t(i)].label; }
  const std::optional<Mat>& payload(int i) const {
    return elems_[size_t(i)].payload;
  }
  int index_of(const std::string& label) const;  // -1 when absent

  bool leq(int a, int b) const { return leq_[size_t(a)][size_t(b)]; }
  int meet(int a, int b) const { return meet_[size_t(a)][size_t(b)]; }
  int join(int a, int b) const { return join_[size_t(a)][size_t(b)]; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }
  bool has_ortho() const { return !ortho_.empty(); }
  int ortho(int a) const { return ortho_[size_t(a)]; }

 private:
  std::string name_;
  std::vector<LatticeElement> elems_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<int>> meet_, join_;
  std::vector<int> ortho_;
  int bottom_ = -1, top_ = -1;
};

struct LawResult {
  bool pass = true;
  std::vector<int> witness;  // element ids of the first counterexample
  std::string detail;        // e.g. "lhs=P0 rhs=O0"
};

struct LawReport {
  // complemented, orthocomplemented, modular, orthomodular, distributive
  std::map<std::string, LawResult> laws;
  std::string lattice;
  std::string to_json(const FiniteLattice& l) const;
};

// Exhaustive audit over all pairs/triples. The parallel path partitions the
// triple space with OpenMP and reports the identical first counterexample
// (minimal flattened index) as the serial one.
LawReport check_laws(const FiniteLattice& l, bool parallel = false);

// DOT digraph of the cover relation, nodes ordered by label, edges bottom-up.
std::string hasse_dot(const FiniteLattice& l);

// Scaled meet of the weak operators O_i, O_j (principal square roots,
// computed as a product of separate roots). i != j gives the zero operator;
// i = j gives O_i back. lambda = 0 with i = j is an error.
Mat weak_meet(const GradeEnv& env, int i, int j);

// ---------------------------------------------------------------------------
// Builders

FiniteLattice build_proj2();
// Closes the labelled projectors of C^2 under meet (range intersection),
// join (span) and orthocomplement, with 0 and I adjoined.
FiniteLattice build_proj_closure(
    const std::vector<std::pair<std::string, Mat>>& projectors);
// Six-element hexagon over two orthogonal commuting projectors.
FiniteLattice build_benzene(const Mat& p, const Mat& q);
FiniteLattice build_lq2(const GradeEnv& env);
FiniteLattice build_lm2(const GradeEnv& env);
FiniteLattice build_l2q4(const GradeEnv& env, const GradeEnv& env_prime);

// Synthetic lattices for scaling tests and the benchmark.
FiniteLattice build_boolean(int k);    // subsets of a k-element set
FiniteLattice build_diamond(int atoms);  // M_n: 0, n atoms, 1

}  // namespace lq

#endif
