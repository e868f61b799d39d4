#ifndef LQ_HILBERT_HPP
#define LQ_HILBERT_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>

#include "lq/evaluation.hpp"
#include "lq/syntax.hpp"

namespace lq {

using Cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateVector {
  Vec amp;  // unit norm
  explicit StateVector(Vec a);  // throws NumericError off the unit sphere
  Eigen::Index dim() const { return amp.size(); }
};

enum class OpKind { Projector, Weak, Hermitian, Unitary, General };

struct Operator {
  Mat m;
  OpKind kind = OpKind::General;
  Operator() = default;
  Operator(Mat mat, OpKind k);  // validates projector/weak invariants
  Eigen::Index dim() const { return m.rows(); }
};

struct DensityOperator {
  Mat m;
  explicit DensityOperator(Mat mat);  // hermitian, PSD, unit trace
  Eigen::Index dim() const { return m.rows(); }
};

struct BlochPoint {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2*pi)
};

// Canonical objects.
StateVector basis_state(Eigen::Index dim, Eigen::Index i);
Operator projector(Eigen::Index dim, Eigen::Index i);  // |i><i|
Operator plus_projector();  // onto (|0>+|1>)/sqrt(2)
Mat identity(Eigen::Index dim);

bool is_valid_density(const Mat& m);

// ---------------------------------------------------------------------------
// Interpretation of the one-qubit fragment

// p_i -> lambda_i P_i; the graded conjunction -> lambda0 P0 + lambda1 P1.
Operator interpret_operator(const FormulaPtr& f, const GradeEnv& env,
                            const DeclarationSet& decls);

// Graded conjunction -> lambda0|0> + lambda1|1>; the entanglement connective
// and the Bell-shaped conjunctions -> the corresponding Bell state.
StateVector interpret_state(const FormulaPtr& f, const GradeEnv& env,
                            const DeclarationSet& decls);

// ---------------------------------------------------------------------------
// Measurement and weak values

struct MeasureResult {
  double probability = 0.0;
  std::optional<StateVector> collapsed;  // absent at zero probability
};

MeasureResult measure(const StateVector& s, Eigen::Index i);
StateVector collapse(const StateVector& s, Eigen::Index i);  // throws at p=0

Cx weak_value(const Operator& a, const StateVector& initial,
              const StateVector& final_state);

// <psi_i| O_i^dag O_i |psi_i> via the matrix product, cross-checked against
// |lambda_i|^2 within 1e-12.
double weak_expectation(Eigen::Index i, const GradeEnv& env);

// Expectation of |lambda_i|^2 P_i on the basis component; equals the
// projective measurement probability of the interpreted qubit.
double cut_probability(Eigen::Index i, const GradeEnv& env);

BlochPoint to_bloch(const StateVector& s);
StateVector from_bloch(const BlochPoint& b);

StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);

enum class BellKind { Phi, Psi };
StateVector bell(BellKind kind, int sign);  // sign +1 / -1
bool is_separable(const StateVector& s);    // dim-4 pure states

// ---------------------------------------------------------------------------
// Gates

Mat not_gate(int n);
Mat sqrt_not_gate(int n);
Mat petri_toffoli(int n, int m);  // on 2^(n+m+1) dims

StateVector gate_not(const StateVector& s);
StateVector gate_sqrt_not(const StateVector& s);
StateVector gate_and(const StateVector& a, const StateVector& b);
StateVector gate_or(const StateVector& a, const StateVector& b);

// ---------------------------------------------------------------------------
// Qumixes

DensityOperator qumix_from_bloch(double r1, double r2, double r3);
double qumix_prob(const DensityOperator& r);  // tr[P1^(n) rho]

enum class PreOrder { Weak, Strong };
bool pre_order(PreOrder kind, const DensityOperator& r,
               const DensityOperator& s);

// ---------------------------------------------------------------------------
// JSON round-trip for golden files: states as [[re,im],...], operators as
// nested arrays of [re,im] pairs.
std::string to_json(const StateVector& s);
std::string to_json(const Mat& m);
StateVector state_from_json(const std::string& text);
Mat matrix_from_json(const std::string& text);

}  // namespace lq

#endif
