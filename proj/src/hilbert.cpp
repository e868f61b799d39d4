#include "lq/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "json.hpp"

namespace lq {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool approx_zero_matrix(const Mat& m, double tol) {
  return m.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

StateVector::StateVector(Vec a) : amp(std::move(a)) {
  if (amp.size() == 0) throw NumericError("empty state vector");
  if (std::abs(amp.norm() - 1.0) > tolerance())
    throw NumericError("state vector is not unit norm");
}

Operator::Operator(Mat mat, OpKind k) : m(std::move(mat)), kind(k) {
  if (m.rows() != m.cols()) throw NumericError("operator must be square");
  const double tol = tolerance();
  switch (kind) {
    case OpKind::Projector:
      if (!approx_zero_matrix(m * m - m, tol) ||
          !approx_zero_matrix(Mat(m.adjoint()) - m, tol))
        throw NumericError("projector must be idempotent and self-adjoint");
      break;
    case OpKind::Weak: {
      // Weak operators here are scalar multiples of projectors: m*m must be
      // lambda*m, with lambda read off the dominant entry.
      Eigen::Index bi = 0, bj = 0;
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          if (std::abs(m(i, j)) > std::abs(m(bi, bj))) {
            bi = i;
            bj = j;
          }
      Cx lambda = 0.0;
      if (std::abs(m(bi, bj)) > tol) lambda = (m * m)(bi, bj) / m(bi, bj);
      if (!approx_zero_matrix(m * m - lambda * m, tol))
        throw NumericError("weak operator must be a scaled projector");
      break;
    }
    case OpKind::Hermitian:
      if (!approx_zero_matrix(Mat(m.adjoint()) - m, tol))
        throw NumericError("operator must be self-adjoint");
      break;
    case OpKind::Unitary:
      if (!approx_zero_matrix(m * m.adjoint() - identity(m.rows()), tol))
        throw NumericError("operator must be unitary");
      break;
    case OpKind::General:
      break;
  }
}

DensityOperator::DensityOperator(Mat mat) : m(std::move(mat)) {
  if (!is_valid_density(m)) throw NumericError("invalid density operator");
}

bool is_valid_density(const Mat& m) {
  const double tol = tolerance();
  if (m.rows() != m.cols()) return false;
  if (!approx_zero_matrix(Mat(m.adjoint()) - m, tol)) return false;
  if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol)
    return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvalues().minCoeff() >= -tol;
}

StateVector basis_state(Eigen::Index dim, Eigen::Index i) {
  Vec v = Vec::Zero(dim);
  v(i) = 1.0;
  return StateVector(v);
}

Operator projector(Eigen::Index dim, Eigen::Index i) {
  Mat m = Mat::Zero(dim, dim);
  m(i, i) = 1.0;
  return Operator(m, OpKind::Projector);
}

Operator plus_projector() {
  Mat m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return Operator(m, OpKind::Projector);
}

Mat identity(Eigen::Index dim) { return Mat::Identity(dim, dim); }

// ---------------------------------------------------------------------------

namespace {

// lambda_i for the i-th declared atom.
Cx lambda_of(const GradeEnv& env, const DeclarationSet& decls, int i) {
  return env.value(decls.grade_for_atom_index(i));
}

void need_norm_md(const GradeEnv& env) {
  double norm = 0.0;
  for (const auto& [sym, z] : env.binds) norm += std::norm(z);
  if (std::abs(norm - 1.0) > tolerance())
    throw EnvError("grade environment fails MD normalization");
}

// Bell shape (A par B) & (A^ par B^) modulo primitive negations of the
// operands; returns the four signs pattern or nullopt.
struct BellShape {
  bool flipped_b = false;  // (A par B^) & (A^ par B)
};

std::optional<BellShape> match_bell_shape(const FormulaPtr& f) {
  if (f->kind != Conn::And || f->left->kind != Conn::Par ||
      f->right->kind != Conn::Par)
    return std::nullopt;
  const FormulaPtr &a = f->left->left, &b = f->left->right;
  const FormulaPtr &c = f->right->left, &d = f->right->right;
  if (!is_literal(a) || !is_literal(b) || !is_literal(c) || !is_literal(d))
    return std::nullopt;
  if (a->name != c->name || b->name != d->name) return std::nullopt;
  if (a->negated == c->negated || b->negated == d->negated)
    return std::nullopt;
  // (A par B) & (A^ par B^): same polarity on the left par.
  BellShape s;
  s.flipped_b = a->negated == b->negated ? false : true;
  return s;
}

}  // namespace

Operator interpret_operator(const FormulaPtr& f, const GradeEnv& env,
                            const DeclarationSet& decls) {
  if (f->kind == Conn::Atom && !f->negated) {
    int i = decls.atom_index(f->name);
    if (i < 0 || i > 1) throw DomainError("atom outside the interpreted fragment");
    Mat m = lambda_of(env, decls, i) * projector(2, i).m;
    return Operator(m, OpKind::Weak);
  }
  if (f->kind == Conn::GradedAnd && is_literal(f->left) &&
      is_literal(f->right) && !f->left->negated && !f->right->negated) {
    Mat m = env.value(f->g0) * projector(2, 0).m +
            env.value(f->g1) * projector(2, 1).m;
    return Operator(m, OpKind::General);
  }
  throw DomainError("formula outside the interpreted operator fragment");
}

StateVector interpret_state(const FormulaPtr& f, const GradeEnv& env,
                            const DeclarationSet& decls) {
  (void)decls;  // grades are carried by the formula itself
  need_norm_md(env);
  if (f->kind == Conn::GradedAnd && is_literal(f->left) &&
      is_literal(f->right)) {
    Vec v(2);
    v << env.value(f->g0), env.value(f->g1);
    if (std::abs(v.norm() - 1.0) > tolerance())
      throw EnvError("grades of the conjunction are not normalized");
    return StateVector(v);
  }
  if (f->kind == Conn::Ent || f->kind == Conn::EntDual) {
    if (!is_qubit_shape(f->left) || !is_qubit_shape(f->right))
      throw DomainError("entanglement needs two qubit operands");
    return bell(BellKind::Phi, +1);
  }
  if (auto shape = match_bell_shape(f))
    return bell(shape->flipped_b ? BellKind::Psi : BellKind::Phi, +1);
  throw DomainError("formula outside the interpreted state fragment");
}

MeasureResult measure(const StateVector& s, Eigen::Index i) {
  if (i < 0 || i >= s.dim()) throw NumericError("basis index out of range");
  MeasureResult r;
  r.probability = std::norm(s.amp(i));
  if (r.probability > tolerance()) {
    Vec v = Vec::Zero(s.dim());
    v(i) = s.amp(i) / std::sqrt(r.probability);
    // Drop the physically irrelevant phase: first nonzero amplitude made
    // real positive.
    Cx phase = v(i) / std::abs(v(i));
    v(i) /= phase;
    r.collapsed = StateVector(v);
  }
  return r;
}

StateVector collapse(const StateVector& s, Eigen::Index i) {
  MeasureResult r = measure(s, i);
  if (!r.collapsed) throw NumericError("zero-probability collapse request");
  return *r.collapsed;
}

Cx weak_value(const Operator& a, const StateVector& initial,
              const StateVector& final_state) {
  Cx overlap = final_state.amp.dot(initial.amp);  // <f|i>
  if (std::abs(overlap) <= tolerance())
    throw NumericError("orthogonal pre/post selection");
  Cx num = final_state.amp.dot(a.m * initial.amp);
  return num / overlap;
}

double weak_expectation(Eigen::Index i, const GradeEnv& env) {
  if (i < 0 || size_t(i) >= env.binds.size())
    throw EnvError("no grade bound for this basis index");
  Cx lambda = env.binds[size_t(i)].second;
  Mat o = lambda * projector(2, i).m;
  Vec psi = basis_state(2, i).amp;
  Cx value = psi.dot(Mat(o.adjoint() * o) * psi);
  double direct = std::norm(lambda);
  if (std::abs(value.real() - direct) > 1e-12 || std::abs(value.imag()) > 1e-12)
    throw NumericError("weak expectation disagrees with |lambda|^2");
  return value.real();
}

double cut_probability(Eigen::Index i, const GradeEnv& env) {
  need_norm_md(env);
  if (i < 0 || size_t(i) >= env.binds.size())
    throw EnvError("no grade bound for this basis index");
  Cx lambda = env.binds[size_t(i)].second;
  Mat pi = std::norm(lambda) * projector(2, i).m;
  Vec e = basis_state(2, i).amp;
  return e.dot(pi * e).real();
}

BlochPoint to_bloch(const StateVector& s) {
  if (s.dim() != 2) throw NumericError("Bloch coordinates need a qubit");
  BlochPoint b;
  double r0 = std::abs(s.amp(0)), r1 = std::abs(s.amp(1));
  b.theta = 2.0 * std::atan2(r1, r0);
  if (r0 <= tolerance() || r1 <= tolerance()) {
    b.phi = 0.0;  // poles: phi undefined, fixed by convention
  } else {
    b.phi = std::arg(s.amp(1)) - std::arg(s.amp(0));
    if (b.phi < 0) b.phi += 2.0 * kPi;
    if (b.phi >= 2.0 * kPi) b.phi -= 2.0 * kPi;
  }
  return b;
}

StateVector from_bloch(const BlochPoint& b) {
  Vec v(2);
  v << std::cos(b.theta / 2.0),
      std::polar(1.0, b.phi) * std::sin(b.theta / 2.0);
  return StateVector(v);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  Vec v(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    for (Eigen::Index j = 0; j < b.dim(); ++j)
      v(i * b.dim() + j) = a.amp(i) * b.amp(j);
  return StateVector(v);
}

Operator tensor(const Operator& a, const Operator& b) {
  Mat m(a.dim() * b.dim(), a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    for (Eigen::Index j = 0; j < a.dim(); ++j)
      m.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) = a.m(i, j) * b.m;
  OpKind k = OpKind::General;
  if (a.kind == b.kind &&
      (a.kind == OpKind::Projector || a.kind == OpKind::Unitary ||
       a.kind == OpKind::Hermitian))
    k = a.kind;
  return Operator(m, k);
}

StateVector bell(BellKind kind, int sign) {
  Vec v = Vec::Zero(4);
  const double r = 1.0 / std::sqrt(2.0);
  if (kind == BellKind::Phi) {
    v(0) = r;
    v(3) = sign >= 0 ? r : -r;
  } else {
    v(1) = r;
    v(2) = sign >= 0 ? r : -r;
  }
  return StateVector(v);
}

bool is_separable(const StateVector& s) {
  if (s.dim() != 4) throw NumericError("separability test needs two qubits");
  Cx det = s.amp(0) * s.amp(3) - s.amp(1) * s.amp(2);
  return std::abs(det) <= tolerance();
}

// ---------------------------------------------------------------------------
// Gates

Mat not_gate(int n) {
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  Mat m = x;
  if (n > 1) {
    Mat id = identity(Eigen::Index(1) << (n - 1));
    Mat out(id.rows() * 2, id.rows() * 2);
    for (Eigen::Index i = 0; i < id.rows(); ++i)
      for (Eigen::Index j = 0; j < id.rows(); ++j)
        out.block(i * 2, j * 2, 2, 2) = id(i, j) * x;
    m = out;
  }
  return m;
}

Mat sqrt_not_gate(int n) {
  Mat s(2, 2);
  s << Cx(0.5, 0.5), Cx(0.5, -0.5), Cx(0.5, -0.5), Cx(0.5, 0.5);
  Mat m = s;
  if (n > 1) {
    Mat id = identity(Eigen::Index(1) << (n - 1));
    Mat out(id.rows() * 2, id.rows() * 2);
    for (Eigen::Index i = 0; i < id.rows(); ++i)
      for (Eigen::Index j = 0; j < id.rows(); ++j)
        out.block(i * 2, j * 2, 2, 2) = id(i, j) * s;
    m = out;
  }
  return m;
}

Mat petri_toffoli(int n, int m) {
  Eigen::Index dn = Eigen::Index(1) << n;
  Eigen::Index dm = Eigen::Index(1) << m;
  Eigen::Index dim = dn * dm * 2;
  Mat t = Mat::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dn; ++x)
    for (Eigen::Index y = 0; y < dm; ++y)
      for (Eigen::Index z = 0; z < 2; ++z) {
        Eigen::Index in = (x * dm + y) * 2 + z;
        Eigen::Index zz = ((x & 1) & (y & 1)) ^ z;
        Eigen::Index outi = (x * dm + y) * 2 + zz;
        t(outi, in) = 1.0;
      }
  return t;
}

namespace {

int qubits_of(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index(1) << n) < dim) ++n;
  if ((Eigen::Index(1) << n) != dim)
    throw NumericError("dimension is not a power of two");
  return n;
}

}  // namespace

StateVector gate_not(const StateVector& s) {
  return StateVector(not_gate(qubits_of(s.dim())) * s.amp);
}

StateVector gate_sqrt_not(const StateVector& s) {
  return StateVector(sqrt_not_gate(qubits_of(s.dim())) * s.amp);
}

StateVector gate_and(const StateVector& a, const StateVector& b) {
  int n = qubits_of(a.dim());
  int m = qubits_of(b.dim());
  StateVector in = tensor(tensor(a, b), basis_state(2, 0));
  return StateVector(petri_toffoli(n, m) * in.amp);
}

StateVector gate_or(const StateVector& a, const StateVector& b) {
  StateVector r = gate_and(gate_not(a), gate_not(b));
  return gate_not(r);
}

// ---------------------------------------------------------------------------

DensityOperator qumix_from_bloch(double r1, double r2, double r3) {
  Mat m(2, 2);
  m << Cx(1.0 + r3, 0.0), Cx(r1, -r2), Cx(r1, r2), Cx(1.0 - r3, 0.0);
  return DensityOperator(0.5 * m);
}

double qumix_prob(const DensityOperator& r) {
  int n = qubits_of(r.dim());
  Mat p1 = projector(2, 1).m;
  if (n > 1) {
    Operator p(identity(r.dim() / 2), OpKind::Projector);
    p1 = tensor(p, projector(2, 1)).m;
  }
  return (p1 * r.m).trace().real();
}

bool pre_order(PreOrder kind, const DensityOperator& r,
               const DensityOperator& s) {
  const double tol = tolerance();
  bool weak = qumix_prob(r) <= qumix_prob(s) + tol;
  if (kind == PreOrder::Weak) return weak;
  int n = qubits_of(r.dim());
  Mat u = sqrt_not_gate(n);
  DensityOperator rn(Mat(u * r.m * u.adjoint()));
  DensityOperator sn(Mat(u * s.m * u.adjoint()));
  return weak && qumix_prob(sn) <= qumix_prob(rn) + tol;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const StateVector& s) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    j.push_back({s.amp(i).real(), s.amp(i).imag()});
  return j.dump();
}

std::string to_json(const Mat& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back({m(i, k).real(), m(i, k).imag()});
    j.push_back(row);
  }
  return j.dump();
}

StateVector state_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v(Eigen::Index(i)) = Cx(j[i][0].get<double>(), j[i][1].get<double>());
  return StateVector(v);
}

Mat matrix_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Mat m(j.size(), j.empty() ? 0 : j[0].size());
  for (size_t i = 0; i < j.size(); ++i)
    for (size_t k = 0; k < j[i].size(); ++k)
      m(Eigen::Index(i), Eigen::Index(k)) =
          Cx(j[i][k][0].get<double>(), j[i][k][1].get<double>());
  return m;
}

}  // namespace lq
