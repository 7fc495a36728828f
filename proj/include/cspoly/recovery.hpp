#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cspoly/faces.hpp"
#include "cspoly/linalg.hpp"
#include "cspoly/lp.hpp"
#include "cspoly/polytopes.hpp"
#include "cspoly/rng.hpp"

namespace cspoly {

/// Error-correcting code derived from a centrally symmetric polytope: take one
/// representative vertex v_i per antipodal pair (the one with angle in the
/// first half-turn) and let codewords be the kernel of the map e_i -> v_i.
/// Recovery from sparse corruption is governed by which signed vertex subsets
/// span faces of the polytope.
struct CodeInstance {
  Eigen::MatrixXd generator;   // d x M, column i is v_i
  std::vector<int> rep_vertex; // polytope vertex index of +v_i
  Eigen::MatrixXd kernel;      // M x p, orthonormal columns spanning the code
  int length = 0;              // M = N/2
  int redundancy = 0;          // rank of the generator
  bool degenerate = false;     // kernel dimension zero: only the zero codeword
};

inline CodeInstance build_code(const PolytopeInstance& p) {
  const int n = p.num_vertices();
  CodeInstance code;
  for (int i = 0; i < n; ++i) {
    if (p.labels[static_cast<std::size_t>(i)].angle.in_first_half()) code.rep_vertex.push_back(i);
  }
  if (2 * static_cast<int>(code.rep_vertex.size()) != n)
    throw std::invalid_argument("build_code: instance is not split into antipodal pairs");
  code.length = static_cast<int>(code.rep_vertex.size());
  code.generator.resize(p.ambient_dim(), code.length);
  for (int i = 0; i < code.length; ++i)
    code.generator.col(i) = p.vertices.row(code.rep_vertex[static_cast<std::size_t>(i)]).transpose();
  code.kernel = kernel_basis(code.generator);
  code.redundancy = code.length - static_cast<int>(code.kernel.cols());
  code.degenerate = code.kernel.cols() == 0;
  return code;
}

struct DecodeResult {
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  LpStatus status = LpStatus::NumericalFailure;
  long pivots = 0;
};

/// Minimizes ||x - a||_1 over the code subspace: with x = K z,
///   min sum(u)  s.t.  -u <= K z - a <= u,  u >= 0.
inline DecodeResult l1_decode(const CodeInstance& code, const Eigen::VectorXd& a,
                              const SimplexOptions& opts = {}) {
  if (a.size() != code.length) throw std::invalid_argument("l1_decode: wrong received length");
  DecodeResult out;
  if (code.degenerate) {
    out.x = Eigen::VectorXd::Zero(code.length);
    out.objective = a.cwiseAbs().sum();
    out.status = LpStatus::Optimal;
    return out;
  }
  const int m = code.length;
  const int pdim = static_cast<int>(code.kernel.cols());
  LinearProgram lp = LinearProgram::vars(pdim + m);
  for (int i = 0; i < m; ++i) {
    lp.lower[pdim + i] = 0.0;
    lp.objective[pdim + i] = 1.0;
  }
  lp.le_lhs = Eigen::MatrixXd::Zero(2 * m, pdim + m);
  lp.le_rhs.resize(2 * m);
  lp.le_lhs.block(0, 0, m, pdim) = code.kernel;
  lp.le_lhs.block(0, pdim, m, m) = -Eigen::MatrixXd::Identity(m, m);
  lp.le_rhs.head(m) = a;
  lp.le_lhs.block(m, 0, m, pdim) = -code.kernel;
  lp.le_lhs.block(m, pdim, m, m) = -Eigen::MatrixXd::Identity(m, m);
  lp.le_rhs.tail(m) = -a;

  const LpOutcome sol = solve(lp, opts);
  out.status = sol.status;
  out.pivots = sol.pivots;
  if (sol.status != LpStatus::Optimal) return out;
  out.x = code.kernel * sol.x.head(pdim);
  out.objective = sol.objective;
  return out;
}

struct CorruptionModel {
  int errors = 0;           // support size k
  bool random_signs = true; // otherwise all corruptions are +magnitude
  double magnitude = 1.0;
  double magnitude_spread = 0.0;  // uniform in [magnitude, magnitude + spread]
};

struct RecoveryTrial {
  std::vector<int> support;
  std::vector<int> signs;          // +-1 per support position
  bool recovered = false;          // ||x* - c||_inf <= tolerance
  bool face_condition = false;     // signed support set spans a face
  bool face_inconclusive = false;  // oracle failed; implication not evaluable
  bool consistent = true;          // face_condition => recovered
  bool skipped_degenerate = false;
  double linf_error = std::numeric_limits<double>::quiet_NaN();
  double l1_objective = std::numeric_limits<double>::quiet_NaN();
  double l1_true = std::numeric_limits<double>::quiet_NaN();
  LpStatus decode_status = LpStatus::NumericalFailure;
};

inline constexpr double kRecoveryTol = 1e-6;

/// One seeded corruption/recovery round-trip. Samples a unit-norm codeword,
/// corrupts `errors` coordinates, reads the sign pattern off c - a exactly as
/// the face condition dictates, and cross-checks the oracle against the
/// decoder. face_condition and not recovered in the same trial contradicts
/// the recovery guarantee and is surfaced via `consistent`.
inline RecoveryTrial recovery_trial(const CodeInstance& code, const PolytopeInstance& p,
                                    const CorruptionModel& model, std::uint64_t seed,
                                    std::uint64_t trial_index,
                                    const FaceOracleOptions& oracle_opts = {}) {
  if (model.errors < 0 || model.errors > code.length)
    throw std::invalid_argument("recovery_trial: corruption count out of range");
  RecoveryTrial trial;
  if (code.degenerate) {
    trial.skipped_degenerate = true;
    return trial;
  }
  Rng rng = Rng::for_trial(seed, trial_index);
  const int pdim = static_cast<int>(code.kernel.cols());
  Eigen::VectorXd dir(pdim);
  for (int i = 0; i < pdim; ++i) dir[i] = rng.gaussian();
  if (dir.norm() == 0.0) dir[0] = 1.0;
  dir.normalize();
  const Eigen::VectorXd c = code.kernel * dir;

  trial.support = rng.distinct_indices(model.errors, code.length);
  Eigen::VectorXd a = c;
  for (const int idx : trial.support) {
    const int sign = model.random_signs ? (rng.below(2) == 0 ? 1 : -1) : 1;
    double mag = model.magnitude;
    if (model.magnitude_spread > 0.0) mag += model.magnitude_spread * rng.unit();
    trial.signs.push_back(sign);
    a[idx] += sign * mag;
  }

  // Face condition on { v_i : c_i > a_i } and { -v_i : c_i < a_i }.
  std::vector<int> face_set;
  for (std::size_t pos = 0; pos < trial.support.size(); ++pos) {
    const int i = trial.support[pos];
    const int rep = code.rep_vertex[static_cast<std::size_t>(i)];
    if (c[i] > a[i])
      face_set.push_back(rep);
    else if (c[i] < a[i])
      face_set.push_back(p.antipodal[static_cast<std::size_t>(rep)]);
  }
  if (face_set.empty()) {
    trial.face_condition = true;  // nothing was corrupted; vacuous
  } else {
    const FaceQuery q = is_face(p, face_set, oracle_opts);
    if (q.status == FaceStatus::SolverFailure)
      trial.face_inconclusive = true;
    else
      trial.face_condition = q.status == FaceStatus::Face;
  }

  const DecodeResult dec = l1_decode(code, a);
  trial.decode_status = dec.status;
  trial.l1_true = (c - a).cwiseAbs().sum();
  if (dec.status == LpStatus::Optimal) {
    trial.linf_error = (dec.x - c).cwiseAbs().maxCoeff();
    trial.l1_objective = dec.objective;
    trial.recovered = trial.linf_error <= kRecoveryTol;
  }
  trial.consistent = !(trial.face_condition && !trial.face_inconclusive) || trial.recovered;
  return trial;
}

}  // namespace cspoly
