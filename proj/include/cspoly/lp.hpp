#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cspoly {

/// minimize objective . x
/// subject to eq_lhs x = eq_rhs, le_lhs x <= le_rhs, lower <= x <= upper.
/// Bounds may be +-infinity; constraint coefficients must be finite.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_lhs;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd le_lhs;
  Eigen::VectorXd le_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// An LP with n free variables, zero objective and no constraints.
  static LinearProgram vars(int n) {
    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Zero(n);
    lp.eq_lhs.resize(0, n);
    lp.eq_rhs.resize(0);
    lp.le_lhs.resize(0, n);
    lp.le_rhs.resize(0);
    lp.lower = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
    lp.upper = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    return lp;
  }

  int num_vars() const { return static_cast<int>(objective.size()); }

  void validate() const {
    const int n = num_vars();
    if (eq_lhs.cols() != n || le_lhs.cols() != n || lower.size() != n || upper.size() != n ||
        eq_lhs.rows() != eq_rhs.size() || le_lhs.rows() != le_rhs.size())
      throw std::invalid_argument("LinearProgram: inconsistent dimensions");
    if (!objective.allFinite() || !eq_lhs.allFinite() || !eq_rhs.allFinite() ||
        !le_lhs.allFinite() || !le_rhs.allFinite())
      throw std::invalid_argument("LinearProgram: non-finite coefficients");
    for (int i = 0; i < n; ++i) {
      if (std::isnan(lower[i]) || std::isnan(upper[i]))
        throw std::invalid_argument("LinearProgram: NaN bound");
    }
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    default: return "numerical-failure";
  }
}

struct LpOutcome {
  LpStatus status = LpStatus::NumericalFailure;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double max_violation = std::numeric_limits<double>::quiet_NaN();
  long pivots = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;       // relative to 1 + ||rhs||_inf
  long max_pivots = 0;          // 0: derived from problem size
  int stall_limit = 200;        // degenerate pivots before switching to Bland
};

namespace detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense tableau two-phase simplex. Dantzig pricing with lowest-index ties,
/// falling back permanently to Bland's rule after a degenerate stall; the
/// pivot budget backstops termination. Deterministic given identical input.
class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {}

  LpOutcome run() {
    lp_.validate();
    const int n = lp_.num_vars();
    for (int i = 0; i < n; ++i)
      if (lp_.lower[i] > lp_.upper[i]) return make_infeasible();

    build_transforms();
    build_tableau();
    if (opts_.max_pivots > 0)
      max_pivots_ = opts_.max_pivots;
    else
      max_pivots_ = 5000 + 50L * (tab_.rows() + tab_.cols());

    if (num_art_ > 0) {
      if (!run_phase1()) return make_failure();
      const double phase1 = -tab_(phase1_row_, rhs_col_);
      if (phase1 > feas_scale_ * opts_.feas_tol) return make_infeasible();
      cleanup_artificials();
    }
    allow_artificials_ = false;
    const PhaseResult r = run_phase2();
    if (r == PhaseResult::PivotLimit) return make_failure();
    if (r == PhaseResult::Unbounded) {
      LpOutcome out;
      out.status = LpStatus::Unbounded;
      out.pivots = pivots_;
      return out;
    }
    return extract();
  }

 private:
  enum class Kind { Shifted, Mirrored, Split };
  struct Transform {
    Kind kind;
    int col = -1;       // primary column
    int neg_col = -1;   // second column for Split
    double offset = 0;  // lb for Shifted, ub for Mirrored
  };
  enum class PhaseResult { Optimal, Unbounded, PivotLimit };

  LpOutcome make_infeasible() {
    LpOutcome out;
    out.status = LpStatus::Infeasible;
    out.pivots = pivots_;
    return out;
  }
  LpOutcome make_failure() {
    LpOutcome out;
    out.status = LpStatus::NumericalFailure;
    out.pivots = pivots_;
    return out;
  }

  void build_transforms() {
    const int n = lp_.num_vars();
    transforms_.resize(n);
    int col = 0;
    for (int i = 0; i < n; ++i) {
      const double lb = lp_.lower[i], ub = lp_.upper[i];
      Transform t;
      if (std::isfinite(lb)) {
        t.kind = Kind::Shifted;
        t.offset = lb;
        t.col = col++;
        if (std::isfinite(ub)) bound_rows_.push_back({t.col, ub - lb});
      } else if (std::isfinite(ub)) {
        t.kind = Kind::Mirrored;
        t.offset = ub;
        t.col = col++;
      } else {
        t.kind = Kind::Split;
        t.col = col++;
        t.neg_col = col++;
      }
      transforms_[i] = t;
    }
    num_struct_ = col;
  }

  // Writes the transformed coefficients of original-variable coefficient a_i
  // into a dense row, accumulating the rhs correction.
  void emit(const Eigen::VectorXd& coeffs, Eigen::VectorXd& row, double& rhs) const {
    for (int i = 0; i < coeffs.size(); ++i) {
      const double a = coeffs[i];
      if (a == 0.0) continue;
      const Transform& t = transforms_[i];
      switch (t.kind) {
        case Kind::Shifted:
          row[t.col] += a;
          rhs -= a * t.offset;
          break;
        case Kind::Mirrored:
          row[t.col] -= a;
          rhs -= a * t.offset;
          break;
        case Kind::Split:
          row[t.col] += a;
          row[t.neg_col] -= a;
          break;
      }
    }
  }

  void build_tableau() {
    const int me = static_cast<int>(lp_.eq_rhs.size());
    const int mi = static_cast<int>(lp_.le_rhs.size());
    const int mb = static_cast<int>(bound_rows_.size());
    const int m = me + mi + mb;
    num_slack_ = mi + mb;

    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(m, num_struct_);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    std::vector<bool> is_eq(m, false);
    int r = 0;
    for (int i = 0; i < me; ++i, ++r) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(num_struct_);
      double b = lp_.eq_rhs[i];
      emit(lp_.eq_lhs.row(i), row, b);
      rows.row(r) = row;
      rhs[r] = b;
      is_eq[r] = true;
    }
    for (int i = 0; i < mi; ++i, ++r) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(num_struct_);
      double b = lp_.le_rhs[i];
      emit(lp_.le_lhs.row(i), row, b);
      rows.row(r) = row;
      rhs[r] = b;
    }
    for (const auto& [c, b] : bound_rows_) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(num_struct_);
      row[c] = 1.0;
      rows.row(r) = row;
      rhs[r] = b;
      ++r;
    }
    feas_scale_ = 1.0 + (m > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0);

    // Flip rows with negative rhs; a flipped inequality's slack enters with
    // coefficient -1 and cannot seed the basis, so it gets an artificial.
    std::vector<bool> negated(m, false);
    num_art_ = 0;
    for (int i = 0; i < m; ++i) {
      if (rhs[i] < 0.0) {
        rows.row(i) = -rows.row(i);
        rhs[i] = -rhs[i];
        negated[i] = true;
      }
      if (is_eq[i] || negated[i]) ++num_art_;
    }
    const int cols = num_struct_ + num_slack_ + num_art_;
    rhs_col_ = cols;
    phase2_row_ = m;
    phase1_row_ = m + 1;
    tab_ = RowMatrix::Zero(m + 2, cols + 1);
    tab_.block(0, 0, m, num_struct_) = rows;
    basis_.assign(m, -1);
    int slack = num_struct_;
    int art = num_struct_ + num_slack_;
    for (int i = 0; i < m; ++i) {
      tab_(i, rhs_col_) = rhs[i];
      if (!is_eq[i]) {
        tab_(i, slack) = negated[i] ? -1.0 : 1.0;
        if (!negated[i]) basis_[i] = slack;
        ++slack;
      }
      if (basis_[i] == -1) {
        tab_(i, art) = 1.0;
        basis_[i] = art;
        ++art;
      }
    }

    // Phase II costs on structural columns. The reported objective is later
    // recomputed from the recovered x, so the affine shift from variable
    // transforms can be dropped here.
    {
      Eigen::VectorXd crow = Eigen::VectorXd::Zero(num_struct_);
      double cshift = 0.0;
      emit(lp_.objective, crow, cshift);
      tab_.row(phase2_row_).setZero();
      tab_.block(phase2_row_, 0, 1, num_struct_) = crow.transpose();
    }
    // Phase I costs: one per artificial, reduced against the initial basis.
    tab_.row(phase1_row_).setZero();
    for (int j = num_struct_ + num_slack_; j < cols; ++j) tab_(phase1_row_, j) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (basis_[i] >= num_struct_ + num_slack_) tab_.row(phase1_row_) -= tab_.row(i);
    }
  }

  bool allowed(int col) const {
    if (col >= num_struct_ + num_slack_ && !allow_artificials_) return false;
    return true;
  }

  int choose_entering(int cost_row) const {
    const int cols = rhs_col_;
    if (bland_) {
      for (int j = 0; j < cols; ++j)
        if (allowed(j) && tab_(cost_row, j) < -opts_.pivot_tol) return j;
      return -1;
    }
    int best = -1;
    double best_val = -opts_.pivot_tol;
    for (int j = 0; j < cols; ++j) {
      if (!allowed(j)) continue;
      const double v = tab_(cost_row, j);
      if (v < best_val) {
        best_val = v;
        best = j;
      }
    }
    return best;
  }

  int choose_leaving(int col) const {
    const int m = phase2_row_;
    int best_row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      const double a = tab_(r, col);
      if (a <= opts_.pivot_tol) continue;
      const double ratio = tab_(r, rhs_col_) / a;
      bool take = false;
      if (ratio < best_ratio) {
        take = true;
      } else if (ratio == best_ratio && best_row >= 0) {
        take = bland_ ? basis_[r] < basis_[best_row] : r < best_row;
      }
      if (take) {
        best_ratio = ratio;
        best_row = r;
      }
    }
    return best_row;
  }

  void pivot(int row, int col) {
    const double p = tab_(row, col);
    tab_.row(row) /= p;
    tab_(row, col) = 1.0;
    for (int r = 0; r < tab_.rows(); ++r) {
      if (r == row) continue;
      const double f = tab_(r, col);
      if (f == 0.0) continue;
      tab_.row(r) -= f * tab_.row(row);
      tab_(r, col) = 0.0;
    }
    basis_[row] = col;
    ++pivots_;
  }

  // The phase 1 objective is bounded below by zero, so a missing ratio row
  // can only be numerical trouble.
  bool run_phase1() {
    int stall = 0;
    double prev = -tab_(phase1_row_, rhs_col_);
    for (;;) {
      const int col = choose_entering(phase1_row_);
      if (col < 0) return true;
      const int row = choose_leaving(col);
      if (row < 0) return false;
      if (pivots_ >= max_pivots_) return false;
      pivot(row, col);
      const double cur = -tab_(phase1_row_, rhs_col_);
      if (prev - cur < 1e-12 * (1.0 + std::abs(prev))) {
        if (++stall >= opts_.stall_limit) bland_ = true;
      } else {
        stall = 0;
      }
      prev = cur;
    }
  }

  PhaseResult run_phase2() {
    int stall = 0;
    double prev = -tab_(phase2_row_, rhs_col_);
    for (;;) {
      const int col = choose_entering(phase2_row_);
      if (col < 0) return PhaseResult::Optimal;
      const int row = choose_leaving(col);
      if (row < 0) return PhaseResult::Unbounded;
      if (pivots_ >= max_pivots_) return PhaseResult::PivotLimit;
      pivot(row, col);
      const double cur = -tab_(phase2_row_, rhs_col_);
      if (prev - cur < 1e-12 * (1.0 + std::abs(prev))) {
        if (++stall >= opts_.stall_limit) bland_ = true;
      } else {
        stall = 0;
      }
      prev = cur;
    }
  }

  /// Drives basic artificials out at value zero, deleting rows that turn out
  /// to be redundant. Afterwards no artificial is basic.
  void cleanup_artificials() {
    const int m = phase2_row_;
    const int real_cols = num_struct_ + num_slack_;
    std::vector<int> drop;
    for (int r = 0; r < m; ++r) {
      if (basis_[r] < real_cols) continue;
      int col = -1;
      for (int j = 0; j < real_cols; ++j) {
        if (std::abs(tab_(r, j)) > opts_.pivot_tol) {
          col = j;
          break;
        }
      }
      if (col >= 0)
        pivot(r, col);
      else
        drop.push_back(r);
    }
    if (drop.empty()) return;
    std::vector<int> keep;
    for (int r = 0; r < m; ++r)
      if (std::find(drop.begin(), drop.end(), r) == drop.end()) keep.push_back(r);
    RowMatrix next(static_cast<int>(keep.size()) + 2, tab_.cols());
    std::vector<int> next_basis;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      next.row(static_cast<int>(i)) = tab_.row(keep[i]);
      next_basis.push_back(basis_[keep[i]]);
    }
    next.row(static_cast<int>(keep.size())) = tab_.row(phase2_row_);
    next.row(static_cast<int>(keep.size()) + 1) = tab_.row(phase1_row_);
    tab_ = std::move(next);
    basis_ = std::move(next_basis);
    phase2_row_ = static_cast<int>(keep.size());
    phase1_row_ = phase2_row_ + 1;
  }

  LpOutcome extract() const {
    const int n = lp_.num_vars();
    Eigen::VectorXd values = Eigen::VectorXd::Zero(rhs_col_);
    for (int r = 0; r < phase2_row_; ++r) values[basis_[r]] = tab_(r, rhs_col_);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
      const Transform& t = transforms_[i];
      switch (t.kind) {
        case Kind::Shifted: x[i] = t.offset + values[t.col]; break;
        case Kind::Mirrored: x[i] = t.offset - values[t.col]; break;
        case Kind::Split: x[i] = values[t.col] - values[t.neg_col]; break;
      }
    }
    LpOutcome out;
    out.x = x;
    out.pivots = pivots_;
    out.objective = lp_.objective.dot(x);
    out.max_violation = violation(x);
    out.status = out.max_violation <= feas_scale_ * opts_.feas_tol ? LpStatus::Optimal
                                                                   : LpStatus::NumericalFailure;
    return out;
  }

  /// Violation recomputed by direct substitution into the original data,
  /// independent of the tableau path.
  double violation(const Eigen::VectorXd& x) const {
    double v = 0.0;
    if (lp_.eq_rhs.size() > 0)
      v = std::max(v, (lp_.eq_lhs * x - lp_.eq_rhs).cwiseAbs().maxCoeff());
    if (lp_.le_rhs.size() > 0)
      v = std::max(v, (lp_.le_lhs * x - lp_.le_rhs).maxCoeff());
    for (int i = 0; i < lp_.num_vars(); ++i) {
      if (std::isfinite(lp_.lower[i])) v = std::max(v, lp_.lower[i] - x[i]);
      if (std::isfinite(lp_.upper[i])) v = std::max(v, x[i] - lp_.upper[i]);
    }
    return v;
  }

  LinearProgram lp_;
  SimplexOptions opts_;
  std::vector<Transform> transforms_;
  std::vector<std::pair<int, double>> bound_rows_;
  RowMatrix tab_;
  std::vector<int> basis_;
  int num_struct_ = 0, num_slack_ = 0, num_art_ = 0;
  int rhs_col_ = 0, phase2_row_ = 0, phase1_row_ = 0;
  double feas_scale_ = 1.0;
  bool bland_ = false;
  bool allow_artificials_ = true;
  long pivots_ = 0;
  long max_pivots_ = 0;
};

}  // namespace detail

inline LpOutcome solve(const LinearProgram& lp, const SimplexOptions& opts = {}) {
  return detail::SimplexSolver(lp, opts).run();
}

}  // namespace cspoly
