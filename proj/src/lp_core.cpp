#include "band/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "band/errors.hpp"

namespace band {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;      // minimum acceptable pivot magnitude
constexpr double kSingularTol = 1e-11;  // LU breakdown threshold
constexpr int kRefactorInterval = 64;   // eta vectors between refactorizations
constexpr int kRowCountCap = 4000;      // dense factorization memory guard

/// Revised primal simplex over the bounded-variable computational form
///   A x + I s = rhs,  l <= (x,s) <= u
/// with a dense LU basis factorization plus product-form eta updates.
/// Phase 1 minimizes the sum of bound violations of the basic variables with
/// a composite gradient objective; phase 2 is the true cost vector. Dantzig
/// pricing switches to Bland's rule after a degeneracy streak.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opts,
          const std::optional<SimplexBasis>& warm_start)
      : lp_(lp), opts_(opts) {
    n_struct_ = static_cast<int>(lp.variables.size());
    m_ = static_cast<int>(lp.rows.size());
    if (n_struct_ < 1) throw ConfigError("solve_lp: program has no variables");
    if (m_ > kRowCountCap) {
      throw SolverError("solve_lp: " + std::to_string(m_) +
                        " rows exceed the dense factorization cap of " +
                        std::to_string(kRowCountCap));
    }
    build_columns();
    init_basis(warm_start);
  }

  LpResult run() {
    factorize();
    compute_basic_values();
    const LpStatus status = primal_loop();
    return collect(status);
  }

 private:
  struct Column {
    std::vector<std::pair<int, double>> entries;  // (row, coefficient)
  };

  void build_columns() {
    n_total_ = n_struct_ + m_;
    cols_.resize(n_total_);
    lb_.resize(n_total_);
    ub_.resize(n_total_);
    cost_.assign(n_total_, 0.0);
    rhs_.resize(m_);

    for (int j = 0; j < n_struct_; ++j) {
      lb_[j] = lp_.variables[j].lb;
      ub_[j] = lp_.variables[j].ub;
    }
    for (const auto& [j, c] : lp_.objective) cost_[j] += c;
    for (int i = 0; i < m_; ++i) {
      const ConstraintRow& row = lp_.rows[i];
      rhs_[i] = row.rhs;
      for (const auto& [j, c] : row.coeffs) {
        if (c != 0.0) cols_[j].entries.emplace_back(i, c);
      }
      const int slack = n_struct_ + i;
      cols_[slack].entries.emplace_back(i, 1.0);
      switch (row.sense) {
        case RowSense::LessEqual: lb_[slack] = 0.0, ub_[slack] = kInf; break;
        case RowSense::GreaterEqual: lb_[slack] = -kInf, ub_[slack] = 0.0; break;
        case RowSense::Equal: lb_[slack] = 0.0, ub_[slack] = 0.0; break;
      }
    }
    nnz_total_ = 0;
    for (const auto& col : cols_) nnz_total_ += static_cast<int64_t>(col.entries.size());
  }

  void init_basis(const std::optional<SimplexBasis>& warm_start) {
    if (warm_start && static_cast<int>(warm_start->status.size()) == n_total_) {
      vstat_ = warm_start->status;
      int basics = 0;
      for (auto s : vstat_) basics += s == VarStatus::Basic ? 1 : 0;
      if (basics == m_) {
        basic_.clear();
        in_basis_.assign(n_total_, false);
        for (int j = 0; j < n_total_; ++j) {
          if (vstat_[j] == VarStatus::Basic) {
            basic_.push_back(j);
            in_basis_[j] = true;
          }
        }
        normalize_nonbasic_status();
        return;
      }
    }
    // Cold start: all-slack basis.
    vstat_.assign(n_total_, VarStatus::AtLower);
    basic_.resize(m_);
    in_basis_.assign(n_total_, false);
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_struct_ + i;
      in_basis_[n_struct_ + i] = true;
      vstat_[n_struct_ + i] = VarStatus::Basic;
    }
    normalize_nonbasic_status();
  }

  /// Snaps nonbasic statuses onto representable bounds; free variables rest
  /// at zero.
  void normalize_nonbasic_status() {
    for (int j = 0; j < n_total_; ++j) {
      if (vstat_[j] == VarStatus::Basic) continue;
      const bool lb_finite = lb_[j] > -kInf;
      const bool ub_finite = ub_[j] < kInf;
      if (!lb_finite && !ub_finite) {
        vstat_[j] = VarStatus::NonbasicFree;
      } else if (vstat_[j] == VarStatus::AtUpper && !ub_finite) {
        vstat_[j] = VarStatus::AtLower;
      } else if (vstat_[j] == VarStatus::AtLower && !lb_finite) {
        vstat_[j] = VarStatus::AtUpper;
      } else if (vstat_[j] == VarStatus::NonbasicFree) {
        vstat_[j] = lb_finite ? VarStatus::AtLower : VarStatus::AtUpper;
      }
    }
  }

  double nonbasic_value(int j) const {
    switch (vstat_[j]) {
      case VarStatus::AtLower: return lb_[j];
      case VarStatus::AtUpper: return ub_[j];
      case VarStatus::NonbasicFree: return 0.0;
      case VarStatus::Basic: break;
    }
    return 0.0;
  }

  // ---- factorization --------------------------------------------------------

  /// Dense LU with partial pivoting of the basis matrix. Singular columns are
  /// repaired by substituting the slack of an unpivoted row.
  void factorize() {
    charge(static_cast<uint64_t>(m_) * m_ * m_ / 3 / 512 + 1);
    lu_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      for (const auto& [row, coeff] : cols_[basic_[k]].entries) {
        lu_[static_cast<size_t>(row) * m_ + k] = coeff;
      }
    }
    perm_.resize(m_);
    for (int i = 0; i < m_; ++i) perm_[i] = i;

    for (int k = 0; k < m_; ++k) {
      int pivot_pos = k;
      double best = std::abs(lu_[static_cast<size_t>(perm_[k]) * m_ + k]);
      for (int i = k + 1; i < m_; ++i) {
        const double cand = std::abs(lu_[static_cast<size_t>(perm_[i]) * m_ + k]);
        if (cand > best) {
          best = cand;
          pivot_pos = i;
        }
      }
      if (best < kSingularTol) {
        repair_singular_column(k);
        --k;
        continue;
      }
      std::swap(perm_[k], perm_[pivot_pos]);
      const double pivot = lu_[static_cast<size_t>(perm_[k]) * m_ + k];
      const double* row_k = &lu_[static_cast<size_t>(perm_[k]) * m_];
      for (int i = k + 1; i < m_; ++i) {
        double* row_i = &lu_[static_cast<size_t>(perm_[i]) * m_];
        const double factor = row_i[k] / pivot;
        row_i[k] = factor;
        if (factor != 0.0) {
          for (int c = k + 1; c < m_; ++c) row_i[c] -= factor * row_k[c];
        }
      }
    }
    etas_.clear();
  }

  /// Replaces the basic variable in basis slot k with the slack of the first
  /// row not yet used as a pivot, restoring nonsingularity.
  void repair_singular_column(int k) {
    std::vector<bool> used(m_, false);
    for (int i = 0; i < k; ++i) used[perm_[i]] = true;
    int free_row = -1;
    for (int i = 0; i < m_; ++i) {
      if (!used[i]) {
        free_row = i;
        break;
      }
    }
    if (free_row < 0) throw SolverError("basis repair failed: no free row");
    const int old_var = basic_[k];
    const int slack = n_struct_ + free_row;
    if (in_basis_[slack]) throw SolverError("basis repair failed: slack already basic");
    in_basis_[old_var] = false;
    vstat_[old_var] = lb_[old_var] > -kInf ? VarStatus::AtLower
                      : ub_[old_var] < kInf ? VarStatus::AtUpper
                                            : VarStatus::NonbasicFree;
    basic_[k] = slack;
    in_basis_[slack] = true;
    vstat_[slack] = VarStatus::Basic;
    // Rewrite working column k and redo the elimination steps on it.
    for (int i = 0; i < m_; ++i) lu_[static_cast<size_t>(i) * m_ + k] = 0.0;
    lu_[static_cast<size_t>(free_row) * m_ + k] = 1.0;
    for (int step = 0; step < k; ++step) {
      const double pivot_val = lu_[static_cast<size_t>(perm_[step]) * m_ + k];
      if (pivot_val != 0.0) {
        for (int i = step + 1; i < m_; ++i) {
          const double factor = lu_[static_cast<size_t>(perm_[i]) * m_ + step];
          if (factor != 0.0) {
            lu_[static_cast<size_t>(perm_[i]) * m_ + k] -= factor * pivot_val;
          }
        }
      }
    }
  }

  /// v := B^{-1} v.
  void ftran(std::vector<double>& v) const {
    work_vec_.resize(m_);
    for (int i = 0; i < m_; ++i) work_vec_[i] = v[perm_[i]];
    for (int k = 0; k < m_; ++k) {
      const double yk = work_vec_[k];
      if (yk != 0.0) {
        for (int i = k + 1; i < m_; ++i) {
          work_vec_[i] -= lu_[static_cast<size_t>(perm_[i]) * m_ + k] * yk;
        }
      }
    }
    for (int k = m_ - 1; k >= 0; --k) {
      double xk = work_vec_[k];
      const double* row_k = &lu_[static_cast<size_t>(perm_[k]) * m_];
      for (int c = k + 1; c < m_; ++c) xk -= row_k[c] * work_vec_[c];
      work_vec_[k] = xk / row_k[k];
    }
    v = work_vec_;
    for (const Eta& e : etas_) {  // oldest first
      const double piv = v[e.slot] / e.col[e.slot];
      if (piv != 0.0) {
        for (int i = 0; i < m_; ++i) v[i] -= e.col[i] * piv;
      }
      v[e.slot] = piv;
    }
  }

  /// y := y B^{-1} (row vector), i.e. solves B^T z = y.
  void btran(std::vector<double>& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {  // newest first
      const Eta& e = *it;
      double dot = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (i != e.slot) dot += y[i] * e.col[i];
      }
      y[e.slot] = (y[e.slot] - dot) / e.col[e.slot];
    }
    work_vec_.resize(m_);
    for (int k = 0; k < m_; ++k) {
      double wk = y[k];
      for (int c = 0; c < k; ++c) {
        wk -= lu_[static_cast<size_t>(perm_[c]) * m_ + k] * work_vec_[c];
      }
      work_vec_[k] = wk / lu_[static_cast<size_t>(perm_[k]) * m_ + k];
    }
    for (int k = m_ - 1; k >= 0; --k) {
      double zk = work_vec_[k];
      for (int i = k + 1; i < m_; ++i) {
        zk -= lu_[static_cast<size_t>(perm_[i]) * m_ + k] * work_vec_[i];
      }
      work_vec_[k] = zk;
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m_; ++i) y[perm_[i]] = work_vec_[i];
  }

  // ---- state ----------------------------------------------------------------

  void compute_basic_values() {
    std::vector<double> r = rhs_;
    for (int j = 0; j < n_total_; ++j) {
      if (in_basis_[j]) continue;
      const double xj = nonbasic_value(j);
      if (xj != 0.0) {
        for (const auto& [row, coeff] : cols_[j].entries) r[row] -= coeff * xj;
      }
    }
    ftran(r);
    xb_ = std::move(r);
  }

  double max_violation() const {
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int j = basic_[i];
      worst = std::max(worst, lb_[j] - xb_[i]);
      worst = std::max(worst, xb_[i] - ub_[j]);
    }
    return worst;
  }

  double current_objective() const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) obj += cost_[basic_[i]] * xb_[i];
    for (int j = 0; j < n_total_; ++j) {
      if (!in_basis_[j]) obj += cost_[j] * nonbasic_value(j);
    }
    return obj;
  }

  void charge(uint64_t ticks) {
    if (opts_.work != nullptr) opts_.work->charge(ticks);
  }

  bool deadline_passed() const {
    return opts_.work != nullptr && opts_.work->ticks() >= opts_.work_deadline;
  }

  // ---- main loop -------------------------------------------------------------

  LpStatus primal_loop() {
    const double feas_tol = opts_.feasibility_tol;
    int64_t degenerate_streak = 0;
    bool bland = false;
    int cleanups = 0;

    int64_t cap =
        opts_.max_iterations < 0 ? std::numeric_limits<int64_t>::max() : opts_.max_iterations;
    if (opts_.truncated) cap = std::min(cap, opts_.truncated_cap);

    std::vector<double> y(m_), w(m_);
    while (true) {
      if (iterations_ >= cap || deadline_passed()) return LpStatus::IterationLimit;
      ++iterations_;
      charge(1 + (static_cast<uint64_t>(m_) * m_ * 4 +
                  static_cast<uint64_t>(nnz_total_) +
                  static_cast<uint64_t>(etas_.size()) * m_ * 3) / 512);

      const bool phase1 = max_violation() > feas_tol;

      // Pricing vector: true costs in phase 2; in phase 1 the infeasibility
      // gradient (+1 above the upper bound, -1 below the lower bound).
      y.assign(m_, 0.0);
      if (phase1) {
        for (int i = 0; i < m_; ++i) {
          const int j = basic_[i];
          if (xb_[i] > ub_[j] + feas_tol) y[i] = 1.0;
          else if (xb_[i] < lb_[j] - feas_tol) y[i] = -1.0;
        }
      } else {
        for (int i = 0; i < m_; ++i) y[i] = cost_[basic_[i]];
      }
      btran(y);

      // Price nonbasics. In phase 2 also accumulate the Lagrangian bound
      //   y'rhs + sum_j min(d_j l_j, d_j u_j),
      // a valid lower bound for any multiplier vector y.
      int entering = -1;
      int entering_dir = 0;
      const double threshold = phase1 ? 1e-9 : opts_.optimality_tol;
      double best_score = threshold;
      double lagrangian = 0.0;
      bool lagrangian_valid = !phase1;
      if (lagrangian_valid) {
        for (int i = 0; i < m_; ++i) lagrangian += y[i] * rhs_[i];
      }
      for (int j = 0; j < n_total_; ++j) {
        if (in_basis_[j]) continue;
        const bool fixed = lb_[j] == ub_[j];  // fixed variables cannot move
        double yaj = 0.0;
        for (const auto& [row, coeff] : cols_[j].entries) yaj += y[row] * coeff;
        const double d = (phase1 ? 0.0 : cost_[j]) - yaj;
        if (lagrangian_valid) {
          if (d > 1e-12) {
            if (lb_[j] > -kInf) lagrangian += d * lb_[j];
            else lagrangian_valid = false;
          } else if (d < -1e-12) {
            if (ub_[j] < kInf) lagrangian += d * ub_[j];
            else lagrangian_valid = false;
          }
        }
        if (fixed) continue;
        double score = 0.0;
        int dir = 0;
        switch (vstat_[j]) {
          case VarStatus::AtLower:
            if (d < -threshold) score = -d, dir = +1;
            break;
          case VarStatus::AtUpper:
            if (d > threshold) score = d, dir = -1;
            break;
          case VarStatus::NonbasicFree:
            if (std::abs(d) > threshold) score = std::abs(d), dir = d < 0 ? +1 : -1;
            break;
          case VarStatus::Basic: break;
        }
        if (dir == 0) continue;
        if (bland) {  // first improving index wins
          entering = j;
          entering_dir = dir;
          lagrangian_valid = false;  // pricing pass is incomplete
          break;
        }
        if (score > best_score) {
          best_score = score;
          entering = j;
          entering_dir = dir;
        }
      }

      if (lagrangian_valid) best_dual_bound_ = std::max(best_dual_bound_, lagrangian);

      if (entering < 0) {
        // Claimed optimal (or phase-1 optimal and still infeasible). Verify
        // against a fresh factorization before trusting stale eta chains.
        if (!etas_.empty() && cleanups < 5) {
          ++cleanups;
          factorize();
          compute_basic_values();
          continue;
        }
        return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
      }

      // FTRAN the entering column.
      w.assign(m_, 0.0);
      for (const auto& [row, coeff] : cols_[entering].entries) w[row] = coeff;
      ftran(w);

      // Ratio test: entering moves by t >= 0 in direction dir, basic i
      // changes by -t*dir*w[i]. Feasible basics block at the bound they move
      // toward; infeasible basics block at the bound they are violating
      // (becoming feasible there) and never block when moving further out.
      double t_row = kInf;
      int leaving_slot = -1;
      bool leaving_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double g = entering_dir * w[i];
        if (std::abs(g) < kPivotTol) continue;
        const int j = basic_[i];
        double limit = kInf;
        bool to_upper = false;
        if (g > 0) {  // value decreases
          if (xb_[i] > ub_[j] + feas_tol) {
            limit = (xb_[i] - ub_[j]) / g;
            to_upper = true;
          } else if (lb_[j] > -kInf && xb_[i] >= lb_[j] - feas_tol) {
            limit = (xb_[i] - lb_[j]) / g;
          }
        } else {  // value increases
          if (xb_[i] < lb_[j] - feas_tol) {
            limit = (xb_[i] - lb_[j]) / g;
          } else if (ub_[j] < kInf && xb_[i] <= ub_[j] + feas_tol) {
            limit = (xb_[i] - ub_[j]) / g;
            to_upper = true;
          }
        }
        if (limit == kInf) continue;
        if (limit < 0) limit = 0;
        const bool better = limit < t_row - 1e-9;
        const bool tie = !better && limit <= t_row + 1e-9;
        if (better ||
            (tie && leaving_slot >= 0 &&
             (std::abs(w[i]) > std::abs(w[leaving_slot]) + 1e-12 ||
              (std::abs(std::abs(w[i]) - std::abs(w[leaving_slot])) <= 1e-12 &&
               basic_[i] < basic_[leaving_slot])))) {
          t_row = better ? limit : std::min(t_row, limit);
          leaving_slot = i;
          leaving_to_upper = to_upper;
        }
      }

      double t_bound = kInf;
      if (lb_[entering] > -kInf && ub_[entering] < kInf) t_bound = ub_[entering] - lb_[entering];

      if (t_row == kInf && t_bound == kInf) {
        return phase1 ? LpStatus::Infeasible : LpStatus::Unbounded;
      }

      if (t_bound <= t_row) {
        // Bound flip: no basis change.
        const double step = t_bound * entering_dir;
        for (int i = 0; i < m_; ++i) xb_[i] -= step * w[i];
        vstat_[entering] =
            vstat_[entering] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
        degenerate_streak = 0;
        continue;
      }

      if (t_row <= 1e-12) {
        if (++degenerate_streak > 200 + 4 * static_cast<int64_t>(m_)) bland = true;
      } else {
        degenerate_streak = 0;
      }

      const double step = t_row * entering_dir;
      const double entering_value = nonbasic_value(entering) + step;
      for (int i = 0; i < m_; ++i) xb_[i] -= step * w[i];

      const int leaving = basic_[leaving_slot];
      vstat_[leaving] = leaving_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
      in_basis_[leaving] = false;
      in_basis_[entering] = true;
      vstat_[entering] = VarStatus::Basic;
      basic_[leaving_slot] = entering;
      xb_[leaving_slot] = entering_value;

      etas_.push_back({leaving_slot, w});
      if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
        factorize();
        compute_basic_values();
      }
    }
  }

  LpResult collect(LpStatus status) {
    LpResult res;
    res.iterations = iterations_;
    res.basis.status = vstat_;

    std::vector<double> x(n_total_, 0.0);
    for (int j = 0; j < n_total_; ++j) {
      if (!in_basis_[j]) x[j] = nonbasic_value(j);
    }
    for (int i = 0; i < m_; ++i) x[basic_[i]] = xb_[i];
    res.values.assign(x.begin(), x.begin() + n_struct_);

    res.primal_feasible = max_violation() <= 10 * opts_.feasibility_tol;
    if (status == LpStatus::Optimal && !res.primal_feasible) status = LpStatus::IterationLimit;

    res.status = status;
    switch (status) {
      case LpStatus::Optimal:
        res.objective = current_objective();
        res.dual_bound = res.objective;  // termination proof
        break;
      case LpStatus::IterationLimit:
        res.objective = res.primal_feasible ? current_objective() : kInf;
        res.dual_bound = best_dual_bound_;
        break;
      case LpStatus::Infeasible:
        res.objective = kInf;
        res.dual_bound = kInf;  // min over the empty set
        res.primal_feasible = false;
        break;
      case LpStatus::Unbounded:
        res.objective = -kInf;
        res.dual_bound = -kInf;
        break;
    }
    return res;
  }

  const LinearProgram& lp_;
  const LpOptions& opts_;
  int n_struct_ = 0;
  int m_ = 0;
  int n_total_ = 0;
  int64_t nnz_total_ = 0;

  std::vector<Column> cols_;
  std::vector<double> lb_, ub_, cost_, rhs_;

  std::vector<int> basic_;
  std::vector<bool> in_basis_;
  std::vector<VarStatus> vstat_;
  std::vector<double> xb_;

  std::vector<double> lu_;  // m x m row-major working matrix
  std::vector<int> perm_;
  struct Eta {
    int slot;
    std::vector<double> col;
  };
  std::vector<Eta> etas_;
  mutable std::vector<double> work_vec_;

  int64_t iterations_ = 0;
  double best_dual_bound_ = -kInf;
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::IterationLimit: return "IterationLimit";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

Solution LpResult::to_solution(const LinearProgram& lp) const {
  SolutionStatus st;
  switch (status) {
    case LpStatus::Optimal: st = SolutionStatus::Optimal; break;
    case LpStatus::Infeasible: st = SolutionStatus::Infeasible; break;
    case LpStatus::Unbounded: st = SolutionStatus::Unbounded; break;
    default: st = primal_feasible ? SolutionStatus::Feasible : SolutionStatus::TimeLimit; break;
  }
  return make_solution(lp, values, objective, st);
}

LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  return solve_lp(lp, opts, std::nullopt);
}

LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts,
                  const std::optional<SimplexBasis>& warm_start) {
  Simplex simplex(lp, opts, warm_start);
  return simplex.run();
}

}  // namespace band
