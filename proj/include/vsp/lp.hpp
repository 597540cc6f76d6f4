#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace vsp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kOptimalityTol = 1e-7;

enum class Sense : std::uint8_t { LessEqual, GreaterEqual, Equal };

struct Row {
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// maximize objective.x subject to rows and lower <= x <= upper.
struct LpProblem {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int cols() const { return static_cast<int>(objective.size()); }

  int add_column(double obj, double lo, double hi) {
    objective.push_back(obj);
    lower.push_back(lo);
    upper.push_back(hi);
    return cols() - 1;
  }
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

/// Basis descriptor for warm starts. Rows are identified by the stable ids the
/// engine hands out, so a basis survives rows being appended or removed.
struct Basis {
  std::vector<VarStatus> cols;
  std::vector<std::uint64_t> row_ids;
  std::vector<VarStatus> rows;

  bool empty() const { return cols.empty(); }
};

enum class LpStatus { Optimal, Infeasible, NumericalFailure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double value = 0.0;
  std::vector<double> x;
  Basis basis;
  long iterations = 0;
  std::string diagnostic;
};

/// Bounded-variable primal simplex on a dense row store with an explicit
/// basis inverse.
///
/// Each row k reads a_k.x + s_k = rhs_k with a slack s_k bounded by the row
/// sense ([0,inf) for <=, (-inf,0] for >=, [0,0] for =). Phase one minimizes
/// the sum of bound violations of the basic variables starting from whatever
/// basis is given, so a warm basis that became infeasible after a bound change
/// or an added row needs no artificial columns. Dantzig pricing switches to
/// Bland's rule after 3(rows+cols) consecutive degenerate pivots; the inverse
/// is rebuilt from scratch every 50 pivots.
class Simplex {
 public:
  explicit Simplex(const LpProblem& p)
      : nc_(p.cols()), objective_(p.objective), col_lower_(p.lower), col_upper_(p.upper) {
    if (p.lower.size() != p.objective.size() || p.upper.size() != p.objective.size())
      throw InvalidArgument("bound vectors do not match the column count");
    for (int j = 0; j < nc_; ++j) check_bounds(col_lower_[j], col_upper_[j]);
    for (const auto& row : p.rows) add_row(row);
  }

  int cols() const { return nc_; }
  int rows() const { return static_cast<int>(rhs_.size()); }
  std::uint64_t row_id(int k) const { return row_ids_[k]; }
  double lower(int j) const { return col_lower_[j]; }
  double upper(int j) const { return col_upper_[j]; }

  void set_bounds(int col, double lo, double hi) {
    check_bounds(lo, hi);
    col_lower_.at(col) = lo;
    col_upper_.at(col) = hi;
  }

  std::uint64_t add_row(const Row& row) {
    std::vector<double> dense(static_cast<std::size_t>(nc_), 0.0);
    for (auto [j, v] : row.terms) {
      if (j < 0 || j >= nc_) throw InvalidArgument("row references a missing column");
      dense[j] += v;
    }
    a_.push_back(std::move(dense));
    rhs_.push_back(row.rhs);
    sense_.push_back(row.sense);
    row_ids_.push_back(next_row_id_);
    columns_stale_ = true;
    return next_row_id_++;
  }

  /// Removes the rows whose ids are listed; unknown ids are ignored.
  void remove_rows(std::span<const std::uint64_t> ids) {
    std::vector<char> drop(rhs_.size(), 0);
    for (std::uint64_t id : ids)
      for (std::size_t k = 0; k < row_ids_.size(); ++k)
        if (row_ids_[k] == id) drop[k] = 1;
    std::size_t w = 0;
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
      if (drop[k]) continue;
      if (w != k) a_[w] = std::move(a_[k]);
      rhs_[w] = rhs_[k];
      sense_[w] = sense_[k];
      row_ids_[w] = row_ids_[k];
      ++w;
    }
    a_.resize(w);
    rhs_.resize(w);
    sense_.resize(w);
    row_ids_.resize(w);
    columns_stale_ = true;
  }

  double activity(int k, std::span<const double> x) const {
    double s = 0.0;
    for (int j = 0; j < nc_; ++j) s += a_[k][j] * x[j];
    return s;
  }

  /// Largest violation of any row or column bound by `x`.
  double max_violation(std::span<const double> x) const {
    double worst = 0.0;
    for (int j = 0; j < nc_; ++j) worst = std::max({worst, col_lower_[j] - x[j], x[j] - col_upper_[j]});
    for (int k = 0; k < rows(); ++k) {
      const double act = activity(k, x);
      if (sense_[k] != Sense::GreaterEqual) worst = std::max(worst, act - rhs_[k]);
      if (sense_[k] != Sense::LessEqual) worst = std::max(worst, rhs_[k] - act);
    }
    return worst;
  }

  LpSolution solve(const Basis* warm = nullptr) {
    LpSolution out;
    prepare_columns();
    const int m = rows();
    const int total = nc_ + m;
    lower_.assign(total, 0.0);
    upper_.assign(total, 0.0);
    cost_.assign(total, 0.0);
    for (int j = 0; j < nc_; ++j) {
      lower_[j] = col_lower_[j];
      upper_[j] = col_upper_[j];
      cost_[j] = objective_[j];
    }
    for (int k = 0; k < m; ++k) {
      lower_[nc_ + k] = sense_[k] == Sense::GreaterEqual ? -kInf : 0.0;
      upper_[nc_ + k] = sense_[k] == Sense::LessEqual ? kInf : 0.0;
    }

    if (!(warm && load_basis(*warm) && refactor())) {
      cold_basis();
      if (!refactor()) {
        out.diagnostic = "slack basis is singular";
        return out;
      }
    }
    compute_basic_values();

    long iterations = 0;
    const long limit = 200L * (total + 10) + 20000;
    int degenerate_run = 0;
    int pivots_since_refactor = 0;
    int verification_rounds = 0;
    bool bland = false;
    std::vector<double> y(static_cast<std::size_t>(m)), alpha(static_cast<std::size_t>(m));

    while (true) {
      if (++iterations > limit) {
        out.status = LpStatus::NumericalFailure;
        out.diagnostic = "iteration limit reached";
        out.iterations = iterations;
        return out;
      }
      const bool phase_one = basic_infeasibility() > kFeasibilityTol;

      // duals for the current phase
      std::fill(y.begin(), y.end(), 0.0);
      for (int r = 0; r < m; ++r) {
        const double c = phase_cost(head_[r], phase_one);
        if (c == 0.0) continue;
        const double* inv = &binv_[static_cast<std::size_t>(r) * m];
        for (int k = 0; k < m; ++k) y[k] += c * inv[k];
      }

      // pricing
      int entering = -1;
      double best = 0.0;
      int direction = 0;
      for (int j = 0; j < total; ++j) {
        if (status_[j] == VarStatus::Basic || lower_[j] == upper_[j]) continue;
        const double d = reduced_cost(j, y, phase_one);
        int dir = 0;
        if (d > kOptimalityTol && x_[j] < upper_[j]) dir = 1;
        if (d < -kOptimalityTol && x_[j] > lower_[j]) dir = -1;
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }

      if (entering < 0) {
        // no improving column: confirm on a fresh factorization before concluding
        if (pivots_since_refactor > 0 && verification_rounds < 3) {
          ++verification_rounds;
          if (!refactor()) return failure(out, iterations, "singular basis at verification");
          compute_basic_values();
          pivots_since_refactor = 0;
          continue;
        }
        if (phase_one) {
          out.status = LpStatus::Infeasible;
          out.iterations = iterations;
          out.basis = export_basis();
          return out;
        }
        break;
      }

      // entering column in basis coordinates
      std::fill(alpha.begin(), alpha.end(), 0.0);
      if (entering < nc_) {
        for (auto [k, v] : col_nz_[entering])
          for (int r = 0; r < m; ++r) alpha[r] += binv_[static_cast<std::size_t>(r) * m + k] * v;
      } else {
        const int k = entering - nc_;
        for (int r = 0; r < m; ++r) alpha[r] = binv_[static_cast<std::size_t>(r) * m + k];
      }

      // ratio test; basic variable r moves at rate -direction*alpha[r]
      double step = upper_[entering] - lower_[entering];
      int leaving_row = -1;
      bool leaves_at_upper = false;
      double leaving_pivot = 0.0;
      for (int r = 0; r < m; ++r) {
        const double rate = -direction * alpha[r];
        if (std::abs(rate) < 1e-9) continue;
        const int v = head_[r];
        double limit_here = kInf;
        bool at_upper = false;
        if (rate < 0) {
          if (x_[v] > upper_[v] + kFeasibilityTol) {
            limit_here = (x_[v] - upper_[v]) / -rate;
            at_upper = true;
          } else if (x_[v] >= lower_[v] - kFeasibilityTol && lower_[v] > -kInf) {
            limit_here = (x_[v] - lower_[v]) / -rate;
          }
        } else {
          if (x_[v] < lower_[v] - kFeasibilityTol) {
            limit_here = (lower_[v] - x_[v]) / rate;
          } else if (x_[v] <= upper_[v] + kFeasibilityTol && upper_[v] < kInf) {
            limit_here = (upper_[v] - x_[v]) / rate;
            at_upper = true;
          }
        }
        if (limit_here == kInf) continue;
        limit_here = std::max(0.0, limit_here);
        bool take = false;
        if (limit_here < step - 1e-12) {
          take = true;
        } else if (limit_here <= step + 1e-12) {
          // ties: a pivot beats a bound flip; Bland takes the lowest index, Dantzig the largest pivot
          if (leaving_row < 0)
            take = true;
          else
            take = bland ? v < head_[leaving_row] : std::abs(alpha[r]) > std::abs(leaving_pivot);
        }
        if (take) {
          step = limit_here;
          leaving_row = r;
          leaves_at_upper = at_upper;
          leaving_pivot = alpha[r];
        }
      }

      if (step == kInf) return failure(out, iterations, "unbounded ray in a bounded problem");

      // move
      x_[entering] += direction * step;
      for (int r = 0; r < m; ++r)
        if (alpha[r] != 0.0) x_[head_[r]] -= direction * step * alpha[r];

      if (step < 1e-12) {
        if (++degenerate_run > 3 * (m + total)) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      if (leaving_row < 0) {
        // bound flip of the entering variable
        status_[entering] = direction > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
        x_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
        continue;
      }

      const int leaving = head_[leaving_row];
      status_[leaving] = leaves_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
      x_[leaving] = leaves_at_upper ? upper_[leaving] : lower_[leaving];
      status_[entering] = VarStatus::Basic;
      head_[leaving_row] = entering;
      pivot(leaving_row, alpha);
      if (++pivots_since_refactor >= 50) {
        if (!refactor()) return failure(out, iterations, "singular basis after refactorization");
        compute_basic_values();
        pivots_since_refactor = 0;
      }
    }

    out.x.assign(x_.begin(), x_.begin() + nc_);
    for (int j = 0; j < nc_; ++j) {
      if (out.x[j] < col_lower_[j] && out.x[j] > col_lower_[j] - kFeasibilityTol) out.x[j] = col_lower_[j];
      if (out.x[j] > col_upper_[j] && out.x[j] < col_upper_[j] + kFeasibilityTol) out.x[j] = col_upper_[j];
    }
    const double violation = max_violation(out.x);
    if (violation > kFeasibilityTol) {
      return failure(out, iterations, "final point violates a constraint by " + std::to_string(violation));
    }
    out.status = LpStatus::Optimal;
    out.value = 0.0;
    for (int j = 0; j < nc_; ++j) out.value += objective_[j] * out.x[j];
    out.iterations = iterations;
    out.basis = export_basis();
    return out;
  }

 private:
  static void check_bounds(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("column bounds must be finite");
    if (lo > hi) throw InvalidArgument("column lower bound exceeds upper bound");
  }

  LpSolution& failure(LpSolution& out, long iterations, std::string why) {
    out.status = LpStatus::NumericalFailure;
    out.iterations = iterations;
    out.diagnostic = std::move(why);
    return out;
  }

  void prepare_columns() {
    if (!columns_stale_ && static_cast<int>(col_nz_.size()) == nc_) return;
    col_nz_.assign(static_cast<std::size_t>(nc_), {});
    for (int k = 0; k < rows(); ++k)
      for (int j = 0; j < nc_; ++j)
        if (a_[k][j] != 0.0) col_nz_[j].emplace_back(k, a_[k][j]);
    columns_stale_ = false;
  }

  double phase_cost(int v, bool phase_one) const {
    if (!phase_one) return v < nc_ ? cost_[v] : 0.0;
    if (x_[v] < lower_[v] - kFeasibilityTol) return 1.0;
    if (x_[v] > upper_[v] + kFeasibilityTol) return -1.0;
    return 0.0;
  }

  double reduced_cost(int j, const std::vector<double>& y, bool phase_one) const {
    if (j >= nc_) return -y[j - nc_];
    double d = phase_one ? 0.0 : cost_[j];
    for (auto [k, v] : col_nz_[j]) d -= y[k] * v;
    return d;
  }

  double basic_infeasibility() const {
    double worst = 0.0;
    for (int v : head_) worst = std::max({worst, lower_[v] - x_[v], x_[v] - upper_[v]});
    return worst;
  }

  void sanitize_nonbasic(int v) {
    if (status_[v] == VarStatus::AtUpper && upper_[v] == kInf) status_[v] = VarStatus::AtLower;
    if (status_[v] == VarStatus::AtLower && lower_[v] == -kInf) status_[v] = VarStatus::AtUpper;
    if (status_[v] == VarStatus::AtUpper && lower_[v] == upper_[v]) status_[v] = VarStatus::AtLower;
  }

  void cold_basis() {
    const int m = rows();
    status_.assign(static_cast<std::size_t>(nc_ + m), VarStatus::AtLower);
    head_.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      status_[nc_ + k] = VarStatus::Basic;
      head_[k] = nc_ + k;
    }
  }

  bool load_basis(const Basis& warm) {
    const int m = rows();
    if (static_cast<int>(warm.cols.size()) != nc_ || warm.row_ids.size() != warm.rows.size()) return false;
    status_.assign(static_cast<std::size_t>(nc_ + m), VarStatus::Basic);
    std::copy(warm.cols.begin(), warm.cols.end(), status_.begin());
    std::unordered_map<std::uint64_t, VarStatus> by_id;
    for (std::size_t k = 0; k < warm.row_ids.size(); ++k) by_id.emplace(warm.row_ids[k], warm.rows[k]);
    for (int k = 0; k < m; ++k) {
      auto it = by_id.find(row_ids_[k]);
      status_[nc_ + k] = it == by_id.end() ? VarStatus::Basic : it->second;
    }
    int basic = static_cast<int>(std::count(status_.begin(), status_.end(), VarStatus::Basic));
    // removed rows can leave surplus basic columns; demote them from the back
    for (int v = nc_ - 1; v >= 0 && basic > m; --v)
      if (status_[v] == VarStatus::Basic) {
        status_[v] = VarStatus::AtLower;
        --basic;
      }
    head_.clear();
    for (int v = 0; v < nc_ + m; ++v) {
      if (status_[v] == VarStatus::Basic)
        head_.push_back(v);
      else
        sanitize_nonbasic(v);
    }
    return static_cast<int>(head_.size()) == m;
  }

  Basis export_basis() const {
    Basis b;
    b.cols.assign(status_.begin(), status_.begin() + nc_);
    b.row_ids = row_ids_;
    b.rows.assign(status_.begin() + nc_, status_.end());
    return b;
  }

  // Gauss-Jordan inversion of the basis matrix; zero multipliers are skipped so
  // the many unit slack columns cost little.
  bool refactor() {
    const int m = rows();
    std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) {
      const int v = head_[r];
      if (v < nc_) {
        for (auto [k, val] : col_nz_[v]) mat[static_cast<std::size_t>(k) * m + r] = val;
      } else {
        mat[static_cast<std::size_t>(v - nc_) * m + r] = 1.0;
      }
    }
    binv_.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int k = 0; k < m; ++k) binv_[static_cast<std::size_t>(k) * m + k] = 1.0;
    for (int c = 0; c < m; ++c) {
      int p = c;
      for (int r = c + 1; r < m; ++r)
        if (std::abs(mat[static_cast<std::size_t>(r) * m + c]) > std::abs(mat[static_cast<std::size_t>(p) * m + c])) p = r;
      const double piv = mat[static_cast<std::size_t>(p) * m + c];
      if (std::abs(piv) < 1e-11) return false;
      if (p != c) {
        std::swap_ranges(mat.begin() + static_cast<std::ptrdiff_t>(p) * m, mat.begin() + static_cast<std::ptrdiff_t>(p + 1) * m,
                         mat.begin() + static_cast<std::ptrdiff_t>(c) * m);
        std::swap_ranges(binv_.begin() + static_cast<std::ptrdiff_t>(p) * m, binv_.begin() + static_cast<std::ptrdiff_t>(p + 1) * m,
                         binv_.begin() + static_cast<std::ptrdiff_t>(c) * m);
      }
      double* mc = &mat[static_cast<std::size_t>(c) * m];
      double* ic = &binv_[static_cast<std::size_t>(c) * m];
      std::vector<int> nz_m, nz_i;
      for (int k = 0; k < m; ++k) {
        mc[k] /= piv;
        ic[k] /= piv;
        if (mc[k] != 0.0) nz_m.push_back(k);
        if (ic[k] != 0.0) nz_i.push_back(k);
      }
      for (int r = 0; r < m; ++r) {
        if (r == c) continue;
        const double f = mat[static_cast<std::size_t>(r) * m + c];
        if (f == 0.0) continue;
        double* mr = &mat[static_cast<std::size_t>(r) * m];
        double* ir = &binv_[static_cast<std::size_t>(r) * m];
        for (int k : nz_m) mr[k] -= f * mc[k];
        for (int k : nz_i) ir[k] -= f * ic[k];
        mr[c] = 0.0;
      }
    }
    return true;
  }

  void compute_basic_values() {
    const int m = rows();
    const int total = nc_ + m;
    x_.assign(static_cast<std::size_t>(total), 0.0);
    for (int v = 0; v < total; ++v)
      if (status_[v] != VarStatus::Basic) x_[v] = status_[v] == VarStatus::AtUpper ? upper_[v] : lower_[v];
    std::vector<double> residual(rhs_);
    for (int j = 0; j < nc_; ++j)
      if (status_[j] != VarStatus::Basic && x_[j] != 0.0)
        for (auto [k, val] : col_nz_[j]) residual[k] -= val * x_[j];
    for (int k = 0; k < m; ++k)
      if (status_[nc_ + k] != VarStatus::Basic) residual[k] -= x_[nc_ + k];
    for (int r = 0; r < m; ++r) {
      const double* inv = &binv_[static_cast<std::size_t>(r) * m];
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += inv[k] * residual[k];
      x_[head_[r]] = s;
    }
  }

  void pivot(int row, const std::vector<double>& alpha) {
    const int m = rows();
    double* pr = &binv_[static_cast<std::size_t>(row) * m];
    const double piv = alpha[row];
    std::vector<int> nz;
    for (int k = 0; k < m; ++k) {
      pr[k] /= piv;
      if (pr[k] != 0.0) nz.push_back(k);
    }
    for (int r = 0; r < m; ++r) {
      if (r == row || alpha[r] == 0.0) continue;
      double* dst = &binv_[static_cast<std::size_t>(r) * m];
      const double f = alpha[r];
      for (int k : nz) dst[k] -= f * pr[k];
    }
  }

  int nc_;
  std::vector<double> objective_, col_lower_, col_upper_;
  std::vector<std::vector<double>> a_;
  std::vector<double> rhs_;
  std::vector<Sense> sense_;
  std::vector<std::uint64_t> row_ids_;
  std::uint64_t next_row_id_ = 0;

  bool columns_stale_ = true;
  std::vector<std::vector<std::pair<int, double>>> col_nz_;

  // per-solve state over structurals followed by slacks
  std::vector<double> lower_, upper_, cost_, x_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::vector<double> binv_;
};

inline LpSolution solve_lp(const LpProblem& p, const Basis* warm = nullptr) {
  Simplex engine(p);
  return engine.solve(warm);
}

}  // namespace vsp::lp
