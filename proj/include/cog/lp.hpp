#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cog/formulation.hpp"

namespace cog {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

enum class BasisStatus { basic, at_lower, at_upper, nonbasic_free };

struct LpParams {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    int max_iters = 20000;
};

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    double objective = 0.0;
    std::vector<double> values;       // structural variables only
    std::vector<BasisStatus> basis;   // structural variables only
};

/// Bounded-variable primal simplex with a two-phase start. Dense columns,
/// explicit basis inverse with periodic refactorization. Dantzig pricing
/// with a Bland fallback after a stall streak.
class SimplexSolver {
  public:
    explicit SimplexSolver(LpParams params = {}) : params_(params) {}

    LpSolution solve(const MilpProblem& prob) {
        load(prob);
        LpStatus st = run_phase1();
        if (st == LpStatus::infeasible) return extract(prob, LpStatus::infeasible);
        if (st == LpStatus::iteration_limit) return extract(prob, st);
        st = run_phase2();
        return extract(prob, st);
    }

  private:
    LpParams params_;
    int m_ = 0;               // rows
    int n_ = 0;               // total columns: structural + slack + artificial
    int n_struct_ = 0;
    int n_art_base_ = 0;      // first artificial column
    std::vector<std::vector<double>> cols_;  // dense column per variable
    std::vector<double> lo_, hi_, cost_, phase1_cost_;
    std::vector<double> rhs_;
    std::vector<BasisStatus> stat_;
    std::vector<int> basis_;            // variable index per row
    std::vector<double> xb_;            // basic values per row
    std::vector<std::vector<double>> binv_;
    int pivots_since_factor_ = 0;
    int stall_count_ = 0;
    bool bland_ = false;
    static constexpr double kPivotTol = 1e-9;

    void load(const MilpProblem& prob) {
        m_ = static_cast<int>(prob.constraints.size());
        n_struct_ = prob.num_vars;
        n_ = n_struct_ + m_;  // + slack per row; artificials appended below
        cols_.assign(n_, std::vector<double>(m_, 0.0));
        lo_.assign(n_, 0.0);
        hi_.assign(n_, 0.0);
        cost_.assign(n_, 0.0);
        rhs_.resize(m_);
        for (int v = 0; v < n_struct_; ++v) {
            lo_[v] = prob.lower[v];
            hi_[v] = prob.upper[v];
            cost_[v] = prob.objective[v];
        }
        for (int r = 0; r < m_; ++r) {
            const auto& row = prob.constraints[r];
            for (const auto& [idx, coef] : row.coeffs) cols_[idx][r] += coef;
            rhs_[r] = row.rhs;
            const int s = n_struct_ + r;
            cols_[s][r] = 1.0;
            switch (row.rel) {
                case Relation::le: lo_[s] = 0.0; hi_[s] = kInf; break;
                case Relation::ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
                case Relation::eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
            }
        }
        // Nonbasic start: finite bound nearest zero, or free at zero.
        stat_.assign(n_, BasisStatus::at_lower);
        for (int v = 0; v < n_; ++v) {
            if (lo_[v] == -kInf && hi_[v] == kInf)
                stat_[v] = BasisStatus::nonbasic_free;
            else if (lo_[v] == -kInf)
                stat_[v] = BasisStatus::at_upper;
            else
                stat_[v] = BasisStatus::at_lower;
        }
        // Artificial basis covering each row's residual.
        n_art_base_ = n_;
        std::vector<double> resid(rhs_);
        for (int v = 0; v < n_; ++v) {
            const double xv = nonbasic_value(v);
            if (xv != 0.0)
                for (int r = 0; r < m_; ++r) resid[r] -= cols_[v][r] * xv;
        }
        basis_.resize(m_);
        xb_.resize(m_);
        phase1_cost_.assign(n_, 0.0);
        for (int r = 0; r < m_; ++r) {
            cols_.emplace_back(m_, 0.0);
            const int a = n_++;
            cols_[a][r] = resid[r] >= 0.0 ? 1.0 : -1.0;
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            cost_.push_back(0.0);
            phase1_cost_.push_back(1.0);
            stat_.push_back(BasisStatus::basic);
            basis_[r] = a;
            xb_[r] = std::abs(resid[r]);
        }
        binv_.assign(m_, std::vector<double>(m_, 0.0));
        for (int r = 0; r < m_; ++r) binv_[r][r] = cols_[basis_[r]][r];  // +-1, self-inverse
        pivots_since_factor_ = 0;
        stall_count_ = 0;
        bland_ = false;
    }

    double nonbasic_value(int v) const {
        switch (stat_[v]) {
            case BasisStatus::at_lower: return lo_[v];
            case BasisStatus::at_upper: return hi_[v];
            default: return 0.0;
        }
    }

    LpStatus run_phase1() {
        double p1 = 0.0;
        for (double v : xb_) p1 += std::abs(v);
        double scale = 1.0;
        for (double b : rhs_) scale = std::max(scale, std::abs(b));
        if (p1 <= params_.feas_tol * scale) {
            fix_artificials();
            return LpStatus::optimal;
        }
        LpStatus st = iterate(phase1_cost_, /*phase1=*/true);
        if (st == LpStatus::iteration_limit) return st;
        double obj = 0.0;
        for (int r = 0; r < m_; ++r)
            if (basis_[r] >= n_art_base_) obj += xb_[r];
        if (obj > params_.feas_tol * scale * 10.0) return LpStatus::infeasible;
        fix_artificials();
        return LpStatus::optimal;
    }

    void fix_artificials() {
        for (int v = n_art_base_; v < n_; ++v) {
            hi_[v] = 0.0;
            if (stat_[v] != BasisStatus::basic) stat_[v] = BasisStatus::at_lower;
        }
    }

    LpStatus run_phase2() {
        stall_count_ = 0;
        bland_ = false;
        return iterate(cost_, /*phase1=*/false);
    }

    LpStatus iterate(const std::vector<double>& c, bool phase1) {
        std::vector<double> y(m_), d(n_);
        double last_obj = std::numeric_limits<double>::quiet_NaN();
        for (int iter = 0; iter < params_.max_iters; ++iter) {
            // y = c_B^T B^{-1}
            for (int r = 0; r < m_; ++r) y[r] = 0.0;
            for (int r = 0; r < m_; ++r) {
                const double cb = c[basis_[r]];
                if (cb != 0.0)
                    for (int k = 0; k < m_; ++k) y[k] += cb * binv_[r][k];
            }
            // pricing
            int enter = -1;
            int dir = 0;
            double best = params_.opt_tol;
            for (int v = 0; v < n_; ++v) {
                if (stat_[v] == BasisStatus::basic) continue;
                if (lo_[v] == hi_[v]) continue;  // fixed, cannot move
                double dj = c[v];
                const auto& col = cols_[v];
                for (int r = 0; r < m_; ++r) dj -= y[r] * col[r];
                d[v] = dj;
                const bool can_up = stat_[v] != BasisStatus::at_upper;
                const bool can_down = stat_[v] != BasisStatus::at_lower;
                double viol = 0.0;
                int vdir = 0;
                if (can_up && dj < -best) { viol = -dj; vdir = +1; }
                if (can_down && dj > best && dj > viol) { viol = dj; vdir = -1; }
                if (vdir != 0) {
                    if (bland_) { enter = v; dir = vdir; break; }
                    if (viol > best) { best = viol; enter = v; dir = vdir; }
                }
            }
            if (enter < 0) return LpStatus::optimal;

            // w = B^{-1} a_enter
            std::vector<double> w(m_, 0.0);
            const auto& acol = cols_[enter];
            for (int r = 0; r < m_; ++r) {
                double s = 0.0;
                for (int k = 0; k < m_; ++k) s += binv_[r][k] * acol[k];
                w[r] = s;
            }

            // ratio test; basic vars move by -dir * t * w
            double t = kInf;
            int leave_row = -1;
            int leave_to = 0;  // -1 lower, +1 upper
            for (int r = 0; r < m_; ++r) {
                const double delta = dir * w[r];
                if (std::abs(w[r]) <= kPivotTol) continue;
                const int bv = basis_[r];
                if (delta > 0.0 && lo_[bv] != -kInf) {
                    const double tr = (xb_[r] - lo_[bv]) / delta;
                    if (tr < t - 1e-12 ||
                        (tr < t + 1e-12 &&
                         (leave_row < 0 || std::abs(w[r]) > std::abs(w[leave_row])))) {
                        t = std::max(0.0, tr);
                        leave_row = r;
                        leave_to = -1;
                    }
                } else if (delta < 0.0 && hi_[bv] != kInf) {
                    const double tr = (hi_[bv] - xb_[r]) / (-delta);
                    if (tr < t - 1e-12 ||
                        (tr < t + 1e-12 &&
                         (leave_row < 0 || std::abs(w[r]) > std::abs(w[leave_row])))) {
                        t = std::max(0.0, tr);
                        leave_row = r;
                        leave_to = +1;
                    }
                }
            }
            const double range = hi_[enter] - lo_[enter];
            bool bound_flip = false;
            if (range < t) {
                t = range;
                bound_flip = true;
            }
            if (t == kInf) return phase1 ? LpStatus::infeasible : LpStatus::unbounded;

            // apply the step
            if (t > 0.0)
                for (int r = 0; r < m_; ++r) xb_[r] -= dir * t * w[r];
            if (bound_flip) {
                stat_[enter] = dir > 0 ? BasisStatus::at_upper : BasisStatus::at_lower;
            } else {
                const int leave_var = basis_[leave_row];
                stat_[leave_var] = leave_to < 0 ? BasisStatus::at_lower : BasisStatus::at_upper;
                const double enter_val = nonbasic_value_for_entry(enter) + dir * t;
                basis_[leave_row] = enter;
                stat_[enter] = BasisStatus::basic;
                xb_[leave_row] = enter_val;
                pivot_update(leave_row, w);
                if (++pivots_since_factor_ >= 100) refactor();
            }

            // stall detection -> Bland's rule
            double obj = 0.0;
            for (int r = 0; r < m_; ++r) obj += c[basis_[r]] * xb_[r];
            if (!std::isnan(last_obj) && obj >= last_obj - 1e-12) {
                if (++stall_count_ > m_ + 50) bland_ = true;
            } else {
                stall_count_ = 0;
            }
            last_obj = obj;
        }
        return LpStatus::iteration_limit;
    }

    double nonbasic_value_for_entry(int v) const {
        if (stat_[v] == BasisStatus::nonbasic_free) return 0.0;
        return stat_[v] == BasisStatus::at_lower ? lo_[v] : hi_[v];
    }

    void pivot_update(int r, const std::vector<double>& w) {
        const double piv = w[r];
        auto& row_r = binv_[r];
        for (int k = 0; k < m_; ++k) row_r[k] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r || w[i] == 0.0) continue;
            const double f = w[i];
            auto& row_i = binv_[i];
            for (int k = 0; k < m_; ++k) row_i[k] -= f * row_r[k];
        }
    }

    /// Rebuild B^{-1} from scratch and recompute basic values; throws when
    /// the basis matrix has degraded numerically.
    void refactor() {
        pivots_since_factor_ = 0;
        std::vector<std::vector<double>> a(m_, std::vector<double>(2 * m_, 0.0));
        for (int r = 0; r < m_; ++r) {
            for (int i = 0; i < m_; ++i) a[i][r] = cols_[basis_[r]][i];
            a[r][m_ + r] = 1.0;
        }
        for (int col = 0; col < m_; ++col) {
            int piv = col;
            for (int r = col + 1; r < m_; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (std::abs(a[piv][col]) < 1e-11)
                throw std::runtime_error("simplex: basis factorization degraded (singular)");
            std::swap(a[piv], a[col]);
            const double p = a[col][col];
            for (int k = col; k < 2 * m_; ++k) a[col][k] /= p;
            for (int r = 0; r < m_; ++r) {
                if (r == col) continue;
                const double f = a[r][col];
                if (f == 0.0) continue;
                for (int k = col; k < 2 * m_; ++k) a[r][k] -= f * a[col][k];
            }
        }
        for (int r = 0; r < m_; ++r)
            for (int k = 0; k < m_; ++k) binv_[r][k] = a[r][m_ + k];
        // refresh basic values from the nonbasic point
        std::vector<double> resid(rhs_);
        for (int v = 0; v < n_; ++v) {
            if (stat_[v] == BasisStatus::basic) continue;
            const double xv = nonbasic_value(v);
            if (xv != 0.0)
                for (int r = 0; r < m_; ++r) resid[r] -= cols_[v][r] * xv;
        }
        for (int r = 0; r < m_; ++r) {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += binv_[r][k] * resid[k];
            xb_[r] = s;
        }
    }

    LpSolution extract(const MilpProblem& prob, LpStatus st) const {
        LpSolution sol;
        sol.status = st;
        sol.values.assign(n_struct_, 0.0);
        sol.basis.assign(n_struct_, BasisStatus::at_lower);
        for (int v = 0; v < n_struct_; ++v) {
            sol.basis[v] = stat_[v];
            sol.values[v] = nonbasic_value(v);
        }
        for (int r = 0; r < m_; ++r)
            if (basis_[r] < n_struct_) sol.values[basis_[r]] = xb_[r];
        if (st == LpStatus::optimal || st == LpStatus::iteration_limit) {
            double obj = 0.0;
            for (int v = 0; v < n_struct_; ++v) obj += prob.objective[v] * sol.values[v];
            sol.objective = obj;
        }
        return sol;
    }
};

/// Solves the LP relaxation of `prob` (integrality flags are ignored).
inline LpSolution solve_lp(const MilpProblem& prob, const LpParams& params = {}) {
    SimplexSolver solver(params);
    return solver.solve(prob);
}

}  // namespace cog
