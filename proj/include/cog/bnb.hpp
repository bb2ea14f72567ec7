#pragma once

#include <chrono>
#include <cmath>
#include <deque>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "cog/formulation.hpp"
#include "cog/lp.hpp"

namespace cog {

enum class BranchRule { most_fractional, pseudo_cost };
enum class SearchOrder { best_bound, depth_first_dive };

struct BnbParams {
    double int_tol = 1e-6;
    double rel_gap = 1e-6;
    long node_limit = 200000;
    double time_limit = 0.0;  // seconds; 0 = no limit
    BranchRule branching = BranchRule::most_fractional;
    SearchOrder search = SearchOrder::best_bound;
    LpParams lp;
    std::ostream* node_log = nullptr;
    // Optional warm incumbent (full variable vector, must be integer-feasible).
    std::optional<std::vector<double>> warm_start;
};

struct MilpSolution {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;
    double bound = -kInf;  // best lower bound (minimization)
    long nodes_explored = 0;
};

struct BnbNode {
    std::vector<double> lower, upper;
    double parent_bound = -kInf;
    int depth = 0;
    long id = 0;
    // how this node was created, for pseudo-cost updates
    int branch_var = -1;
    bool branch_up = false;
    double branch_frac = 0.0;
};

/// Child subproblems from a fractional value: floor on one side, ceil on
/// the other. The integer-feasible sets of the children partition the
/// parent's.
inline std::pair<BnbNode, BnbNode> branch(const BnbNode& node, int var_index,
                                          double frac_value) {
    const double fl = std::floor(frac_value), ce = std::ceil(frac_value);
    if (fl == ce)
        throw std::logic_error("branch: variable value is already integral");
    BnbNode low = node, high = node;
    low.upper[var_index] = std::min(low.upper[var_index], fl);
    high.lower[var_index] = std::max(high.lower[var_index], ce);
    low.depth = high.depth = node.depth + 1;
    return {std::move(low), std::move(high)};
}

/// LP-based branch and bound. Branches only on integral variables, prunes
/// by LP bounds, dives depth-first to a first incumbent, then switches to
/// best-bound order. Deterministic: ties broken by lowest variable index
/// and lowest node id.
class BnbSolver {
  public:
    explicit BnbSolver(BnbParams params = {}) : params_(params) {}

    MilpSolution solve(const MilpProblem& prob) {
        prob_ = &prob;
        const auto t0 = std::chrono::steady_clock::now();
        int_vars_.clear();
        for (int v = 0; v < prob.num_vars; ++v)
            if (prob.kind[v] == VarKind::binary) int_vars_.push_back(v);
        pseudo_up_.assign(prob.num_vars, 0.0);
        pseudo_down_.assign(prob.num_vars, 0.0);
        pseudo_n_up_.assign(prob.num_vars, 0);
        pseudo_n_down_.assign(prob.num_vars, 0);

        MilpSolution out;
        double incumbent_obj = kInf;
        std::vector<double> incumbent;
        if (params_.warm_start && is_integral(*params_.warm_start)) {
            incumbent = *params_.warm_start;
            incumbent_obj = dot_obj(incumbent);
        }

        BnbNode root;
        root.lower = prob.lower;
        root.upper = prob.upper;
        root.id = next_id_++;

        // dive stack until a first incumbent exists, then best-bound queue
        std::deque<BnbNode> stack;
        auto cmp = [](const BnbNode& a, const BnbNode& b) {
            if (a.parent_bound != b.parent_bound) return a.parent_bound > b.parent_bound;
            return a.id > b.id;
        };
        std::priority_queue<BnbNode, std::vector<BnbNode>, decltype(cmp)> pq(cmp);
        stack.push_back(std::move(root));

        long nodes = 0;
        bool limit_hit = false;
        bool root_infeasible = false;

        while (!stack.empty() || !pq.empty()) {
            if (nodes >= params_.node_limit || time_up(t0)) {
                limit_hit = true;
                break;
            }
            const bool diving =
                !stack.empty() &&
                (params_.search == SearchOrder::depth_first_dive || incumbent.empty());
            BnbNode node;
            if (diving) {
                node = std::move(stack.back());
                stack.pop_back();
            } else {
                while (!stack.empty()) {  // dive over; merge into the queue
                    pq.push(std::move(stack.back()));
                    stack.pop_back();
                }
                node = pq.top();
                pq.pop();
            }
            ++nodes;

            // prune against the incumbent before the LP when possible
            const double prune_tol =
                params_.rel_gap * std::max(1.0, std::abs(incumbent_obj));
            if (!incumbent.empty() && node.parent_bound >= incumbent_obj - prune_tol) {
                log_node(node, node.parent_bound, "pruned_parent");
                continue;
            }

            MilpProblem sub = *prob_;
            sub.lower = node.lower;
            sub.upper = node.upper;
            LpSolution lp = solve_lp(lp_relaxation(sub), params_.lp);
            if (lp.status == LpStatus::infeasible) {
                log_node(node, kInf, "infeasible");
                if (nodes == 1) root_infeasible = true;
                continue;
            }
            if (lp.status == LpStatus::unbounded) {
                log_node(node, -kInf, "unbounded");
                out.status = SolveStatus::infeasible;  // cannot happen for built problems
                continue;
            }
            if (lp.status == LpStatus::iteration_limit) {
                limit_hit = true;
                log_node(node, lp.objective, "lp_limit");
                continue;
            }
            const double node_bound = lp.objective;
            if (node.branch_var >= 0 && node_bound > node.parent_bound) {
                const double gain = node_bound - node.parent_bound;
                if (node.branch_up) {
                    pseudo_up_[node.branch_var] += gain / (1.0 - node.branch_frac);
                    ++pseudo_n_up_[node.branch_var];
                } else {
                    pseudo_down_[node.branch_var] += gain / node.branch_frac;
                    ++pseudo_n_down_[node.branch_var];
                }
            }
            if (!incumbent.empty() && node_bound >= incumbent_obj - prune_tol) {
                log_node(node, node_bound, "pruned_bound");
                continue;
            }

            const int bvar = pick_branch_var(lp.values, node);
            if (bvar < 0) {
                if (node_bound < incumbent_obj) {
                    incumbent = lp.values;
                    incumbent_obj = node_bound;
                    log_node(node, node_bound, "incumbent");
                } else {
                    log_node(node, node_bound, "integral");
                }
                continue;
            }
            log_node(node, node_bound, "branch x" + std::to_string(bvar));
            const double fv = lp.values[bvar];
            auto [low, high] = branch(node, bvar, fv);
            low.parent_bound = high.parent_bound = node_bound;
            low.branch_var = high.branch_var = bvar;
            low.branch_up = false;
            high.branch_up = true;
            low.branch_frac = high.branch_frac = fv - std::floor(fv);
            // process the child nearest the fractional value first when diving
            const bool low_first = (fv - std::floor(fv)) <= 0.5;
            low.id = next_id_++;
            high.id = next_id_++;
            if (diving) {
                if (low_first) {
                    stack.push_back(std::move(high));
                    stack.push_back(std::move(low));
                } else {
                    stack.push_back(std::move(low));
                    stack.push_back(std::move(high));
                }
            } else {
                pq.push(std::move(low));
                pq.push(std::move(high));
            }
        }

        // best bound over unexplored nodes
        double open_bound = kInf;
        bool any_open = false;
        while (!pq.empty()) {
            open_bound = std::min(open_bound, pq.top().parent_bound);
            any_open = true;
            pq.pop();
        }
        for (const auto& n : stack) {
            open_bound = std::min(open_bound, n.parent_bound);
            any_open = true;
        }

        out.nodes_explored = nodes;
        if (incumbent.empty()) {
            out.status = limit_hit ? SolveStatus::limit_reached : SolveStatus::infeasible;
            out.bound = any_open ? open_bound : kInf;
            return out;
        }
        out.values = incumbent;
        out.objective = incumbent_obj;
        out.bound = any_open ? std::min(open_bound, incumbent_obj) : incumbent_obj;
        if (limit_hit && any_open)
            out.status = SolveStatus::limit_reached;
        else
            out.status = SolveStatus::optimal;
        (void)root_infeasible;
        return out;
    }

  private:
    BnbParams params_;
    const MilpProblem* prob_ = nullptr;
    std::vector<int> int_vars_;
    long next_id_ = 0;
    std::vector<double> pseudo_up_, pseudo_down_;
    std::vector<int> pseudo_n_up_, pseudo_n_down_;

    bool time_up(std::chrono::steady_clock::time_point t0) const {
        if (params_.time_limit <= 0.0) return false;
        const auto dt = std::chrono::steady_clock::now() - t0;
        return std::chrono::duration<double>(dt).count() > params_.time_limit;
    }

    double dot_obj(const std::vector<double>& x) const {
        double s = 0.0;
        for (int v = 0; v < prob_->num_vars; ++v) s += prob_->objective[v] * x[v];
        return s;
    }

    bool is_integral(const std::vector<double>& x) const {
        for (int v : int_vars_)
            if (std::abs(x[v] - std::round(x[v])) > params_.int_tol) return false;
        return true;
    }

    int pick_branch_var(const std::vector<double>& x, const BnbNode& node) const {
        int best = -1;
        double best_score = -1.0;
        for (int v : int_vars_) {
            if (node.lower[v] == node.upper[v]) continue;  // fixed by branching
            const double frac = x[v] - std::floor(x[v]);
            const double dist = std::min(frac, 1.0 - frac);
            if (dist <= params_.int_tol) continue;
            double score = dist;
            if (params_.branching == BranchRule::pseudo_cost &&
                pseudo_n_up_[v] + pseudo_n_down_[v] > 0) {
                const double up = pseudo_n_up_[v] ? pseudo_up_[v] / pseudo_n_up_[v] : 1.0;
                const double dn =
                    pseudo_n_down_[v] ? pseudo_down_[v] / pseudo_n_down_[v] : 1.0;
                score = std::min(up * (1.0 - frac), dn * frac);
            }
            if (score > best_score + 1e-15) {
                best_score = score;
                best = v;
            }
        }
        return best;
    }

    void log_node(const BnbNode& n, double bound, const std::string& action) const {
        if (!params_.node_log) return;
        (*params_.node_log) << n.id << " depth=" << n.depth << " bound=" << bound << " "
                            << action << "\n";
    }
};

inline MilpSolution solve_milp(const MilpProblem& prob, const BnbParams& params = {}) {
    BnbSolver solver(params);
    return solver.solve(prob);
}

}  // namespace cog
