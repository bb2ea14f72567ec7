#pragma once

#include <vector>

#include "cog/bnb.hpp"
#include "cog/formulation.hpp"
#include "cog/model.hpp"

namespace cog {

/// Maps a MILP solution vector back to the domain: opened sites, flows,
/// and evaluator-recomputed metrics.
inline Solution extract_solution(const MilpSolution& milp,
                                 const std::vector<Customer>& customers,
                                 const std::vector<Site>& sites, const Scenario& scenario,
                                 const VarLayout& layout) {
    Solution sol;
    sol.solver_status = milp.status;
    if (milp.status == SolveStatus::infeasible || milp.values.empty()) return sol;

    for (int j = 0; j < layout.num_sites; ++j)
        if (milp.values[layout.open_var(j)] > 0.5) sol.opened.insert(sites[j].id);
    for (int i = 0; i < layout.num_customers; ++i)
        for (int j = 0; j < layout.num_sites; ++j) {
            double f = milp.values[layout.flow_var(i, j)];
            if (layout.single_source) f = f > 0.5 ? customers[i].demand : 0.0;
            if (f > 1e-9) sol.flows[{customers[i].id, sites[j].id}] = f;
        }
    const Evaluation ev = evaluate(sol, customers, sites, scenario);
    sol.objective = ev.objective;
    sol.transport_cost = ev.transport_cost;
    sol.fixed_cost = ev.fixed_cost;
    sol.wad = ev.wad;
    sol.pct_within = ev.pct_within;
    return sol;
}

/// Flat solve: one MILP over the full candidate set.
inline Solution solve_instance(const std::vector<Customer>& customers,
                               const std::vector<Site>& sites, const Scenario& scenario,
                               const BnbParams& params = {},
                               const BuildOptions& build_opts = {}) {
    std::vector<GeoPoint> cpts, spts;
    for (const auto& c : customers) cpts.push_back(c.point);
    for (const auto& s : sites) spts.push_back(s.point);
    const DistanceMatrix dist = distance_matrix(cpts, spts, scenario.metric);
    BuiltProblem built = build(customers, sites, scenario, dist, build_opts);
    const MilpSolution milp = solve_milp(built.problem, params);
    return extract_solution(milp, customers, sites, scenario, built.layout);
}

}  // namespace cog
