#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cog/model.hpp"
#include "cog/reduction.hpp"
#include "cog/solve.hpp"

namespace cog {

struct StepWellConfig {
    int coarse_total_candidates = 12;
    int fine_candidates_per_state = 4;
    int packet_target = 150;
    unsigned seed = 42;
    BnbParams bnb;
};

struct StepWellReport {
    Solution stage1;
    std::set<std::string> selected_states;
    Solution stage2;
    double stage1_seconds = 0.0;        // total stage time incl. presolve
    double stage1_solve_seconds = 0.0;  // MILP solve only
    double stage2_seconds = 0.0;
    std::vector<ClsRecord> cls;
    std::vector<Site> stage2_sites;
    int stage1_num_vars = 0;
};

namespace detail {

inline std::vector<Customer> customers_in_state(const std::vector<Customer>& customers,
                                                const std::string& state) {
    std::vector<Customer> out;
    for (const auto& c : customers)
        if (c.state == state) out.push_back(c);
    return out;
}

inline std::vector<Customer> packets_as_customers(const std::vector<Packet>& packets) {
    std::vector<Customer> out;
    for (const auto& p : packets) out.push_back({p.id, p.point, p.demand, p.state});
    return out;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Per-state candidate generation driven by CLS apportionment.
inline std::vector<Site> cls_candidates(const std::vector<Customer>& customers,
                                        const std::vector<StateAttr>& states,
                                        const std::vector<Site>& existing_sites,
                                        int total_candidates, unsigned seed,
                                        const std::string& id_prefix = "cand") {
    const auto records = cls_scores(states, customers, existing_sites, total_candidates);
    std::vector<Site> out;
    for (const auto& rec : records) {
        auto in_state = detail::customers_in_state(customers, rec.state);
        if (in_state.empty()) continue;
        auto sites = generate_candidates(in_state, rec.allocation, seed,
                                         id_prefix + "_" + rec.state);
        out.insert(out.end(), sites.begin(), sites.end());
    }
    return out;
}

/// Uniform per-state candidate generation (no CLS weighting).
inline std::vector<Site> uniform_candidates(const std::vector<Customer>& customers,
                                            const std::vector<StateAttr>& states,
                                            int per_state, unsigned seed,
                                            const std::string& id_prefix = "cand") {
    std::vector<Site> out;
    for (const auto& st : states) {
        auto in_state = detail::customers_in_state(customers, st.name);
        if (in_state.empty()) continue;
        auto sites =
            generate_candidates(in_state, per_state, seed, id_prefix + "_" + st.name);
        out.insert(out.end(), sites.begin(), sites.end());
    }
    return out;
}

/// One MILP over per-state generated candidates plus the existing sites.
inline Solution flat_solve(const std::vector<Customer>& customers,
                           const std::vector<StateAttr>& states,
                           const std::vector<Site>& existing_sites,
                           const Scenario& scenario, int candidates_per_state,
                           unsigned seed = 42, const BnbParams& params = {}) {
    std::vector<Site> pool =
        uniform_candidates(customers, states, candidates_per_state, seed, "cand");
    pool.insert(pool.end(), existing_sites.begin(), existing_sites.end());
    return solve_instance(customers, pool, scenario, params);
}

/// Two-stage coarse-to-fine solve. Stage 1 aggregates customers into
/// packets, apportions coarse candidates across states by CLS score, and
/// solves the reduced MILP. Stage 2 regenerates dense candidates inside
/// the states stage 1 opened in and re-solves on the raw customers.
inline StepWellReport step_well_solve(const std::vector<Customer>& customers,
                                      const std::vector<StateAttr>& states,
                                      const std::vector<Site>& existing_sites,
                                      const Scenario& scenario,
                                      const StepWellConfig& cfg = {}) {
    scenario.validate();
    if (cfg.coarse_total_candidates < 1 || cfg.fine_candidates_per_state < 1 ||
        cfg.packet_target < 1)
        throw std::invalid_argument("step_well_solve: config counts must be >= 1");

    StepWellReport rep;
    const auto t0 = std::chrono::steady_clock::now();

    // Stage 1: packets x coarse candidates
    const auto packets = build_packets_count(customers, cfg.packet_target, cfg.seed);
    const auto packet_customers = detail::packets_as_customers(packets);
    rep.cls = cls_scores(states, customers, existing_sites,
                         std::max<int>(cfg.coarse_total_candidates,
                                       static_cast<int>(states.size())));
    std::vector<Site> coarse;
    for (const auto& rec : rep.cls) {
        auto in_state = detail::customers_in_state(customers, rec.state);
        if (in_state.empty()) continue;
        auto sites =
            generate_candidates(in_state, rec.allocation, cfg.seed, "coarse_" + rec.state);
        coarse.insert(coarse.end(), sites.begin(), sites.end());
    }
    coarse.insert(coarse.end(), existing_sites.begin(), existing_sites.end());

    {
        std::vector<GeoPoint> cpts, spts;
        for (const auto& c : packet_customers) cpts.push_back(c.point);
        for (const auto& s : coarse) spts.push_back(s.point);
        const DistanceMatrix dist = distance_matrix(cpts, spts, scenario.metric);
        BuiltProblem built = build(packet_customers, coarse, scenario, dist);
        rep.stage1_num_vars = built.problem.num_vars;
        const auto ts = std::chrono::steady_clock::now();
        const MilpSolution milp = solve_milp(built.problem, cfg.bnb);
        rep.stage1_solve_seconds = detail::seconds_since(ts);
        rep.stage1 =
            extract_solution(milp, packet_customers, coarse, scenario, built.layout);
    }
    rep.stage1_seconds = detail::seconds_since(t0);
    if (rep.stage1.solver_status == SolveStatus::infeasible)
        throw std::runtime_error(
            "step_well_solve: stage 1 infeasible (scenario constraints cannot be met "
            "on the coarse candidate set)");

    // states hosting stage-1 openings, plus states of forced-open sites
    std::map<std::string, const Site*> site_by_id;
    for (const auto& s : coarse) site_by_id[s.id] = &s;
    for (const auto& id : rep.stage1.opened) rep.selected_states.insert(site_by_id[id]->state);
    for (const auto& s : existing_sites)
        if (scenario.forced_open.count(s.id)) rep.selected_states.insert(s.state);

    // Stage 2: raw customers x fine candidates within the selected states
    const auto t1 = std::chrono::steady_clock::now();
    std::vector<Site> fine;
    for (const auto& state : rep.selected_states) {
        auto in_state = detail::customers_in_state(customers, state);
        if (in_state.empty()) continue;
        auto sites = generate_candidates(in_state, cfg.fine_candidates_per_state, cfg.seed,
                                         "fine_" + state);
        fine.insert(fine.end(), sites.begin(), sites.end());
    }
    for (const auto& s : existing_sites)
        if (rep.selected_states.count(s.state) || scenario.forced_open.count(s.id))
            fine.push_back(s);
    rep.stage2_sites = fine;
    rep.stage2 = solve_instance(customers, fine, scenario, cfg.bnb);
    rep.stage2_seconds = detail::seconds_since(t1);
    return rep;
}

struct ScenarioOverrides {
    double demand_scale = 1.0;
    std::optional<int> warehouse_limit;
    std::set<std::string> force_open;
    std::set<std::string> force_closed;
    bool use_stepwell = false;
    int candidates_per_state = 4;  // flat-solve candidate density
};

/// Applies overrides to the base inputs and re-solves.
inline Solution run_scenario(const std::vector<Customer>& customers,
                             const std::vector<StateAttr>& states,
                             const std::vector<Site>& existing_sites,
                             Scenario scenario, const ScenarioOverrides& ov,
                             const StepWellConfig& cfg = {}) {
    if (ov.demand_scale < 0.0)
        throw std::invalid_argument("run_scenario: negative demand_scale");
    std::vector<Customer> scaled = customers;
    for (auto& c : scaled) c.demand *= ov.demand_scale;
    if (ov.warehouse_limit) scenario.warehouse_limit = *ov.warehouse_limit;
    scenario.forced_open.insert(ov.force_open.begin(), ov.force_open.end());
    scenario.forced_closed.insert(ov.force_closed.begin(), ov.force_closed.end());
    scenario.validate();
    if (ov.use_stepwell) {
        StepWellConfig c2 = cfg;
        return step_well_solve(scaled, states, existing_sites, scenario, c2).stage2;
    }
    return flat_solve(scaled, states, existing_sites, scenario, ov.candidates_per_state,
                      cfg.seed, cfg.bnb);
}

struct CompareResult {
    double wad_a = 0.0, wad_b = 0.0;
    double wad_diff_miles = 0.0;
    std::set<std::string> opened_only_a, opened_only_b;
};

/// Weighted-average-distance delta between two solved networks over the
/// same customers.
inline CompareResult compare(const Solution& a, const std::vector<Site>& sites_a,
                             const Solution& b, const std::vector<Site>& sites_b,
                             const std::vector<Customer>& customers,
                             const Scenario& scenario) {
    CompareResult r;
    r.wad_a = evaluate(a, customers, sites_a, scenario).wad;
    r.wad_b = evaluate(b, customers, sites_b, scenario).wad;
    r.wad_diff_miles = std::abs(r.wad_a - r.wad_b);
    for (const auto& id : a.opened)
        if (!b.opened.count(id)) r.opened_only_a.insert(id);
    for (const auto& id : b.opened)
        if (!a.opened.count(id)) r.opened_only_b.insert(id);
    return r;
}

}  // namespace cog
