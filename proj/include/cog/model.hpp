#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cog/geo.hpp"

namespace cog {

struct Customer {
    std::string id;
    GeoPoint point;
    double demand = 0.0;  // shipment weight or volume per period
    std::string state;
};

enum class SiteStatus { existing_open, existing_closed, greenfield_candidate };

struct Site {
    std::string id;
    GeoPoint point;
    std::string state;
    SiteStatus status = SiteStatus::greenfield_candidate;
    double fixed_cost = 0.0;
};

struct StateAttr {
    std::string name;
    double area = 0.0;  // square miles
};

enum class CardinalityMode { exact, at_most };

struct Scenario {
    int warehouse_limit = 1;
    CardinalityMode cardinality_mode = CardinalityMode::exact;
    std::optional<double> mad_limit;      // miles
    std::optional<double> mpct_fraction;  // in [0,1]
    std::optional<double> mpct_radius;    // miles, required iff mpct_fraction set
    bool single_source = false;
    std::set<std::string> forced_open;
    std::set<std::string> forced_closed;
    Metric metric = Metric::haversine;

    void validate() const {
        if (warehouse_limit < 1)
            throw std::invalid_argument("Scenario: warehouse_limit must be >= 1");
        if (mpct_fraction.has_value() != mpct_radius.has_value())
            throw std::invalid_argument(
                "Scenario: mpct_fraction and mpct_radius must be set together");
        if (mpct_fraction && (*mpct_fraction < 0.0 || *mpct_fraction > 1.0))
            throw std::invalid_argument("Scenario: mpct_fraction must be in [0,1]");
        if (mad_limit && *mad_limit < 0.0)
            throw std::invalid_argument("Scenario: mad_limit must be >= 0");
        for (const auto& id : forced_open)
            if (forced_closed.count(id))
                throw std::invalid_argument(
                    "Scenario: site '" + id + "' both forced open and forced closed");
        if (static_cast<int>(forced_open.size()) > warehouse_limit)
            throw std::invalid_argument(
                "Scenario: more forced-open sites than the warehouse limit");
    }
};

enum class SolveStatus { optimal, feasible, infeasible, limit_reached };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible: return "feasible";
        case SolveStatus::infeasible: return "infeasible";
        default: return "limit_reached";
    }
}

struct Solution {
    std::set<std::string> opened;
    std::map<std::pair<std::string, std::string>, double> flows;  // (customer, site) -> weight
    double objective = 0.0;
    double transport_cost = 0.0;
    double fixed_cost = 0.0;
    double wad = 0.0;           // sum(flow*dist) / total demand, miles
    double pct_within = 0.0;    // fraction of demand served within mpct_radius
    SolveStatus solver_status = SolveStatus::infeasible;
};

/// Constraint residuals recomputed from first principles; all values are
/// violation amounts (0 when satisfied).
struct Evaluation {
    double objective = 0.0;
    double transport_cost = 0.0;
    double fixed_cost = 0.0;
    double wad = 0.0;
    double pct_within = 0.0;
    double total_demand = 0.0;
    double demand_shortfall = 0.0;    // max over customers of (demand - served)
    double over_service = 0.0;        // max over customers of (served - demand)
    double closed_site_flow = 0.0;    // total flow into non-opened sites
    double mad_violation = 0.0;       // wad - mad_limit, clamped at 0
    double mpct_violation = 0.0;      // mpct_fraction - pct_within, clamped at 0
    int cardinality_violation = 0;    // |opened| vs limit mismatch
};

/// Recomputes objective and all constraint residuals independently of any
/// solver path.
inline Evaluation evaluate(const Solution& sol, const std::vector<Customer>& customers,
                           const std::vector<Site>& sites, const Scenario& scenario) {
    std::map<std::string, std::size_t> cidx, sidx;
    for (std::size_t i = 0; i < customers.size(); ++i) cidx[customers[i].id] = i;
    for (std::size_t j = 0; j < sites.size(); ++j) sidx[sites[j].id] = j;

    for (const auto& id : sol.opened)
        if (!sidx.count(id))
            throw std::invalid_argument("evaluate: unknown site id '" + id + "'");

    Evaluation ev;
    for (const auto& c : customers) ev.total_demand += c.demand;

    std::vector<double> served(customers.size(), 0.0);
    for (const auto& [key, flow] : sol.flows) {
        const auto& [cid, sid] = key;
        auto ci = cidx.find(cid);
        auto sj = sidx.find(sid);
        if (ci == cidx.end())
            throw std::invalid_argument("evaluate: unknown customer id '" + cid + "'");
        if (sj == sidx.end())
            throw std::invalid_argument("evaluate: unknown site id '" + sid + "'");
        if (flow < 0.0)
            throw std::invalid_argument("evaluate: negative flow on (" + cid + "," + sid + ")");
        const double d = distance_miles(customers[ci->second].point,
                                        sites[sj->second].point, scenario.metric);
        ev.transport_cost += flow * d;
        served[ci->second] += flow;
        if (!sol.opened.count(sid)) ev.closed_site_flow += flow;
        if (scenario.mpct_radius && d <= *scenario.mpct_radius) ev.pct_within += flow;
    }
    if (ev.total_demand > 0.0) {
        ev.wad = ev.transport_cost / ev.total_demand;
        ev.pct_within /= ev.total_demand;
    }
    for (std::size_t i = 0; i < customers.size(); ++i) {
        ev.demand_shortfall = std::max(ev.demand_shortfall, customers[i].demand - served[i]);
        ev.over_service = std::max(ev.over_service, served[i] - customers[i].demand);
    }
    for (const auto& id : sol.opened) ev.fixed_cost += sites[sidx[id]].fixed_cost;
    ev.objective = ev.transport_cost + ev.fixed_cost;

    if (scenario.mad_limit)
        ev.mad_violation = std::max(0.0, ev.wad - *scenario.mad_limit);
    if (scenario.mpct_fraction)
        ev.mpct_violation = std::max(0.0, *scenario.mpct_fraction - ev.pct_within);
    const int n_open = static_cast<int>(sol.opened.size());
    if (scenario.cardinality_mode == CardinalityMode::exact)
        ev.cardinality_violation = std::abs(n_open - scenario.warehouse_limit);
    else
        ev.cardinality_violation = std::max(0, n_open - scenario.warehouse_limit);
    return ev;
}

}  // namespace cog
