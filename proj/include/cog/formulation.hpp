#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cog/geo.hpp"
#include "cog/model.hpp"

namespace cog {

enum class Relation { le, ge, eq };
enum class VarKind { continuous, binary };

struct Constraint {
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    Relation rel = Relation::le;
    double rhs = 0.0;
    std::string name;
};

/// Standard-form minimization MILP container.
struct MilpProblem {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<double> lower, upper;
    std::vector<VarKind> kind;
    std::vector<Constraint> constraints;
    std::vector<std::string> var_names;

    int add_var(double obj, double lo, double hi, VarKind k, std::string name) {
        objective.push_back(obj);
        lower.push_back(lo);
        upper.push_back(hi);
        kind.push_back(k);
        var_names.push_back(std::move(name));
        return num_vars++;
    }

    void add_constraint(Constraint c) {
        for (const auto& [idx, coef] : c.coeffs) {
            if (idx < 0 || idx >= num_vars)
                throw std::invalid_argument("MilpProblem: constraint '" + c.name +
                                            "' references invalid variable index");
            if (!std::isfinite(coef))
                throw std::invalid_argument("MilpProblem: non-finite coefficient in '" +
                                            c.name + "'");
        }
        constraints.push_back(std::move(c));
    }

    bool has_integrality() const {
        for (auto k : kind)
            if (k == VarKind::binary) return true;
        return false;
    }
};

/// Variable index bookkeeping for a built facility-location problem.
struct VarLayout {
    int num_sites = 0;
    int num_customers = 0;
    bool single_source = false;
    int open_var(int j) const { return j; }
    int flow_var(int i, int j) const { return num_sites + i * num_sites + j; }
};

struct BuildOptions {
    // The redundant aggregate-demand row; implied by the per-customer rows.
    bool include_total_demand_row = false;
};

struct BuiltProblem {
    MilpProblem problem;
    VarLayout layout;
};

/// Translates (customers, sites, scenario, distances) into a MILP.
///
/// Variables: one binary open decision per site, then one flow (or, in
/// single-source mode, binary assignment) variable per customer-site pair.
/// Rows: per-customer demand, cardinality, per-pair linking, optional MAD
/// and MPCT rows, and bound fixings for forced sites.
inline BuiltProblem build(const std::vector<Customer>& customers,
                          const std::vector<Site>& sites, const Scenario& scenario,
                          const DistanceMatrix& dist, const BuildOptions& opts = {}) {
    scenario.validate();
    const int x = static_cast<int>(customers.size());
    const int y = static_cast<int>(sites.size());
    if (x == 0 || y == 0) throw std::invalid_argument("build: empty customers or sites");
    if (dist.rows() != customers.size() || dist.cols() != sites.size())
        throw std::invalid_argument("build: distance matrix shape mismatch");
    for (const auto& id : scenario.forced_open) {
        bool found = false;
        for (const auto& s : sites) found = found || s.id == id;
        if (!found) throw std::invalid_argument("build: forced_open unknown site '" + id + "'");
    }
    for (const auto& id : scenario.forced_closed) {
        bool found = false;
        for (const auto& s : sites) found = found || s.id == id;
        if (!found) throw std::invalid_argument("build: forced_closed unknown site '" + id + "'");
    }

    double total_demand = 0.0;
    for (const auto& c : customers) total_demand += c.demand;

    BuiltProblem out;
    out.layout = {y, x, scenario.single_source};
    MilpProblem& p = out.problem;

    for (int j = 0; j < y; ++j) {
        double lo = 0.0, hi = 1.0;
        if (scenario.forced_open.count(sites[j].id)) lo = 1.0;
        if (scenario.forced_closed.count(sites[j].id)) hi = 0.0;
        p.add_var(sites[j].fixed_cost, lo, hi, VarKind::binary, "c_" + sites[j].id);
    }
    for (int i = 0; i < x; ++i)
        for (int j = 0; j < y; ++j) {
            const double d = dist.at(i, j);
            if (scenario.single_source)
                p.add_var(customers[i].demand * d, 0.0, 1.0, VarKind::binary,
                          "a_" + customers[i].id + "_" + sites[j].id);
            else
                p.add_var(d, 0.0, customers[i].demand, VarKind::continuous,
                          "f_" + customers[i].id + "_" + sites[j].id);
        }
    const auto& L = out.layout;

    // (a) demand satisfaction per customer
    for (int i = 0; i < x; ++i) {
        Constraint c;
        c.name = "demand_" + customers[i].id;
        if (scenario.single_source) {
            for (int j = 0; j < y; ++j) c.coeffs.push_back({L.flow_var(i, j), 1.0});
            c.rel = Relation::eq;
            c.rhs = 1.0;
        } else {
            for (int j = 0; j < y; ++j) c.coeffs.push_back({L.flow_var(i, j), 1.0});
            c.rel = Relation::ge;
            c.rhs = customers[i].demand;
        }
        p.add_constraint(std::move(c));
    }

    // (b) cardinality
    {
        Constraint c;
        c.name = "cardinality";
        for (int j = 0; j < y; ++j) c.coeffs.push_back({L.open_var(j), 1.0});
        c.rel = scenario.cardinality_mode == CardinalityMode::exact ? Relation::eq
                                                                    : Relation::le;
        c.rhs = scenario.warehouse_limit;
        p.add_constraint(std::move(c));
    }

    // (c) linking: flow only from opened sites
    for (int i = 0; i < x; ++i)
        for (int j = 0; j < y; ++j) {
            Constraint c;
            c.name = "link_" + customers[i].id + "_" + sites[j].id;
            const double cap = scenario.single_source ? 1.0 : customers[i].demand;
            c.coeffs.push_back({L.flow_var(i, j), 1.0});
            c.coeffs.push_back({L.open_var(j), -cap});
            c.rel = Relation::le;
            c.rhs = 0.0;
            p.add_constraint(std::move(c));
        }

    if (opts.include_total_demand_row && !scenario.single_source) {
        Constraint c;
        c.name = "total_demand";
        for (int i = 0; i < x; ++i)
            for (int j = 0; j < y; ++j) c.coeffs.push_back({L.flow_var(i, j), 1.0});
        c.rel = Relation::ge;
        c.rhs = total_demand;
        p.add_constraint(std::move(c));
    }

    // (d) MAD row, pre-multiplied by total demand to stay linear
    if (scenario.mad_limit) {
        Constraint c;
        c.name = "mad";
        for (int i = 0; i < x; ++i)
            for (int j = 0; j < y; ++j) {
                const double w = scenario.single_source ? customers[i].demand : 1.0;
                c.coeffs.push_back({L.flow_var(i, j), w * dist.at(i, j)});
            }
        c.rel = Relation::le;
        c.rhs = *scenario.mad_limit * total_demand;
        p.add_constraint(std::move(c));
    }

    // (e) MPCT row with p_ij = [d_ij <= radius]
    if (scenario.mpct_fraction) {
        Constraint c;
        c.name = "mpct";
        for (int i = 0; i < x; ++i)
            for (int j = 0; j < y; ++j)
                if (dist.at(i, j) <= *scenario.mpct_radius) {
                    const double w = scenario.single_source ? customers[i].demand : 1.0;
                    c.coeffs.push_back({L.flow_var(i, j), w});
                }
        c.rel = Relation::ge;
        c.rhs = *scenario.mpct_fraction * total_demand;
        p.add_constraint(std::move(c));
    }

    return out;
}

/// Same problem with every integrality flag dropped.
inline MilpProblem lp_relaxation(MilpProblem p) {
    for (auto& k : p.kind) k = VarKind::continuous;
    return p;
}

/// LP text format export (CPLEX LP-style), for cross-checks with external
/// solvers.
inline void write_lp(const MilpProblem& p, std::ostream& os) {
    os << "Minimize\n obj:";
    for (int v = 0; v < p.num_vars; ++v) {
        const double c = p.objective[v];
        if (c == 0.0) continue;
        os << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << p.var_names[v];
    }
    os << "\nSubject To\n";
    for (std::size_t r = 0; r < p.constraints.size(); ++r) {
        const auto& row = p.constraints[r];
        os << " " << (row.name.empty() ? "r" + std::to_string(r) : row.name) << ":";
        for (const auto& [idx, coef] : row.coeffs)
            os << (coef >= 0 ? " + " : " - ") << std::abs(coef) << " " << p.var_names[idx];
        os << (row.rel == Relation::le ? " <= " : row.rel == Relation::ge ? " >= " : " = ")
           << row.rhs << "\n";
    }
    os << "Bounds\n";
    for (int v = 0; v < p.num_vars; ++v) {
        os << " ";
        if (p.upper[v] == kInf)
            os << p.lower[v] << " <= " << p.var_names[v] << "\n";
        else
            os << p.lower[v] << " <= " << p.var_names[v] << " <= " << p.upper[v] << "\n";
    }
    bool any_bin = false;
    for (int v = 0; v < p.num_vars; ++v)
        if (p.kind[v] == VarKind::binary) {
            if (!any_bin) os << "Binaries\n";
            any_bin = true;
            os << " " << p.var_names[v] << "\n";
        }
    os << "End\n";
}

}  // namespace cog
