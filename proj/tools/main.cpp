// Command-line front end for the center-of-gravity network design toolkit.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cog/io.hpp"
#include "cog/median.hpp"
#include "cog/pipeline.hpp"
#include "cog/reduction.hpp"
#include "cog/solve.hpp"

namespace {

// exit code contract
constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kInputError = 2;
constexpr int kSolverLimit = 3;

struct CommonArgs {
    std::string demand_path;
    std::string warehouses_path;
    std::string states_path;
    std::string scenario_path;
    std::string out_dir;
    unsigned seed = 42;
    std::string metric = "haversine";
    int packet_target = 150;
    double time_limit = 0.0;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool demand_required = true) {
    auto* d = cmd->add_option("--demand", a.demand_path, "demand CSV");
    if (demand_required) d->required();
    cmd->add_option("--warehouses", a.warehouses_path, "existing warehouse CSV");
    cmd->add_option("--states", a.states_path, "state attribute CSV");
    cmd->add_option("--scenario", a.scenario_path, "scenario key=value file");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--seed", a.seed, "random seed (echoed in outputs)")
        ->default_val(42);
    cmd->add_option("--metric", a.metric, "distance metric: haversine|planar")
        ->check(CLI::IsMember({"haversine", "planar"}));
    cmd->add_option("--packet-target", a.packet_target, "customer packet count");
    cmd->add_option("--time-limit", a.time_limit, "solver time limit, seconds");
}

cog::Dataset load_dataset(const CommonArgs& a) {
    cog::Dataset ds;
    if (!a.demand_path.empty()) ds.customers = cog::read_demand_csv(a.demand_path);
    if (!a.warehouses_path.empty()) ds.sites = cog::read_warehouse_csv(a.warehouses_path);
    if (!a.states_path.empty()) ds.states = cog::read_state_csv(a.states_path);
    cog::validate_dataset(ds);
    return ds;
}

cog::Scenario load_scenario(const CommonArgs& a, unsigned* seed) {
    cog::Scenario sc;
    if (!a.scenario_path.empty()) {
        auto [s, file_seed] = cog::read_scenario(a.scenario_path);
        sc = s;
        if (seed) *seed = file_seed;
    }
    if (a.metric == "planar") sc.metric = cog::Metric::planar;
    return sc;
}

void check_forced_ids(const cog::Scenario& sc, const std::vector<cog::Site>& sites) {
    for (const auto& id : sc.forced_open) {
        bool found = false;
        for (const auto& s : sites) found = found || s.id == id;
        if (!found)
            throw std::runtime_error("scenario: forced_open references unknown site '" +
                                     id + "'");
    }
}

int status_exit(cog::SolveStatus st) {
    switch (st) {
        case cog::SolveStatus::optimal:
        case cog::SolveStatus::feasible: return kOk;
        case cog::SolveStatus::infeasible: return kInfeasible;
        default: return kSolverLimit;
    }
}

void print_summary(const cog::Solution& sol, unsigned seed) {
    std::cout << "status: " << cog::to_string(sol.solver_status) << "\n";
    if (sol.solver_status != cog::SolveStatus::infeasible) {
        std::cout << "objective: " << sol.objective << "\n"
                  << "transport_cost: " << sol.transport_cost << "\n"
                  << "fixed_cost: " << sol.fixed_cost << "\n"
                  << "wad_miles: " << sol.wad << "\n"
                  << "opened:";
        for (const auto& id : sol.opened) std::cout << " " << id;
        std::cout << "\n";
    }
    std::cout << "seed: " << seed << "\n";
}

int cmd_solve(const CommonArgs& a, int candidates_per_state, int limit_flag) {
    auto ds = load_dataset(a);
    unsigned seed = a.seed;
    cog::Scenario sc = load_scenario(a, &seed);
    if (limit_flag > 0) sc.warehouse_limit = limit_flag;

    std::vector<cog::Site> pool = ds.sites;
    if (!ds.states.empty() && candidates_per_state > 0) {
        auto cands =
            cog::uniform_candidates(ds.customers, ds.states, candidates_per_state, seed);
        pool.insert(pool.end(), cands.begin(), cands.end());
    }
    if (pool.empty()) throw std::runtime_error("solve: no candidate sites (provide --warehouses or --states)");
    check_forced_ids(sc, pool);

    cog::BnbParams params;
    params.time_limit = a.time_limit;
    cog::Solution sol = cog::solve_instance(ds.customers, pool, sc, params);
    print_summary(sol, seed);
    if (!a.out_dir.empty()) cog::write_solution(sol, ds.customers, pool, sc, a.out_dir);
    return status_exit(sol.solver_status);
}

int cmd_stepwell(const CommonArgs& a, int coarse_total, int fine_per_state) {
    auto ds = load_dataset(a);
    if (ds.states.empty()) throw std::runtime_error("stepwell: --states is required");
    unsigned seed = a.seed;
    cog::Scenario sc = load_scenario(a, &seed);
    check_forced_ids(sc, ds.sites);

    cog::StepWellConfig cfg;
    cfg.coarse_total_candidates = coarse_total;
    cfg.fine_candidates_per_state = fine_per_state;
    cfg.packet_target = a.packet_target;
    cfg.seed = seed;
    cfg.bnb.time_limit = a.time_limit;
    auto rep = cog::step_well_solve(ds.customers, ds.states, ds.sites, sc, cfg);

    std::cout << "stage1 objective: " << rep.stage1.objective << "\n";
    std::cerr << "stage1 time: " << rep.stage1_seconds << " s (solve "
              << rep.stage1_solve_seconds << " s)\n";
    std::cout << "selected states:";
    for (const auto& s : rep.selected_states) std::cout << " " << s;
    std::cout << "\n";
    print_summary(rep.stage2, seed);
    if (!a.out_dir.empty())
        cog::write_solution(rep.stage2, ds.customers, rep.stage2_sites, sc, a.out_dir);
    return status_exit(rep.stage2.solver_status);
}

int cmd_cls(const CommonArgs& a, int total) {
    auto ds = load_dataset(a);
    if (ds.states.empty()) throw std::runtime_error("cls: --states is required");
    auto records = cog::cls_scores(ds.states, ds.customers, ds.sites, total);
    std::ostringstream body;
    body << "state,a_score,p_score,d_score,cls_score,allocation\n";
    for (const auto& r : records) {
        char line[256];
        std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%.6f,%.6f,%d\n", r.state.c_str(),
                      r.a_score, r.p_score, r.d_score, r.cls_score, r.allocation);
        body << line;
    }
    std::cout << body.str();
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        std::ofstream out(a.out_dir + "/cls.csv");
        out << body.str();
    }
    return kOk;
}

int cmd_packets(const CommonArgs& a, double radius) {
    auto ds = load_dataset(a);
    std::vector<cog::Packet> packets;
    if (radius > 0.0)
        packets = cog::build_packets_radius(ds.customers, radius);
    else
        packets = cog::build_packets_count(ds.customers, a.packet_target, a.seed);
    std::ostringstream body;
    body << "id,lat,lon,demand,state,member_count,members\n";
    for (const auto& p : packets) {
        body << p.id << "," << cog::detail_io::fmt(p.point.lat) << ","
             << cog::detail_io::fmt(p.point.lon) << "," << cog::detail_io::fmt(p.demand)
             << "," << p.state << "," << p.member_ids.size() << ",";
        for (std::size_t i = 0; i < p.member_ids.size(); ++i)
            body << (i ? ";" : "") << p.member_ids[i];
        body << "\n";
    }
    std::cout << "packets: " << packets.size() << " from " << ds.customers.size()
              << " customers (seed " << a.seed << ")\n";
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        std::ofstream out(a.out_dir + "/packets.csv");
        out << body.str();
    } else {
        std::cout << body.str();
    }
    return kOk;
}

int cmd_cog(const CommonArgs& a) {
    auto ds = load_dataset(a);
    auto res = cog::weiszfeld(ds.customers);
    char line[256];
    std::snprintf(line, sizeof line, "%.6f %.6f\n", res.point.lat, res.point.lon);
    std::cout << line;
    std::cout << "objective: " << res.objective << " (weight-miles, planar)\n"
              << "iterations: " << res.iterations << "\n";
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        std::ofstream out(a.out_dir + "/cog.csv");
        out << "lat,lon,objective,iterations\n"
            << cog::detail_io::fmt(res.point.lat) << "," << cog::detail_io::fmt(res.point.lon)
            << "," << cog::detail_io::fmt(res.objective) << "," << res.iterations << "\n";
    }
    return kOk;
}

struct BatchLine {
    std::string name;
    cog::ScenarioOverrides ov;
};

std::vector<BatchLine> read_batch(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open batch file");
    std::vector<BatchLine> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        BatchLine bl;
        std::stringstream ss(line);
        std::string tok;
        bool first = true;
        while (std::getline(ss, tok, ';')) {
            const auto b = tok.find_first_not_of(" \t\r");
            const auto e = tok.find_last_not_of(" \t\r");
            if (b == std::string::npos) continue;
            tok = tok.substr(b, e - b + 1);
            if (first) {
                bl.name = tok;
                first = false;
                continue;
            }
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                                         ": expected key=value, got '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "demand_scale") bl.ov.demand_scale = std::stod(val);
            else if (key == "limit") bl.ov.warehouse_limit = std::stoi(val);
            else if (key == "force_open") bl.ov.force_open.insert(val);
            else if (key == "force_closed") bl.ov.force_closed.insert(val);
            else if (key == "stepwell") bl.ov.use_stepwell = (val == "true" || val == "1");
            else if (key == "candidates_per_state") bl.ov.candidates_per_state = std::stoi(val);
            else
                throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                                         ": unknown override '" + key + "'");
        }
        if (bl.name.empty())
            throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                                     ": missing scenario name");
        out.push_back(std::move(bl));
    }
    return out;
}

int cmd_scenario(const CommonArgs& a, const std::string& batch_path, int jobs) {
    auto ds = load_dataset(a);
    if (ds.states.empty()) throw std::runtime_error("scenario: --states is required");
    unsigned seed = a.seed;
    cog::Scenario base = load_scenario(a, &seed);
    auto batch = read_batch(batch_path);
    if (a.out_dir.empty()) throw std::runtime_error("scenario: --out is required");

    cog::StepWellConfig cfg;
    cfg.packet_target = a.packet_target;
    cfg.seed = seed;
    cfg.bnb.time_limit = a.time_limit;

    auto run_one = [&](const BatchLine& bl) -> std::pair<std::string, cog::SolveStatus> {
        try {
            cog::Solution sol =
                cog::run_scenario(ds.customers, ds.states, ds.sites, base, bl.ov, cfg);
            // write against the full pool the scenario saw; rebuild it here
            std::vector<cog::Customer> scaled = ds.customers;
            for (auto& c : scaled) c.demand *= bl.ov.demand_scale;
            std::vector<cog::Site> pool = cog::uniform_candidates(
                scaled, ds.states, bl.ov.candidates_per_state, cfg.seed, "cand");
            pool.insert(pool.end(), ds.sites.begin(), ds.sites.end());
            cog::write_solution(sol, scaled, pool, base, a.out_dir + "/" + bl.name);
            return {bl.name, sol.solver_status};
        } catch (const std::exception& ex) {
            std::cerr << bl.name << ": " << ex.what() << "\n";
            return {bl.name, cog::SolveStatus::infeasible};
        }
    };

    std::vector<std::pair<std::string, cog::SolveStatus>> results;
    if (jobs > 1) {
        std::vector<std::future<std::pair<std::string, cog::SolveStatus>>> futs;
        std::size_t next = 0;
        while (next < batch.size() || !futs.empty()) {
            while (next < batch.size() && futs.size() < static_cast<std::size_t>(jobs))
                futs.push_back(std::async(std::launch::async, run_one, batch[next++]));
            results.push_back(futs.front().get());
            futs.erase(futs.begin());
        }
    } else {
        for (const auto& bl : batch) results.push_back(run_one(bl));
    }
    int worst = kOk;
    for (const auto& [name, st] : results) {
        std::cout << name << ": " << cog::to_string(st) << "\n";
        worst = std::max(worst, status_exit(st));
    }
    return worst;
}

int cmd_compare(const CommonArgs& a, const std::string& dir_a, const std::string& dir_b) {
    auto customers = cog::read_demand_csv(a.demand_path);
    double total = 0.0;
    for (const auto& c : customers) total += c.demand;
    if (total <= 0.0) throw std::runtime_error("compare: zero total demand");

    auto wad_of = [&](const std::string& dir) {
        const auto t = cog::csv::read_table(dir + "/flows.csv");
        const int cc = t.col("customer_id"), cf = t.col("flow"), cd = t.col("distance_miles");
        if (cc < 0 || cf < 0 || cd < 0)
            throw std::runtime_error(dir + "/flows.csv: missing required columns");
        std::set<std::string> known;
        for (const auto& c : customers) known.insert(c.id);
        double s = 0.0;
        for (const auto& row : t.rows) {
            if (!known.count(row[cc]))
                throw std::runtime_error(dir + "/flows.csv: customer '" + row[cc] +
                                         "' not in --demand file");
            s += *cog::csv::parse_double(row[cf]) * *cog::csv::parse_double(row[cd]);
        }
        return s / total;
    };
    auto opened_of = [](const std::string& dir) {
        return cog::read_solution(dir).opened;
    };

    const double wa = wad_of(dir_a), wb = wad_of(dir_b);
    const auto oa = opened_of(dir_a), ob = opened_of(dir_b);
    std::cout << "wad_a: " << wa << "\nwad_b: " << wb << "\nwad_diff_miles: "
              << std::abs(wa - wb) << "\n";
    std::cout << "opened_only_a:";
    for (const auto& id : oa)
        if (!ob.count(id)) std::cout << " " << id;
    std::cout << "\nopened_only_b:";
    for (const auto& id : ob)
        if (!oa.count(id)) std::cout << " " << id;
    std::cout << "\n";
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        std::ofstream out(a.out_dir + "/compare.csv");
        out << "key,value\nwad_a," << cog::detail_io::fmt(wa) << "\nwad_b,"
            << cog::detail_io::fmt(wb) << "\nwad_diff_miles,"
            << cog::detail_io::fmt(std::abs(wa - wb)) << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Center-of-gravity network design toolkit"};
    app.require_subcommand(1);

    CommonArgs a;
    int candidates_per_state = 4;
    int limit_flag = 0;
    int coarse_total = 12, fine_per_state = 4;
    int cls_total = 10;
    double packet_radius = 0.0;
    std::string batch_path, dir_a, dir_b;
    int jobs = 1;

    auto* solve = app.add_subcommand("solve", "flat MILP over the full candidate set");
    add_common(solve, a);
    solve->add_option("--candidates-per-state", candidates_per_state,
                      "generated candidates per state (needs --states)");
    solve->add_option("--limit", limit_flag, "warehouse limit override");

    auto* stepwell = app.add_subcommand("stepwell", "two-stage coarse-to-fine solve");
    add_common(stepwell, a);
    stepwell->add_option("--coarse-total", coarse_total, "stage-1 candidate total");
    stepwell->add_option("--fine-per-state", fine_per_state,
                         "stage-2 candidates per selected state");

    auto* cls = app.add_subcommand("cls", "per-state candidate apportionment scores");
    add_common(cls, a);
    cls->add_option("--total", cls_total, "total candidates to apportion")->required();

    auto* packets = app.add_subcommand("packets", "aggregate customers into packets");
    add_common(packets, a);
    packets->add_option("--packet-radius", packet_radius,
                        "grid radius in miles (instead of --packet-target)");

    auto* cogcmd = app.add_subcommand("cog", "single-facility continuous optimum");
    add_common(cogcmd, a);

    auto* scenario = app.add_subcommand("scenario", "batch scenario runs");
    add_common(scenario, a);
    scenario->add_option("--batch", batch_path, "batch overrides file")->required();
    scenario->add_option("--jobs", jobs, "concurrent scenario evaluations");

    auto* comparecmd = app.add_subcommand("compare", "WAD delta between two solution dirs");
    add_common(comparecmd, a);
    comparecmd->add_option("--a", dir_a, "first solution directory")->required();
    comparecmd->add_option("--b", dir_b, "second solution directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(a, candidates_per_state, limit_flag);
        if (stepwell->parsed()) return cmd_stepwell(a, coarse_total, fine_per_state);
        if (cls->parsed()) return cmd_cls(a, cls_total);
        if (packets->parsed()) return cmd_packets(a, packet_radius);
        if (cogcmd->parsed()) return cmd_cog(a);
        if (scenario->parsed()) return cmd_scenario(a, batch_path, jobs);
        if (comparecmd->parsed()) return cmd_compare(a, dir_a, dir_b);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
