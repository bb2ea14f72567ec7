// Acceptance gate: one pass/fail line per shipping criterion. Run as
//   acceptance <path-to-cli-binary> <path-to-fixtures-dir>
// Exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cog/io.hpp"
#include "cog/median.hpp"
#include "cog/pipeline.hpp"
#include "cog/solve.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace cog;

namespace {

std::string g_cli;
std::string g_fixtures;
fs::path g_tmp;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

struct CliRun {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliRun run_cli(const std::string& args, const std::string& tag) {
    const fs::path out_file = g_tmp / (tag + ".stdout");
    const std::string cmd =
        g_cli + " " + args + " > " + out_file.string() + " 2> /dev/null";
    CliRun r;
    const int rc = std::system(cmd.c_str());
    r.exit_code = rc < 0 ? rc : WEXITSTATUS(rc);
    r.out = slurp(out_file);
    return r;
}

std::vector<Customer> random_customers(std::mt19937& rng, int n,
                                       const std::string& state, double lat0,
                                       double lon0, double spread = 1.0) {
    std::uniform_real_distribution<double> d(-spread, spread), w(0.5, 10.0);
    std::vector<Customer> out;
    for (int i = 0; i < n; ++i)
        out.push_back({state + "_c" + std::to_string(i),
                       {lat0 + d(rng), lon0 + d(rng)},
                       w(rng),
                       state});
    return out;
}

MilpProblem random_lp(std::mt19937& rng) {
    std::uniform_int_distribution<int> nv(2, 20), nr(1, 15);
    std::uniform_int_distribution<int> coef(-5, 5), cost(-10, 10), rhs(-10, 20);
    std::uniform_int_distribution<int> rel(0, 2), ub(0, 4);
    MilpProblem p;
    const int n = nv(rng), m = nr(rng);
    for (int v = 0; v < n; ++v) {
        const int u = ub(rng);
        p.add_var(cost(rng), 0.0, u == 0 ? kInf : static_cast<double>(2 * u),
                  VarKind::continuous, "x" + std::to_string(v));
    }
    for (int r = 0; r < m; ++r) {
        Constraint c;
        for (int v = 0; v < n; ++v) {
            const int a = coef(rng);
            if (a != 0) c.coeffs.push_back({v, static_cast<double>(a)});
        }
        if (c.coeffs.empty()) c.coeffs.push_back({0, 1.0});
        c.rel = rel(rng) == 0 ? Relation::le : rel(rng) == 1 ? Relation::ge : Relation::eq;
        c.rhs = rhs(rng);
        p.add_constraint(std::move(c));
    }
    return p;
}

// ---------------------------------------------------------------- criterion 1
bool oracle_optimality(std::string& detail) {
    const double t0 = now_seconds();
    std::mt19937 rng(2024);
    int checked = 0, infeasible = 0;
    for (int t = 0; t < 200; ++t) {
        const bool mad = t % 3 == 1;
        const bool mpct = t % 3 == 2;
        const bool single = t % 2 == 1;
        auto inst = single && (mad || mpct)
                        ? oracle::random_instance(rng, mad, mpct, true, 10, 6, 2)
                        : oracle::random_instance(rng, mad, mpct, single);
        auto built = build(inst.customers, inst.sites, inst.scenario, inst.dist);
        auto got = solve_milp(built.problem);
        auto want = oracle::enumerate_milp(inst);
        if (!want.feasible) {
            ++infeasible;
            if (got.status != SolveStatus::infeasible) {
                detail = "instance " + std::to_string(t) + ": oracle infeasible, solver " +
                         to_string(got.status);
                return false;
            }
            continue;
        }
        if (got.status != SolveStatus::optimal) {
            detail = "instance " + std::to_string(t) + ": solver " + to_string(got.status);
            return false;
        }
        const double tol = 1e-6 * std::max(1.0, std::abs(want.objective));
        if (std::abs(got.objective - want.objective) > tol) {
            detail = "instance " + std::to_string(t) + ": got " +
                     std::to_string(got.objective) + " want " +
                     std::to_string(want.objective);
            return false;
        }
        ++checked;
    }
    const double elapsed = now_seconds() - t0;
    if (elapsed >= 60.0) {
        detail = "suite took " + std::to_string(elapsed) + " s (budget 60 s)";
        return false;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d optimal + %d infeasible agree, %.2f s", checked,
                  infeasible, elapsed);
    detail = buf;
    return true;
}

// ---------------------------------------------------------------- criterion 2
bool lp_correctness(std::string& detail) {
    std::mt19937 rng(77);
    int optimal_seen = 0;
    for (int t = 0; t < 120; ++t) {
        auto p = random_lp(rng);
        const auto got = solve_lp(p);
        const auto want = oracle::solve_reference(p);
        const auto mismatch = [&](const char* what) {
            detail = "LP " + std::to_string(t) + ": " + what;
            return false;
        };
        if (want.status == oracle::Status::optimal) {
            if (got.status != LpStatus::optimal) return mismatch("status != optimal");
            if (std::abs(got.objective - want.objective) >
                1e-7 * std::max(1.0, std::abs(want.objective)))
                return mismatch("objective mismatch");
            ++optimal_seen;
        } else if (want.status == oracle::Status::infeasible) {
            if (got.status != LpStatus::infeasible) return mismatch("status != infeasible");
        } else {
            if (got.status != LpStatus::unbounded) return mismatch("status != unbounded");
        }
    }
    detail = "120 LPs, " + std::to_string(optimal_seen) + " optimal, statuses exact";
    return optimal_seen >= 20;
}

// ---------------------------------------------------------------- criterion 3
bool gradient_fidelity(std::string& detail) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> jitter(-0.6, 0.6);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto cs = random_customers(rng, 8, "S", 40.0, -77.5);
        const PlanarFrame frame(cs);
        GeoPoint p{40.0 + jitter(rng), -77.5 + jitter(rng)};
        // stay away from demand points
        bool near = false;
        for (const auto& c : cs)
            if (frame.dist(p, c.point) < 0.1) near = true;
        if (near) {
            --t;
            continue;
        }
        auto [glat, glon] = gradient(p, cs, frame);
        const double h = 1e-6;
        const double fd_lat = (cog_objective({p.lat + h, p.lon}, cs, frame) -
                               cog_objective({p.lat - h, p.lon}, cs, frame)) /
                              (2 * h);
        const double fd_lon = (cog_objective({p.lat, p.lon + h}, cs, frame) -
                               cog_objective({p.lat, p.lon - h}, cs, frame)) /
                              (2 * h);
        const double scale = std::max(1.0, std::hypot(glat, glon));
        const double err = std::hypot(glat - fd_lat, glon - fd_lon) / scale;
        worst = std::max(worst, err);
        if (err > 1e-4) {
            detail = "config " + std::to_string(t) + ": relative error " + std::to_string(err);
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "100 configurations, worst relative error %.2e", worst);
    detail = buf;
    return true;
}

// ---------------------------------------------------------------- criterion 4
bool weiszfeld_checks(std::string& detail) {
    // equilateral triangle in the planar frame: centroid is the median
    {
        const double base_lat = 40.0, mid_lon = -78.0, w = 0.5;
        double dlat = 0.0;
        for (int it = 0; it < 30; ++it) {
            const double anchor = base_lat + dlat / 3.0;
            const double c = std::cos(deg2rad(anchor));
            const double side = 2.0 * w * c * kMilesPerDegree;
            dlat = side * std::sqrt(3.0) / 2.0 / kMilesPerDegree;
        }
        std::vector<Customer> tri = {{"a", {base_lat, mid_lon - w}, 1.0, "S"},
                                     {"b", {base_lat, mid_lon + w}, 1.0, "S"},
                                     {"c", {base_lat + dlat, mid_lon}, 1.0, "S"}};
        const GeoPoint centroid{base_lat + dlat / 3.0, mid_lon};
        auto res = weiszfeld(tri, 1e-10, 100000);
        if (std::abs(res.point.lat - centroid.lat) > 1e-6 ||
            std::abs(res.point.lon - centroid.lon) > 1e-6) {
            detail = "equilateral optimum off the centroid by more than 1e-6 deg";
            return false;
        }
    }
    // majority-condition instances stop on the dominant point
    std::mt19937 rng(31);
    for (int t = 0; t < 20; ++t) {
        auto cs = random_customers(rng, 6, "S", 40.0, -77.5);
        double others = 0.0;
        for (std::size_t i = 1; i < cs.size(); ++i) others += cs[i].demand;
        cs[0].demand = others * 1.5;  // strict majority
        auto res = weiszfeld(cs);
        if (!res.at_demand_point ||
            std::abs(res.point.lat - cs[0].point.lat) > 1e-9 ||
            std::abs(res.point.lon - cs[0].point.lon) > 1e-9) {
            detail = "majority instance " + std::to_string(t) +
                     " did not stop at the dominant point";
            return false;
        }
    }
    // monotone objective across iteration budgets
    for (int t = 0; t < 10; ++t) {
        auto cs = random_customers(rng, 10, "S", 40.0, -77.5);
        double prev = kInf;
        for (int iters = 1; iters <= 30; ++iters) {
            auto res = weiszfeld(cs, 0.0, iters);
            if (res.objective > prev + 1e-9) {
                detail = "objective increased at iteration " + std::to_string(iters);
                return false;
            }
            prev = res.objective;
        }
    }
    detail = "equilateral 1e-6 deg, 20 majority stops, monotone descent";
    return true;
}

// ---------------------------------------------------------------- criterion 5
bool packet_exactness(std::string& detail) {
    std::mt19937 rng(47);
    // identity packing changes no objective at all
    for (int t = 0; t < 5; ++t) {
        auto cs = random_customers(rng, 15, "S", 40.0, -78.0);
        auto sites = generate_candidates(cs, 3, 1);
        Scenario sc;
        sc.warehouse_limit = 2;
        auto raw = solve_instance(cs, sites, sc);
        auto packets = build_packets_count(cs, 15, 1);
        auto agg = solve_instance(cog::detail::packets_as_customers(packets), sites, sc);
        if (raw.objective != agg.objective) {
            detail = "identity packing shifted the objective";
            return false;
        }
    }
    // demand-weighted mean distance identity to 1e-12 relative
    std::uniform_real_distribution<double> w(0.1, 9.0), dd(1.0, 500.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> ws(6), ds(6);
        double total = 0.0, cost = 0.0;
        for (int i = 0; i < 6; ++i) {
            ws[i] = w(rng);
            ds[i] = dd(rng);
            total += ws[i];
            cost += ws[i] * ds[i];
        }
        Packet q;
        q.member_ids = {"1", "2", "3", "4", "5", "6"};
        q.demand = total;
        const double d = packet_exact_distance(q, ws, ds);
        if (std::abs(q.demand * d - cost) > 1e-12 * cost) {
            detail = "packet_exact_distance identity broke at trial " + std::to_string(t);
            return false;
        }
    }
    // centroid aggregation error within the triangle-inequality bound
    for (int t = 0; t < 100; ++t) {
        auto cs = random_customers(rng, 20, "S", 40.0, -78.0, 2.0);
        auto packets = build_packets_count(cs, 5, t);
        const GeoPoint site{39.0, -77.0};
        double raw = 0.0, agg = 0.0, bound = 0.0;
        std::map<std::string, const Packet*> by_member;
        for (const auto& p : packets) {
            agg += p.demand * haversine_miles(p.point, site);
            for (const auto& id : p.member_ids) by_member[id] = &p;
        }
        for (const auto& c : cs) {
            raw += c.demand * haversine_miles(c.point, site);
            bound += c.demand * haversine_miles(c.point, by_member[c.id]->point);
        }
        if (std::abs(agg - raw) > bound + 1e-9) {
            detail = "triangle bound violated at instance " + std::to_string(t);
            return false;
        }
    }
    detail = "identity exact, Σwd to 1e-12, bound holds on 100 instances";
    return true;
}

// ---------------------------------------------------------------- criterion 6
bool runtime_independence(std::string& detail) {
    std::vector<StateAttr> states = {{"A", 46000.0}, {"B", 69000.0}, {"C", 98000.0}};
    auto make = [&](int per_state, unsigned seed) {
        std::mt19937 rng(seed);
        auto cs = random_customers(rng, per_state, "A", 40.5, -78.0);
        auto b = random_customers(rng, per_state, "B", 33.5, -97.0);
        auto c = random_customers(rng, per_state, "C", 45.0, -120.5);
        cs.insert(cs.end(), b.begin(), b.end());
        cs.insert(cs.end(), c.begin(), c.end());
        return cs;
    };
    Scenario sc;
    sc.warehouse_limit = 3;
    // stage 1 of the step well, measured in isolation: packets x CLS
    // coarse candidates, then the MILP solve alone on the clock
    auto bench = [&](const std::vector<Customer>& cs, int* num_vars) {
        const auto packets = build_packets_count(cs, 150, 42);
        const auto pc = cog::detail::packets_as_customers(packets);
        auto sites = cls_candidates(cs, states, {}, 6, 42, "coarse");
        std::vector<GeoPoint> cpts, spts;
        for (const auto& c : pc) cpts.push_back(c.point);
        for (const auto& s : sites) spts.push_back(s.point);
        const DistanceMatrix dist = distance_matrix(cpts, spts, sc.metric);
        auto built = build(pc, sites, sc, dist);
        *num_vars = built.problem.num_vars;
        double best = kInf;
        for (int rep = 0; rep < 3; ++rep) {
            using clock = std::chrono::steady_clock;
            const auto t0 = clock::now();
            auto sol = solve_milp(built.problem);
            const double dt = std::chrono::duration<double>(clock::now() - t0).count();
            if (sol.status != SolveStatus::optimal) return kInf;
            best = std::min(best, dt);
        }
        return best;
    };
    const auto c900 = make(300, 1);
    const auto c1800 = make(600, 2);
    int vars_900 = 0, vars_1800 = 0;
    const double t900 = bench(c900, &vars_900);
    const double t1800 = bench(c1800, &vars_1800);
    char buf[160];
    std::snprintf(buf, sizeof buf, "vars %d vs %d, stage-1 solve %.4f s vs %.4f s",
                  vars_900, vars_1800, t900, t1800);
    detail = buf;
    if (vars_900 != vars_1800) return false;
    const double ratio = std::max(t900, t1800) / std::max(1e-9, std::min(t900, t1800));
    return ratio <= 2.0;
}

// ---------------------------------------------------------------- criterion 7
bool compare_wad(std::string& detail) {
    std::mt19937 rng(63);
    for (int t = 0; t < 20; ++t) {
        auto cs = random_customers(rng, 15, "S", 40.0, -78.0, 2.0);
        std::vector<StateAttr> states = {{"S", 46000.0}};
        Scenario sc;
        sc.warehouse_limit = 1;
        auto sites = uniform_candidates(cs, states, 4, 42, "cand");
        auto a = solve_instance(cs, sites, sc);
        sc.warehouse_limit = 2;
        auto b = solve_instance(cs, sites, sc);
        auto r = compare(a, sites, b, sites, cs, sc);
        // recompute both WADs directly from the flows
        auto wad_of = [&](const Solution& sol) {
            std::map<std::string, GeoPoint> cpt, spt;
            for (const auto& c : cs) cpt[c.id] = c.point;
            for (const auto& s : sites) spt[s.id] = s.point;
            double cost = 0.0, total = 0.0;
            for (const auto& c : cs) total += c.demand;
            for (const auto& [key, flow] : sol.flows)
                cost += flow * haversine_miles(cpt[key.first], spt[key.second]);
            return cost / total;
        };
        if (std::abs(r.wad_a - wad_of(a)) > 1e-9 || std::abs(r.wad_b - wad_of(b)) > 1e-9 ||
            std::abs(r.wad_diff_miles - std::abs(wad_of(a) - wad_of(b))) > 1e-9) {
            detail = "WAD mismatch on pair " + std::to_string(t);
            return false;
        }
    }
    detail = "20 solution pairs match the direct recomputation to 1e-9";
    return true;
}

// ---------------------------------------------------------------- criterion 8
bool cls_invariants(std::string& detail) {
    std::mt19937 rng(71);
    std::uniform_int_distribution<int> n_states(2, 6), extra(0, 20);
    std::uniform_real_distribution<double> area(500.0, 90000.0);
    for (int t = 0; t < 50; ++t) {
        const int ns = n_states(rng);
        std::vector<StateAttr> states;
        std::vector<Customer> cs;
        for (int s = 0; s < ns; ++s) {
            const std::string name = "S" + std::to_string(s);
            states.push_back({name, area(rng)});
            auto part = random_customers(rng, 5, name, 34.0 + 2.0 * s, -100.0 + 4.0 * s);
            cs.insert(cs.end(), part.begin(), part.end());
        }
        std::vector<Site> existing;
        if (t % 2 == 0)
            existing.push_back(
                {"w", {35.0, -99.0}, states[0].name, SiteStatus::existing_open, 0.0});
        const int total = ns + extra(rng);
        auto recs = cls_scores(states, cs, existing, total);
        int sum = 0;
        for (const auto& r : recs) {
            sum += r.allocation;
            if (r.allocation < 1) {
                detail = "floor-1 violated at trial " + std::to_string(t);
                return false;
            }
            if (std::abs(r.cls_score - std::cbrt(r.a_score * r.p_score * r.d_score)) > 1e-9) {
                detail = "cube-root identity broke at trial " + std::to_string(t);
                return false;
            }
        }
        if (sum != total) {
            detail = "allocations sum " + std::to_string(sum) + " != total " +
                     std::to_string(total);
            return false;
        }
        // permutation invariance
        auto shuffled = states;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto perm = cls_scores(shuffled, cs, existing, total);
        for (const auto& r : recs)
            for (const auto& q : perm)
                if (q.state == r.state &&
                    (q.cls_score != r.cls_score || q.allocation != r.allocation)) {
                    detail = "permutation changed state " + r.state;
                    return false;
                }
    }
    detail = "50 trials: sums exact, floor 1, cube-root 1e-9, order invariant";
    return true;
}

// ---------------------------------------------------------------- criterion 9
bool cli_determinism(std::string& detail) {
    const std::string common = "--demand " + g_fixtures + "/demand.csv --states " +
                               g_fixtures + "/states.csv --scenario " + g_fixtures +
                               "/scenario.txt";
    const std::string demand_only = "--demand " + g_fixtures + "/demand.csv";
    // batch file for the scenario subcommand
    const fs::path batch = g_tmp / "batch.txt";
    {
        std::ofstream out(batch);
        out << "base;candidates_per_state=2\n"
               "double;demand_scale=2;candidates_per_state=2\n";
    }
    struct Cmd {
        std::string name, args;
    };
    const std::vector<Cmd> cmds = {
        {"solve", "solve " + common + " --candidates-per-state 2"},
        {"stepwell",
         "stepwell " + common + " --coarse-total 3 --fine-per-state 2 --packet-target 15"},
        {"cls", "cls " + common + " --total 6"},
        {"packets", "packets " + demand_only + " --packet-target 15"},
        {"cog", "cog " + demand_only},
        {"scenario", "scenario " + common + " --batch " + batch.string() + " --jobs 2"},
    };
    for (const auto& cmd : cmds) {
        std::string outs[2];
        std::map<std::string, std::string> files[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path dir = g_tmp / ("det_" + cmd.name + "_" + std::to_string(run));
            fs::remove_all(dir);
            auto r = run_cli(cmd.args + " --out " + dir.string(),
                             "det_" + cmd.name + std::to_string(run));
            if (r.exit_code != 0) {
                detail = cmd.name + ": exit code " + std::to_string(r.exit_code);
                return false;
            }
            outs[run] = r.out;
            for (const auto& e : fs::recursive_directory_iterator(dir))
                if (e.is_regular_file())
                    files[run][fs::relative(e.path(), dir).string()] = slurp(e.path());
        }
        if (outs[0] != outs[1]) {
            detail = cmd.name + ": stdout differs between runs";
            return false;
        }
        if (files[0] != files[1]) {
            detail = cmd.name + ": output artifacts differ between runs";
            return false;
        }
    }
    // compare subcommand: needs two solved directories
    {
        const std::string a_dir = (g_tmp / "det_solve_0").string();
        const std::string b_dir = (g_tmp / "det_stepwell_0").string();
        std::string outs[2];
        std::string files[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path dir = g_tmp / ("det_compare_" + std::to_string(run));
            fs::remove_all(dir);
            auto r = run_cli("compare " + demand_only + " --a " + a_dir + " --b " + b_dir +
                                 " --out " + dir.string(),
                             "det_compare" + std::to_string(run));
            if (r.exit_code != 0) {
                detail = "compare: exit code " + std::to_string(r.exit_code);
                return false;
            }
            outs[run] = r.out;
            files[run] = slurp(dir / "compare.csv");
        }
        if (outs[0] != outs[1] || files[0] != files[1]) {
            detail = "compare: output differs between runs";
            return false;
        }
    }
    detail = "7 subcommands byte-identical across reruns (stdout + artifacts)";
    return true;
}

// --------------------------------------------------------------- criterion 10
struct Summary {
    std::map<std::string, double> nums;
    std::set<std::string> opened_coords;  // "lat lon" rounded to 6 dp
    std::string status;
};

Summary parse_summary(const std::string& path) {
    Summary s;
    const auto t = csv::read_table(path);
    for (const auto& row : t.rows) {
        if (row.size() < 2) continue;
        if (row[0] == "status") {
            s.status = row[1];
        } else if (row[0] == "opened") {
            const auto at = row[1].find(" @ ");
            if (at == std::string::npos) continue;
            std::istringstream coords(row[1].substr(at + 3));
            double lat = 0, lon = 0;
            coords >> lat >> lon;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f %.6f", lat, lon);
            s.opened_coords.insert(buf);
        } else if (auto v = csv::parse_double(row[1])) {
            s.nums[row[0]] = *v;
        }
    }
    return s;
}

bool end_to_end_fixture(std::string& detail) {
    const std::string common = "--demand " + g_fixtures + "/demand.csv --states " +
                               g_fixtures + "/states.csv --scenario " + g_fixtures +
                               "/scenario.txt";
    const fs::path flat_dir = g_tmp / "e2e_flat", step_dir = g_tmp / "e2e_step";
    fs::remove_all(flat_dir);
    fs::remove_all(step_dir);
    auto flat = run_cli("solve " + common + " --candidates-per-state 2 --out " +
                            flat_dir.string(),
                        "e2e_flat");
    auto step = run_cli("stepwell " + common +
                            " --coarse-total 3 --fine-per-state 2 --packet-target 15 "
                            "--out " +
                            step_dir.string(),
                        "e2e_step");
    if (flat.exit_code != 0 || step.exit_code != 0) {
        detail = "CLI exit codes " + std::to_string(flat.exit_code) + "/" +
                 std::to_string(step.exit_code);
        return false;
    }
    const Summary sf = parse_summary((flat_dir / "summary.csv").string());
    const Summary ss = parse_summary((step_dir / "summary.csv").string());
    if (sf.opened_coords != ss.opened_coords) {
        detail = "flat and step-well opened sets disagree";
        return false;
    }
    const Summary golden = parse_summary(g_fixtures + "/golden_summary.csv");
    if (sf.status != golden.status || sf.opened_coords != golden.opened_coords) {
        detail = "status or opened sites differ from the golden summary";
        return false;
    }
    for (const auto& [key, want] : golden.nums) {
        const auto it = sf.nums.find(key);
        if (it == sf.nums.end() || std::abs(it->second - want) > 5e-7) {
            detail = "summary field '" + key + "' differs from golden at 6 dp";
            return false;
        }
    }
    detail = "flat == step-well opened set; summary matches golden to 6 dp";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <cli-binary> <fixtures-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    g_tmp = fs::temp_directory_path() / "cogtool_acceptance";
    fs::create_directories(g_tmp);

    struct Criterion {
        const char* title;
        bool (*fn)(std::string&);
    };
    const std::vector<Criterion> criteria = {
        {"oracle optimality on 200 random MILPs", oracle_optimality},
        {"LP solver vs textbook tableau oracle", lp_correctness},
        {"analytic gradient vs finite differences", gradient_fidelity},
        {"Weiszfeld convergence and descent", weiszfeld_checks},
        {"packet exactness and aggregation bound", packet_exactness},
        {"packet count decouples runtime from customers", runtime_independence},
        {"compare() WAD deltas vs direct recomputation", compare_wad},
        {"CLS scoring and apportionment invariants", cls_invariants},
        {"CLI determinism across reruns", cli_determinism},
        {"end-to-end fixture with golden summary", end_to_end_fixture},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].fn(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        std::printf("criterion %2zu: %s  %s%s%s\n", i + 1, ok ? "PASS" : "FAIL",
                    criteria[i].title, detail.empty() ? "" : " — ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
