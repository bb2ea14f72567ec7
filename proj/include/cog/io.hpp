#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cog/geo.hpp"
#include "cog/model.hpp"

namespace cog {

struct Dataset {
    std::vector<Customer> customers;
    std::vector<Site> sites;
    std::vector<StateAttr> states;
};

namespace csv {

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
    }
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // data rows, 1-based reporting offset +2

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    t.header = split_row(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        t.rows.push_back(split_row(line));
    }
    return t;
}

/// Collects per-row diagnostics; callers throw the full list at once.
class ErrorList {
  public:
    explicit ErrorList(std::string file) : file_(std::move(file)) {}
    void add(std::size_t row, const std::string& field, const std::string& msg) {
        msgs_.push_back(file_ + ": row " + std::to_string(row) + ", field '" + field +
                        "': " + msg);
    }
    void add(const std::string& msg) { msgs_.push_back(file_ + ": " + msg); }
    void throw_if_any() const {
        if (msgs_.empty()) return;
        std::string all;
        for (const auto& m : msgs_) all += m + "\n";
        throw std::runtime_error(all);
    }

  private:
    std::string file_;
    std::vector<std::string> msgs_;
};

inline std::optional<double> parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace csv

/// Demand CSV: id, state, demand, demand_latitude, demand_longitude.
inline std::vector<Customer> read_demand_csv(const std::string& path) {
    const auto t = csv::read_table(path);
    csv::ErrorList errs(path);
    const int ci = t.col("id"), cs = t.col("state"), cd = t.col("demand");
    const int cla = t.col("demand_latitude"), clo = t.col("demand_longitude");
    if (ci < 0 || cs < 0 || cd < 0 || cla < 0 || clo < 0) {
        errs.add("missing required columns (need id, state, demand, demand_latitude, "
                 "demand_longitude)");
        errs.throw_if_any();
    }
    std::vector<Customer> out;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t rownum = r + 2;  // header is row 1
        const auto& row = t.rows[r];
        if (row.size() < t.header.size()) {
            errs.add(rownum, "", "too few columns");
            continue;
        }
        Customer c;
        c.id = row[ci];
        c.state = row[cs];
        if (c.id.empty()) errs.add(rownum, "id", "empty id");
        if (!seen.insert(c.id).second) errs.add(rownum, "id", "duplicate id '" + c.id + "'");
        const auto demand = csv::parse_double(row[cd]);
        if (!demand)
            errs.add(rownum, "demand", "not a number: '" + row[cd] + "'");
        else if (*demand < 0.0)
            errs.add(rownum, "demand", "negative demand");
        else
            c.demand = *demand;
        const auto lat = csv::parse_double(row[cla]);
        const auto lon = csv::parse_double(row[clo]);
        if (!lat || *lat < -90.0 || *lat > 90.0)
            errs.add(rownum, "demand_latitude", "latitude out of [-90, 90]");
        if (!lon || *lon < -180.0 || *lon > 180.0)
            errs.add(rownum, "demand_longitude", "longitude out of [-180, 180]");
        if (lat && lon && *lat >= -90 && *lat <= 90 && *lon >= -180 && *lon <= 180)
            c.point = GeoPoint(*lat, *lon);
        out.push_back(std::move(c));
    }
    errs.throw_if_any();
    return out;
}

/// Warehouse CSV: id, state, latitude, longitude, status {open|closed},
/// fixed_cost (optional, defaults to 0).
inline std::vector<Site> read_warehouse_csv(const std::string& path) {
    const auto t = csv::read_table(path);
    csv::ErrorList errs(path);
    const int ci = t.col("id"), cs = t.col("state"), cla = t.col("latitude");
    const int clo = t.col("longitude"), cst = t.col("status"), cfc = t.col("fixed_cost");
    if (ci < 0 || cs < 0 || cla < 0 || clo < 0 || cst < 0) {
        errs.add("missing required columns (need id, state, latitude, longitude, status)");
        errs.throw_if_any();
    }
    std::vector<Site> out;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t rownum = r + 2;
        const auto& row = t.rows[r];
        if (row.size() < t.header.size()) {
            errs.add(rownum, "", "too few columns");
            continue;
        }
        Site s;
        s.id = row[ci];
        s.state = row[cs];
        if (s.id.empty()) errs.add(rownum, "id", "empty id");
        if (!seen.insert(s.id).second) errs.add(rownum, "id", "duplicate id '" + s.id + "'");
        if (row[cst] == "open")
            s.status = SiteStatus::existing_open;
        else if (row[cst] == "closed")
            s.status = SiteStatus::existing_closed;
        else
            errs.add(rownum, "status", "unknown status '" + row[cst] + "' (want open|closed)");
        const auto lat = csv::parse_double(row[cla]);
        const auto lon = csv::parse_double(row[clo]);
        if (!lat || *lat < -90.0 || *lat > 90.0)
            errs.add(rownum, "latitude", "latitude out of [-90, 90]");
        if (!lon || *lon < -180.0 || *lon > 180.0)
            errs.add(rownum, "longitude", "longitude out of [-180, 180]");
        if (lat && lon && *lat >= -90 && *lat <= 90 && *lon >= -180 && *lon <= 180)
            s.point = GeoPoint(*lat, *lon);
        if (cfc >= 0 && !row[cfc].empty()) {
            const auto fc = csv::parse_double(row[cfc]);
            if (!fc || *fc < 0.0)
                errs.add(rownum, "fixed_cost", "must be a non-negative number");
            else
                s.fixed_cost = *fc;
        }
        out.push_back(std::move(s));
    }
    errs.throw_if_any();
    return out;
}

/// States CSV: name, area_sq_miles.
inline std::vector<StateAttr> read_state_csv(const std::string& path) {
    const auto t = csv::read_table(path);
    csv::ErrorList errs(path);
    const int cn = t.col("name"), ca = t.col("area_sq_miles");
    if (cn < 0 || ca < 0) {
        errs.add("missing required columns (need name, area_sq_miles)");
        errs.throw_if_any();
    }
    std::vector<StateAttr> out;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t rownum = r + 2;
        const auto& row = t.rows[r];
        StateAttr st;
        st.name = row[cn];
        if (!seen.insert(st.name).second)
            errs.add(rownum, "name", "duplicate state '" + st.name + "'");
        const auto area = csv::parse_double(row[ca]);
        if (!area || *area <= 0.0)
            errs.add(rownum, "area_sq_miles", "must be a positive number");
        else
            st.area = *area;
        out.push_back(std::move(st));
    }
    errs.throw_if_any();
    return out;
}

/// Scenario file: flat `key = value` lines, '#' comments. Keys:
/// warehouse_limit, cardinality_mode, mad_limit, mpct_fraction,
/// mpct_radius, single_source, forced_open, forced_closed, metric, seed.
inline std::pair<Scenario, unsigned> read_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    Scenario sc;
    unsigned seed = 42;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": " + msg);
    };
    auto split_ids = [](const std::string& s) {
        std::set<std::string> out;
        std::stringstream ss(s);
        std::string id;
        while (std::getline(ss, id, ',')) {
            const auto b = id.find_first_not_of(" \t");
            const auto e = id.find_last_not_of(" \t");
            if (b != std::string::npos) out.insert(id.substr(b, e - b + 1));
        }
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) fail("expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "warehouse_limit") {
            const auto v = csv::parse_double(val);
            if (!v || *v < 1 || *v != std::floor(*v)) fail("warehouse_limit must be a positive integer");
            sc.warehouse_limit = static_cast<int>(*v);
        } else if (key == "cardinality_mode") {
            if (val == "exact") sc.cardinality_mode = CardinalityMode::exact;
            else if (val == "at_most") sc.cardinality_mode = CardinalityMode::at_most;
            else fail("cardinality_mode must be exact|at_most");
        } else if (key == "mad_limit") {
            const auto v = csv::parse_double(val);
            if (!v || *v < 0) fail("mad_limit must be a non-negative number");
            sc.mad_limit = *v;
        } else if (key == "mpct_fraction") {
            const auto v = csv::parse_double(val);
            if (!v || *v < 0 || *v > 1) fail("mpct_fraction must be in [0,1]");
            sc.mpct_fraction = *v;
        } else if (key == "mpct_radius") {
            const auto v = csv::parse_double(val);
            if (!v || *v < 0) fail("mpct_radius must be a non-negative number");
            sc.mpct_radius = *v;
        } else if (key == "single_source") {
            if (val == "true" || val == "1") sc.single_source = true;
            else if (val == "false" || val == "0") sc.single_source = false;
            else fail("single_source must be true|false");
        } else if (key == "forced_open") {
            sc.forced_open = split_ids(val);
        } else if (key == "forced_closed") {
            sc.forced_closed = split_ids(val);
        } else if (key == "metric") {
            if (val == "haversine") sc.metric = Metric::haversine;
            else if (val == "planar") sc.metric = Metric::planar;
            else fail("metric must be haversine|planar");
        } else if (key == "seed") {
            const auto v = csv::parse_double(val);
            if (!v || *v < 0 || *v != std::floor(*v)) fail("seed must be a non-negative integer");
            seed = static_cast<unsigned>(*v);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    sc.validate();
    return {sc, seed};
}

namespace detail_io {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail_io

/// Writes summary.csv, flows.csv and network.geojson into `out_dir`.
/// CSVs carry lat,lon columns by name; GeoJSON coordinates are lon,lat
/// as the format mandates.
inline void write_solution(const Solution& sol, const std::vector<Customer>& customers,
                           const std::vector<Site>& sites, const Scenario& scenario,
                           const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw std::runtime_error(out_dir + ": cannot create output directory");

    std::map<std::string, const Site*> site_by_id;
    for (const auto& s : sites) site_by_id[s.id] = &s;
    std::map<std::string, const Customer*> cust_by_id;
    for (const auto& c : customers) cust_by_id[c.id] = &c;

    {
        std::ofstream out(out_dir + "/summary.csv");
        out << "key,value\n";
        out << "status," << to_string(sol.solver_status) << "\n";
        out << "objective," << detail_io::fmt(sol.objective) << "\n";
        out << "transport_cost," << detail_io::fmt(sol.transport_cost) << "\n";
        out << "fixed_cost," << detail_io::fmt(sol.fixed_cost) << "\n";
        out << "wad_miles," << detail_io::fmt(sol.wad) << "\n";
        out << "pct_within," << detail_io::fmt(sol.pct_within) << "\n";
        out << "opened_count," << sol.opened.size() << "\n";
        for (const auto& id : sol.opened) {
            const Site* s = site_by_id.count(id) ? site_by_id.at(id) : nullptr;
            out << "opened," << id;
            if (s)
                out << " @ " << detail_io::fmt(s->point.lat) << " "
                    << detail_io::fmt(s->point.lon);
            out << "\n";
        }
    }
    if (sol.solver_status == SolveStatus::infeasible) return;

    {
        std::ofstream out(out_dir + "/flows.csv");
        out << "customer_id,site_id,flow,distance_miles\n";
        for (const auto& [key, flow] : sol.flows) {
            const auto& [cid, sid] = key;
            double d = 0.0;
            if (cust_by_id.count(cid) && site_by_id.count(sid))
                d = distance_miles(cust_by_id.at(cid)->point, site_by_id.at(sid)->point,
                                   scenario.metric);
            out << cid << "," << sid << "," << detail_io::fmt(flow) << ","
                << detail_io::fmt(d) << "\n";
        }
    }

    {
        nlohmann::ordered_json fc;
        fc["type"] = "FeatureCollection";
        fc["features"] = nlohmann::ordered_json::array();
        for (const auto& c : customers) {
            nlohmann::ordered_json f;
            f["type"] = "Feature";
            f["geometry"] = {{"type", "Point"},
                             {"coordinates", {c.point.lon, c.point.lat}}};
            f["properties"] = {{"role", "customer"}, {"id", c.id}, {"demand", c.demand}};
            fc["features"].push_back(std::move(f));
        }
        for (const auto& s : sites) {
            nlohmann::ordered_json f;
            f["type"] = "Feature";
            f["geometry"] = {{"type", "Point"},
                             {"coordinates", {s.point.lon, s.point.lat}}};
            f["properties"] = {{"role", "site"},
                               {"id", s.id},
                               {"opened", sol.opened.count(s.id) > 0}};
            fc["features"].push_back(std::move(f));
        }
        for (const auto& [key, flow] : sol.flows) {
            const auto& [cid, sid] = key;
            if (!cust_by_id.count(cid) || !site_by_id.count(sid)) continue;
            const auto& cp = cust_by_id.at(cid)->point;
            const auto& sp = site_by_id.at(sid)->point;
            nlohmann::ordered_json f;
            f["type"] = "Feature";
            f["geometry"] = {{"type", "LineString"},
                             {"coordinates", {{sp.lon, sp.lat}, {cp.lon, cp.lat}}}};
            f["properties"] = {{"flow", flow}, {"customer", cid}, {"site", sid}};
            fc["features"].push_back(std::move(f));
        }
        std::ofstream out(out_dir + "/network.geojson");
        out << fc.dump(2) << "\n";
    }
}

/// Rebuilds a Solution from a written output directory (summary + flows).
inline Solution read_solution(const std::string& dir) {
    Solution sol;
    {
        const auto t = csv::read_table(dir + "/summary.csv");
        for (const auto& row : t.rows) {
            if (row.size() < 2) continue;
            if (row[0] == "status") {
                if (row[1] == "optimal") sol.solver_status = SolveStatus::optimal;
                else if (row[1] == "feasible") sol.solver_status = SolveStatus::feasible;
                else if (row[1] == "limit_reached") sol.solver_status = SolveStatus::limit_reached;
                else sol.solver_status = SolveStatus::infeasible;
            } else if (row[0] == "objective") {
                sol.objective = *csv::parse_double(row[1]);
            } else if (row[0] == "opened") {
                const auto at = row[1].find(" @ ");
                sol.opened.insert(at == std::string::npos ? row[1] : row[1].substr(0, at));
            }
        }
    }
    if (sol.solver_status == SolveStatus::infeasible) return sol;
    const auto t = csv::read_table(dir + "/flows.csv");
    const int cc = t.col("customer_id"), cs = t.col("site_id"), cf = t.col("flow");
    if (cc < 0 || cs < 0 || cf < 0)
        throw std::runtime_error(dir + "/flows.csv: missing required columns");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto flow = csv::parse_double(row[cf]);
        if (!flow)
            throw std::runtime_error(dir + "/flows.csv: row " + std::to_string(r + 2) +
                                     ", field 'flow': not a number");
        sol.flows[{row[cc], row[cs]}] = *flow;
    }
    return sol;
}

/// Cross-file id uniqueness and state referential integrity.
inline void validate_dataset(const Dataset& ds) {
    std::set<std::string> state_names;
    for (const auto& s : ds.states) state_names.insert(s.name);
    std::set<std::string> ids;
    std::string errs;
    for (const auto& c : ds.customers) {
        if (!ids.insert(c.id).second) errs += "duplicate id across files: '" + c.id + "'\n";
        if (!ds.states.empty() && !state_names.count(c.state))
            errs += "customer '" + c.id + "' references unknown state '" + c.state + "'\n";
    }
    for (const auto& s : ds.sites) {
        if (!ids.insert(s.id).second) errs += "duplicate id across files: '" + s.id + "'\n";
        if (!ds.states.empty() && !state_names.count(s.state))
            errs += "site '" + s.id + "' references unknown state '" + s.state + "'\n";
    }
    if (!errs.empty()) throw std::runtime_error(errs);
}

}  // namespace cog
