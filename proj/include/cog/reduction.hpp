#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cog/geo.hpp"
#include "cog/model.hpp"

namespace cog {

struct ClsRecord {
    std::string state;
    double a_score = 0.0;  // area pillar, [1,10]
    double p_score = 0.0;  // distance-to-existing pillar, [1,10]
    double d_score = 0.0;  // demand density pillar, [1,10]
    double cls_score = 0.0;  // geometric mean of the three
    int allocation = 0;      // candidate count apportioned to this state
};

struct Packet {
    std::string id;
    std::vector<std::string> member_ids;
    GeoPoint point;       // demand-weighted centroid of members
    double demand = 0.0;  // sum of member demands
    std::string state;    // majority state of members
};

struct KmeansResult {
    std::vector<GeoPoint> centers;
    std::vector<int> assignment;  // per input point, cluster index
    double weighted_ssd = 0.0;
    int iterations = 0;
};

namespace detail {

// min-max scale to [1,10]; equal values all map to 10
inline std::vector<double> scale_1_10(const std::vector<double>& raw) {
    double lo = raw[0], hi = raw[0];
    for (double v : raw) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        out[i] = (hi - lo) < 1e-300 ? 10.0 : 1.0 + 9.0 * (raw[i] - lo) / (hi - lo);
    return out;
}

inline GeoPoint weighted_centroid(const std::vector<GeoPoint>& pts,
                                  const std::vector<double>& w) {
    double sw = 0.0, slat = 0.0, slon = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        sw += w[i];
        slat += w[i] * pts[i].lat;
        slon += w[i] * pts[i].lon;
    }
    if (sw <= 0.0) {  // unweighted fallback
        for (const auto& p : pts) {
            slat += p.lat;
            slon += p.lon;
        }
        return {slat / pts.size(), slon / pts.size()};
    }
    return {slat / sw, slon / sw};
}

}  // namespace detail

/// Per-state candidate apportionment from the three pillars: state area,
/// distance from the state's demand centroid to the nearest existing open
/// site (farther = higher score), and demand density. Each pillar is
/// min-max scaled to [1,10]; the CLS score is their geometric mean.
/// Allocation is largest-remainder, proportional to the score, with a
/// floor of one candidate per state.
inline std::vector<ClsRecord> cls_scores(const std::vector<StateAttr>& states,
                                         const std::vector<Customer>& customers,
                                         const std::vector<Site>& existing_sites,
                                         int total_candidates) {
    if (states.empty()) throw std::invalid_argument("cls_scores: no states");
    if (total_candidates < static_cast<int>(states.size()))
        throw std::invalid_argument(
            "cls_scores: total_candidates must be >= number of states");
    std::map<std::string, std::size_t> sidx;
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (states[s].area <= 0.0)
            throw std::invalid_argument("cls_scores: state '" + states[s].name +
                                        "' has non-positive area");
        if (!sidx.emplace(states[s].name, s).second)
            throw std::invalid_argument("cls_scores: duplicate state '" + states[s].name + "'");
    }
    const std::size_t n = states.size();
    std::vector<double> demand(n, 0.0), slat(n, 0.0), slon(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    for (const auto& c : customers) {
        auto it = sidx.find(c.state);
        if (it == sidx.end())
            throw std::invalid_argument("cls_scores: customer '" + c.id +
                                        "' has unknown state '" + c.state + "'");
        demand[it->second] += c.demand;
        slat[it->second] += c.demand * c.point.lat;
        slon[it->second] += c.demand * c.point.lon;
        ++count[it->second];
    }

    std::vector<const Site*> open_sites;
    for (const auto& s : existing_sites)
        if (s.status == SiteStatus::existing_open) open_sites.push_back(&s);

    std::vector<double> raw_a(n), raw_p(n), raw_d(n);
    for (std::size_t s = 0; s < n; ++s) {
        raw_a[s] = states[s].area;
        raw_d[s] = demand[s] / states[s].area;
        if (open_sites.empty() || demand[s] <= 0.0) {
            raw_p[s] = 0.0;  // rescaled below; no-site convention handled there
        } else {
            const GeoPoint centroid{slat[s] / demand[s], slon[s] / demand[s]};
            double nearest = kInf;
            for (const Site* site : open_sites)
                nearest = std::min(nearest, haversine_miles(centroid, site->point));
            raw_p[s] = nearest;
        }
    }
    auto a = detail::scale_1_10(raw_a);
    auto d = detail::scale_1_10(raw_d);
    std::vector<double> p;
    if (open_sites.empty())
        p.assign(n, 10.0);  // no existing network: every state equally unserved
    else
        p = detail::scale_1_10(raw_p);

    std::vector<ClsRecord> out(n);
    double score_sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        out[s].state = states[s].name;
        out[s].a_score = a[s];
        out[s].p_score = p[s];
        out[s].d_score = d[s];
        out[s].cls_score = std::cbrt(a[s] * p[s] * d[s]);
        score_sum += out[s].cls_score;
    }

    // floor 1 each, then largest remainder over what is left
    const int remaining = total_candidates - static_cast<int>(n);
    std::vector<double> quota(n);
    int assigned = 0;
    for (std::size_t s = 0; s < n; ++s) {
        quota[s] = remaining * out[s].cls_score / score_sum;
        out[s].allocation = 1 + static_cast<int>(std::floor(quota[s]));
        assigned += out[s].allocation;
    }
    // distribute leftovers by descending fractional part; ties by state name
    std::vector<std::size_t> order(n);
    for (std::size_t s = 0; s < n; ++s) order[s] = s;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const double fi = quota[i] - std::floor(quota[i]);
        const double fj = quota[j] - std::floor(quota[j]);
        if (fi != fj) return fi > fj;
        return out[i].state < out[j].state;
    });
    for (std::size_t k = 0; assigned < total_candidates; ++k, ++assigned)
        ++out[order[k % n]].allocation;
    return out;
}

/// Demand-weighted Lloyd iterations with a deterministic seeded start:
/// one weight-proportional draw for the first center, then farthest-point
/// picks. Empty clusters are re-seeded at the point with the largest
/// assignment distance.
inline KmeansResult kmeans_weighted(const std::vector<GeoPoint>& points,
                                    const std::vector<double>& weights, int k,
                                    unsigned seed = 42, int max_iters = 100,
                                    double tol = 1e-9) {
    const std::size_t n = points.size();
    if (n == 0 || weights.size() != n)
        throw std::invalid_argument("kmeans_weighted: bad inputs");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("kmeans_weighted: negative weight");
        wsum += w;
    }
    if (wsum <= 0.0) throw std::invalid_argument("kmeans_weighted: all weights zero");

    // count distinct points
    std::vector<std::pair<double, double>> uniq;
    for (const auto& p : points) uniq.push_back({p.lat, p.lon});
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (k < 1 || k > static_cast<int>(uniq.size()))
        throw std::invalid_argument("kmeans_weighted: k must be in [1, distinct points]");

    KmeansResult res;
    res.assignment.assign(n, 0);

    // seeding
    std::mt19937 rng(seed);
    std::discrete_distribution<std::size_t> first(weights.begin(), weights.end());
    std::vector<GeoPoint> centers;
    centers.push_back(points[first(rng)]);
    std::vector<double> nearest_sq(n, kInf);
    while (static_cast<int>(centers.size()) < k) {
        std::size_t far = 0;
        double far_score = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dsq = std::pow(planar_miles(points[i], centers.back()), 2);
            nearest_sq[i] = std::min(nearest_sq[i], dsq);
            const double score = std::max(weights[i], 1e-12) * nearest_sq[i];
            if (score > far_score) {
                far_score = score;
                far = i;
            }
        }
        centers.push_back(points[far]);
    }

    double prev_ssd = kInf;
    for (int it = 0; it < max_iters; ++it) {
        res.iterations = it + 1;
        // assignment step
        double ssd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = kInf;
            for (int c = 0; c < k; ++c) {
                const double dm = planar_miles(points[i], centers[c]);
                if (dm < best_d) {
                    best_d = dm;
                    best = c;
                }
            }
            res.assignment[i] = best;
            ssd += weights[i] * best_d * best_d;
        }
        // empty-cluster repair: farthest point becomes the center
        for (int c = 0; c < k; ++c) {
            bool empty = true;
            for (std::size_t i = 0; i < n; ++i)
                if (res.assignment[i] == c) { empty = false; break; }
            if (empty) {
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dm = planar_miles(points[i], centers[res.assignment[i]]);
                    if (dm > far_d) {
                        far_d = dm;
                        far = i;
                    }
                }
                centers[c] = points[far];
                res.assignment[far] = c;
            }
        }
        // update step
        for (int c = 0; c < k; ++c) {
            std::vector<GeoPoint> pts;
            std::vector<double> w;
            for (std::size_t i = 0; i < n; ++i)
                if (res.assignment[i] == c) {
                    pts.push_back(points[i]);
                    w.push_back(weights[i]);
                }
            if (!pts.empty()) centers[c] = detail::weighted_centroid(pts, w);
        }
        if (prev_ssd - ssd < tol && it > 0) {
            res.weighted_ssd = ssd;
            break;
        }
        prev_ssd = ssd;
        res.weighted_ssd = ssd;
    }
    res.centers = centers;
    return res;
}

/// Cluster a state's customers and turn the centers into greenfield
/// candidate sites. Allocation above the number of distinct customer
/// points is clamped.
inline std::vector<Site> generate_candidates(const std::vector<Customer>& customers,
                                             int allocation, unsigned seed = 42,
                                             const std::string& id_prefix = "cand") {
    if (customers.empty())
        throw std::invalid_argument("generate_candidates: no customers");
    if (allocation < 1)
        throw std::invalid_argument("generate_candidates: allocation must be >= 1");
    std::vector<GeoPoint> pts;
    std::vector<double> w;
    for (const auto& c : customers) {
        pts.push_back(c.point);
        w.push_back(c.demand);
    }
    std::vector<std::pair<double, double>> uniq;
    for (const auto& p : pts) uniq.push_back({p.lat, p.lon});
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const int k = std::min<int>(allocation, static_cast<int>(uniq.size()));

    bool all_zero = true;
    for (double x : w) all_zero = all_zero && x == 0.0;
    if (all_zero) w.assign(w.size(), 1.0);

    auto km = kmeans_weighted(pts, w, k, seed);
    std::vector<Site> out;
    for (int c = 0; c < k; ++c) {
        Site s;
        s.id = id_prefix + "_" + std::to_string(c);
        s.point = km.centers[c];
        s.state = customers.front().state;
        s.status = SiteStatus::greenfield_candidate;
        out.push_back(std::move(s));
    }
    return out;
}

namespace detail {

inline Packet make_packet(const std::vector<Customer>& customers,
                          const std::vector<std::size_t>& members, int id_num) {
    Packet p;
    p.id = "packet_" + std::to_string(id_num);
    std::vector<GeoPoint> pts;
    std::vector<double> w;
    std::map<std::string, double> state_demand;
    double best_member_demand = -1.0;
    std::string best_member_state;
    for (std::size_t i : members) {
        const auto& c = customers[i];
        p.member_ids.push_back(c.id);
        p.demand += c.demand;
        pts.push_back(c.point);
        w.push_back(c.demand);
        state_demand[c.state] += c.demand;
        if (c.demand > best_member_demand) {
            best_member_demand = c.demand;
            best_member_state = c.state;
        }
    }
    // a singleton packet is its member, bit for bit
    p.point = members.size() == 1 ? pts[0] : weighted_centroid(pts, w);
    // majority state by member count; ties go to the highest-demand member
    std::map<std::string, int> state_count;
    for (std::size_t i : members) ++state_count[customers[i].state];
    int best_count = -1;
    for (const auto& [st, cnt] : state_count)
        if (cnt > best_count) {
            best_count = cnt;
            p.state = st;
        }
    int n_best = 0;
    for (const auto& [st, cnt] : state_count)
        if (cnt == best_count) ++n_best;
    if (n_best > 1) p.state = best_member_state;
    return p;
}

}  // namespace detail

/// Aggregate customers into packets by clustering to `target_count`.
/// A target at or above the customer count yields identity packing.
inline std::vector<Packet> build_packets_count(const std::vector<Customer>& customers,
                                               int target_count, unsigned seed = 42) {
    if (customers.empty()) throw std::invalid_argument("build_packets: no customers");
    if (target_count < 1)
        throw std::invalid_argument("build_packets: target_count must be >= 1");
    const int n = static_cast<int>(customers.size());
    std::vector<Packet> out;
    if (target_count >= n) {  // identity packing
        for (int i = 0; i < n; ++i) out.push_back(detail::make_packet(customers, {static_cast<std::size_t>(i)}, i));
        return out;
    }
    std::vector<GeoPoint> pts;
    std::vector<double> w;
    for (const auto& c : customers) {
        pts.push_back(c.point);
        w.push_back(c.demand);
    }
    bool all_zero = true;
    for (double x : w) all_zero = all_zero && x == 0.0;
    if (all_zero) w.assign(w.size(), 1.0);
    std::vector<std::pair<double, double>> uniq;
    for (const auto& p : pts) uniq.push_back({p.lat, p.lon});
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const int k = std::min<int>(target_count, static_cast<int>(uniq.size()));
    auto km = kmeans_weighted(pts, w, k, seed);
    int next = 0;
    for (int c = 0; c < k; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < customers.size(); ++i)
            if (km.assignment[i] == c) members.push_back(i);
        if (!members.empty()) out.push_back(detail::make_packet(customers, members, next++));
    }
    return out;
}

/// Aggregate customers into packets by grid hashing at `radius_miles`
/// cell size: customers in the same cell form a packet.
inline std::vector<Packet> build_packets_radius(const std::vector<Customer>& customers,
                                                double radius_miles) {
    if (customers.empty()) throw std::invalid_argument("build_packets: no customers");
    if (radius_miles <= 0.0)
        throw std::invalid_argument("build_packets: radius must be positive");
    std::map<std::pair<long, long>, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < customers.size(); ++i) {
        const auto& pt = customers[i].point;
        const double x = pt.lon * std::cos(deg2rad(pt.lat)) * kMilesPerDegree;
        const double y = pt.lat * kMilesPerDegree;
        cells[{static_cast<long>(std::floor(x / radius_miles)),
               static_cast<long>(std::floor(y / radius_miles))}]
            .push_back(i);
    }
    std::vector<Packet> out;
    int next = 0;
    for (const auto& [cell, members] : cells)
        out.push_back(detail::make_packet(customers, members, next++));
    return out;
}

/// Demand-weighted mean member distance: packet_demand * result equals
/// the summed member transport cost exactly.
inline double packet_exact_distance(const Packet& packet,
                                    const std::vector<double>& member_demands,
                                    const std::vector<double>& distances_to_members) {
    if (member_demands.size() != packet.member_ids.size() ||
        distances_to_members.size() != packet.member_ids.size())
        throw std::invalid_argument("packet_exact_distance: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < member_demands.size(); ++i) {
        num += member_demands[i] * distances_to_members[i];
        den += member_demands[i];
    }
    if (den <= 0.0) {  // zero-demand packet: unweighted mean
        double s = 0.0;
        for (double d : distances_to_members) s += d;
        return s / distances_to_members.size();
    }
    return num / den;
}

}  // namespace cog
