#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cog/geo.hpp"
#include "cog/model.hpp"

namespace cog {

struct CogResult {
    GeoPoint point;
    double objective = 0.0;  // sum of demand * distance, weight-miles
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    bool at_demand_point = false;  // stopped at a customer by the majority test
};

/// Fixed equirectangular frame anchored at the demand-weighted mean
/// latitude; keeps the single-facility objective and its gradient
/// consistent under differentiation.
class PlanarFrame {
  public:
    explicit PlanarFrame(const std::vector<Customer>& customers) {
        double sw = 0.0, slat = 0.0;
        for (const auto& c : customers) {
            sw += c.demand;
            slat += c.demand * c.point.lat;
        }
        const double anchor = sw > 0.0 ? slat / sw : customers.front().point.lat;
        cos_lat_ = std::cos(deg2rad(anchor));
    }

    double x(const GeoPoint& p) const { return p.lon * cos_lat_ * kMilesPerDegree; }
    double y(const GeoPoint& p) const { return p.lat * kMilesPerDegree; }
    double dist(const GeoPoint& a, const GeoPoint& b) const {
        const double dx = x(a) - x(b), dy = y(a) - y(b);
        return std::sqrt(dx * dx + dy * dy);
    }
    double cos_lat() const { return cos_lat_; }

  private:
    double cos_lat_ = 1.0;
};

inline GeoPoint centroid_seed(const std::vector<Customer>& customers) {
    double sw = 0.0, slat = 0.0, slon = 0.0;
    for (const auto& c : customers) {
        sw += c.demand;
        slat += c.demand * c.point.lat;
        slon += c.demand * c.point.lon;
    }
    if (sw <= 0.0) throw std::invalid_argument("centroid_seed: zero total demand");
    return {slat / sw, slon / sw};
}

/// Transport cost of serving every customer from `point`, in the fixed
/// planar frame.
inline double cog_objective(const GeoPoint& point, const std::vector<Customer>& customers,
                            const PlanarFrame& frame) {
    double s = 0.0;
    for (const auto& c : customers) s += c.demand * frame.dist(point, c.point);
    return s;
}

/// Analytic gradient of the planar transport cost, in cost units per
/// degree of (lat, lon). Undefined at a customer location.
inline std::pair<double, double> gradient(const GeoPoint& point,
                                          const std::vector<Customer>& customers,
                                          const PlanarFrame& frame) {
    double gx = 0.0, gy = 0.0;
    const double px = frame.x(point), py = frame.y(point);
    for (const auto& c : customers) {
        const double dx = px - frame.x(c.point);
        const double dy = py - frame.y(c.point);
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d < 1e-12)
            throw std::domain_error("gradient: point coincides with a demand point");
        gx += c.demand * dx / d;
        gy += c.demand * dy / d;
    }
    // chain rule back to degrees
    return {gy * kMilesPerDegree, gx * frame.cos_lat() * kMilesPerDegree};  // (d/dlat, d/dlon)
}

/// Weiszfeld fixed-point iteration for the weighted geometric median,
/// with the standard majority test at demand points: stay iff the point's
/// own weight dominates the net pull of the others.
inline CogResult weiszfeld(const std::vector<Customer>& customers, GeoPoint init,
                           double tol = 1e-7, int max_iters = 10000) {
    double total = 0.0;
    for (const auto& c : customers) total += c.demand;
    if (customers.empty() || total <= 0.0)
        throw std::invalid_argument("weiszfeld: need at least one positive demand");

    const PlanarFrame frame(customers);
    CogResult res;
    res.point = init;

    const double coincide_eps = 1e-9;  // miles
    for (int it = 0; it < max_iters; ++it) {
        res.iterations = it + 1;
        // check coincidence with a demand point
        int at = -1;
        for (std::size_t i = 0; i < customers.size(); ++i)
            if (frame.dist(res.point, customers[i].point) < coincide_eps) {
                at = static_cast<int>(i);
                break;
            }
        if (at >= 0) {
            // pull of the other customers at this point
            double gx = 0.0, gy = 0.0, inv = 0.0;
            const double px = frame.x(customers[at].point), py = frame.y(customers[at].point);
            for (std::size_t i = 0; i < customers.size(); ++i) {
                if (static_cast<int>(i) == at) continue;
                const double dx = frame.x(customers[i].point) - px;
                const double dy = frame.y(customers[i].point) - py;
                const double d = std::sqrt(dx * dx + dy * dy);
                if (d < coincide_eps) continue;  // co-located customer, no net pull
                gx += customers[i].demand * dx / d;
                gy += customers[i].demand * dy / d;
                inv += customers[i].demand / d;
            }
            const double pull = std::sqrt(gx * gx + gy * gy);
            if (customers[at].demand >= pull || inv <= 0.0) {
                res.point = customers[at].point;
                res.at_demand_point = true;
                res.converged = true;
                res.grad_norm = std::max(0.0, pull - customers[at].demand);
                break;
            }
            // step off the demand point along the net pull (Vardi-Zhang move)
            const double t = (pull - customers[at].demand) / inv;
            const double nlat = res.point.lat + t * (gy / pull) / kMilesPerDegree;
            const double nlon =
                res.point.lon + t * (gx / pull) / (kMilesPerDegree * frame.cos_lat());
            res.point = GeoPoint(nlat, nlon);
            continue;
        }

        // optimality certificate at the nearest demand point: w_k bounding
        // the net pull of the others proves that customer is the global
        // optimum, wherever the current iterate sits
        {
            std::size_t nearest = 0;
            double nd = kInf;
            for (std::size_t i = 0; i < customers.size(); ++i) {
                const double d = frame.dist(res.point, customers[i].point);
                if (d < nd) {
                    nd = d;
                    nearest = i;
                }
            }
            double gx = 0.0, gy = 0.0;
            const double px = frame.x(customers[nearest].point);
            const double py = frame.y(customers[nearest].point);
            for (std::size_t i = 0; i < customers.size(); ++i) {
                if (i == nearest) continue;
                const double dx = frame.x(customers[i].point) - px;
                const double dy = frame.y(customers[i].point) - py;
                const double d = std::sqrt(dx * dx + dy * dy);
                if (d < coincide_eps) continue;
                gx += customers[i].demand * dx / d;
                gy += customers[i].demand * dy / d;
            }
            const double pull = std::sqrt(gx * gx + gy * gy);
            if (customers[nearest].demand >= pull) {
                res.point = customers[nearest].point;
                res.at_demand_point = true;
                res.converged = true;
                res.grad_norm = 0.0;
                break;
            }
        }

        // standard update: weighted average with weights w_i / d_i
        double sw = 0.0, slat = 0.0, slon = 0.0;
        for (const auto& c : customers) {
            const double d = frame.dist(res.point, c.point);
            const double w = c.demand / d;
            sw += w;
            slat += w * c.point.lat;
            slon += w * c.point.lon;
        }
        const GeoPoint next(slat / sw, slon / sw);
        const double step = std::hypot(next.lat - res.point.lat, next.lon - res.point.lon);
        res.point = next;

        bool at_point = false;
        for (const auto& c : customers)
            if (frame.dist(res.point, c.point) < coincide_eps) at_point = true;
        if (!at_point) {
            auto [glat, glon] = gradient(res.point, customers, frame);
            res.grad_norm = std::hypot(glat, glon);
        }
        if (step < tol || (!at_point && res.grad_norm < tol)) {
            res.converged = true;
            break;
        }
    }
    res.objective = cog_objective(res.point, customers, frame);
    return res;
}

inline CogResult weiszfeld(const std::vector<Customer>& customers, double tol = 1e-7,
                           int max_iters = 10000) {
    return weiszfeld(customers, centroid_seed(customers), tol, max_iters);
}

}  // namespace cog
