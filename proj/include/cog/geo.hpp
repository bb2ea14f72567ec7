#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cog {

// Earth mean radius in miles. Fixed so results are reproducible.
inline constexpr double kEarthRadiusMiles = 3958.8;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Miles per degree of latitude on the equirectangular projection.
inline constexpr double kMilesPerDegree = 69.17;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    GeoPoint() = default;
    GeoPoint(double lat_, double lon_) : lat(lat_), lon(lon_) {
        if (!std::isfinite(lat) || !std::isfinite(lon))
            throw std::invalid_argument("GeoPoint: coordinates must be finite");
        if (lat < -90.0 || lat > 90.0)
            throw std::invalid_argument("GeoPoint: latitude out of [-90, 90]: " +
                                        std::to_string(lat));
        if (lon < -180.0 || lon > 180.0)
            throw std::invalid_argument("GeoPoint: longitude out of [-180, 180]: " +
                                        std::to_string(lon));
    }
};

enum class Metric { haversine, planar };

inline std::string to_string(Metric m) {
    return m == Metric::haversine ? "haversine" : "planar";
}

/// Great-circle distance in miles.
inline double haversine_miles(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = deg2rad(a.lat), lat2 = deg2rad(b.lat);
    const double dlat = lat2 - lat1;
    const double dlon = deg2rad(b.lon - a.lon);
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

/// Euclidean distance in miles on an equirectangular projection. The
/// longitude axis is scaled by cos of the mean latitude of the two points.
/// Adequate for regional spans (a few hundred miles).
inline double planar_miles(const GeoPoint& a, const GeoPoint& b) {
    const double mean_lat = deg2rad((a.lat + b.lat) / 2.0);
    const double dx = (a.lon - b.lon) * std::cos(mean_lat);
    const double dy = a.lat - b.lat;
    return kMilesPerDegree * std::sqrt(dx * dx + dy * dy);
}

inline double distance_miles(const GeoPoint& a, const GeoPoint& b, Metric m) {
    return m == Metric::haversine ? haversine_miles(a, b) : planar_miles(a, b);
}

/// Dense customers x sites distance matrix, miles.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

inline DistanceMatrix distance_matrix(const std::vector<GeoPoint>& customers,
                                      const std::vector<GeoPoint>& sites,
                                      Metric metric = Metric::haversine) {
    if (customers.empty() || sites.empty())
        throw std::invalid_argument("distance_matrix: empty input");
    DistanceMatrix m(customers.size(), sites.size());
    for (std::size_t i = 0; i < customers.size(); ++i)
        for (std::size_t j = 0; j < sites.size(); ++j)
            m.at(i, j) = distance_miles(customers[i], sites[j], metric);
    return m;
}

}  // namespace cog
