// Copyright 2026 The flood-exposure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOOD_EXPOSURE_PROJECTION_HPP
#define FLOOD_EXPOSURE_PROJECTION_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "flood_exposure/errors.hpp"

namespace flood_exposure {

inline constexpr double kAuthalicRadius = 6371007.181;  // meters
inline constexpr double kMeters_per_mile = 1609.344;    // international mile

struct GeoPoint {
    double lon = 0.0;  // degrees
    double lat = 0.0;  // degrees

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct PlanePoint {
    double x = 0.0;  // meters
    double y = 0.0;  // meters

    friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

inline bool is_valid(const GeoPoint& p) {
    return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= -180.0 && p.lon <= 180.0 &&
           p.lat >= -90.0 && p.lat <= 90.0;
}

inline bool is_valid(const PlanePoint& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Wraps a longitude difference in radians into [-pi, pi].
inline double wrap_pi(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    angle = std::remainder(angle, two_pi);
    return angle;
}

inline double wrap_lon_degrees(double lon) {
    lon = std::remainder(lon, 360.0);
    if (lon == -180.0) lon = 180.0;
    return lon;
}

/// Great-circle distance on the authalic sphere, haversine form.
inline double geodesic_distance(const GeoPoint& a, const GeoPoint& b, double radius = kAuthalicRadius) {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dphi = phi2 - phi1;
    const double dlam = wrap_pi(deg_to_rad(b.lon - a.lon));
    const double s_phi = std::sin(dphi / 2.0);
    const double s_lam = std::sin(dlam / 2.0);
    double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lam * s_lam;
    h = std::min(1.0, std::max(0.0, h));
    return 2.0 * radius * std::asin(std::sqrt(h));
}

enum class ProjectionKind { laea, local_equirect };

struct ProjectionSpec {
    ProjectionKind kind = ProjectionKind::laea;
    GeoPoint center{};
    double sphere_radius = kAuthalicRadius;
};

// Forward and inverse mapping between the sphere and a metric plane.
//
// LAEA is the spherical Lambert azimuthal equal-area projection. It is area
// true everywhere, which the apportionment ratio relies on. LOCAL_EQUIRECT is
// the plate carree scaled by cos(lat0); it is only distance-faithful near the
// center and is kept for quick local work and tests.
class Projection {
public:
    explicit Projection(const ProjectionSpec& spec) : spec_(spec) {
        if (!is_valid(spec.center)) {
            throw GeometryError(GeometryError::Kind::out_of_domain, "projection center outside geographic bounds");
        }
        if (!(spec.sphere_radius > 0.0) || !std::isfinite(spec.sphere_radius)) {
            throw GeometryError(GeometryError::Kind::out_of_domain, "projection sphere radius must be positive");
        }
        lam0_ = deg_to_rad(spec.center.lon);
        phi0_ = deg_to_rad(spec.center.lat);
        sin_phi0_ = std::sin(phi0_);
        cos_phi0_ = std::cos(phi0_);
    }

    const ProjectionSpec& spec() const noexcept { return spec_; }

    PlanePoint project(const GeoPoint& p) const {
        if (!is_valid(p)) {
            throw GeometryError(GeometryError::Kind::out_of_domain, "geographic point out of range");
        }
        const double R = spec_.sphere_radius;
        const double phi = deg_to_rad(p.lat);
        const double dlam = wrap_pi(deg_to_rad(p.lon) - lam0_);
        if (spec_.kind == ProjectionKind::local_equirect) {
            return {R * dlam * cos_phi0_, R * (phi - phi0_)};
        }
        const double sin_phi = std::sin(phi);
        const double cos_phi = std::cos(phi);
        const double cos_dlam = std::cos(dlam);
        const double denom = 1.0 + sin_phi0_ * sin_phi + cos_phi0_ * cos_phi * cos_dlam;
        if (denom <= 1e-12) {
            throw GeometryError(GeometryError::Kind::antipodal_point, "LAEA is undefined at the antipode of its center");
        }
        const double k = std::sqrt(2.0 / denom);
        return {R * k * cos_phi * std::sin(dlam), R * k * (cos_phi0_ * sin_phi - sin_phi0_ * cos_phi * cos_dlam)};
    }

    GeoPoint inverse(const PlanePoint& p) const {
        if (!is_valid(p)) {
            throw GeometryError(GeometryError::Kind::out_of_domain, "plane point is not finite");
        }
        const double R = spec_.sphere_radius;
        if (spec_.kind == ProjectionKind::local_equirect) {
            const double lat = rad_to_deg(phi0_ + p.y / R);
            const double dlam = p.x / (R * cos_phi0_);
            if (lat < -90.0 || lat > 90.0 || std::abs(dlam) > std::numbers::pi || cos_phi0_ <= 0.0) {
                throw GeometryError(GeometryError::Kind::out_of_domain, "plane point outside the equirectangular domain");
            }
            return {wrap_lon_degrees(rad_to_deg(lam0_ + dlam)), lat};
        }
        const double rho = std::hypot(p.x, p.y);
        if (rho > 2.0 * R) {
            throw GeometryError(GeometryError::Kind::out_of_domain, "plane point outside the LAEA disc");
        }
        if (rho == 0.0) return spec_.center;
        const double c = 2.0 * std::asin(std::min(1.0, rho / (2.0 * R)));
        const double sin_c = std::sin(c);
        const double cos_c = std::cos(c);
        double s = cos_c * sin_phi0_ + p.y * sin_c * cos_phi0_ / rho;
        s = std::min(1.0, std::max(-1.0, s));
        const double phi = std::asin(s);
        const double lam = lam0_ + std::atan2(p.x * sin_c, rho * cos_phi0_ * cos_c - p.y * sin_phi0_ * sin_c);
        return {wrap_lon_degrees(rad_to_deg(lam)), rad_to_deg(phi)};
    }

private:
    ProjectionSpec spec_;
    double lam0_ = 0.0;
    double phi0_ = 0.0;
    double sin_phi0_ = 0.0;
    double cos_phi0_ = 1.0;
};

inline PlanePoint project(const ProjectionSpec& spec, const GeoPoint& p) { return Projection(spec).project(p); }
inline GeoPoint inverse(const ProjectionSpec& spec, const PlanePoint& p) { return Projection(spec).inverse(p); }

}  // namespace flood_exposure

#endif
