#include "geo.hpp"

#include <algorithm>
#include <cmath>

namespace locgate {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::walking: return "walking";
        case Scenario::driving: return "driving";
        case Scenario::stationary: return "stationary";
        case Scenario::train: return "train";
        case Scenario::teleportation: return "teleportation";
        case Scenario::drift: return "drift";
        case Scenario::accuracy: return "accuracy";
        case Scenario::replay: return "replay";
        case Scenario::net_mismatch: return "net_mismatch";
        case Scenario::compound: return "compound";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    for (int i = 0; i < kScenarioCount; ++i) {
        auto s = static_cast<Scenario>(i);
        if (name == scenario_name(s)) return s;
    }
    throw_argument("unknown scenario: " + name);
}

TraceLabel scenario_label(Scenario s) {
    switch (s) {
        case Scenario::walking:
        case Scenario::driving:
        case Scenario::stationary:
        case Scenario::train:
            return TraceLabel::legitimate;
        default:
            return TraceLabel::spoofed;
    }
}

const char* label_name(TraceLabel l) {
    return l == TraceLabel::legitimate ? "legitimate" : "spoofed";
}

void validate_coordinates(double lat, double lon) {
    if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0)
        throw_validation("latitude out of range: " + std::to_string(lat));
    if (!std::isfinite(lon) || lon < -180.0 || lon > 180.0)
        throw_validation("longitude out of range: " + std::to_string(lon));
}

void validate_fix(const Fix& fix) {
    validate_coordinates(fix.lat, fix.lon);
    if (!(fix.accuracy_m > 0.0))
        throw_validation("accuracy must be > 0, got " + std::to_string(fix.accuracy_m));
    if (fix.net_hint) {
        validate_coordinates(fix.net_hint->lat, fix.net_hint->lon);
        if (!(fix.net_hint->accuracy_m > 0.0))
            throw_validation("hint accuracy must be > 0");
    }
    for (const auto& s : fix.raw_fixes) {
        validate_coordinates(s.lat, s.lon);
        if (!(s.accuracy_m > 0.0))
            throw_validation("raw sample accuracy must be > 0");
    }
}

void validate_trace(const Trace& trace) {
    if (trace.fixes.size() < 2)
        throw_validation("trace must contain at least 2 fixes");
    const std::string& sid = trace.fixes.front().session_id;
    int64_t prev_t = 0;
    bool first = true;
    for (const auto& fix : trace.fixes) {
        validate_fix(fix);
        if (fix.session_id != sid)
            throw_validation("trace mixes session ids: " + sid + " vs " + fix.session_id);
        if (!first && fix.t_ms <= prev_t)
            throw_validation("timestamps must be strictly increasing at t=" +
                             std::to_string(fix.t_ms));
        prev_t = fix.t_ms;
        first = false;
    }
    if (trace.label && trace.scenario && scenario_label(*trace.scenario) != *trace.label)
        throw_validation(std::string("scenario ") + scenario_name(*trace.scenario) +
                         " inconsistent with label " + label_name(*trace.label));
}

double haversine_distance(double lat1, double lon1, double lat2, double lon2) {
    validate_coordinates(lat1, lon1);
    validate_coordinates(lat2, lon2);
    const double phi1 = lat1 * kDegToRad;
    const double phi2 = lat2 * kDegToRad;
    const double dphi = (lat2 - lat1) * kDegToRad;
    const double dlam = (lon2 - lon1) * kDegToRad;
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    const double a = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

double speed_between(const Fix& prev, const Fix& cur) {
    if (cur.t_ms <= prev.t_ms)
        throw_validation("speed_between requires cur.t > prev.t");
    const double dt_s = static_cast<double>(cur.t_ms - prev.t_ms) / 1000.0;
    return haversine_distance(prev, cur) / dt_s;
}

void destination_point(double lat, double lon, double bearing_rad, double distance_m,
                       double* out_lat, double* out_lon) {
    const double delta = distance_m / kEarthRadiusM;
    const double phi1 = lat * kDegToRad;
    const double lam1 = lon * kDegToRad;
    const double sin_phi2 =
        std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(bearing_rad);
    const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
    const double lam2 = lam1 + std::atan2(std::sin(bearing_rad) * std::sin(delta) * std::cos(phi1),
                                          std::cos(delta) - std::sin(phi1) * sin_phi2);
    *out_lat = phi2 / kDegToRad;
    double lon_deg = lam2 / kDegToRad;
    // normalize into [-180, 180]
    lon_deg = std::fmod(lon_deg + 540.0, 360.0) - 180.0;
    *out_lon = lon_deg;
}

void offset_meters(double lat, double lon, double north_m, double east_m,
                   double* out_lat, double* out_lon) {
    const double dlat = (north_m / kEarthRadiusM) / kDegToRad;
    const double coslat = std::cos(lat * kDegToRad);
    const double dlon = (east_m / (kEarthRadiusM * std::max(0.01, coslat))) / kDegToRad;
    *out_lat = std::clamp(lat + dlat, -90.0, 90.0);
    double lon_deg = std::fmod(lon + dlon + 540.0, 360.0) - 180.0;
    *out_lon = lon_deg;
}

}  // namespace locgate
