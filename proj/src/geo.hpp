#pragma once

// Core domain types (fixes, traces) and spherical distance arithmetic.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace locgate {

inline constexpr double kEarthRadiusM = 6'371'000.0;  // mean Earth radius
inline constexpr double kPi = 3.141592653589793;
inline constexpr double kDegToRad = kPi / 180.0;

struct NetworkHint {
    double lat = 0.0;
    double lon = 0.0;
    double accuracy_m = 0.0;  // hint uncertainty radius, > 0
};

struct RawSample {
    double lat = 0.0;
    double lon = 0.0;
    double accuracy_m = 0.0;
};

// One client-reported location report.
struct Fix {
    std::string session_id;
    int64_t t_ms = 0;          // milliseconds since epoch
    double lat = 0.0;          // degrees, [-90, 90]
    double lon = 0.0;          // degrees, [-180, 180]
    double accuracy_m = 0.0;   // > 0
    std::optional<NetworkHint> net_hint;
    std::vector<RawSample> raw_fixes;  // empty = no raw buffer attached
};

enum class TraceLabel { legitimate, spoofed };

enum class Scenario {
    walking,
    driving,
    stationary,
    train,
    teleportation,
    drift,
    accuracy,
    replay,
    net_mismatch,
    compound,
};

inline constexpr int kScenarioCount = 10;

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);  // throws argument error
TraceLabel scenario_label(Scenario s);
const char* label_name(TraceLabel l);

// Ordered fixes belonging to one session. Labels/scenarios are present on
// generated traces and optional on ingested ones.
struct Trace {
    std::vector<Fix> fixes;
    std::optional<TraceLabel> label;
    std::optional<Scenario> scenario;
    std::optional<uint64_t> seed;
};

void validate_coordinates(double lat, double lon);
void validate_fix(const Fix& fix);
// Checks fix validity, shared session id, strictly increasing timestamps and
// label/scenario consistency. Duplicate timestamps are rejected, not skipped.
void validate_trace(const Trace& trace);

// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_distance(double lat1, double lon1, double lat2, double lon2);

inline double haversine_distance(const Fix& a, const Fix& b) {
    return haversine_distance(a.lat, a.lon, b.lat, b.lon);
}

// Implied speed in m/s between two fixes; cur must be strictly later.
double speed_between(const Fix& prev, const Fix& cur);

// Destination point given start, initial bearing (radians) and distance (m).
void destination_point(double lat, double lon, double bearing_rad, double distance_m,
                       double* out_lat, double* out_lon);

// Offset a position by (north, east) meters using a local tangent approximation.
void offset_meters(double lat, double lon, double north_m, double east_m,
                   double* out_lat, double* out_lon);

}  // namespace locgate
