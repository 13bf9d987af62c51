#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace satnc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double k, Vec3 a) { return {k * a.x, k * a.y, k * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }

/// Fixed ground terminal, numbered after the satellites.
struct GroundStation {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

/// Walker-style circular constellation. Defaults describe the 66-satellite
/// Iridium-like layout: 6 planes of 11 at 780 km, 86 deg, planes 30 deg apart.
struct ConstellationSpec {
    int num_planes = 6;
    int sats_per_plane = 11;
    double altitude_km = 780.0;
    double inclination_deg = 86.0;
    double raan_spacing_deg = 30.0;
    /// Along-track offset added per plane index (plane p is shifted by p times this).
    double intra_plane_phase_deg = 0.0;
    double earth_radius_km = 6371.0;
    double mu_km3s2 = 398600.4418;
    /// Seconds added to every propagation time.
    double epoch_s = 0.0;
    /// Segments closer than this to Earth's centre are blocked. Unset means
    /// the Earth radius (no atmospheric margin).
    std::optional<double> grazing_radius_km;

    std::vector<GroundStation> ground_stations;
    double gs_min_elevation_deg = 10.0;
    double earth_rotation_rad_s = 7.2921159e-5;

    int num_satellites() const { return num_planes * sats_per_plane; }
    int num_nodes() const { return num_satellites() + static_cast<int>(ground_stations.size()); }
    double orbit_radius_km() const { return earth_radius_km + altitude_km; }
    double grazing_radius() const { return grazing_radius_km.value_or(earth_radius_km); }
    /// 2*pi*sqrt(a^3/mu).
    double orbital_period_s() const;

    /// Throws ConfigError on violated invariants.
    void validate() const;
};

/// Satellite node index (0-based) of `slot` within `plane`, both 0-based.
inline int satellite_index(const ConstellationSpec& spec, int plane, int slot) {
    return plane * spec.sats_per_plane + slot;
}

/// Inertial positions (km) of all satellites at time t (seconds from epoch),
/// ordered plane by plane.
std::vector<Vec3> propagate(const ConstellationSpec& spec, double t_s);

/// Positions of all nodes: satellites followed by ground stations (rotating with Earth).
std::vector<Vec3> node_positions(const ConstellationSpec& spec, double t_s);

/// True iff the segment p1-p2 stays strictly farther than grazing_radius_km
/// from Earth's centre.
bool line_of_sight(Vec3 p1, Vec3 p2, double grazing_radius_km);

/// Minimum distance from the origin to the segment p1-p2.
double segment_clearance_km(Vec3 p1, Vec3 p2);

/// One time step of the range matrix. Stored as the strict upper triangle;
/// NaN marks "no line of sight".
class RangeSnapshot {
public:
    RangeSnapshot() = default;
    explicit RangeSnapshot(int n);

    int size() const { return n_; }
    std::optional<double> at(int i, int j) const;
    void set(int i, int j, std::optional<double> range_km);

private:
    std::size_t slot(int i, int j) const;

    int n_ = 0;
    std::vector<double> upper_;
};

struct RangeSeries {
    double dt_s = 60.0;
    int num_nodes = 0;
    std::vector<RangeSnapshot> snapshots;

    int num_steps() const { return static_cast<int>(snapshots.size()); }
    double time_of(int step) const { return dt_s * step; }
};

/// Samples the range matrix at t = k*dt for k in [0, floor(duration/dt)).
RangeSeries range_series(const ConstellationSpec& spec, double duration_s, double dt_s);

RangeSnapshot range_snapshot(const ConstellationSpec& spec, double t_s);

/// Long-format CSV, header `t_s,i,j,range_km`, 1-based node indices, one row
/// per visible pair with i < j.
void write_range_csv(const RangeSeries& series, const std::filesystem::path& file);
void write_range_csv(const RangeSeries& series, std::ostream& out);

/// Reads one long-format file, or every *.csv file of a directory (one
/// snapshot per file). Pairs absent from the file have no line of sight.
/// `num_nodes` of 0 infers the node count from the largest index seen.
RangeSeries read_range_csv(const std::filesystem::path& path, int num_nodes = 0);
RangeSeries read_range_csv(std::istream& in, int num_nodes = 0);

}  // namespace satnc
