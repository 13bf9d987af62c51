#include "satnc/constellation.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "satnc/error.hpp"
#include "text_util.hpp"

namespace satnc {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
const double kNoLink = std::numeric_limits<double>::quiet_NaN();

Vec3 ground_position(const ConstellationSpec& spec, const GroundStation& gs, double t_s) {
    const double lat = gs.lat_deg * kDeg;
    const double lon = gs.lon_deg * kDeg + spec.earth_rotation_rad_s * (t_s + spec.epoch_s);
    const double r = spec.earth_radius_km;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

bool ground_visible(Vec3 gs, Vec3 sat, double min_elevation_deg) {
    const Vec3 rel = sat - gs;
    const double range = norm(rel);
    if (range <= 0.0) return false;
    const double sin_el = dot(rel, gs) / (range * norm(gs));
    return sin_el > std::sin(min_elevation_deg * kDeg);
}

}  // namespace

double ConstellationSpec::orbital_period_s() const {
    const double a = orbit_radius_km();
    return 2.0 * std::numbers::pi * std::sqrt(a * a * a / mu_km3s2);
}

void ConstellationSpec::validate() const {
    if (num_planes < 1 || sats_per_plane < 1)
        throw ConfigError("constellation needs at least one plane and one satellite per plane");
    if (!(altitude_km > 0.0)) throw ConfigError("altitude_km must be positive");
    if (inclination_deg < 0.0 || inclination_deg > 180.0)
        throw ConfigError("inclination_deg must lie in [0, 180]");
    if (!(earth_radius_km > 0.0) || !(mu_km3s2 > 0.0))
        throw ConfigError("earth_radius_km and mu_km3s2 must be positive");
    if (grazing_radius() >= orbit_radius_km())
        throw ConfigError("grazing radius must be below the orbital radius");
}

std::vector<Vec3> propagate(const ConstellationSpec& spec, double t_s) {
    const double a = spec.orbit_radius_km();
    const double mean_motion = 2.0 * std::numbers::pi / spec.orbital_period_s();
    const double inc = spec.inclination_deg * kDeg;
    const double slot_step = 2.0 * std::numbers::pi / spec.sats_per_plane;
    const double t = t_s + spec.epoch_s;

    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(spec.num_satellites()));
    for (int p = 0; p < spec.num_planes; ++p) {
        const double raan = p * spec.raan_spacing_deg * kDeg;
        const double phase = p * spec.intra_plane_phase_deg * kDeg;
        const double co = std::cos(raan), so = std::sin(raan);
        const double ci = std::cos(inc), si = std::sin(inc);
        for (int k = 0; k < spec.sats_per_plane; ++k) {
            const double u = k * slot_step + phase + mean_motion * t;
            const double cu = std::cos(u), su = std::sin(u);
            out.push_back({a * (co * cu - so * su * ci), a * (so * cu + co * su * ci), a * su * si});
        }
    }
    return out;
}

std::vector<Vec3> node_positions(const ConstellationSpec& spec, double t_s) {
    auto pos = propagate(spec, t_s);
    for (const auto& gs : spec.ground_stations) pos.push_back(ground_position(spec, gs, t_s));
    return pos;
}

double segment_clearance_km(Vec3 p1, Vec3 p2) {
    const Vec3 d = p2 - p1;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return norm(p1);
    const double s = std::clamp(-dot(p1, d) / len2, 0.0, 1.0);
    return norm(p1 + s * d);
}

bool line_of_sight(Vec3 p1, Vec3 p2, double grazing_radius_km) {
    return segment_clearance_km(p1, p2) > grazing_radius_km;
}

RangeSnapshot::RangeSnapshot(int n)
    : n_(n), upper_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2, kNoLink) {}

std::size_t RangeSnapshot::slot(int i, int j) const {
    if (i > j) std::swap(i, j);
    const auto ui = static_cast<std::size_t>(i);
    const auto un = static_cast<std::size_t>(n_);
    return ui * un - ui * (ui + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

std::optional<double> RangeSnapshot::at(int i, int j) const {
    if (i == j) return std::nullopt;
    const double v = upper_[slot(i, j)];
    if (std::isnan(v)) return std::nullopt;
    return v;
}

void RangeSnapshot::set(int i, int j, std::optional<double> range_km) {
    if (i == j) throw ConsistencyError("range matrix diagonal must stay empty");
    if (range_km && !(*range_km > 0.0)) throw ConsistencyError("ranges must be positive");
    upper_[slot(i, j)] = range_km.value_or(kNoLink);
}

RangeSnapshot range_snapshot(const ConstellationSpec& spec, double t_s) {
    const auto pos = node_positions(spec, t_s);
    const int n = static_cast<int>(pos.size());
    const int sats = spec.num_satellites();
    const double grazing = spec.grazing_radius();
    RangeSnapshot snap(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool i_gs = i >= sats, j_gs = j >= sats;
            bool visible = false;
            if (!i_gs && !j_gs) {
                visible = line_of_sight(pos[i], pos[j], grazing);
            } else if (i_gs != j_gs) {
                const Vec3 g = i_gs ? pos[i] : pos[j];
                const Vec3 s = i_gs ? pos[j] : pos[i];
                visible = ground_visible(g, s, spec.gs_min_elevation_deg);
            }
            if (visible) snap.set(i, j, distance(pos[i], pos[j]));
        }
    }
    return snap;
}

RangeSeries range_series(const ConstellationSpec& spec, double duration_s, double dt_s) {
    if (!(dt_s > 0.0) || duration_s < dt_s)
        throw ConfigError("range series needs duration >= dt > 0");
    spec.validate();
    RangeSeries series;
    series.dt_s = dt_s;
    series.num_nodes = spec.num_nodes();
    const int steps = static_cast<int>(std::floor(duration_s / dt_s + 1e-9));
    series.snapshots.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) series.snapshots.push_back(range_snapshot(spec, k * dt_s));
    return series;
}

void write_range_csv(const RangeSeries& series, std::ostream& out) {
    out << "t_s,i,j,range_km\n";
    for (int k = 0; k < series.num_steps(); ++k) {
        const auto& snap = series.snapshots[static_cast<std::size_t>(k)];
        const std::string t = detail::fixed(series.time_of(k), 3);
        for (int i = 0; i < snap.size(); ++i)
            for (int j = i + 1; j < snap.size(); ++j)
                if (auto r = snap.at(i, j))
                    out << t << ',' << i + 1 << ',' << j + 1 << ',' << detail::fixed(*r, 6) << '\n';
    }
}

void write_range_csv(const RangeSeries& series, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    write_range_csv(series, out);
    if (!out) throw IoError("write failed: " + file.string());
}

namespace {

struct RangeRow {
    double t_s;
    int i, j;
    double range_km;
};

void read_rows(std::istream& in, const std::string& origin, std::vector<RangeRow>& rows) {
    std::string line;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (header) {
            header = false;
            if (t.rfind("t_s", 0) == 0) continue;
        }
        const auto f = detail::split(t);
        if (f.size() != 4)
            throw ConsistencyError(origin + ":" + std::to_string(lineno) + ": expected t_s,i,j,range_km");
        rows.push_back({detail::parse_double(f[0], "t_s"), static_cast<int>(detail::parse_int(f[1], "i")),
                        static_cast<int>(detail::parse_int(f[2], "j")), detail::parse_double(f[3], "range_km")});
    }
}

RangeSeries assemble(std::vector<RangeRow> rows, int num_nodes) {
    RangeSeries series;
    if (rows.empty()) throw ConsistencyError("range file has no rows");
    std::vector<double> times;
    int max_index = 0;
    for (const auto& r : rows) {
        if (r.i < 1 || r.j < 1) throw ConsistencyError("range node indices are 1-based");
        max_index = std::max({max_index, r.i, r.j});
        times.push_back(r.t_s);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    double dt = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double d = times[k] - times[k - 1];
        if (dt == 0.0 || d < dt) dt = d;
    }
    if (dt == 0.0) dt = 60.0;
    const double t0 = times.front();
    const int steps = static_cast<int>(std::lround((times.back() - t0) / dt)) + 1;
    const int n = num_nodes > 0 ? num_nodes : max_index;
    if (max_index > n) throw ConsistencyError("range file references node beyond configured node count");

    series.dt_s = dt;
    series.num_nodes = n;
    series.snapshots.assign(static_cast<std::size_t>(steps), RangeSnapshot(n));
    for (const auto& r : rows) {
        const long k = std::lround((r.t_s - t0) / dt);
        series.snapshots[static_cast<std::size_t>(k)].set(r.i - 1, r.j - 1, r.range_km);
    }
    return series;
}

}  // namespace

RangeSeries read_range_csv(std::istream& in, int num_nodes) {
    std::vector<RangeRow> rows;
    read_rows(in, "<stream>", rows);
    return assemble(std::move(rows), num_nodes);
}

RangeSeries read_range_csv(const std::filesystem::path& path, int num_nodes) {
    std::vector<RangeRow> rows;
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(path)) {
        for (const auto& e : std::filesystem::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw IoError("cannot open range file " + f.string());
        read_rows(in, f.string(), rows);
    }
    return assemble(std::move(rows), num_nodes);
}

}  // namespace satnc
