#include "satnc/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "satnc/error.hpp"
#include "text_util.hpp"

namespace satnc {

namespace {

double to_double(std::string_view key, std::string_view v) {
    try {
        return detail::parse_double(v, key);
    } catch (const ConsistencyError& e) {
        throw ConfigError(e.what());
    }
}

long long to_int(std::string_view key, std::string_view v) {
    try {
        return detail::parse_int(v, key);
    } catch (const ConsistencyError& e) {
        throw ConfigError(e.what());
    }
}

bool to_bool(std::string_view key, std::string_view v) {
    v = detail::trim(v);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("expected boolean for " + std::string(key) + ", got '" + std::string(v) + "'");
}

std::optional<std::filesystem::path> to_path(std::string_view v, const std::filesystem::path& base) {
    v = detail::trim(v);
    if (v.empty()) return std::nullopt;
    std::filesystem::path p{std::string(v)};
    if (p.is_relative() && !base.empty()) p = base / p;
    return p;
}

std::vector<GroundStation> to_stations(std::string_view key, std::string_view v) {
    std::vector<GroundStation> out;
    std::istringstream in{std::string(v)};
    std::string item;
    while (in >> item) {
        const auto parts = detail::split(item, ':');
        if (parts.size() != 2) throw ConfigError(std::string(key) + ": expected lat:lon pairs");
        out.push_back({to_double(key, parts[0]), to_double(key, parts[1])});
    }
    return out;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, std::string_view, const std::filesystem::path&)>;

template <typename F>
Setter num(F field) {
    return [field](ScenarioConfig& c, std::string_view k, std::string_view v, const std::filesystem::path&) {
        field(c) = to_double(k, v);
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        using P = std::filesystem::path;
        t["constellation.planes"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            c.constellation.num_planes = static_cast<int>(to_int(k, v));
        };
        t["constellation.sats_per_plane"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            c.constellation.sats_per_plane = static_cast<int>(to_int(k, v));
        };
        t["constellation.altitude_km"] = num([](ScenarioConfig& c) -> double& { return c.constellation.altitude_km; });
        t["constellation.inclination_deg"] =
            num([](ScenarioConfig& c) -> double& { return c.constellation.inclination_deg; });
        t["constellation.raan_spacing_deg"] =
            num([](ScenarioConfig& c) -> double& { return c.constellation.raan_spacing_deg; });
        t["constellation.phase_deg"] =
            num([](ScenarioConfig& c) -> double& { return c.constellation.intra_plane_phase_deg; });
        t["constellation.earth_radius_km"] =
            num([](ScenarioConfig& c) -> double& { return c.constellation.earth_radius_km; });
        t["constellation.mu_km3s2"] = num([](ScenarioConfig& c) -> double& { return c.constellation.mu_km3s2; });
        t["constellation.epoch_s"] = num([](ScenarioConfig& c) -> double& { return c.constellation.epoch_s; });
        t["constellation.grazing_radius_km"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            if (detail::trim(v).empty())
                c.constellation.grazing_radius_km.reset();
            else
                c.constellation.grazing_radius_km = to_double(k, v);
        };
        t["constellation.ground_stations"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            c.constellation.ground_stations = to_stations(k, v);
        };
        t["constellation.gs_min_elevation_deg"] =
            num([](ScenarioConfig& c) -> double& { return c.constellation.gs_min_elevation_deg; });
        t["constellation.earth_rotation_rad_s"] =
            num([](ScenarioConfig& c) -> double& { return c.constellation.earth_rotation_rad_s; });

        t["link.f_hz"] = num([](ScenarioConfig& c) -> double& { return c.link.f_hz; });
        t["link.pt_dbm"] = num([](ScenarioConfig& c) -> double& { return c.link.pt_dbm; });
        t["link.gt_dbi"] = num([](ScenarioConfig& c) -> double& { return c.link.gt_dbi; });
        t["link.gr_dbi"] = num([](ScenarioConfig& c) -> double& { return c.link.gr_dbi; });
        t["link.t_sys_k"] = num([](ScenarioConfig& c) -> double& { return c.link.t_sys_k; });
        t["link.r_bps"] = num([](ScenarioConfig& c) -> double& { return c.link.r_bps; });
        t["link.nf_db"] = num([](ScenarioConfig& c) -> double& { return c.link.nf_db; });
        t["link.bw_hz"] = num([](ScenarioConfig& c) -> double& { return c.link.bw_hz; });

        t["run.duration_s"] = num([](ScenarioConfig& c) -> double& { return c.run.duration_s; });
        t["run.dt_s"] = num([](ScenarioConfig& c) -> double& { return c.run.dt_s; });
        t["run.source"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            c.run.source = static_cast<int>(to_int(k, v)) - 1;
        };
        t["run.sinks"] = [](ScenarioConfig& c, auto, auto v, const P&) { c.run.sinks = parse_node_list(v); };
        t["run.field_m"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            c.run.field.m = static_cast<int>(to_int(k, v));
        };
        t["run.min_field"] = [](ScenarioConfig& c, auto k, auto v, const P&) { c.run.min_field = to_bool(k, v); };
        t["run.unit_bps"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            if (detail::trim(v).empty())
                c.run.unit_bps.reset();
            else
                c.run.unit_bps = to_double(k, v);
        };
        t["run.threshold"] = num([](ScenarioConfig& c) -> double& { return c.run.threshold; });
        t["run.retry_paths"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            c.run.retry_paths = static_cast<int>(to_int(k, v));
        };
        t["run.seed"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            const long long s = to_int(k, v);
            if (s < 0) throw ConfigError("run.seed must be non-negative");
            c.run.seed = static_cast<std::uint64_t>(s);
        };
        t["run.rate"] = [](ScenarioConfig& c, auto k, auto v, const P&) {
            if (detail::trim(v).empty())
                c.run.rate.reset();
            else
                c.run.rate = static_cast<int>(to_int(k, v));
        };

        t["io.output_dir"] = [](ScenarioConfig& c, auto, auto v, const P& base) {
            c.io.output_dir = to_path(v, base).value_or(std::filesystem::path{"."});
        };
        t["io.range_import"] = [](ScenarioConfig& c, auto, auto v, const P& base) {
            c.io.range_import = to_path(v, base);
        };
        t["io.graph_import"] = [](ScenarioConfig& c, auto, auto v, const P& base) {
            c.io.graph_import = to_path(v, base);
        };
        t["io.paths_import"] = [](ScenarioConfig& c, auto, auto v, const P& base) {
            c.io.paths_import = to_path(v, base);
        };
        return t;
    }();
    return table;
}

}  // namespace

std::vector<int> parse_node_list(std::string_view text) {
    std::vector<int> out;
    if (detail::trim(text).empty()) return out;
    for (auto item : detail::split(text, ',')) {
        if (item.empty()) throw ConfigError("empty entry in node list");
        const long long v = to_int("node list", item);
        if (v < 1) throw ConfigError("node ids are 1-based");
        if (std::find(out.begin(), out.end(), static_cast<int>(v) - 1) != out.end())
            throw ConfigError("node " + std::string(detail::trim(item)) + " listed twice");
        out.push_back(static_cast<int>(v) - 1);
    }
    return out;
}

std::string format_node_list(const std::vector<int>& nodes) {
    std::string s;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += (k ? "," : "") + std::to_string(nodes[k] + 1);
    return s;
}

void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value,
                    const std::filesystem::path& base_dir) {
    const auto& t = setters();
    const auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    it->second(cfg, key, value, base_dir);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, s] : setters()) keys.push_back(k);
    return keys;
}

void ScenarioConfig::validate() const {
    constellation.validate();
    try {
        link.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    run.field.validate();
    if (!(run.dt_s > 0.0)) throw ConfigError("run.dt_s must be positive");
    if (!(run.duration_s > 0.0)) throw ConfigError("run.duration_s must be positive");
    if (run.dt_s > run.duration_s) throw ConfigError("run.dt_s exceeds run.duration_s");
    if (run.sinks.empty()) throw ConfigError("run.sinks must list at least one sink");
    if (run.source < 0) throw ConfigError("run.source must be a 1-based node id");
    std::set<int> seen;
    for (int t : run.sinks) {
        if (t == run.source) throw ConfigError("run.sinks contains the source");
        if (!seen.insert(t).second) throw ConfigError("run.sinks repeats node " + std::to_string(t + 1));
    }
    if (!io.range_import && !io.graph_import) {
        const int n = constellation.num_nodes();
        if (run.source >= n) throw ConfigError("run.source exceeds the node count");
        for (int t : run.sinks)
            if (t >= n) throw ConfigError("sink " + std::to_string(t + 1) + " exceeds the node count");
    }
    if (unit_bps() <= 0.0) throw ConfigError("run.unit_bps must be positive");
    if (run.retry_paths < 0) throw ConfigError("run.retry_paths must be non-negative");
    if (run.rate && *run.rate < 1) throw ConfigError("run.rate must be at least 1");
}

ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    ScenarioConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
        for (const auto& [key, value] : body)
            apply_override(cfg, section + "." + key, value.get_value<std::string>(), base_dir);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open configuration file " + file.string());
    return parse_config(in, file.parent_path());
}

void write_config(const ScenarioConfig& c, std::ostream& out) {
    auto d = [](double v) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    };
    const auto& k = c.constellation;
    out << "[constellation]\n"
        << "planes = " << k.num_planes << "\nsats_per_plane = " << k.sats_per_plane
        << "\naltitude_km = " << d(k.altitude_km) << "\ninclination_deg = " << d(k.inclination_deg)
        << "\nraan_spacing_deg = " << d(k.raan_spacing_deg) << "\nphase_deg = " << d(k.intra_plane_phase_deg)
        << "\nearth_radius_km = " << d(k.earth_radius_km) << "\nmu_km3s2 = " << d(k.mu_km3s2)
        << "\nepoch_s = " << d(k.epoch_s) << "\ngrazing_radius_km = "
        << (k.grazing_radius_km ? d(*k.grazing_radius_km) : "") << "\nground_stations =";
    for (const auto& g : k.ground_stations) out << ' ' << d(g.lat_deg) << ':' << d(g.lon_deg);
    out << "\ngs_min_elevation_deg = " << d(k.gs_min_elevation_deg)
        << "\nearth_rotation_rad_s = " << d(k.earth_rotation_rad_s) << "\n\n";
    const auto& l = c.link;
    out << "[link]\nf_hz = " << d(l.f_hz) << "\npt_dbm = " << d(l.pt_dbm) << "\ngt_dbi = " << d(l.gt_dbi)
        << "\ngr_dbi = " << d(l.gr_dbi) << "\nt_sys_k = " << d(l.t_sys_k) << "\nr_bps = " << d(l.r_bps)
        << "\nnf_db = " << d(l.nf_db) << "\nbw_hz = " << d(l.bw_hz) << "\n\n";
    const auto& r = c.run;
    out << "[run]\nduration_s = " << d(r.duration_s) << "\ndt_s = " << d(r.dt_s) << "\nsource = " << r.source + 1
        << "\nsinks = " << format_node_list(r.sinks) << "\nfield_m = " << r.field.m
        << "\nmin_field = " << (r.min_field ? "true" : "false") << "\nunit_bps = " << (r.unit_bps ? d(*r.unit_bps) : "")
        << "\nthreshold = " << d(r.threshold) << "\nretry_paths = " << r.retry_paths << "\nseed = " << r.seed
        << "\nrate = " << (r.rate ? std::to_string(*r.rate) : "") << "\n\n";
    auto p = [](const std::optional<std::filesystem::path>& v) { return v ? v->string() : std::string{}; };
    out << "[io]\noutput_dir = " << c.io.output_dir.string() << "\nrange_import = " << p(c.io.range_import)
        << "\ngraph_import = " << p(c.io.graph_import) << "\npaths_import = " << p(c.io.paths_import) << '\n';
}

}  // namespace satnc
