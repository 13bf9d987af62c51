#include "satnc/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include "satnc/error.hpp"
#include "satnc/linkbudget.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace satnc {

RangeSeries load_ranges(const ScenarioConfig& cfg) {
    if (cfg.io.range_import) return read_range_csv(*cfg.io.range_import);
    return range_series(cfg.constellation, cfg.run.duration_s, cfg.run.dt_s);
}

GraphSeries load_graphs(const ScenarioConfig& cfg) {
    if (cfg.io.graph_import) return read_graph_csv(*cfg.io.graph_import);
    const RangeSeries ranges = load_ranges(cfg);
    GraphSeries gs;
    gs.dt_s = ranges.dt_s;
    gs.snapshots.resize(ranges.snapshots.size());
    for (int k = 0; k < ranges.num_steps(); ++k) gs.times_s.push_back(ranges.time_of(k));
    detail::parallel_for(gs.snapshots.size(), [&](std::size_t k) {
        gs.snapshots[k] = quantize(capacity_graph(ranges.snapshots[k], cfg.link), cfg.unit_bps());
    });
    return gs;
}

MultiGraph load_graph_at(const ScenarioConfig& cfg, double t_s) {
    auto missing = [&] { return ConfigError("no snapshot at t = " + detail::fixed(t_s / 60.0, 3) + " min"); };
    if (cfg.io.graph_import || cfg.io.range_import) {
        GraphSeries gs = load_graphs(cfg);
        const int k = gs.step_at(t_s);
        if (k < 0) throw missing();
        return std::move(gs.snapshots[static_cast<std::size_t>(k)]);
    }
    if (t_s < 0.0 || t_s >= cfg.run.duration_s) throw missing();
    return quantize(capacity_graph(range_snapshot(cfg.constellation, t_s), cfg.link), cfg.unit_bps());
}

Scenario make_scenario(const ScenarioConfig& cfg, GraphSeries graphs) {
    Scenario sc;
    sc.graphs = std::move(graphs);
    sc.source = cfg.run.source;
    sc.sinks = cfg.run.sinks;
    sc.field = cfg.run.field;
    sc.unit_bps = cfg.unit_bps();
    sc.distribution_bps = cfg.link.r_bps;
    sc.validate();
    return sc;
}

namespace {

void check_nodes(const ScenarioConfig& cfg, const MultiGraph& g) {
    if (cfg.run.source >= g.size()) throw ConfigError("source " + std::to_string(cfg.run.source + 1) + " not in graph");
    for (int t : cfg.run.sinks)
        if (t >= g.size()) throw ConfigError("sink " + std::to_string(t + 1) + " not in graph");
}

struct Attempt {
    PathSet trimmed;
    MultiGraph pruned;
    Plg plg;
};

Attempt plan(const MultiGraph& g, int source, const PathSet& paths, int rate) {
    Attempt a;
    a.trimmed = trim_paths(paths, rate);
    std::vector<int> served;
    for (const auto& sp : a.trimmed.sinks) served.push_back(sp.sink);
    a.pruned = prune(g, a.trimmed);
    a.plg = build_plg(a.pruned, source, served, a.trimmed);
    return a;
}

}  // namespace

CodeOutcome run_code(const ScenarioConfig& cfg, const MultiGraph& g) {
    check_nodes(cfg, g);
    CodeOutcome out;
    const int s = cfg.run.source;

    PathSet found;
    if (cfg.io.paths_import) {
        PathSet imported = read_paths_csv(*cfg.io.paths_import, g, s);
        validate_paths(g, imported);
        found.source = s;
        for (int t : cfg.run.sinks) {
            if (const SinkPaths* sp = imported.find(t)) {
                found.sinks.push_back(*sp);
            } else {
                found.sinks.push_back({t, max_flow(g, s, t), {}, false});
            }
        }
    } else {
        found = find_paths(g, s, cfg.run.sinks);
    }
    out.paths = found;

    out.rate = cfg.run.rate.value_or(found.min_reachable_flow());
    if (out.rate == 0) {
        out.exit_code = kExitSinkUnserved;
        out.message = "no sink is reachable from the source";
        out.report = verify_multicast(NetworkCode{}, g, cfg.run.sinks, 0);
        return out;
    }

    Attempt a = plan(g, s, found, out.rate);
    std::mt19937_64 rng(cfg.run.seed);
    while (!is_generalized_acyclic(a.plg) && out.retries_used < cfg.run.retry_paths && !cfg.io.paths_import) {
        ++out.retries_used;
        PathOptions opts;
        opts.rng = &rng;
        out.paths = find_paths(g, s, cfg.run.sinks, opts);
        a = plan(g, s, out.paths, out.rate);
    }
    out.pruned = a.pruned;
    out.plg = a.plg;

    out.field = cfg.run.field;
    if (cfg.run.min_field) out.field = smallest_field_exceeding(static_cast<int>(a.plg.sinks.size()));

    TopoOrder order;
    try {
        order = topo_order(a.plg);
    } catch (const CyclicPlgError& e) {
        out.exit_code = kExitCncRequired;
        out.message = "CNC required: the paths line-graph is cyclic, so this path set needs a convolutional network code";
        out.cycle = e.cycle();
        return out;
    }

    try {
        NetworkCode code = construct_multicast(a.plg, order, out.rate, out.field);
        code.lek = extract_lek(code, a.pruned);
        out.report = verify_multicast(code, a.pruned, cfg.run.sinks, out.rate);
        out.code = std::move(code);
    } catch (const FieldExhaustedError& e) {
        out.exit_code = kExitSinkUnserved;
        out.message = e.what();
        return out;
    }

    std::string unserved;
    for (const auto& d : out.report->sinks)
        if (!d.decodable) unserved += " " + std::to_string(d.sink + 1);
    if (!unserved.empty()) {
        out.exit_code = kExitSinkUnserved;
        out.message = "sinks not served at rate " + std::to_string(out.rate) + ":" + unserved;
    }
    return out;
}

namespace {

std::ofstream open_output(const std::filesystem::path& file) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write " + file.string());
    return out;
}

std::string time_tag(double t_min) {
    std::string s = detail::fixed(t_min, 3);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string sink_label(const std::vector<int>& sinks) {
    std::string s;
    for (std::size_t k = 0; k < sinks.size(); ++k) s += (k ? " " : "") + std::to_string(sinks[k] + 1);
    return s;
}

}  // namespace

int cmd_propagate(const ScenarioConfig& cfg, std::ostream& log) {
    const RangeSeries ranges = load_ranges(cfg);
    const auto file = cfg.io.output_dir / "ranges.csv";
    auto out = open_output(file);
    write_range_csv(ranges, out);
    log << "wrote " << file.string() << " (" << ranges.num_steps() << " snapshots, " << ranges.num_nodes
        << " nodes)\n";
    return kExitOk;
}

int cmd_code(const ScenarioConfig& cfg, double t_min, std::ostream& log) {
    const MultiGraph g = load_graph_at(cfg, t_min * 60.0);
    const CodeOutcome res = run_code(cfg, g);
    const std::string tag = time_tag(t_min);

    {
        auto out = open_output(cfg.io.output_dir / ("paths_t" + tag + ".csv"));
        write_paths_csv(res.paths, out);
    }
    if (res.plg) {
        auto out = open_output(cfg.io.output_dir / ("plg_t" + tag + ".csv"));
        write_plg_csv(*res.plg, out);
    }
    if (res.code) {
        auto out = open_output(cfg.io.output_dir / ("code_t" + tag + ".txt"));
        write_code_dump(*res.code, out);
    }
    if (res.report) {
        auto out = open_output(cfg.io.output_dir / ("sinks_t" + tag + ".csv"));
        write_sink_report(*res.report, out);
        for (const auto& d : res.report->sinks)
            log << "sink " << d.sink + 1 << ": rank " << d.rank << '/' << res.rate
                << (d.decodable ? " decodable\n" : " NOT decodable\n");
    }
    if (res.retries_used > 0) log << "path search retried " << res.retries_used << " time(s)\n";
    if (!res.message.empty()) log << res.message << '\n';
    if (!res.cycle.empty()) log << "cycle: " << res.cycle << '\n';
    return res.exit_code;
}

namespace {

Analysis run_analysis(const ScenarioConfig& cfg) {
    return analyze(make_scenario(cfg, load_graphs(cfg)), cfg.run.threshold);
}

}  // namespace

int cmd_rates(const ScenarioConfig& cfg, std::ostream& log) {
    const Analysis a = run_analysis(cfg);
    {
        auto out = open_output(cfg.io.output_dir / "rates.csv");
        write_rates_csv(a, out);
    }
    {
        auto out = open_output(cfg.io.output_dir / "interval_sweep.csv");
        write_interval_sweep_csv(a, out);
    }
    {
        auto out = open_output(cfg.io.output_dir / "criteria.csv");
        write_criteria_header(out);
        write_criteria_row(sink_label(cfg.run.sinks), a.report, out);
    }
    log << "wrote rates.csv, interval_sweep.csv and criteria.csv to " << cfg.io.output_dir.string() << '\n';
    return kExitOk;
}

int cmd_criteria(const ScenarioConfig& cfg, std::ostream& out, std::ostream& log) {
    const Analysis a = run_analysis(cfg);
    {
        auto file = open_output(cfg.io.output_dir / "criteria.csv");
        write_criteria_header(file);
        write_criteria_row(sink_label(cfg.run.sinks), a.report, file);
    }
    const auto& c = a.report;
    auto opt = [](const std::optional<double>& v) { return v ? detail::fixed(*v, 2) : std::string("none"); };
    out << "sinks           " << sink_label(cfg.run.sinks) << '\n'
        << "PAPR            " << detail::fixed(c.papr, 4) << '\n'
        << "maxRa           " << detail::fixed(c.max_ra, 4) << '\n'
        << "rateR           " << detail::fixed(c.rate_r, 4) << '\n'
        << "p50             " << detail::fixed(c.p50, 4) << '\n'
        << "p75             " << detail::fixed(c.p75, 4) << '\n'
        << "t_period_min    " << opt(c.t_period_min) << '\n'
        << "tau_stable_min  " << detail::fixed(c.tau_stable_min, 2) << (c.tau_capped ? " (capped)" : "") << '\n'
        << "t_opt_min       " << opt(c.t_opt_min) << '\n'
        << "recommendation  " << to_string(c.recommendation) << '\n';
    if (!c.ratios_defined) log << "intersection rate is zero; ratios against it are undefined\n";
    return kExitOk;
}

}  // namespace satnc
