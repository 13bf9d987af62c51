#include "satnc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "satnc/error.hpp"
#include "satnc/paths.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace satnc {

void Scenario::validate() const {
    if (graphs.snapshots.empty()) throw ConfigError("scenario has no snapshots");
    if (!(graphs.dt_s > 0.0)) throw ConfigError("snapshot spacing must be positive");
    if (sinks.empty()) throw ConfigError("at least one sink is required");
    const int n = num_nodes();
    if (source < 0 || source >= n) throw ConfigError("source node out of range");
    std::set<int> seen;
    for (int t : sinks) {
        if (t < 0 || t >= n) throw ConfigError("sink node out of range");
        if (t == source) throw ConfigError("the source cannot be a sink");
        if (!seen.insert(t).second) throw ConfigError("duplicate sink");
    }
    field.validate();
    if (!(unit_bps > 0.0) || !(distribution_bps > 0.0)) throw ConfigError("rates must be positive");
}

int Scenario::num_nodes() const { return graphs.snapshots.empty() ? 0 : graphs.snapshots.front().size(); }

double Scenario::rate_of(int h) const { return h * unit_bps / field.bits(); }

int min_sink_flow(const MultiGraph& g, int source, const std::vector<int>& sinks) {
    int best = std::numeric_limits<int>::max();
    for (int t : sinks) {
        best = std::min(best, max_flow(g, source, t));
        if (best == 0) break;
    }
    return sinks.empty() ? 0 : best;
}

std::vector<int> max_flow_series(const Scenario& sc) {
    std::vector<int> h(sc.graphs.snapshots.size());
    detail::parallel_for(h.size(), [&](std::size_t k) { h[k] = min_sink_flow(sc.graphs.snapshots[k], sc.source, sc.sinks); });
    return h;
}

namespace {

std::vector<double> grid_times(const Scenario& sc) {
    if (sc.graphs.times_s.size() == sc.graphs.snapshots.size()) return sc.graphs.times_s;
    std::vector<double> t(sc.graphs.snapshots.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) * sc.dt_s();
    return t;
}

}  // namespace

RateSeries r_opt_series(const Scenario& sc, const std::vector<int>& h) {
    RateSeries s{"opt", grid_times(sc), {}};
    for (int v : h) s.values.push_back(sc.rate_of(v));
    return s;
}

RateSeries r_opt_series(const Scenario& sc) { return r_opt_series(sc, max_flow_series(sc)); }

double t_distribution(int num_nodes, int num_sinks, double rate_bps) {
    if (num_nodes <= 0 || num_sinks <= 0 || !(rate_bps > 0.0))
        throw DomainError("t_distribution needs positive node count, sink count and rate");
    const double v = num_nodes;
    return v * v * v * std::log2(num_sinks + 1.0) / rate_bps;
}

MultiGraph intersection_graph(const Scenario& sc, int first, int last) {
    if (first < 0 || last < first || last >= sc.graphs.num_steps())
        throw DomainError("intersection range outside the snapshot grid");
    MultiGraph g = sc.graphs.snapshots[static_cast<std::size_t>(first)];
    for (int k = first + 1; k <= last; ++k) g = intersect(g, sc.graphs.snapshots[static_cast<std::size_t>(k)]);
    return g;
}

double r_intersection(const Scenario& sc, int first, int last) {
    return sc.rate_of(min_sink_flow(intersection_graph(sc, first, last), sc.source, sc.sinks));
}

RateSeries r_intersection_cumulative(const Scenario& sc) {
    RateSeries s{"intersection", grid_times(sc), {}};
    MultiGraph g;
    int h = 0;
    for (int k = 0; k < sc.graphs.num_steps(); ++k) {
        const auto& snap = sc.graphs.snapshots[static_cast<std::size_t>(k)];
        MultiGraph next = k == 0 ? snap : intersect(g, snap);
        if (k == 0 || (h > 0 && !(next == g))) h = min_sink_flow(next, sc.source, sc.sinks);
        g = std::move(next);
        s.values.push_back(sc.rate_of(h));
    }
    return s;
}

RateSeries r_static_series(const Scenario& sc, const std::vector<int>& h) {
    RateSeries s{"static", grid_times(sc), {}};
    const double q = sc.field.order();
    double sum = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        sum += h[k];
        const double tau = static_cast<double>(k + 1);
        // smallest power of two strictly above |F| * tau
        const double bits = std::floor(std::log2(q * tau)) + 1.0;
        s.values.push_back(sum / tau * sc.unit_bps / bits);
    }
    return s;
}

double r_interval(const Scenario& sc, int num_snapshots, int window, double t_dist_s) {
    if (window <= 0 || num_snapshots <= 0 || num_snapshots % window != 0 || num_snapshots > sc.graphs.num_steps())
        throw DomainError("interval window must divide the horizon");
    const double T = window * sc.dt_s();
    if (!(T > t_dist_s)) throw DomainError("interval window leaves no airtime after parameter distribution");
    const double tau = num_snapshots * sc.dt_s();
    double total = 0.0;
    for (int start = 0; start < num_snapshots; start += window)
        total += r_intersection(sc, start, start + window - 1) * (T - t_dist_s) / tau;
    return total;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DomainError("percentile of an empty sequence");
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (values[hi] - values[lo]) * (pos - static_cast<double>(lo));
}

PeriodEstimate t_period(const RateSeries& series) {
    PeriodEstimate est;
    const auto& v = series.values;
    if (v.size() < 3) return est;
    const double p90 = percentile(v, 90.0);
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        const bool interior = i > 0 && j + 1 < v.size();
        if (interior && v[i] > v[i - 1] && v[i] > v[j + 1] && v[i] >= p90)
            est.peaks.push_back(0.5 * static_cast<double>(i + j));
        i = j + 1;
    }
    if (est.peaks.size() < 2) return est;
    std::vector<double> gaps;
    for (std::size_t k = 1; k < est.peaks.size(); ++k) gaps.push_back(est.peaks[k] - est.peaks[k - 1]);
    const double dt = series.times_s.size() > 1 ? series.times_s[1] - series.times_s[0] : 1.0;
    est.period_s = percentile(gaps, 50.0) * dt;
    return est;
}

StableEstimate tau_stable(const RateSeries& cumulative, std::optional<double> cap_s) {
    StableEstimate est;
    const auto& v = cumulative.values;
    if (v.empty()) return est;
    const double p90 = percentile(v, 90.0);
    std::size_t k = 0;
    while (k < v.size() && v[k] > p90) ++k;
    const double dt = cumulative.times_s.size() > 1 ? cumulative.times_s[1] - cumulative.times_s[0] : 0.0;
    est.index = static_cast<int>(k);
    est.tau_s = static_cast<double>(k) * dt;
    if (cap_s && est.tau_s > *cap_s) {
        est.tau_s = *cap_s;
        est.index = static_cast<int>(std::floor(*cap_s / dt));
        est.capped = true;
    }
    return est;
}

TOptResult find_t_opt(const Scenario& sc, int num_snapshots, double min_window_s, double t_dist_s,
                      double r_int_horizon) {
    TOptResult res;
    const double dt = sc.dt_s();
    for (int m = 1; m <= num_snapshots; ++m) {
        if (num_snapshots % m != 0) continue;
        const double T = m * dt;
        if (!(T > t_dist_s) || T < min_window_s) continue;
        res.sweep.push_back({T, r_interval(sc, num_snapshots, m, t_dist_s)});
    }
    if (res.sweep.empty()) return res;
    res.monotone = true;
    std::size_t best = 0;
    for (std::size_t k = 0; k < res.sweep.size(); ++k) {
        if (k > 0 && res.sweep[k].rate < res.sweep[k - 1].rate) res.monotone = false;
        if (res.sweep[k].rate > res.sweep[best].rate) best = k;
    }
    res.best_rate = res.sweep[best].rate;
    if (res.best_rate >= r_int_horizon && res.best_rate > 0.0) res.t_opt_s = res.sweep[best].window_s;
    return res;
}

std::string to_string(Recommendation r) { return r == Recommendation::Interval ? "interval" : "intersection"; }

CriteriaReport criteria(const RateSeries& r_opt, double r_int_horizon, double best_interval, double threshold) {
    CriteriaReport c;
    const auto& v = r_opt.values;
    if (v.empty()) throw DomainError("criteria need a non-empty rate series");
    const double mx = *std::max_element(v.begin(), v.end());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto ratio = [&](double den) { return den > 0.0 ? mx / den : (mx > 0.0 ? nan : 1.0); };
    c.papr = ratio(mean);
    c.p50 = ratio(percentile(v, 50.0));
    c.p75 = ratio(percentile(v, 75.0));
    if (r_int_horizon > 0.0) {
        c.max_ra = mx / r_int_horizon;
        c.rate_r = best_interval / r_int_horizon;
    } else {
        c.ratios_defined = false;
        c.max_ra = std::numeric_limits<double>::infinity();
        c.rate_r = nan;
    }
    c.recommendation = c.max_ra >= threshold ? Recommendation::Interval : Recommendation::Intersection;
    return c;
}

Analysis analyze(const Scenario& sc, double threshold) {
    sc.validate();
    Analysis a;
    a.h = max_flow_series(sc);
    a.r_opt = r_opt_series(sc, a.h);
    a.r_int_cum = r_intersection_cumulative(sc);
    a.r_static = r_static_series(sc, a.h);
    a.t_dist_s = t_distribution(sc.num_nodes(), static_cast<int>(sc.sinks.size()), sc.distribution_bps);
    a.period = t_period(a.r_opt);
    std::optional<double> cap;
    if (a.period.period_s) cap = 2.0 * *a.period.period_s;
    a.stable = tau_stable(a.r_int_cum, cap);
    const int n = sc.graphs.num_steps();
    const double r_int = a.r_int_cum.values.back();
    a.t_opt = find_t_opt(sc, n, a.stable.tau_s, a.t_dist_s, r_int);
    a.report = criteria(a.r_opt, r_int, a.t_opt.best_rate, threshold);
    if (a.period.period_s) a.report.t_period_min = *a.period.period_s / 60.0;
    a.report.tau_stable_min = a.stable.tau_s / 60.0;
    a.report.tau_capped = a.stable.capped;
    if (a.t_opt.t_opt_s) a.report.t_opt_min = *a.t_opt.t_opt_s / 60.0;
    return a;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return detail::fixed(v, 6);
}

std::string flags(const CriteriaReport& c) {
    std::string f;
    auto add = [&](const char* s) { f += f.empty() ? s : std::string(";") + s; };
    if (!c.ratios_defined) add("ratios_undefined");
    if (!c.t_period_min) add("no_period");
    if (c.tau_capped) add("tau_capped");
    return f.empty() ? "-" : f;
}

}  // namespace

void write_rates_csv(const Analysis& a, std::ostream& out) {
    out << "t_min,r_opt,r_intersection_cum,r_static_cum\n";
    for (std::size_t k = 0; k < a.r_opt.values.size(); ++k)
        out << detail::fixed(a.r_opt.times_s[k] / 60.0, 3) << ',' << num(a.r_opt.values[k]) << ','
            << num(a.r_int_cum.values[k]) << ',' << num(a.r_static.values[k]) << '\n';
}

void write_interval_sweep_csv(const Analysis& a, std::ostream& out) {
    out << "T_min,r_interval\n";
    for (const auto& p : a.t_opt.sweep) out << detail::fixed(p.window_s / 60.0, 3) << ',' << num(p.rate) << '\n';
}

void write_criteria_header(std::ostream& out) {
    out << "scenario,papr,maxRa,rateR,p50,p75,t_period_min,tau_stable_min,t_opt_min,recommendation,flags\n";
}

void write_criteria_row(const std::string& label, const CriteriaReport& c, std::ostream& out) {
    out << label << ',' << num(c.papr) << ',' << num(c.max_ra) << ',' << num(c.rate_r) << ',' << num(c.p50) << ','
        << num(c.p75) << ',' << (c.t_period_min ? num(*c.t_period_min) : "none") << ','
        << num(c.tau_stable_min) << ',' << (c.t_opt_min ? num(*c.t_opt_min) : "none") << ','
        << to_string(c.recommendation) << ',' << flags(c) << '\n';
}

}  // namespace satnc
