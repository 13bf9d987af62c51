#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "satnc/field.hpp"
#include "satnc/multigraph.hpp"

namespace satnc {

/// Quantized snapshots plus the multicast session evaluated on them.
struct Scenario {
    GraphSeries graphs;
    int source = 0;
    std::vector<int> sinks;
    FieldSpec field;
    /// Bits per second carried by one edge copy.
    double unit_bps = 6400.0;
    /// Channel rate used to distribute new coding parameters.
    double distribution_bps = 6400.0;

    void validate() const;
    int num_nodes() const;
    double dt_s() const { return graphs.dt_s; }
    /// Symbols per second for a max-flow of `h` edge copies.
    double rate_of(int h) const;
};

struct RateSeries {
    std::string kind;
    std::vector<double> times_s;
    std::vector<double> values;
};

/// Smallest max-flow from the source over all sinks.
int min_sink_flow(const MultiGraph& g, int source, const std::vector<int>& sinks);

/// h(t) per snapshot.
std::vector<int> max_flow_series(const Scenario& sc);

RateSeries r_opt_series(const Scenario& sc, const std::vector<int>& h);
RateSeries r_opt_series(const Scenario& sc);

/// Seconds needed to flood |V|^3 log2(|T|+1) bits at `rate_bps`.
double t_distribution(int num_nodes, int num_sinks, double rate_bps);

/// Edgewise minimum over snapshots first..last (inclusive indices).
MultiGraph intersection_graph(const Scenario& sc, int first, int last);
double r_intersection(const Scenario& sc, int first, int last);

/// values[k] = r_intersection(0, k).
RateSeries r_intersection_cumulative(const Scenario& sc);

/// values[k] = mean(h[0..k]) bits-per-copy scaled, divided by log2 of the
/// smallest power of two exceeding |F|*(k+1).
RateSeries r_static_series(const Scenario& sc, const std::vector<int>& h);

/// Interval scheme over the first `num_snapshots` snapshots with windows of
/// `window` snapshots. Throws DomainError when the window is not longer than
/// `t_dist_s` or does not divide the horizon.
double r_interval(const Scenario& sc, int num_snapshots, int window, double t_dist_s);

/// Linear interpolation between closest ranks; q in [0, 100].
double percentile(std::vector<double> values, double q);

struct PeriodEstimate {
    std::optional<double> period_s;
    /// Centre index of every detected peak.
    std::vector<double> peaks;
};

/// Median spacing of local maxima (plateaus count once) at or above the 90th
/// percentile. Undefined with fewer than two peaks.
PeriodEstimate t_period(const RateSeries& series);

struct StableEstimate {
    double tau_s = 0.0;
    int index = 0;
    /// The cumulative rate never settled before the cap.
    bool capped = false;
};

/// First grid time whose cumulative intersection rate has dropped to the 90th
/// percentile of the whole cumulative sequence, capped at `cap_s`.
StableEstimate tau_stable(const RateSeries& cumulative, std::optional<double> cap_s);

struct SweepPoint {
    double window_s = 0.0;
    double rate = 0.0;
};

struct TOptResult {
    std::vector<SweepPoint> sweep;
    std::optional<double> t_opt_s;
    double best_rate = 0.0;
    /// r_interval never decreases as the window grows.
    bool monotone = false;
};

/// Sweeps windows that divide the horizon, exceed `t_dist_s` and are at least
/// `min_window_s`. Reports an optimum only when the best interval rate reaches
/// `r_int_horizon`, the intersection rate over the whole horizon.
TOptResult find_t_opt(const Scenario& sc, int num_snapshots, double min_window_s, double t_dist_s,
                      double r_int_horizon);

enum class Recommendation { Interval, Intersection };
std::string to_string(Recommendation r);

struct CriteriaReport {
    double papr = 0.0;
    double max_ra = 0.0;
    double rate_r = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    /// False when the intersection rate is zero and the ratios against it are meaningless.
    bool ratios_defined = true;
    std::optional<double> t_period_min;
    double tau_stable_min = 0.0;
    bool tau_capped = false;
    std::optional<double> t_opt_min;
    Recommendation recommendation = Recommendation::Intersection;
};

/// Ratios of the r_opt series against the intersection and best interval rates.
CriteriaReport criteria(const RateSeries& r_opt, double r_int_horizon, double best_interval, double threshold);

/// Everything the rates and criteria commands report for one scenario.
struct Analysis {
    std::vector<int> h;
    RateSeries r_opt;
    RateSeries r_int_cum;
    RateSeries r_static;
    double t_dist_s = 0.0;
    PeriodEstimate period;
    StableEstimate stable;
    TOptResult t_opt;
    CriteriaReport report;
};

Analysis analyze(const Scenario& sc, double threshold = 2.1);

/// `t_min,r_opt,r_intersection_cum,r_static_cum`
void write_rates_csv(const Analysis& a, std::ostream& out);
/// `T_min,r_interval`
void write_interval_sweep_csv(const Analysis& a, std::ostream& out);
void write_criteria_header(std::ostream& out);
/// One row; `label` identifies the scenario (e.g. its sink set).
void write_criteria_row(const std::string& label, const CriteriaReport& c, std::ostream& out);

}  // namespace satnc
