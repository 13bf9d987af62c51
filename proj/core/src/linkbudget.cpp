#include "satnc/linkbudget.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "satnc/error.hpp"

namespace satnc {

void LinkParams::validate() const {
    if (!(f_hz > 0.0)) throw ConfigError("link.f_hz must be positive");
    if (!(r_bps > 0.0)) throw ConfigError("link.r_bps must be positive");
    if (!(t_sys_k > 0.0)) throw ConfigError("link.t_sys_k must be positive");
    if (!(bw_hz > 0.0)) throw ConfigError("link.bw_hz must be positive");
}

double free_space_loss_db(double d_km, double f_hz) {
    if (!(d_km > 0.0) || !(f_hz > 0.0))
        throw DomainError("free-space loss needs positive distance and frequency");
    return 20.0 * std::log10(4.0 * std::numbers::pi * d_km * 1e3 * f_hz / kSpeedOfLight_m_s);
}

double snr_db_from_loss(const LinkParams& p, double path_loss_db) {
    const double pt_dbw = p.pt_dbm - 30.0;
    return pt_dbw + p.gt_dbi + p.gr_dbi - path_loss_db - 10.0 * std::log10(kBoltzmann_J_K) -
           10.0 * std::log10(p.t_sys_k) - 10.0 * std::log10(p.r_bps) - p.nf_db;
}

double snr_db(const LinkParams& params, double d_km) {
    return snr_db_from_loss(params, free_space_loss_db(d_km, params.f_hz));
}

double capacity_bps(double snr, double bw_hz) {
    if (std::isinf(snr) && snr < 0) return 0.0;
    return bw_hz * std::log2(1.0 + std::pow(10.0, snr / 10.0));
}

CapacityGraph::CapacityGraph(int n)
    : n_(n), cap_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN()) {}

std::optional<double> CapacityGraph::at(int i, int j) const {
    const double v = cap_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
    if (std::isnan(v)) return std::nullopt;
    return v;
}

void CapacityGraph::set(int i, int j, std::optional<double> cap_bps) {
    if (i == j) throw ConsistencyError("capacity graph has no self links");
    if (cap_bps && !(*cap_bps > 0.0)) throw ConsistencyError("capacities must be positive");
    const double v = cap_bps.value_or(std::numeric_limits<double>::quiet_NaN());
    const auto un = static_cast<std::size_t>(n_);
    cap_[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = v;
    cap_[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = v;
}

CapacityGraph capacity_graph(const RangeSnapshot& ranges, const LinkParams& params) {
    CapacityGraph g(ranges.size());
    for (int i = 0; i < ranges.size(); ++i)
        for (int j = i + 1; j < ranges.size(); ++j)
            if (auto d = ranges.at(i, j)) {
                const double c = capacity_bps(snr_db(params, *d), params.bw_hz);
                if (c > 0.0) g.set(i, j, c);
            }
    return g;
}

MultiGraph quantize(const CapacityGraph& cap, double unit_bps) {
    if (!(unit_bps > 0.0)) throw DomainError("unit_bps must be positive");
    MultiGraph g(cap.size());
    for (int i = 0; i < cap.size(); ++i)
        for (int j = 0; j < cap.size(); ++j)
            if (auto c = cap.at(i, j)) g.set(i, j, static_cast<int>(std::floor(*c / unit_bps)));
    return g;
}

}  // namespace satnc
