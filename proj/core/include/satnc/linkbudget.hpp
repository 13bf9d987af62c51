#pragma once

#include <optional>
#include <vector>

#include "satnc/constellation.hpp"
#include "satnc/multigraph.hpp"

namespace satnc {

/// Transceiver parameters shared by every link. Defaults are the VHF CubeSat
/// front end: 146 MHz, 30 dBm, omni antennas, 1000 K, 6.4 kbps per FDMA channel.
struct LinkParams {
    double f_hz = 146e6;
    double pt_dbm = 30.0;
    double gt_dbi = 0.0;
    double gr_dbi = 0.0;
    double t_sys_k = 1000.0;
    double r_bps = 6400.0;
    double nf_db = 0.0;
    /// One FDMA channel.
    double bw_hz = 25e3;

    void validate() const;
};

inline constexpr double kSpeedOfLight_m_s = 299792458.0;
inline constexpr double kBoltzmann_J_K = 1.380649e-23;

/// 20*log10(4*pi*d*f/c) with d converted to metres.
double free_space_loss_db(double d_km, double f_hz);

/// Eb/N0 in dB for a known path loss.
double snr_db_from_loss(const LinkParams& params, double path_loss_db);

/// Eb/N0 in dB at distance d_km under free-space loss.
double snr_db(const LinkParams& params, double d_km);

/// Shannon-Hartley capacity bw*log2(1 + snr). -inf dB gives 0.
double capacity_bps(double snr_db, double bw_hz);

/// Symmetric weighted graph of link capacities (bits/s); no link is empty.
class CapacityGraph {
public:
    CapacityGraph() = default;
    explicit CapacityGraph(int n);

    int size() const { return n_; }
    std::optional<double> at(int i, int j) const;
    void set(int i, int j, std::optional<double> cap_bps);

private:
    int n_ = 0;
    std::vector<double> cap_;
};

CapacityGraph capacity_graph(const RangeSnapshot& ranges, const LinkParams& params);

/// Floors each capacity to whole `unit_bps` channels and stores the result as
/// directed multiplicities in both directions.
MultiGraph quantize(const CapacityGraph& cap, double unit_bps);

}  // namespace satnc
