#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satnc/field.hpp"
#include "satnc/multigraph.hpp"
#include "satnc/paths.hpp"
#include "satnc/plg.hpp"

namespace satnc {

/// `Hop::from` of the r imaginary links feeding the source; their copy index is
/// the basis vector they hold.
inline constexpr int kImaginarySource = -1;

inline Hop imaginary_link(int source, int i) { return {kImaginarySource, source, i}; }
inline bool is_imaginary(const Hop& h) { return h.from == kImaginarySource; }

/// Mixing coefficients k(d,e) of one node: rows follow `inputs`, columns `outputs`.
struct LocalKernel {
    int node = 0;
    std::vector<Hop> inputs;
    std::vector<Hop> outputs;
    GfMatrix coeff;
};

struct NetworkCode {
    FieldSpec field;
    int rate = 0;
    int source = 0;
    /// Sinks the construction served, i.e. those given at least `rate` paths.
    std::vector<int> sinks;
    /// Global kernel of every edge copy.
    std::map<Hop, GfVector> gek;
    /// Edge copies (or imaginary links) that may feed each edge copy.
    std::map<Hop, std::vector<Hop>> upstream;
    /// Edge copies, upstream to downstream.
    std::vector<Hop> order;
    /// Filled by extract_lek.
    std::map<int, LocalKernel> lek;

    /// Edge copies entering `node`, sorted.
    std::vector<Hop> incoming(int node) const;
};

/// Deterministic sweep over the PLG: each edge copy gets a combination of the
/// kernels feeding it, with coefficients scanned in increasing field order,
/// so that every served sink's current frontier stays independent.
/// Throws FieldExhaustedError when no coefficient works.
NetworkCode construct_multicast(const Plg& plg, const TopoOrder& order, int rate, FieldSpec field);

/// Solves f_e = sum k(d,e) f_d per node, using only the inputs the paths feed
/// into e. Free coefficients are zero.
std::map<int, LocalKernel> extract_lek(const NetworkCode& code, const MultiGraph& pruned);

struct SinkDecodability {
    int sink = 0;
    std::vector<Hop> inputs;
    /// r x |inputs|, column j is the kernel of inputs[j].
    GfMatrix matrix;
    std::size_t rank = 0;
    bool decodable = false;
};

struct SinkReport {
    int rate = 0;
    std::vector<SinkDecodability> sinks;

    bool all_decodable() const;
    const SinkDecodability* find(int sink) const;
};

SinkReport verify_multicast(const NetworkCode& code, const MultiGraph& pruned, const std::vector<int>& sinks, int rate);

struct Transmission {
    /// Symbol carried by each edge copy.
    std::map<Hop, Element> symbols;
    /// Decoded message per served sink, empty where the sink cannot decode.
    std::vector<std::pair<int, std::optional<GfVector>>> decoded;
};

/// Pushes `message` (r symbols) through the local kernels and decodes at each
/// served sink. Requires extracted local kernels.
Transmission transmit(const NetworkCode& code, std::span<const Element> message);

/// Human-readable code listing with hex field elements; stable across runs.
void write_code_dump(const NetworkCode& code, std::ostream& out);
void write_sink_report(const SinkReport& report, std::ostream& out);

std::string hop_label(const Hop& h);

}  // namespace satnc
