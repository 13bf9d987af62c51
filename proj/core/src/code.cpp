#include "satnc/code.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "satnc/error.hpp"

namespace satnc {

std::string hop_label(const Hop& h) {
    if (is_imaginary(h)) return "imag(" + std::to_string(h.copy) + ")";
    return PlgNode{PlgKind::Edge, -1, h}.label();
}

std::vector<Hop> NetworkCode::incoming(int node) const {
    std::vector<Hop> in;
    for (const auto& [h, f] : gek)
        if (h.to == node) in.push_back(h);
    return in;
}

namespace {

struct Constraint {
    std::size_t sink;  // index into the served-sink list
    std::size_t path;
    std::size_t pos;   // hop position along the path
};

GfVector unit(int r, int i) {
    GfVector v(static_cast<std::size_t>(r), 0);
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

}  // namespace

NetworkCode construct_multicast(const Plg& plg, const TopoOrder& order, int rate, FieldSpec field_spec) {
    if (rate < 1) throw DomainError("rate must be at least 1");
    const Field field(field_spec);
    const auto r = static_cast<std::size_t>(rate);

    NetworkCode code;
    code.field = field_spec;
    code.rate = rate;
    code.source = plg.source;

    std::vector<std::size_t> served;
    for (std::size_t k = 0; k < plg.sinks.size(); ++k)
        if (plg.walks[k].size() >= r) {
            served.push_back(k);
            code.sinks.push_back(plg.sinks[k]);
        }

    // Per served sink: dual rows b_p with b_p . frontier_q = [p == q], and the
    // imaginary link each path starts from.
    std::vector<std::vector<GfVector>> dual(served.size());
    std::vector<std::vector<int>> start(served.size(), std::vector<int>(r));
    std::vector<std::vector<Constraint>> at(static_cast<std::size_t>(plg.size()));
    for (std::size_t s = 0; s < served.size(); ++s) {
        const auto& walks = plg.walks[served[s]];
        std::vector<std::size_t> idx(r);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return order.position[static_cast<std::size_t>(walks[a].front())] <
                   order.position[static_cast<std::size_t>(walks[b].front())];
        });
        for (std::size_t rank = 0; rank < r; ++rank) start[s][idx[rank]] = static_cast<int>(rank);
        for (std::size_t p = 0; p < r; ++p) {
            dual[s].push_back(unit(rate, start[s][p]));
            for (std::size_t pos = 0; pos < walks[p].size(); ++pos)
                at[static_cast<std::size_t>(walks[p][pos])].push_back({s, p, pos});
        }
    }

    std::vector<std::vector<int>> preds(static_cast<std::size_t>(plg.size()));
    for (int u = 0; u < plg.size(); ++u)
        for (int v : plg.arcs.out[static_cast<std::size_t>(u)]) preds[static_cast<std::size_t>(v)].push_back(u);

    for (int v : order.sequence) {
        const auto& node = plg.nodes[static_cast<std::size_t>(v)];
        if (node.kind != PlgKind::Edge) continue;
        const Hop h = node.edge;

        std::vector<Hop> up;
        std::vector<GfVector> inputs;
        const bool from_source = h.from == plg.source;
        if (from_source) {
            for (int i = 0; i < rate; ++i) {
                up.push_back(imaginary_link(plg.source, i));
                inputs.push_back(unit(rate, i));
            }
        } else {
            for (int u : preds[static_cast<std::size_t>(v)]) {
                const auto& pn = plg.nodes[static_cast<std::size_t>(u)];
                if (pn.kind != PlgKind::Edge) continue;
                up.push_back(pn.edge);
                inputs.push_back(code.gek.at(pn.edge));
            }
        }

        const auto& cons = at[static_cast<std::size_t>(v)];
        auto own_input = [&](const Constraint& c) -> std::size_t {
            if (c.pos == 0) return static_cast<std::size_t>(start[c.sink][c.path]);
            const int prev = plg.walks[served[c.sink]][c.path][c.pos - 1];
            const Hop ph = plg.nodes[static_cast<std::size_t>(prev)].edge;
            return static_cast<std::size_t>(std::find(up.begin(), up.end(), ph) - up.begin());
        };
        auto test = [&](const Constraint& c, const GfVector& f) { return field.dot(dual[c.sink][c.path], f) != 0; };

        GfVector f(r, 0);
        if (cons.empty()) {
            if (!inputs.empty()) f = inputs.front();
        }
        for (std::size_t j = 0; j < cons.size(); ++j) {
            if (test(cons[j], f)) continue;
            const GfVector& g = inputs.at(own_input(cons[j]));
            bool found = false;
            GfVector trial(r);
            for (Element alpha = 1; alpha < field.order() && !found; ++alpha) {
                trial = f;
                field.axpy(alpha, g, trial);
                found = test(cons[j], trial);
                for (std::size_t l = 0; l < j && found; ++l) found = test(cons[l], trial);
            }
            if (!found) {
                std::string blocking;
                for (std::size_t l = 0; l <= j; ++l) {
                    const int t = code.sinks[cons[l].sink] + 1;
                    if (blocking.find(" " + std::to_string(t) + " ") == std::string::npos)
                        blocking += " " + std::to_string(t) + " ";
                }
                throw FieldExhaustedError("field GF(2^" + std::to_string(field_spec.m) + ") exhausted at " +
                                          hop_label(h) + ": no coefficient keeps sinks {" +
                                          std::string(blocking) + "} decodable");
            }
            f = trial;
        }

        for (const auto& c : cons) {
            auto& b = dual[c.sink];
            const Element scale = field.inv(field.dot(b[c.path], f));
            for (auto& x : b[c.path]) x = field.mul(x, scale);
            for (std::size_t q = 0; q < r; ++q) {
                if (q == c.path) continue;
                const Element k = field.dot(b[q], f);
                field.axpy(k, b[c.path], b[q]);
            }
        }

        code.gek.emplace(h, std::move(f));
        code.upstream.emplace(h, std::move(up));
        code.order.push_back(h);
    }
    return code;
}

std::map<int, LocalKernel> extract_lek(const NetworkCode& code, const MultiGraph& pruned) {
    const Field field(code.field);
    const auto r = static_cast<std::size_t>(code.rate);
    std::map<int, LocalKernel> out;
    for (int x = 0; x < pruned.size(); ++x) {
        LocalKernel lk;
        lk.node = x;
        for (int y = 0; y < pruned.size(); ++y)
            for (int c = 0; c < pruned.mult(x, y); ++c) lk.outputs.push_back({x, y, c});
        if (lk.outputs.empty()) continue;
        if (x == code.source) {
            for (int i = 0; i < code.rate; ++i) lk.inputs.push_back(imaginary_link(x, i));
        } else {
            for (int w = 0; w < pruned.size(); ++w)
                for (int c = 0; c < pruned.mult(w, x); ++c) lk.inputs.push_back({w, x, c});
        }
        lk.coeff = GfMatrix(lk.inputs.size(), lk.outputs.size());

        for (std::size_t j = 0; j < lk.outputs.size(); ++j) {
            const auto it = code.gek.find(lk.outputs[j]);
            if (it == code.gek.end()) continue;
            const GfVector& fe = it->second;
            const auto ut = code.upstream.find(lk.outputs[j]);
            const std::vector<Hop> up = ut == code.upstream.end() ? std::vector<Hop>{} : ut->second;
            std::vector<GfVector> cols;
            for (const auto& d : up) {
                if (is_imaginary(d)) {
                    GfVector e(r, 0);
                    e[static_cast<std::size_t>(d.copy)] = 1;
                    cols.push_back(std::move(e));
                } else {
                    const auto gt = code.gek.find(d);
                    cols.push_back(gt == code.gek.end() ? GfVector(r, 0) : gt->second);
                }
            }
            const auto k = solve(field, GfMatrix::from_columns(cols, r), fe);
            if (!k)
                throw ConsistencyError("internal invariant violated: kernel of " + hop_label(lk.outputs[j]) +
                                       " is not a combination of its inputs");
            for (std::size_t q = 0; q < up.size(); ++q) {
                const auto row = std::find(lk.inputs.begin(), lk.inputs.end(), up[q]);
                if (row == lk.inputs.end())
                    throw ConsistencyError("internal invariant violated: " + hop_label(up[q]) + " does not enter node " +
                                           std::to_string(x + 1));
                lk.coeff.at(static_cast<std::size_t>(row - lk.inputs.begin()), j) = (*k)[q];
            }
        }
        out.emplace(x, std::move(lk));
    }
    return out;
}

bool SinkReport::all_decodable() const {
    return std::all_of(sinks.begin(), sinks.end(), [](const auto& s) { return s.decodable; });
}

const SinkDecodability* SinkReport::find(int sink) const {
    for (const auto& s : sinks)
        if (s.sink == sink) return &s;
    return nullptr;
}

SinkReport verify_multicast(const NetworkCode& code, const MultiGraph& pruned, const std::vector<int>& sinks, int rate) {
    const Field field(code.field);
    const auto r = static_cast<std::size_t>(rate);
    SinkReport report;
    report.rate = rate;
    for (int t : sinks) {
        SinkDecodability d;
        d.sink = t;
        for (int w = 0; w < pruned.size(); ++w)
            for (int c = 0; c < pruned.mult(w, t); ++c) d.inputs.push_back({w, t, c});
        d.matrix = GfMatrix(r, d.inputs.size());
        for (std::size_t j = 0; j < d.inputs.size(); ++j) {
            const auto it = code.gek.find(d.inputs[j]);
            if (it == code.gek.end()) continue;
            for (std::size_t i = 0; i < r && i < it->second.size(); ++i) d.matrix.at(i, j) = it->second[i];
        }
        d.rank = rank(field, d.matrix);
        d.decodable = rate > 0 && d.rank == r;
        report.sinks.push_back(std::move(d));
    }
    return report;
}

Transmission transmit(const NetworkCode& code, std::span<const Element> message) {
    if (message.size() != static_cast<std::size_t>(code.rate))
        throw DomainError("message must hold exactly r symbols");
    if (code.lek.empty() && !code.order.empty()) throw ConsistencyError("local kernels have not been extracted");
    const Field field(code.field);
    for (Element m : message)
        if (m >= field.order()) throw DomainError("message symbol outside the field");

    Transmission tx;
    for (const Hop& e : code.order) {
        const auto& lk = code.lek.at(e.from);
        const auto j = static_cast<std::size_t>(std::find(lk.outputs.begin(), lk.outputs.end(), e) - lk.outputs.begin());
        Element y = 0;
        for (std::size_t i = 0; i < lk.inputs.size(); ++i) {
            const Element k = lk.coeff.at(i, j);
            if (k == 0) continue;
            const Hop& d = lk.inputs[i];
            Element in = 0;
            if (is_imaginary(d)) {
                in = message[static_cast<std::size_t>(d.copy)];
            } else {
                const auto it = tx.symbols.find(d);
                if (it == tx.symbols.end())
                    throw ConsistencyError("symbol of " + hop_label(d) + " needed before it is sent");
                in = it->second;
            }
            y ^= field.mul(k, in);
        }
        tx.symbols.emplace(e, y);
    }

    const auto r = static_cast<std::size_t>(code.rate);
    for (int t : code.sinks) {
        std::vector<Hop> in;
        for (const auto& [h, y] : tx.symbols)
            if (h.to == t) in.push_back(h);
        GfMatrix a(in.size(), r);
        GfVector b(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) {
            const auto& f = code.gek.at(in[i]);
            for (std::size_t c = 0; c < r; ++c) a.at(i, c) = f[c];
            b[i] = tx.symbols.at(in[i]);
        }
        std::optional<GfVector> x;
        if (rank(field, a) == r) x = solve(field, a, b);
        tx.decoded.emplace_back(t, std::move(x));
    }
    return tx;
}

namespace {

std::string hex(Element v, int digits) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%0*x", digits, static_cast<unsigned>(v));
    return buf;
}

}  // namespace

void write_code_dump(const NetworkCode& code, std::ostream& out) {
    const int digits = (code.field.m + 3) / 4;
    char poly[16];
    std::snprintf(poly, sizeof poly, "0x%x", static_cast<unsigned>(reduction_polynomial(code.field.m)));
    out << "field GF(2^" << code.field.m << ") poly " << poly << '\n';
    out << "rate " << code.rate << '\n';
    out << "source " << code.source + 1 << '\n';
    out << "sinks";
    for (int t : code.sinks) out << ' ' << t + 1;
    out << "\n\n[gek]\n";
    for (const auto& [h, f] : code.gek) {
        out << hop_label(h);
        for (Element v : f) out << ' ' << hex(v, digits);
        out << '\n';
    }
    out << "\n[lek]\n";
    for (const auto& [x, lk] : code.lek) {
        out << "node " << x + 1 << '\n';
        for (std::size_t i = 0; i < lk.inputs.size(); ++i) {
            out << "  " << hop_label(lk.inputs[i]) << ':';
            for (std::size_t j = 0; j < lk.outputs.size(); ++j) out << ' ' << hex(lk.coeff.at(i, j), digits);
            out << '\n';
        }
        out << "  out:";
        for (const auto& e : lk.outputs) out << ' ' << hop_label(e);
        out << '\n';
    }
}

void write_sink_report(const SinkReport& report, std::ostream& out) {
    out << "sink,inputs,rank,rate,decodable\n";
    for (const auto& s : report.sinks)
        out << s.sink + 1 << ',' << s.inputs.size() << ',' << s.rank << ',' << report.rate << ','
            << (s.decodable ? "yes" : "no") << '\n';
}

}  // namespace satnc
