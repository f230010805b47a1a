#pragma once

// Instance file format.
//
//   # comment lines start with '#'; blank lines are ignored
//   topology
//   node <id> <S|T|R|D>
//   attach <t-or-r-id> <s-or-d-id> <delay>      delay >= 0
//   edge <t-id> <r-id> <delay>                  delay >= 1
//   link <s-id> <d-id> <delay>                  delay >= 0
//   packets
//   packet <id> <s-id> <d-id> <release> <weight>
//
// Weights are "num" or "num/den".  Parse errors carry 1-based line numbers.

#include "model.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace hybridsched {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline Int parse_int(const std::string& tok, int line, const std::string& what, Int min_value) {
    size_t pos = 0;
    Int value = 0;
    try {
        value = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, what + " must be an integer, got '" + tok + "'");
    }
    if (pos != tok.size()) {
        throw ParseError(line, what + " must be an integer, got '" + tok + "'");
    }
    if (value < min_value) {
        throw ParseError(line, what + " must be >= " + std::to_string(min_value));
    }
    return value;
}

} // namespace detail

inline Instance parse_instance(const std::string& text) {
    Instance inst;
    Topology& topo = inst.topology;
    enum class Section { None, TopologyPart, PacketsPart } section = Section::None;
    std::unordered_set<std::string> packet_ids;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto node_of = [&](const std::string& id, int line) {
        int idx = topo.find_node(id);
        if (idx < 0) throw ParseError(line, "unknown node '" + id + "'");
        return idx;
    };
    auto expect_layer = [&](int node, Layer layer, int line, const std::string& role) {
        if (topo.layer_of(node) != layer) {
            throw ParseError(line, "node '" + topo.name_of(node) + "' is not a " + role);
        }
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::vector<std::string> tok = detail::tokenize(raw);
        if (tok.empty() || tok[0][0] == '#') continue;
        const std::string& kw = tok[0];
        if (kw == "topology") {
            if (tok.size() != 1) throw ParseError(lineno, "'topology' takes no arguments");
            if (section != Section::None) throw ParseError(lineno, "duplicate 'topology' section");
            section = Section::TopologyPart;
            continue;
        }
        if (kw == "packets") {
            if (tok.size() != 1) throw ParseError(lineno, "'packets' takes no arguments");
            if (section != Section::TopologyPart) {
                throw ParseError(lineno, "'packets' must follow the topology section");
            }
            section = Section::PacketsPart;
            continue;
        }
        if (section == Section::None) {
            throw ParseError(lineno, "expected 'topology' before '" + kw + "'");
        }
        if (kw == "node") {
            if (section != Section::TopologyPart) throw ParseError(lineno, "'node' outside topology");
            if (tok.size() != 3) throw ParseError(lineno, "usage: node <id> <S|T|R|D>");
            if (topo.find_node(tok[1]) >= 0) throw ParseError(lineno, "duplicate node '" + tok[1] + "'");
            std::optional<Layer> layer =
                tok[2].size() == 1 ? layer_from_letter(tok[2][0]) : std::nullopt;
            if (!layer) throw ParseError(lineno, "layer must be one of S, T, R, D");
            topo.add_node(tok[1], *layer);
        } else if (kw == "attach") {
            if (section != Section::TopologyPart) throw ParseError(lineno, "'attach' outside topology");
            if (tok.size() != 4) throw ParseError(lineno, "usage: attach <t-or-r> <s-or-d> <delay>");
            int node = node_of(tok[1], lineno);
            int peer = node_of(tok[2], lineno);
            Layer nl = topo.layer_of(node);
            if (nl == Layer::Transmitter) {
                expect_layer(peer, Layer::Source, lineno, "source");
            } else if (nl == Layer::Receiver) {
                expect_layer(peer, Layer::Destination, lineno, "destination");
            } else {
                throw ParseError(lineno, "'" + tok[1] + "' must be a transmitter or receiver");
            }
            if (topo.attach_peer(node) >= 0) {
                throw ParseError(lineno, "node '" + tok[1] + "' is already attached");
            }
            topo.attach_node(node, peer, detail::parse_int(tok[3], lineno, "attach delay", 0));
        } else if (kw == "edge") {
            if (section != Section::TopologyPart) throw ParseError(lineno, "'edge' outside topology");
            if (tok.size() != 4) throw ParseError(lineno, "usage: edge <t> <r> <delay>");
            int t = node_of(tok[1], lineno);
            int r = node_of(tok[2], lineno);
            expect_layer(t, Layer::Transmitter, lineno, "transmitter");
            expect_layer(r, Layer::Receiver, lineno, "receiver");
            if (topo.find_edge(t, r)) {
                throw ParseError(lineno, "duplicate edge (" + tok[1] + "," + tok[2] + ")");
            }
            topo.add_reconfig_edge(t, r, detail::parse_int(tok[3], lineno, "edge delay", 1));
        } else if (kw == "link") {
            if (section != Section::TopologyPart) throw ParseError(lineno, "'link' outside topology");
            if (tok.size() != 4) throw ParseError(lineno, "usage: link <s> <d> <delay>");
            int s = node_of(tok[1], lineno);
            int d = node_of(tok[2], lineno);
            expect_layer(s, Layer::Source, lineno, "source");
            expect_layer(d, Layer::Destination, lineno, "destination");
            if (topo.link_delay(s, d)) {
                throw ParseError(lineno, "duplicate link (" + tok[1] + "," + tok[2] + ")");
            }
            topo.add_fixed_link(s, d, detail::parse_int(tok[3], lineno, "link delay", 0));
        } else if (kw == "packet") {
            if (section != Section::PacketsPart) {
                throw ParseError(lineno, "'packet' outside the packets section");
            }
            if (tok.size() != 6) {
                throw ParseError(lineno, "usage: packet <id> <s> <d> <release> <weight>");
            }
            if (!packet_ids.insert(tok[1]).second) {
                throw ParseError(lineno, "duplicate packet id '" + tok[1] + "'");
            }
            Packet p;
            p.id = tok[1];
            p.source = node_of(tok[2], lineno);
            p.destination = node_of(tok[3], lineno);
            expect_layer(p.source, Layer::Source, lineno, "source");
            expect_layer(p.destination, Layer::Destination, lineno, "destination");
            p.release = detail::parse_int(tok[4], lineno, "release", 0);
            std::optional<Rational> w = parse_rational(tok[5]);
            if (!w || *w <= 0) {
                throw ParseError(lineno, "weight must be a positive rational, got '" + tok[5] + "'");
            }
            p.weight = *w;
            inst.packets.push_back(std::move(p));
        } else {
            throw ParseError(lineno, "unknown keyword '" + kw + "'");
        }
    }
    if (section == Section::None) throw ParseError(lineno + 1, "missing 'topology' section");
    return inst;
}

// Canonical text form; parse(serialize(i)) == i for any valid instance.
inline std::string serialize_instance(const Instance& inst) {
    const Topology& topo = inst.topology;
    std::ostringstream out;
    out << "topology\n";
    for (int v = 0; v < topo.node_count(); ++v) {
        out << "node " << topo.name_of(v) << ' ' << layer_letter(topo.layer_of(v)) << '\n';
    }
    for (int v = 0; v < topo.node_count(); ++v) {
        if (topo.attach_peer(v) >= 0) {
            out << "attach " << topo.name_of(v) << ' ' << topo.name_of(topo.attach_peer(v)) << ' '
                << topo.attaches[static_cast<size_t>(v)].delay << '\n';
        }
    }
    for (const Topology::ReconfigEdge& e : topo.edges) {
        out << "edge " << topo.name_of(e.transmitter) << ' ' << topo.name_of(e.receiver) << ' '
            << e.delay << '\n';
    }
    for (const Topology::FixedLink& l : topo.links) {
        out << "link " << topo.name_of(l.source) << ' ' << topo.name_of(l.destination) << ' '
            << l.delay << '\n';
    }
    out << "packets\n";
    for (const Packet& p : inst.packets) {
        out << "packet " << p.id << ' ' << topo.name_of(p.source) << ' '
            << topo.name_of(p.destination) << ' ' << p.release << ' ' << format_rational(p.weight)
            << '\n';
    }
    return out.str();
}

// A packet of integral size: shorthand for `size` unit packets released
// together, each carrying an equal share of the weight.  The reduction keeps
// ids readable by suffixing the fragment number.
struct SizedPacket {
    Packet base;
    Int size = 1;
};

inline std::vector<Packet> split_to_unit(const std::vector<SizedPacket>& sized) {
    std::vector<Packet> out;
    for (const SizedPacket& sp : sized) {
        if (sp.size < 1) {
            throw std::invalid_argument("packet " + sp.base.id + " needs size >= 1");
        }
        if (sp.size == 1) {
            out.push_back(sp.base);
            continue;
        }
        for (Int k = 1; k <= sp.size; ++k) {
            Packet p = sp.base;
            p.id = sp.base.id + "." + std::to_string(k);
            p.weight = sp.base.weight / sp.size;
            out.push_back(std::move(p));
        }
    }
    return out;
}

} // namespace hybridsched
