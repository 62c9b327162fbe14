#pragma once

// Text formats: edge lists and colorings.
//
// Edge list (.el): one `u v m` line per vertex pair (m >= 1), `#` comments,
// optional `n <vertex_count>` header (default: 1 + max vertex index).
//
// Coloring: header `palette <size>`, then one `edge_id color` line per edge.

#include <array>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kempe/coloring.hpp"
#include "kempe/multigraph.hpp"

namespace kempe {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

inline Multigraph parse_edge_list(std::string_view text) {
    std::vector<std::array<int, 3>> pairs;
    std::optional<int> vertex_count;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok == "n") {
            long long n;
            if (!(ls >> n) || n < 0) throw ParseError(line_no, "malformed vertex count header");
            vertex_count = static_cast<int>(n);
            continue;
        }
        long long u, v, m;
        std::istringstream es(line);
        if (!(es >> u >> v >> m)) throw ParseError(line_no, "expected `u v m`");
        std::string extra;
        if (es >> extra) throw ParseError(line_no, "trailing token `" + extra + "`");
        if (u < 0 || v < 0) throw ParseError(line_no, "negative vertex index");
        if (u == v) throw ParseError(line_no, "loop at vertex " + std::to_string(u));
        if (m < 1) throw ParseError(line_no, "multiplicity < 1");
        pairs.push_back({static_cast<int>(u), static_cast<int>(v), static_cast<int>(m)});
    }
    try {
        return Multigraph::from_edge_list(pairs, vertex_count);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    }
}

inline std::string serialize(const Multigraph& g) {
    std::ostringstream out;
    out << "n " << g.vertex_count() << "\n";
    const int n = g.vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            int m = g.multiplicity(u, v);
            if (m > 0) out << u << " " << v << " " << m << "\n";
        }
    return out.str();
}

inline std::string serialize_coloring(const EdgeColoring& coloring, int palette_size) {
    std::ostringstream out;
    out << "palette " << palette_size << "\n";
    for (const auto& [edge, color] : coloring.assignments()) out << edge << " " << color << "\n";
    return out.str();
}

struct ColoringFile {
    int palette_size = 0;
    EdgeColoring coloring;
};

inline ColoringFile parse_coloring(std::string_view text) {
    ColoringFile out;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok == "palette") {
            if (!(ls >> out.palette_size) || out.palette_size < 0)
                throw ParseError(line_no, "malformed palette header");
            saw_header = true;
            continue;
        }
        if (!saw_header) throw ParseError(line_no, "missing `palette <size>` header");
        long long edge, color;
        std::istringstream es(line);
        if (!(es >> edge >> color)) throw ParseError(line_no, "expected `edge_id color`");
        if (edge < 0 || color < 0) throw ParseError(line_no, "negative value");
        out.coloring.set(static_cast<int>(edge), static_cast<int>(color));
    }
    return out;
}

}  // namespace kempe
