#include "gridroute/problem.hpp"

#include <charconv>
#include <string_view>
#include <unordered_set>

namespace gridroute {

namespace {

// Line-oriented cursor over the input text. Lines are 1-based for errors.
struct Cursor {
    std::string_view text;
    size_t pos = 0;
    int line = 0;

    bool eof() const { return pos >= text.size(); }

    std::string_view next_line() {
        const size_t nl = text.find('\n', pos);
        std::string_view out;
        if (nl == std::string_view::npos) {
            out = text.substr(pos);
            pos = text.size();
        } else {
            out = text.substr(pos, nl - pos);
            pos = nl + 1;
        }
        ++line;
        return out;
    }
};

// Single-space separated tokens; empty tokens (double/leading/trailing
// spaces) count as a malformed line.
std::vector<std::string_view> tokens_of(std::string_view line, int lineno) {
    std::vector<std::string_view> toks;
    size_t start = 0;
    while (start <= line.size()) {
        const size_t sp = line.find(' ', start);
        const std::string_view tok =
            sp == std::string_view::npos ? line.substr(start) : line.substr(start, sp - start);
        if (tok.empty())
            throw ParseError(lineno, "malformed line (empty token)");
        toks.push_back(tok);
        if (sp == std::string_view::npos)
            break;
        start = sp + 1;
    }
    return toks;
}

int parse_int(std::string_view tok, int lineno) {
    int value = 0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(lineno, "expected integer, got '" + std::string(tok) + "'");
    return value;
}

void expect_tokens(const std::vector<std::string_view>& toks, size_t n, int lineno,
                   const char* what) {
    if (toks.size() != n)
        throw ParseError(lineno, std::string("expected ") + what);
}

Gcell read_cell_1based(const std::vector<std::string_view>& toks, size_t at, int lineno) {
    return {parse_int(toks[at], lineno), parse_int(toks[at + 1], lineno),
            parse_int(toks[at + 2], lineno) - 1};
}

void check_cell_bounds(const Gcell& c, int w, int h, int layers, int lineno,
                       const std::string& context) {
    if (c.x < 0 || c.x >= w || c.y < 0 || c.y >= h || c.z < 0 || c.z >= layers)
        throw ParseError(lineno, context + ": coordinate (" + std::to_string(c.x) + "," +
                                     std::to_string(c.y) + "," + std::to_string(c.z + 1) +
                                     ") out of bounds for grid " + std::to_string(w) + "x" +
                                     std::to_string(h) + "x" + std::to_string(layers));
}

} // namespace

Problem parse_problem(const std::string& text) {
    Cursor cur{text};
    Problem p;

    {
        auto toks = tokens_of(cur.next_line(), cur.line);
        expect_tokens(toks, 4, cur.line, "'grid W H L'");
        if (toks[0] != "grid")
            throw ParseError(cur.line, "expected 'grid W H L'");
        p.width = parse_int(toks[1], cur.line);
        p.height = parse_int(toks[2], cur.line);
        p.layers = parse_int(toks[3], cur.line);
        if (p.width < 1 || p.height < 1)
            throw ParseError(cur.line, "grid dimensions must be positive");
        if (p.layers != 2)
            throw ParseError(cur.line, "only 2-layer grids are supported");
    }
    {
        auto toks = tokens_of(cur.next_line(), cur.line);
        expect_tokens(toks, 3, cur.line, "'vertical capacity Cv'");
        if (toks[0] != "vertical" || toks[1] != "capacity")
            throw ParseError(cur.line, "expected 'vertical capacity Cv'");
        p.vertical_capacity = parse_int(toks[2], cur.line);
    }
    {
        auto toks = tokens_of(cur.next_line(), cur.line);
        expect_tokens(toks, 3, cur.line, "'horizontal capacity Ch'");
        if (toks[0] != "horizontal" || toks[1] != "capacity")
            throw ParseError(cur.line, "expected 'horizontal capacity Ch'");
        p.horizontal_capacity = parse_int(toks[2], cur.line);
    }

    int net_count = 0;
    {
        auto toks = tokens_of(cur.next_line(), cur.line);
        expect_tokens(toks, 3, cur.line, "'num net N'");
        if (toks[0] != "num" || toks[1] != "net")
            throw ParseError(cur.line, "expected 'num net N'");
        net_count = parse_int(toks[2], cur.line);
        if (net_count < 0)
            throw ParseError(cur.line, "net count must be non-negative");
    }

    std::unordered_set<std::string> seen_names;
    p.nets.reserve(static_cast<size_t>(net_count));
    for (int n = 0; n < net_count; ++n) {
        if (cur.eof())
            throw ParseError(cur.line, "unexpected end of file: expected net header");
        Net net;
        {
            auto toks = tokens_of(cur.next_line(), cur.line);
            expect_tokens(toks, 3, cur.line, "net header '<name> <id> <pin_count>'");
            net.name = std::string(toks[0]);
            net.id = parse_int(toks[1], cur.line);
            const int pin_count = parse_int(toks[2], cur.line);
            if (pin_count < 1)
                throw ParseError(cur.line, "net '" + net.name + "' must have at least one pin");
            if (!seen_names.insert(net.name).second)
                throw ParseError(cur.line, "duplicate net name '" + net.name + "'");
            net.pins.reserve(static_cast<size_t>(pin_count));
            for (int k = 0; k < pin_count; ++k) {
                if (cur.eof())
                    throw ParseError(cur.line, "unexpected end of file in net '" + net.name + "'");
                auto ptoks = tokens_of(cur.next_line(), cur.line);
                expect_tokens(ptoks, 3, cur.line, "pin line 'x y z'");
                const Gcell pin = read_cell_1based(ptoks, 0, cur.line);
                check_cell_bounds(pin, p.width, p.height, p.layers, cur.line,
                                  "net '" + net.name + "'");
                net.pins.push_back(pin);
            }
        }
        p.nets.push_back(std::move(net));
    }

    if (!cur.eof()) {
        auto toks = tokens_of(cur.next_line(), cur.line);
        expect_tokens(toks, 4, cur.line, "'num reduced edges K'");
        if (toks[0] != "num" || toks[1] != "reduced" || toks[2] != "edges")
            throw ParseError(cur.line, "expected 'num reduced edges K'");
        const int reduced_count = parse_int(toks[3], cur.line);
        if (reduced_count < 0)
            throw ParseError(cur.line, "reduced edge count must be non-negative");
        p.reduced_edges.reserve(static_cast<size_t>(reduced_count));
        for (int k = 0; k < reduced_count; ++k) {
            if (cur.eof())
                throw ParseError(cur.line, "unexpected end of file in reduced edge block");
            auto etoks = tokens_of(cur.next_line(), cur.line);
            expect_tokens(etoks, 7, cur.line, "reduced edge line 'x1 y1 z1 x2 y2 z2 cap'");
            const Gcell a = read_cell_1based(etoks, 0, cur.line);
            const Gcell b = read_cell_1based(etoks, 3, cur.line);
            check_cell_bounds(a, p.width, p.height, p.layers, cur.line, "reduced edge");
            check_cell_bounds(b, p.width, p.height, p.layers, cur.line, "reduced edge");
            if (!cells_adjacent(a, b))
                throw ParseError(cur.line, "reduced edge endpoints are not lattice-adjacent");
            const int cap = parse_int(etoks[6], cur.line);
            if (cap < 0)
                throw ParseError(cur.line, "reduced edge capacity must be non-negative");
            p.reduced_edges.push_back({make_edge(a, b), cap});
        }
    }

    if (!cur.eof())
        throw ParseError(cur.line + 1, "unexpected trailing content");

    return p;
}

std::string write_problem(const Problem& p) {
    std::string out;
    out += "grid " + std::to_string(p.width) + " " + std::to_string(p.height) + " " +
           std::to_string(p.layers) + "\n";
    out += "vertical capacity " + std::to_string(p.vertical_capacity) + "\n";
    out += "horizontal capacity " + std::to_string(p.horizontal_capacity) + "\n";
    out += "num net " + std::to_string(p.nets.size()) + "\n";
    for (const auto& net : p.nets) {
        out += net.name + " " + std::to_string(net.id) + " " + std::to_string(net.pins.size()) +
               "\n";
        for (const auto& pin : net.pins)
            out += std::to_string(pin.x) + " " + std::to_string(pin.y) + " " +
                   std::to_string(pin.z + 1) + "\n";
    }
    out += "num reduced edges " + std::to_string(p.reduced_edges.size()) + "\n";
    for (const auto& r : p.reduced_edges) {
        out += std::to_string(r.edge.a.x) + " " + std::to_string(r.edge.a.y) + " " +
               std::to_string(r.edge.a.z + 1) + " " + std::to_string(r.edge.b.x) + " " +
               std::to_string(r.edge.b.y) + " " + std::to_string(r.edge.b.z + 1) + " " +
               std::to_string(r.capacity) + "\n";
    }
    return out;
}

namespace {

Gcell parse_solution_cell(std::string_view tok, int lineno) {
    // "x,y,z" with 1-based z
    int vals[3];
    size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const size_t comma = tok.find(',', start);
        const bool last = i == 2;
        if ((comma == std::string_view::npos) != last)
            throw ParseError(lineno, "malformed segment coordinate");
        const auto piece =
            last ? tok.substr(start) : tok.substr(start, comma - start);
        vals[i] = parse_int(piece, lineno);
        start = comma + 1;
    }
    return {vals[0], vals[1], vals[2] - 1};
}

} // namespace

RouteSolution parse_solution(const std::string& text) {
    Cursor cur{text};
    RouteSolution sol;
    while (!cur.eof()) {
        const auto header = cur.next_line();
        auto toks = tokens_of(header, cur.line);
        expect_tokens(toks, 2, cur.line, "net header '<name> <id>'");
        NetRoute route;
        route.name = std::string(toks[0]);
        route.id = parse_int(toks[1], cur.line);
        for (;;) {
            if (cur.eof())
                throw ParseError(cur.line, "unexpected end of file: missing '!' terminator");
            const auto line = cur.next_line();
            if (line == "!")
                break;
            // (x1,y1,z1)-(x2,y2,z2)
            const size_t split = line.find(")-(");
            if (line.size() < 2 || line.front() != '(' || line.back() != ')' ||
                split == std::string_view::npos)
                throw ParseError(cur.line, "malformed segment line");
            const Gcell a = parse_solution_cell(line.substr(1, split - 1), cur.line);
            const Gcell b =
                parse_solution_cell(line.substr(split + 3, line.size() - split - 4), cur.line);
            if (a.x < 0 || a.y < 0 || b.x < 0 || b.y < 0)
                throw ParseError(cur.line, "segment coordinates must be non-negative");
            if (a.z < 0 || a.z > 1 || b.z < 0 || b.z > 1)
                throw ParseError(cur.line, "segment layer must be 1 or 2");
            if (!cells_adjacent(a, b))
                throw ParseError(cur.line, "segment endpoints are not lattice-adjacent");
            route.segments.emplace_back(a, b);
        }
        sol.nets.push_back(std::move(route));
    }
    return sol;
}

std::string write_solution(const RouteSolution& s) {
    std::string out;
    auto cell = [](const Gcell& c) {
        return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," +
               std::to_string(c.z + 1) + ")";
    };
    for (const auto& net : s.nets) {
        out += net.name + " " + std::to_string(net.id) + "\n";
        for (const auto& seg : net.segments)
            out += cell(seg.first) + "-" + cell(seg.second) + "\n";
        out += "!\n";
    }
    return out;
}

} // namespace gridroute
