#include "gridroute/evaluate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace gridroute {

namespace {

// Union-find over flattened cell indices.
struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

int flat_index(const Problem& p, const Gcell& c) {
    return (c.x * p.height + c.y) * 2 + c.z;
}

void check_segment(const Problem& p, const Segment& seg) {
    const auto in_bounds = [&](const Gcell& c) {
        return c.x >= 0 && c.x < p.width && c.y >= 0 && c.y < p.height && c.z >= 0 && c.z < 2;
    };
    if (!in_bounds(seg.first) || !in_bounds(seg.second) ||
        !cells_adjacent(seg.first, seg.second))
        throw std::invalid_argument("segment does not lie on a lattice edge");
}

const NetRoute* find_route(const RouteSolution& s, const std::string& name) {
    for (const auto& net : s.nets)
        if (net.name == name)
            return &net;
    return nullptr;
}

} // namespace

long long wirelength(const RouteSolution& s) {
    long long total = 0;
    for (const auto& net : s.nets)
        total += static_cast<long long>(net.segments.size());
    return total;
}

std::map<EdgeId, long long> edge_usage(const Problem& p, const RouteSolution& s) {
    std::map<EdgeId, long long> usage;
    for (const auto& net : s.nets) {
        for (const auto& seg : net.segments) {
            check_segment(p, seg);
            ++usage[make_edge(seg.first, seg.second)];
        }
    }
    return usage;
}

long long overflow(const Problem& p, const RouteSolution& s, const GridOptions& opts) {
    const GridGraph original = GridGraph::from_problem(p, opts);
    long long total = 0;
    for (const auto& [edge, used] : edge_usage(p, s)) {
        const long long cap = original.edge_capacity(edge);
        if (used > cap)
            total += used - cap;
    }
    return total;
}

std::vector<bool> check_connectivity(const Problem& p, const RouteSolution& s) {
    std::vector<bool> flags;
    flags.reserve(p.nets.size());
    const int cells = p.width * p.height * 2;
    for (const auto& net : p.nets) {
        std::vector<Gcell> pins;
        for (const auto& pin : net.pins)
            if (std::find(pins.begin(), pins.end(), pin) == pins.end())
                pins.push_back(pin);
        if (pins.size() <= 1) {
            flags.push_back(true);
            continue;
        }
        const NetRoute* route = find_route(s, net.name);
        if (route == nullptr) {
            flags.push_back(false);
            continue;
        }
        DisjointSet ds(cells);
        bool malformed = false;
        for (const auto& seg : route->segments) {
            try {
                check_segment(p, seg);
            } catch (const std::invalid_argument&) {
                malformed = true;
                break;
            }
            ds.unite(flat_index(p, seg.first), flat_index(p, seg.second));
        }
        if (malformed) {
            flags.push_back(false);
            continue;
        }
        const int root = ds.find(flat_index(p, pins[0]));
        bool connected = true;
        for (size_t i = 1; i < pins.size(); ++i)
            if (ds.find(flat_index(p, pins[i])) != root) {
                connected = false;
                break;
            }
        flags.push_back(connected);
    }
    return flags;
}

ProblemType classify(const Problem& p, const RouteSolution& astar_solution,
                     const GridOptions& opts) {
    const GridGraph original = GridGraph::from_problem(p, opts);
    for (const auto& [edge, used] : edge_usage(p, astar_solution)) {
        const long long cap = original.edge_capacity(edge);
        if (cap > 0 && used >= cap)
            return ProblemType::TypeII;
    }
    return ProblemType::TypeI;
}

const char* to_string(ProblemType t) {
    return t == ProblemType::TypeI ? "I" : "II";
}

std::string evaluation_report(const Problem& p, const RouteSolution& s,
                              const GridOptions& opts) {
    const GridGraph original = GridGraph::from_problem(p, opts);
    std::string out;
    for (const auto& net : s.nets) {
        std::map<EdgeId, long long> usage;
        for (const auto& seg : net.segments) {
            check_segment(p, seg);
            ++usage[make_edge(seg.first, seg.second)];
        }
        long long net_of = 0;
        for (const auto& [edge, used] : usage) {
            const long long cap = original.edge_capacity(edge);
            if (used > cap)
                net_of += used - cap;
        }
        out += "net " + net.name + " WL " + std::to_string(net.segments.size()) + " OF " +
               std::to_string(net_of) + "\n";
    }
    out += "total WL " + std::to_string(wirelength(s)) + " OF " +
           std::to_string(overflow(p, s, opts)) + "\n";
    return out;
}

CompareResult compare(const std::vector<CompareCase>& cases, const GridOptions& opts) {
    CompareResult result;
    result.rows.reserve(cases.size());
    for (const auto& c : cases) {
        CompareRow row;
        const auto validate = [&](const RouteSolution& sol, const char* label) {
            const auto flags = check_connectivity(*c.problem, sol);
            if (std::find(flags.begin(), flags.end(), false) != flags.end()) {
                row.note = std::string(label) + ": disconnected net";
                return false;
            }
            return true;
        };
        try {
            if (validate(*c.solution_a, "A") && validate(*c.solution_b, "B")) {
                row.wl_a = wirelength(*c.solution_a);
                row.wl_b = wirelength(*c.solution_b);
                row.of_a = overflow(*c.problem, *c.solution_a, opts);
                row.of_b = overflow(*c.problem, *c.solution_b, opts);
                row.b_wins = row.of_b < row.of_a ||
                             (row.of_b == row.of_a && row.wl_b < row.wl_a);
                row.valid = true;
            }
        } catch (const std::invalid_argument& e) {
            row.note = e.what();
            row.valid = false;
        }
        if (row.valid) {
            ++result.valid_count;
            if (row.b_wins)
                ++result.b_win_count;
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace gridroute
