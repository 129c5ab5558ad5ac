#include "gridroute/astar.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>

namespace gridroute {

namespace {

struct OpenEntry {
    long long f;
    int h;
    int cell;     // flat index, canonical (x,y,z) lexicographic order
    std::uint64_t seq;
    int parent;   // flat index of predecessor, -1 for start
    long long g;
};

struct OpenOrder {
    // std::priority_queue is a max-heap; invert for "best first".
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.h != b.h) return a.h > b.h;
        if (a.cell != b.cell) return a.cell > b.cell;
        return a.seq > b.seq;
    }
};

} // namespace

Path route_two_pin(const GridGraph& g, const Gcell& start, const Gcell& goal) {
    if (!g.in_bounds(start) || !g.in_bounds(goal))
        throw std::invalid_argument("route endpoints out of bounds");

    Path path;
    if (start == goal)
        return path;

    const int w = g.width(), h = g.height();
    const auto flat = [&](const Gcell& c) {
        return (c.x * h + c.y) * GridGraph::kLayers + c.z;
    };
    const auto unflat = [&](int i) {
        return Gcell{i / (h * GridGraph::kLayers), (i / GridGraph::kLayers) % h,
                     i % GridGraph::kLayers};
    };
    const int cell_count = w * h * GridGraph::kLayers;

    std::vector<char> closed(cell_count, 0);
    std::vector<int> came_from(cell_count, -1);
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    std::uint64_t seq = 0;

    const int goal_flat = flat(goal);
    open.push({manhattan(start, goal), manhattan(start, goal), flat(start), seq++, -1, 0});

    while (!open.empty()) {
        const OpenEntry cur = open.top();
        open.pop();
        if (closed[cur.cell])
            continue;
        closed[cur.cell] = 1;
        came_from[cur.cell] = cur.parent;

        if (cur.cell == goal_flat) {
            path.cost = cur.g;
            for (int at = cur.cell; at != -1; at = came_from[at])
                path.cells.push_back(unflat(at));
            std::reverse(path.cells.begin(), path.cells.end());
            return path;
        }

        const Gcell here = unflat(cur.cell);
        for (const auto& [a, next] : g.neighbors(here)) {
            const int ni = flat(next);
            if (closed[ni])
                continue;
            const long long step =
                g.edge_capacity(here, a) > 0 ? kUnitMoveCost : kOverflowMoveCost;
            const long long ng = cur.g + step;
            open.push({ng + manhattan(next, goal), manhattan(next, goal), ni, seq++,
                       cur.cell, ng});
        }
    }
    throw std::runtime_error("goal unreachable"); // cannot happen on a connected lattice
}

RoutedProblem route_problem(const Problem& p, const GridOptions& opts) {
    GridGraph grid = GridGraph::from_problem(p, opts);

    RouteSolution sol;
    sol.nets.reserve(p.nets.size());
    std::vector<Transition> transitions;

    // Nets in file order, tasks in decomposition order within each net.
    for (const auto& net : p.nets) {
        NetRoute route{net.name, net.id, {}};
        for (const auto& task : decompose(net)) {
            const Path path = route_two_pin(grid, task.start, task.goal);

            // Walk the path, consuming capacity move by move so the recorded
            // observations match what the environment would have produced.
            for (size_t i = 0; i + 1 < path.cells.size(); ++i) {
                const Gcell& from = path.cells[i];
                const Gcell& to = path.cells[i + 1];
                const Action a = action_between(from, to);

                Transition t;
                t.state = make_state(grid, from, task.goal);
                t.action = a;
                grid.cross_edge(from, a);
                t.is_terminal = to == task.goal;
                t.reward = t.is_terminal ? kGoalReward : kStepReward;
                t.next_state = make_state(grid, to, task.goal);
                transitions.push_back(t);

                route.segments.emplace_back(from, to);
            }
        }
        sol.nets.push_back(std::move(route));
    }

    return {std::move(sol), std::move(transitions), std::move(grid)};
}

} // namespace gridroute
