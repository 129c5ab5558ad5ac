#include "gridroute/decompose.hpp"

#include <algorithm>
#include <limits>

namespace gridroute {

int manhattan(const Gcell& a, const Gcell& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

std::vector<TwoPinTask> decompose(const Net& net) {
    // Distinct pins, keeping first-occurrence (file) order.
    std::vector<Gcell> pins;
    for (const auto& p : net.pins)
        if (std::find(pins.begin(), pins.end(), p) == pins.end())
            pins.push_back(p);

    std::vector<TwoPinTask> tasks;
    if (pins.size() < 2)
        return tasks;

    // Prim's algorithm from pin 0. best[v] is the cheapest known distance
    // from the tree to v; ties pick the lower pin index, both for the node
    // joining the tree and for its parent.
    const size_t n = pins.size();
    std::vector<bool> in_tree(n, false);
    std::vector<int> best(n, std::numeric_limits<int>::max());
    std::vector<size_t> parent(n, 0);

    in_tree[0] = true;
    for (size_t v = 1; v < n; ++v) {
        best[v] = manhattan(pins[0], pins[v]);
        parent[v] = 0;
    }

    for (size_t added = 1; added < n; ++added) {
        size_t pick = n;
        for (size_t v = 0; v < n; ++v) {
            if (in_tree[v])
                continue;
            if (pick == n || best[v] < best[pick])
                pick = v; // ties keep the lower index, scanned ascending
        }
        in_tree[pick] = true;
        tasks.push_back({net.id, pins[parent[pick]], pins[pick],
                         static_cast<int>(tasks.size())});
        for (size_t v = 0; v < n; ++v) {
            if (in_tree[v])
                continue;
            const int d = manhattan(pins[pick], pins[v]);
            if (d < best[v] || (d == best[v] && pick < parent[v])) {
                best[v] = d;
                parent[v] = pick;
            }
        }
    }
    return tasks;
}

std::vector<TwoPinTask> decompose_all(const Problem& p) {
    std::vector<TwoPinTask> tasks;
    for (const auto& net : p.nets) {
        auto net_tasks = decompose(net);
        for (auto& t : net_tasks) {
            t.order_index = static_cast<int>(tasks.size());
            tasks.push_back(t);
        }
    }
    return tasks;
}

} // namespace gridroute
