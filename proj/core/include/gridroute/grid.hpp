#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

namespace gridroute {

// A global routing cell: one tile of the routing lattice.
// Canonical ordering is lexicographic (x, y, z); used everywhere a
// deterministic tie-break over cells is needed.
struct Gcell {
    int x = 0;
    int y = 0;
    int z = 0;

    auto operator<=>(const Gcell&) const = default;
};

// The six moves out of a cell. Codes 0..5 map to
//   0:+x (east), 1:+z (up), 2:-x (west), 3:-z (down), 4:+y (north), 5:-y (south)
enum class Action : int {
    East = 0,
    Up = 1,
    West = 2,
    Down = 3,
    North = 4,
    South = 5,
};

inline constexpr int kActionCount = 6;

constexpr int action_code(Action a) { return static_cast<int>(a); }
Action action_from_code(int code);
Action reverse(Action a);
Gcell moved(const Gcell& c, Action a);

// Action that moves `from` onto the lattice-adjacent cell `to`.
Action action_between(const Gcell& from, const Gcell& to);

// Canonical unordered pair of lattice-adjacent cells.
struct EdgeId {
    Gcell a;
    Gcell b;

    auto operator<=>(const EdgeId&) const = default;
};

// Builds the canonical EdgeId for the edge crossed by taking `a` from `c`.
EdgeId make_edge(const Gcell& c, Action a);
// Canonicalizes an arbitrary ordered pair; throws if not lattice-adjacent.
EdgeId make_edge(const Gcell& u, const Gcell& v);
bool cells_adjacent(const Gcell& u, const Gcell& v);

struct GridOptions {
    // "Effectively unlimited" capacity assigned to every via edge.
    int via_capacity = 100;
    // Capacity of the in-layer direction that is not the layer's routing
    // direction (vertical edges on layer 0, horizontal edges on layer 1).
    int off_direction_capacity = 0;
};

struct Problem; // problem.hpp

// Two-layer routing lattice with one mutable integer capacity per edge.
// Edges are undirected; a crossing in either direction consumes the same
// capacity. Capacities may go negative (routers that tolerate overflow
// keep crossing depleted edges).
class GridGraph {
public:
    static constexpr int kLayers = 2;

    GridGraph(int width, int height, const GridOptions& opts = {});

    // Applies the capacity conventions of a problem file: horizontal
    // capacity on layer 0 x-edges, vertical capacity on layer 1 y-edges,
    // off-direction and via defaults from opts, then reduced overrides.
    static GridGraph from_problem(const Problem& p, const GridOptions& opts = {});

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(const Gcell& c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_ &&
               c.z >= 0 && c.z < kLayers;
    }
    bool move_in_bounds(const Gcell& c, Action a) const;

    // In-bounds moves out of c, in ascending action-code order.
    std::vector<std::pair<Action, Gcell>> neighbors(const Gcell& c) const;

    int edge_capacity(const Gcell& c, Action a) const;
    int edge_capacity(const EdgeId& e) const;
    void set_edge_capacity(const Gcell& c, Action a, int cap);
    void set_edge_capacity(const EdgeId& e, int cap);

    // Decrements the crossed edge's capacity by exactly 1.
    void cross_edge(const Gcell& c, Action a);

    // Bulk fills, used when applying problem conventions.
    void fill_x_capacities(int layer, int cap);
    void fill_y_capacities(int layer, int cap);
    void fill_via_capacities(int cap);

    GridGraph snapshot() const { return *this; }
    // Restores all capacities to the snapshot's values; dimensions must match.
    void restore(const GridGraph& snap);

    // All lattice edges in canonical EdgeId order.
    std::vector<EdgeId> all_edges() const;

    bool same_dimensions(const GridGraph& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_;
    int height_;
    // cap_x_: edge (x,y,z)-(x+1,y,z); cap_y_: (x,y,z)-(x,y+1,z);
    // cap_via_: (x,y,0)-(x,y,1). Flat, layer-major, row-major.
    std::vector<int> cap_x_;
    std::vector<int> cap_y_;
    std::vector<int> cap_via_;

    int& cap_ref(const Gcell& c, Action a);
    const int& cap_ref(const Gcell& c, Action a) const;
};

} // namespace gridroute
