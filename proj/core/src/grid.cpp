#include "gridroute/grid.hpp"

#include "gridroute/problem.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gridroute {

namespace {

constexpr int kDx[kActionCount] = {+1, 0, -1, 0, 0, 0};
constexpr int kDy[kActionCount] = {0, 0, 0, 0, +1, -1};
constexpr int kDz[kActionCount] = {0, +1, 0, -1, 0, 0};

} // namespace

Action action_from_code(int code) {
    if (code < 0 || code >= kActionCount)
        throw std::out_of_range("action code must be in [0,5], got " + std::to_string(code));
    return static_cast<Action>(code);
}

Action reverse(Action a) {
    switch (a) {
    case Action::East: return Action::West;
    case Action::West: return Action::East;
    case Action::Up: return Action::Down;
    case Action::Down: return Action::Up;
    case Action::North: return Action::South;
    case Action::South: return Action::North;
    }
    throw std::out_of_range("invalid action");
}

Gcell moved(const Gcell& c, Action a) {
    const int i = action_code(a);
    return {c.x + kDx[i], c.y + kDy[i], c.z + kDz[i]};
}

bool cells_adjacent(const Gcell& u, const Gcell& v) {
    const int dx = u.x - v.x, dy = u.y - v.y, dz = u.z - v.z;
    const int adx = dx < 0 ? -dx : dx;
    const int ady = dy < 0 ? -dy : dy;
    const int adz = dz < 0 ? -dz : dz;
    return adx + ady + adz == 1;
}

Action action_between(const Gcell& from, const Gcell& to) {
    for (int i = 0; i < kActionCount; ++i) {
        if (from.x + kDx[i] == to.x && from.y + kDy[i] == to.y && from.z + kDz[i] == to.z)
            return static_cast<Action>(i);
    }
    throw std::invalid_argument("cells are not lattice-adjacent");
}

EdgeId make_edge(const Gcell& c, Action a) {
    const Gcell d = moved(c, a);
    return c < d ? EdgeId{c, d} : EdgeId{d, c};
}

EdgeId make_edge(const Gcell& u, const Gcell& v) {
    if (!cells_adjacent(u, v))
        throw std::invalid_argument("cells are not lattice-adjacent");
    return u < v ? EdgeId{u, v} : EdgeId{v, u};
}

GridGraph::GridGraph(int width, int height, const GridOptions& opts)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("grid dimensions must be positive");
    cap_x_.assign(static_cast<size_t>(kLayers) * height_ * (width_ - 1 > 0 ? width_ - 1 : 0), 0);
    cap_y_.assign(static_cast<size_t>(kLayers) * (height_ - 1 > 0 ? height_ - 1 : 0) * width_, 0);
    cap_via_.assign(static_cast<size_t>(height_) * width_, opts.via_capacity);
}

GridGraph GridGraph::from_problem(const Problem& p, const GridOptions& opts) {
    GridGraph g(p.width, p.height, opts);
    g.fill_x_capacities(0, p.horizontal_capacity);
    g.fill_x_capacities(1, opts.off_direction_capacity);
    g.fill_y_capacities(0, opts.off_direction_capacity);
    g.fill_y_capacities(1, p.vertical_capacity);
    for (const auto& r : p.reduced_edges)
        g.set_edge_capacity(r.edge, r.capacity);
    return g;
}

bool GridGraph::move_in_bounds(const Gcell& c, Action a) const {
    return in_bounds(c) && in_bounds(moved(c, a));
}

std::vector<std::pair<Action, Gcell>> GridGraph::neighbors(const Gcell& c) const {
    std::vector<std::pair<Action, Gcell>> out;
    out.reserve(kActionCount);
    for (int i = 0; i < kActionCount; ++i) {
        const auto a = static_cast<Action>(i);
        const Gcell d = moved(c, a);
        if (in_bounds(d))
            out.emplace_back(a, d);
    }
    return out;
}

int& GridGraph::cap_ref(const Gcell& c, Action a) {
    return const_cast<int&>(std::as_const(*this).cap_ref(c, a));
}

const int& GridGraph::cap_ref(const Gcell& c, Action a) const {
    if (!move_in_bounds(c, a))
        throw std::out_of_range("edge query leaves the grid");
    // Normalize to the low endpoint of the edge.
    Gcell lo = c;
    switch (a) {
    case Action::West: lo.x -= 1; [[fallthrough]];
    case Action::East:
        return cap_x_[(static_cast<size_t>(lo.z) * height_ + lo.y) * (width_ - 1) + lo.x];
    case Action::South: lo.y -= 1; [[fallthrough]];
    case Action::North:
        return cap_y_[(static_cast<size_t>(lo.z) * (height_ - 1) + lo.y) * width_ + lo.x];
    case Action::Down: lo.z -= 1; [[fallthrough]];
    case Action::Up:
        return cap_via_[static_cast<size_t>(lo.y) * width_ + lo.x];
    }
    throw std::out_of_range("invalid action");
}

int GridGraph::edge_capacity(const Gcell& c, Action a) const { return cap_ref(c, a); }

int GridGraph::edge_capacity(const EdgeId& e) const {
    return cap_ref(e.a, action_between(e.a, e.b));
}

void GridGraph::set_edge_capacity(const Gcell& c, Action a, int cap) { cap_ref(c, a) = cap; }

void GridGraph::set_edge_capacity(const EdgeId& e, int cap) {
    cap_ref(e.a, action_between(e.a, e.b)) = cap;
}

void GridGraph::cross_edge(const Gcell& c, Action a) { cap_ref(c, a) -= 1; }

void GridGraph::fill_x_capacities(int layer, int cap) {
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x + 1 < width_; ++x)
            cap_x_[(static_cast<size_t>(layer) * height_ + y) * (width_ - 1) + x] = cap;
}

void GridGraph::fill_y_capacities(int layer, int cap) {
    for (int y = 0; y + 1 < height_; ++y)
        for (int x = 0; x < width_; ++x)
            cap_y_[(static_cast<size_t>(layer) * (height_ - 1) + y) * width_ + x] = cap;
}

void GridGraph::fill_via_capacities(int cap) {
    for (auto& c : cap_via_)
        c = cap;
}

void GridGraph::restore(const GridGraph& snap) {
    if (!same_dimensions(snap))
        throw std::invalid_argument("snapshot dimensions do not match grid");
    cap_x_ = snap.cap_x_;
    cap_y_ = snap.cap_y_;
    cap_via_ = snap.cap_via_;
}

std::vector<EdgeId> GridGraph::all_edges() const {
    std::vector<EdgeId> edges;
    edges.reserve(cap_x_.size() + cap_y_.size() + cap_via_.size());
    for (int z = 0; z < kLayers; ++z)
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x) {
                const Gcell c{x, y, z};
                if (x + 1 < width_)
                    edges.push_back(make_edge(c, Action::East));
                if (y + 1 < height_)
                    edges.push_back(make_edge(c, Action::North));
                if (z == 0)
                    edges.push_back(make_edge(c, Action::Up));
            }
    std::sort(edges.begin(), edges.end());
    return edges;
}

} // namespace gridroute
