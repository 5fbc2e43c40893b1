#pragma once

// Persistence diagrams (dimensions 0 and 1) of the superlevel filtration of a
// likelihood map, with birth/death critical pixels.
//
// Dimension 0 uses union-find with the elder rule. Dimension 1 reduces the
// boundary columns of the squares over Z/2. Rows of edges that already
// merged two components are dropped from those columns before reduction:
// such an edge can never be the pivot of a reduced column.
//
// In relative mode the map is padded with a 1.0 frame and homology is taken
// relative to that frame: the frame vertices are identified to one base
// point and frame-to-frame edges are removed.

#include <algorithm>
#include <iterator>
#include <numeric>
#include <optional>
#include <vector>

#include "topoloss/filtration.hpp"
#include "topoloss/grid.hpp"

namespace topoloss {

struct PersistenceDot {
    int dimension = 0;
    double birth = 0.0;
    double death = 0.0;
    // Empty when the critical cell enters at a synthetic frame pixel.
    std::optional<Pixel> birth_pixel;
    std::optional<Pixel> death_pixel;

    double persistence() const { return birth - death; }

    friend bool operator==(const PersistenceDot&, const PersistenceDot&) = default;
};

/// Birth descending, death descending, then critical pixels row-major
/// (frame-attributed pixels first).
inline bool canonical_less(const PersistenceDot& a, const PersistenceDot& b) {
    if (a.birth != b.birth)
        return a.birth > b.birth;
    if (a.death != b.death)
        return a.death > b.death;
    if (a.birth_pixel != b.birth_pixel)
        return a.birth_pixel < b.birth_pixel;
    return a.death_pixel < b.death_pixel;
}

/// Non-essential dots of dimensions 0 and 1, each list in canonical order.
struct PersistenceDiagram {
    std::vector<PersistenceDot> dim0;
    std::vector<PersistenceDot> dim1;

    const std::vector<PersistenceDot>& dots(int dimension) const {
        return dimension == 0 ? dim0 : dim1;
    }
    std::vector<PersistenceDot>& dots(int dimension) { return dimension == 0 ? dim0 : dim1; }
    std::size_t size() const { return dim0.size() + dim1.size(); }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

inline constexpr double relative_frame_value = 1.0;

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            auto& p = parent_[static_cast<std::size_t>(x)];
            p = parent_[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    void link(int child_root, int parent_root) { parent_[static_cast<std::size_t>(child_root)] = parent_root; }

private:
    std::vector<int> parent_;
};

// Pairs are reported in padded coordinates as complex cell ids.
struct RawPair {
    int dimension;
    int birth_cell;
    int death_cell;
};

inline std::vector<RawPair> persistence_pairs(const GridComplex& k, const std::vector<int>& order,
                                              const std::vector<char>* frame_vertex) {
    const int n = k.cell_count();
    std::vector<int> position(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        position[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    auto is_frame = [&](int v) {
        return frame_vertex && (*frame_vertex)[static_cast<std::size_t>(v)];
    };
    auto is_frame_edge = [&](int e) {
        const auto& vs = k.verts[static_cast<std::size_t>(e)];
        return is_frame(vs[0]) && is_frame(vs[1]);
    };

    std::vector<RawPair> pairs;

    // Dimension 0. `oldest` holds, per root, the birth vertex of its
    // component; the frame component is older than everything.
    UnionFind uf(k.vertex_count);
    std::vector<int> oldest(static_cast<std::size_t>(k.vertex_count));
    std::iota(oldest.begin(), oldest.end(), 0);
    int frame_root = -1;
    if (frame_vertex) {
        for (int v = 0; v < k.vertex_count; ++v) {
            if (!is_frame(v))
                continue;
            if (frame_root < 0)
                frame_root = v;
            else
                uf.link(v, frame_root);
        }
    }
    auto birth_rank = [&](int root) {
        return root == frame_root ? -1 : position[static_cast<std::size_t>(oldest[static_cast<std::size_t>(root)])];
    };

    std::vector<char> negative_edge(static_cast<std::size_t>(k.edge_count), 0);
    for (int id : order) {
        if (k.dimension(id) != 1 || is_frame_edge(id))
            continue;
        const auto& vs = k.verts[static_cast<std::size_t>(id)];
        int ra = uf.find(vs[0]);
        int rb = uf.find(vs[1]);
        if (ra == rb)
            continue;
        if (birth_rank(ra) > birth_rank(rb))
            std::swap(ra, rb);
        // rb is the younger component and dies here.
        pairs.push_back({0, oldest[static_cast<std::size_t>(rb)], id});
        negative_edge[static_cast<std::size_t>(id - k.first_edge())] = 1;
        uf.link(rb, ra);
    }

    // Dimension 1. Columns hold edge positions in ascending order; the pivot
    // is the last entry.
    std::vector<std::vector<int>> reduced;
    std::vector<int> pivot_owner(static_cast<std::size_t>(n), -1);
    std::vector<int> column;
    std::vector<int> scratch;
    for (int id : order) {
        if (k.dimension(id) != 2)
            continue;
        column.clear();
        for (int e : k.square_edges(id))
            if (!negative_edge[static_cast<std::size_t>(e - k.first_edge())] && !is_frame_edge(e))
                column.push_back(position[static_cast<std::size_t>(e)]);
        std::sort(column.begin(), column.end());
        while (!column.empty()) {
            const int owner = pivot_owner[static_cast<std::size_t>(column.back())];
            if (owner < 0)
                break;
            const auto& other = reduced[static_cast<std::size_t>(owner)];
            scratch.clear();
            std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                          std::back_inserter(scratch));
            column.swap(scratch);
        }
        if (column.empty())
            continue; // creates a 2-dimensional class (relative mode only)
        const int pivot = column.back();
        pivot_owner[static_cast<std::size_t>(pivot)] = static_cast<int>(reduced.size());
        reduced.push_back(column);
        pairs.push_back({1, order[static_cast<std::size_t>(pivot)], id});
    }
    return pairs;
}

inline std::vector<char> frame_vertices(int height, int width) {
    std::vector<char> frame(static_cast<std::size_t>(height) * width, 0);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
            if (r == 0 || c == 0 || r == height - 1 || c == width - 1)
                frame[static_cast<std::size_t>(r) * width + c] = 1;
    return frame;
}

} // namespace detail

/// Persistence diagram of the superlevel filtration of `f`. Zero-persistence
/// pairs and the essential component are dropped. In relative mode the
/// reported pixels are in the coordinates of `f`.
inline PersistenceDiagram compute_diagram(const Grid<double>& f, bool relative = false) {
    const Grid<double> padded = relative ? pad_frame(f, relative_frame_value) : f;
    const detail::GridComplex k = detail::make_complex(padded);
    const std::vector<int> order = detail::filtration_order(k);
    std::vector<char> frame;
    if (relative)
        frame = detail::frame_vertices(padded.height(), padded.width());

    auto to_pixel = [&](int cell) -> std::optional<Pixel> {
        const int v = k.entry[static_cast<std::size_t>(cell)];
        Pixel p = padded.pixel(static_cast<std::size_t>(v));
        if (!relative)
            return p;
        if (frame[static_cast<std::size_t>(v)])
            return std::nullopt;
        return Pixel{p.row - 1, p.col - 1};
    };

    PersistenceDiagram dgm;
    for (const auto& pair : detail::persistence_pairs(k, order, relative ? &frame : nullptr)) {
        const double birth = k.value[static_cast<std::size_t>(pair.birth_cell)];
        const double death = k.value[static_cast<std::size_t>(pair.death_cell)];
        if (birth == death)
            continue;
        dgm.dots(pair.dimension)
            .push_back({pair.dimension, birth, death, to_pixel(pair.birth_cell), to_pixel(pair.death_cell)});
    }
    std::sort(dgm.dim0.begin(), dgm.dim0.end(), canonical_less);
    std::sort(dgm.dim1.begin(), dgm.dim1.end(), canonical_less);
    return dgm;
}

} // namespace topoloss
