#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

#include "topoloss/grid.hpp"

namespace topoloss {

/// A vertex, edge or unit square of the grid complex whose vertices are the
/// pixels. The cell enters the superlevel filtration at the minimum of its
/// vertex values; `entry_pixel` is the vertex attaining it (smallest
/// row-major index on ties).
struct FiltrationCell {
    int dimension = 0;
    std::array<Pixel, 4> vertices{};
    int vertex_count = 0;
    double value = 0.0;
    Pixel entry_pixel{};

    std::span<const Pixel> vertex_pixels() const {
        return {vertices.data(), static_cast<std::size_t>(vertex_count)};
    }
};

namespace detail {

// Cell ids: vertices [0, V), horizontal edges, vertical edges, squares.
// Vertex tuples are stored in ascending row-major order.
struct GridComplex {
    int height = 0;
    int width = 0;
    int vertex_count = 0;
    int horizontal_count = 0;
    int edge_count = 0;
    int square_count = 0;

    std::vector<double> value;
    std::vector<int> entry;
    std::vector<std::array<int, 4>> verts;

    int cell_count() const { return vertex_count + edge_count + square_count; }
    int dimension(int id) const {
        if (id < vertex_count)
            return 0;
        return id < vertex_count + edge_count ? 1 : 2;
    }
    int first_edge() const { return vertex_count; }
    int first_square() const { return vertex_count + edge_count; }

    // The four edges bounding square `id`.
    std::array<int, 4> square_edges(int id) const {
        const int s = id - first_square();
        const int r = s / (width - 1);
        const int c = s % (width - 1);
        const int top = first_edge() + r * (width - 1) + c;
        const int bottom = first_edge() + (r + 1) * (width - 1) + c;
        const int left = first_edge() + horizontal_count + r * width + c;
        const int right = left + 1;
        return {top, bottom, left, right};
    }
};

inline GridComplex make_complex(const Grid<double>& f) {
    GridComplex k;
    k.height = f.height();
    k.width = f.width();
    const int h = k.height;
    const int w = k.width;
    k.vertex_count = h * w;
    k.horizontal_count = h * (w - 1);
    k.edge_count = k.horizontal_count + (h - 1) * w;
    k.square_count = (h - 1) * (w - 1);
    const auto n = static_cast<std::size_t>(k.cell_count());
    k.value.resize(n);
    k.entry.resize(n);
    k.verts.resize(n);

    const auto vals = f.values();
    auto add = [&](int id, std::initializer_list<int> vs) {
        int best = *vs.begin();
        std::array<int, 4> tuple{-1, -1, -1, -1};
        int i = 0;
        for (int v : vs) {
            tuple[static_cast<std::size_t>(i++)] = v;
            // Strict comparison keeps the smallest index among ties because
            // tuples arrive in ascending order.
            if (vals[static_cast<std::size_t>(v)] < vals[static_cast<std::size_t>(best)])
                best = v;
        }
        k.value[static_cast<std::size_t>(id)] = vals[static_cast<std::size_t>(best)];
        k.entry[static_cast<std::size_t>(id)] = best;
        k.verts[static_cast<std::size_t>(id)] = tuple;
    };

    for (int v = 0; v < k.vertex_count; ++v)
        add(v, {v});
    int id = k.first_edge();
    for (int r = 0; r < h; ++r)
        for (int c = 0; c + 1 < w; ++c)
            add(id++, {r * w + c, r * w + c + 1});
    for (int r = 0; r + 1 < h; ++r)
        for (int c = 0; c < w; ++c)
            add(id++, {r * w + c, (r + 1) * w + c});
    for (int r = 0; r + 1 < h; ++r)
        for (int c = 0; c + 1 < w; ++c)
            add(id++, {r * w + c, r * w + c + 1, (r + 1) * w + c, (r + 1) * w + c + 1});
    return k;
}

// Total order: value descending, dimension ascending, entry pixel ascending,
// vertex tuple ascending. Faces always precede their cofaces.
inline std::vector<int> filtration_order(const GridComplex& k) {
    std::vector<int> order(static_cast<std::size_t>(k.cell_count()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&k](int a, int b) {
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        if (k.value[ua] != k.value[ub])
            return k.value[ua] > k.value[ub];
        const int da = k.dimension(a);
        const int db = k.dimension(b);
        if (da != db)
            return da < db;
        if (k.entry[ua] != k.entry[ub])
            return k.entry[ua] < k.entry[ub];
        return k.verts[ua] < k.verts[ub];
    });
    return order;
}

} // namespace detail

/// Every cell of the grid complex in superlevel filtration order. The prefix
/// of cells with value >= alpha is the complex of the superlevel set f >= alpha.
inline std::vector<FiltrationCell> build_filtration(const Grid<double>& f) {
    const detail::GridComplex k = detail::make_complex(f);
    std::vector<FiltrationCell> cells;
    cells.reserve(static_cast<std::size_t>(k.cell_count()));
    for (int id : detail::filtration_order(k)) {
        const auto i = static_cast<std::size_t>(id);
        FiltrationCell cell;
        cell.dimension = k.dimension(id);
        cell.vertex_count = 1 << cell.dimension;
        for (int j = 0; j < cell.vertex_count; ++j)
            cell.vertices[static_cast<std::size_t>(j)] = f.pixel(static_cast<std::size_t>(k.verts[i][static_cast<std::size_t>(j)]));
        cell.value = k.value[i];
        cell.entry_pixel = f.pixel(static_cast<std::size_t>(k.entry[i]));
        cells.push_back(cell);
    }
    return cells;
}

} // namespace topoloss
