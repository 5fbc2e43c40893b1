#pragma once

#include <cstdint>
#include <vector>

#include "topoloss/grid.hpp"
#include "topoloss/persistence.hpp"

namespace topoloss {

struct BettiNumbers {
    int b0 = 0;
    int b1 = 0;

    int operator[](int dimension) const { return dimension == 0 ? b0 : b1; }
    friend bool operator==(const BettiNumbers&, const BettiNumbers&) = default;
};

namespace detail {

// Labels 4-connected components of `inside`; returns the component count.
inline int label_components(int height, int width, const std::vector<char>& inside,
                            std::vector<int>& labels) {
    labels.assign(inside.size(), -1);
    std::vector<int> stack;
    int count = 0;
    for (int start = 0; start < height * width; ++start) {
        if (!inside[static_cast<std::size_t>(start)] || labels[static_cast<std::size_t>(start)] >= 0)
            continue;
        labels[static_cast<std::size_t>(start)] = count;
        stack.push_back(start);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const int r = v / width;
            const int c = v % width;
            const int nbrs[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
            for (const auto& nb : nbrs) {
                if (nb[0] < 0 || nb[1] < 0 || nb[0] >= height || nb[1] >= width)
                    continue;
                const int u = nb[0] * width + nb[1];
                if (inside[static_cast<std::size_t>(u)] && labels[static_cast<std::size_t>(u)] < 0) {
                    labels[static_cast<std::size_t>(u)] = count;
                    stack.push_back(u);
                }
            }
        }
        ++count;
    }
    return count;
}

} // namespace detail

/// Betti numbers of the cubical complex of {f >= alpha}. b1 comes from the
/// Euler characteristic: b1 = b0 - (#vertices - #edges + #squares).
///
/// In relative mode the map is padded with a 1.0 frame and the numbers are
/// those of the pair (complex + frame, frame): b0 counts components not
/// touching the frame and b1 counts handles relative to it.
inline BettiNumbers betti_at_threshold(const Grid<double>& f, double alpha, bool relative = false) {
    const Grid<double> g = relative ? pad_frame(f, relative_frame_value) : f;
    const int h = g.height();
    const int w = g.width();
    auto frame = [&](int r, int c) {
        return relative && (r == 0 || c == 0 || r == h - 1 || c == w - 1);
    };
    // The frame belongs to the pair at every threshold.
    std::vector<char> in(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Pixel p = g.pixel(i);
        in[i] = (frame(p.row, p.col) || g.values()[i] >= alpha) ? 1 : 0;
    }
    auto at = [&](int r, int c) { return in[static_cast<std::size_t>(r) * w + c] != 0; };

    std::vector<int> labels;
    const int components = detail::label_components(h, w, in, labels);

    long vertices = 0;
    long edges = 0;
    long squares = 0;
    long all_squares = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!at(r, c))
                continue;
            if (!frame(r, c))
                ++vertices;
            if (c + 1 < w && at(r, c + 1) && !(frame(r, c) && frame(r, c + 1)))
                ++edges;
            if (r + 1 < h && at(r + 1, c) && !(frame(r, c) && frame(r + 1, c)))
                ++edges;
        }
    }
    for (int r = 0; r + 1 < h; ++r)
        for (int c = 0; c + 1 < w; ++c) {
            ++all_squares;
            if (at(r, c) && at(r, c + 1) && at(r + 1, c) && at(r + 1, c + 1))
                ++squares;
        }

    if (!relative) {
        const long chi = vertices - edges + squares;
        return {components, static_cast<int>(components - chi)};
    }

    // Quotient complex: frame collapsed to one base vertex.
    const int b0_quotient = components; // the frame is one of the components
    const long chi = (vertices + 1) - edges + squares;
    const int b2 = squares == all_squares ? 1 : 0;
    return {b0_quotient - 1, static_cast<int>(b0_quotient - chi + b2)};
}

} // namespace topoloss
