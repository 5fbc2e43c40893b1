#pragma once

// Brute-force persistence oracle for small maps, independent of the
// union-find / matrix-reduction path in persistence.hpp.
//
// For every pair of levels a_i >= a_j it counts persistent Betti numbers
// rank(H(K_i) -> H(K_j)) by explicit labeling: components of the superlevel
// pixels for dimension 0, and bounded components of the plane minus the
// complex ("holes") for dimension 1, where a hole of K_i survives in K_j iff
// it still contains a hole of K_j. Diagram multiplicities follow by
// inclusion-exclusion over the rank function.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "topoloss/grid.hpp"
#include "topoloss/persistence.hpp"

namespace topoloss {

inline constexpr std::size_t oracle_max_pixels = 400;

namespace detail {

struct OracleLevel {
    std::vector<int> pixel_label;  // -1 outside the superlevel set
    std::vector<int> hole_label;   // over the doubled lattice; -1 in K or unbounded
    int components = 0;
    int holes = 0;
};

class DoubledLattice {
public:
    explicit DoubledLattice(const Grid<double>& f)
        : f_(f), rows_(2 * f.height() + 1), cols_(2 * f.width() + 1) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return static_cast<std::size_t>(rows_) * cols_; }

    bool margin(int x, int y) const { return x == 0 || y == 0 || x == rows_ - 1 || y == cols_ - 1; }

    // Value of the open cell at lattice position (x, y); vertices sit at odd
    // coordinates.
    double value(int x, int y) const {
        const bool xv = x % 2 == 1;
        const bool yv = y % 2 == 1;
        const int r0 = xv ? (x - 1) / 2 : x / 2 - 1;
        const int r1 = xv ? r0 : r0 + 1;
        const int c0 = yv ? (y - 1) / 2 : y / 2 - 1;
        const int c1 = yv ? c0 : c0 + 1;
        return std::min(std::min(f_(r0, c0), f_(r0, c1)), std::min(f_(r1, c0), f_(r1, c1)));
    }

private:
    const Grid<double>& f_;
    int rows_;
    int cols_;
};

inline OracleLevel oracle_level(const Grid<double>& f, const DoubledLattice& lattice, double alpha) {
    OracleLevel level;
    const int h = f.height();
    const int w = f.width();

    level.pixel_label.assign(f.size(), -1);
    std::vector<int> stack;
    for (int s = 0; s < h * w; ++s) {
        if (f.values()[static_cast<std::size_t>(s)] < alpha || level.pixel_label[static_cast<std::size_t>(s)] >= 0)
            continue;
        level.pixel_label[static_cast<std::size_t>(s)] = level.components;
        stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const int r = v / w;
            const int c = v % w;
            for (auto [dr, dc] : {std::pair{-1, 0}, std::pair{1, 0}, std::pair{0, -1}, std::pair{0, 1}}) {
                const int nr = r + dr;
                const int nc = c + dc;
                if (nr < 0 || nc < 0 || nr >= h || nc >= w)
                    continue;
                const int u = nr * w + nc;
                if (f.values()[static_cast<std::size_t>(u)] >= alpha && level.pixel_label[static_cast<std::size_t>(u)] < 0) {
                    level.pixel_label[static_cast<std::size_t>(u)] = level.components;
                    stack.push_back(u);
                }
            }
        }
        ++level.components;
    }

    // Complement of the complex on the doubled lattice, 4-connected.
    const int rows = lattice.rows();
    const int cols = lattice.cols();
    std::vector<char> free(lattice.size());
    for (int x = 0; x < rows; ++x)
        for (int y = 0; y < cols; ++y)
            free[static_cast<std::size_t>(x) * cols + y] = lattice.margin(x, y) || lattice.value(x, y) < alpha;

    std::vector<int> component(lattice.size(), -1);
    std::vector<char> bounded;
    int count = 0;
    for (int s = 0; s < rows * cols; ++s) {
        if (!free[static_cast<std::size_t>(s)] || component[static_cast<std::size_t>(s)] >= 0)
            continue;
        bool touches_margin = false;
        component[static_cast<std::size_t>(s)] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const int x = v / cols;
            const int y = v % cols;
            touches_margin = touches_margin || lattice.margin(x, y);
            for (auto [dx, dy] : {std::pair{-1, 0}, std::pair{1, 0}, std::pair{0, -1}, std::pair{0, 1}}) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= rows || ny >= cols)
                    continue;
                const int u = nx * cols + ny;
                if (free[static_cast<std::size_t>(u)] && component[static_cast<std::size_t>(u)] < 0) {
                    component[static_cast<std::size_t>(u)] = count;
                    stack.push_back(u);
                }
            }
        }
        bounded.push_back(!touches_margin);
        ++count;
    }

    std::vector<int> hole_id(static_cast<std::size_t>(count), -1);
    for (int i = 0; i < count; ++i)
        if (bounded[static_cast<std::size_t>(i)])
            hole_id[static_cast<std::size_t>(i)] = level.holes++;
    level.hole_label.assign(lattice.size(), -1);
    for (std::size_t i = 0; i < lattice.size(); ++i)
        if (component[i] >= 0)
            level.hole_label[i] = hole_id[static_cast<std::size_t>(component[i])];

    // Euler characteristic cross-check: b1 = b0 - chi must equal the hole count.
    long chi = 0;
    for (int x = 1; x + 1 < rows; ++x)
        for (int y = 1; y + 1 < cols; ++y) {
            if (free[static_cast<std::size_t>(x) * cols + y])
                continue;
            const int dim = (x % 2 == 0) + (y % 2 == 0);
            chi += dim == 1 ? -1 : 1;
        }
    if (level.components - chi != level.holes)
        throw std::logic_error("oracle: Euler characteristic disagrees with hole count");
    return level;
}

} // namespace detail

/// Birth/death multisets of compute_diagram computed by brute force. Critical
/// pixels are left empty. Refuses maps with more than 400 pixels.
inline PersistenceDiagram oracle_diagram(const Grid<double>& f, bool relative = false) {
    if (f.size() > oracle_max_pixels)
        throw std::invalid_argument("oracle_diagram is limited to " + std::to_string(oracle_max_pixels) +
                                    " pixels");
    const Grid<double> g = relative ? pad_frame(f, relative_frame_value) : f;
    const detail::DoubledLattice lattice(g);

    std::vector<double> alphas(g.values().begin(), g.values().end());
    std::sort(alphas.begin(), alphas.end(), std::greater<>());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    const int levels = static_cast<int>(alphas.size());

    std::vector<detail::OracleLevel> k;
    k.reserve(alphas.size());
    for (double a : alphas)
        k.push_back(detail::oracle_level(g, lattice, a));

    // rank[d][i][j] for 1 <= i <= j <= levels; row 0 is identically zero.
    const auto n = static_cast<std::size_t>(levels + 1);
    std::vector<std::vector<long>> rank0(n, std::vector<long>(n, 0));
    std::vector<std::vector<long>> rank1(n, std::vector<long>(n, 0));
    for (int i = 1; i <= levels; ++i) {
        const auto& ki = k[static_cast<std::size_t>(i - 1)];
        for (int j = i; j <= levels; ++j) {
            const auto& kj = k[static_cast<std::size_t>(j - 1)];
            std::set<int> hit0;
            for (std::size_t p = 0; p < ki.pixel_label.size(); ++p)
                if (ki.pixel_label[p] >= 0)
                    hit0.insert(kj.pixel_label[p]);
            std::set<int> hit1;
            for (std::size_t q = 0; q < kj.hole_label.size(); ++q)
                if (kj.hole_label[q] >= 0 && ki.hole_label[q] >= 0)
                    hit1.insert(ki.hole_label[q]);
            long r0 = static_cast<long>(hit0.size());
            long r1 = static_cast<long>(hit1.size());
            if (relative) {
                // The frame component is zero relative to the frame, and the
                // frame loop spans a 1-dimensional image whenever K_j still
                // has a hole.
                r0 -= 1;
                r1 -= kj.holes > 0 ? 1 : 0;
            }
            rank0[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r0;
            rank1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r1;
        }
    }

    PersistenceDiagram dgm;
    auto emit = [&](int dim, const std::vector<std::vector<long>>& r) {
        for (int i = 1; i <= levels; ++i)
            for (int j = i + 1; j <= levels; ++j) {
                const auto ui = static_cast<std::size_t>(i);
                const auto uj = static_cast<std::size_t>(j);
                const long mult = r[ui][uj - 1] - r[ui][uj] - r[ui - 1][uj - 1] + r[ui - 1][uj];
                if (mult < 0)
                    throw std::logic_error("oracle: negative multiplicity");
                for (long m = 0; m < mult; ++m)
                    dgm.dots(dim).push_back({dim, alphas[ui - 1], alphas[uj - 1], std::nullopt, std::nullopt});
            }
    };
    emit(0, rank0);
    emit(1, rank1);
    std::sort(dgm.dim0.begin(), dgm.dim0.end(), canonical_less);
    std::sort(dgm.dim1.begin(), dgm.dim1.end(), canonical_less);
    return dgm;
}

} // namespace topoloss
