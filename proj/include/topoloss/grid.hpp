#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topoloss/error.hpp"

namespace topoloss {

struct Pixel {
    int row = 0;
    int col = 0;

    friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Immutable row-major 2D grid. Shape must be at least 2x2.
template <class T>
class Grid {
public:
    using value_type = T;

    Grid(int height, int width, std::vector<T> values)
        : height_(height), width_(width), values_(std::move(values)) {
        if (height_ < 2 || width_ < 2)
            throw ValidationError("grid must be at least 2x2, got " + std::to_string(height_) +
                                  "x" + std::to_string(width_));
        if (values_.size() != static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_))
            throw ValidationError("grid value count does not match its shape");
    }

    Grid(int height, int width, T fill)
        : Grid(height, width,
               std::vector<T>(static_cast<std::size_t>(std::max(height, 0)) *
                                  static_cast<std::size_t>(std::max(width, 0)),
                              fill)) {}

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return values_.size(); }

    T operator()(int row, int col) const { return values_[index(row, col)]; }
    T operator[](Pixel p) const { return values_[index(p.row, p.col)]; }

    std::span<const T> values() const noexcept { return values_; }

    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }
    Pixel pixel(std::size_t index) const noexcept {
        return {static_cast<int>(index / static_cast<std::size_t>(width_)),
                static_cast<int>(index % static_cast<std::size_t>(width_))};
    }
    bool contains(Pixel p) const noexcept {
        return p.row >= 0 && p.col >= 0 && p.row < height_ && p.col < width_;
    }
    bool same_shape(const auto& other) const noexcept {
        return height_ == other.height() && width_ == other.width();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int height_;
    int width_;
    std::vector<T> values_;
};

/// Likelihood map f sampled at pixels; every value lies in [0, 1].
class LikelihoodMap : public Grid<double> {
public:
    LikelihoodMap(int height, int width, std::vector<double> values)
        : Grid<double>(height, width, std::move(values)) {
        for (std::size_t i = 0; i < size(); ++i) {
            const double v = this->values()[i];
            if (!(v >= 0.0 && v <= 1.0)) {
                const Pixel p = pixel(i);
                throw ValidationError("likelihood value out of [0,1] at (" + std::to_string(p.row) +
                                      ", " + std::to_string(p.col) + ")");
            }
        }
    }

    LikelihoodMap(int height, int width, double fill)
        : LikelihoodMap(height, width,
                        std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                                static_cast<std::size_t>(std::max(width, 0)),
                                            fill)) {}
};

/// Ground-truth segmentation with values exactly 0 or 1.
class BinaryMask : public Grid<std::uint8_t> {
public:
    BinaryMask(int height, int width, std::vector<std::uint8_t> values)
        : Grid<std::uint8_t>(height, width, std::move(values)) {
        for (std::size_t i = 0; i < size(); ++i)
            if (this->values()[i] > 1) {
                const Pixel p = pixel(i);
                throw ValidationError("mask value is not 0 or 1 at (" + std::to_string(p.row) +
                                      ", " + std::to_string(p.col) + ")");
            }
    }

    BinaryMask(int height, int width, std::uint8_t fill)
        : BinaryMask(height, width,
                     std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(height, 0)) *
                                                   static_cast<std::size_t>(std::max(width, 0)),
                                               fill)) {}

    LikelihoodMap to_likelihood() const {
        std::vector<double> out(values().begin(), values().end());
        return {height(), width(), std::move(out)};
    }
};

/// Pixels with f >= alpha become foreground.
inline BinaryMask threshold(const Grid<double>& f, double alpha) {
    std::vector<std::uint8_t> out(f.size());
    std::transform(f.values().begin(), f.values().end(), out.begin(),
                   [alpha](double v) { return static_cast<std::uint8_t>(v >= alpha ? 1 : 0); });
    return {f.height(), f.width(), std::move(out)};
}

/// Surrounds the grid with a one-pixel ring of `frame_value`.
template <class G>
G pad_frame(const G& grid, typename G::value_type frame_value) {
    const int h = grid.height() + 2;
    const int w = grid.width() + 2;
    std::vector<typename G::value_type> out(static_cast<std::size_t>(h) * w, frame_value);
    for (int r = 0; r < grid.height(); ++r)
        for (int c = 0; c < grid.width(); ++c)
            out[static_cast<std::size_t>(r + 1) * w + (c + 1)] = grid(r, c);
    return G(h, w, std::move(out));
}

inline constexpr int default_patch_size = 65;

template <class G>
struct Patch {
    Pixel origin;
    int size;
    G data;
};

template <class G>
Patch<G> extract_patch(const G& grid, Pixel origin, int size) {
    if (size < 2 || origin.row < 0 || origin.col < 0 || origin.row + size > grid.height() ||
        origin.col + size > grid.width())
        throw std::invalid_argument("patch does not fit inside the grid");
    std::vector<typename G::value_type> out;
    out.reserve(static_cast<std::size_t>(size) * size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            out.push_back(grid(origin.row + r, origin.col + c));
    return {origin, size, G(size, size, std::move(out))};
}

/// Patch origins drawn i.i.d. uniformly over all valid positions. A pure
/// function of (shape, count, size, seed), so a prediction and its ground
/// truth sampled with the same arguments yield aligned patches.
inline std::vector<Pixel> sample_patch_origins(int height, int width, int count, int size,
                                               std::uint64_t seed) {
    if (count < 1)
        throw std::invalid_argument("patch count must be at least 1");
    if (size < 2 || size > std::min(height, width))
        throw std::invalid_argument("patch size " + std::to_string(size) +
                                    " does not fit a " + std::to_string(height) + "x" +
                                    std::to_string(width) + " grid");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> rows(0, height - size);
    std::uniform_int_distribution<int> cols(0, width - size);
    std::vector<Pixel> origins;
    origins.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int r = rows(rng);
        const int c = cols(rng);
        origins.push_back({r, c});
    }
    return origins;
}

template <class G>
std::vector<Patch<G>> sample_patches(const G& grid, int count, int size, std::uint64_t seed) {
    std::vector<Patch<G>> patches;
    for (Pixel origin : sample_patch_origins(grid.height(), grid.width(), count, size, seed))
        patches.push_back(extract_patch(grid, origin, size));
    return patches;
}

} // namespace topoloss
