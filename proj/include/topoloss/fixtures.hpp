#pragma once

// Synthetic likelihood / ground-truth pairs: rings, broken rings, Y-shaped
// branches, broken bridges and figure-eights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "topoloss/grid.hpp"

namespace topoloss::fixtures {

struct FixturePair {
    LikelihoodMap pred;
    BinaryMask truth;
};

class Canvas {
public:
    Canvas(int height, int width, double background)
        : h_(height), w_(width), v_(static_cast<std::size_t>(height) * width, background) {}

    void set(int r, int c, double value) {
        if (r >= 0 && c >= 0 && r < h_ && c < w_)
            v_[static_cast<std::size_t>(r) * w_ + c] = value;
    }
    double get(int r, int c) const { return v_[static_cast<std::size_t>(r) * w_ + c]; }

    // Annulus of pixels whose centre lies within `half_width` of the circle.
    void ring(double cr, double cc, double radius, double half_width, double value) {
        for (int r = 0; r < h_; ++r)
            for (int c = 0; c < w_; ++c)
                if (std::abs(std::hypot(r - cr, c - cc) - radius) <= half_width)
                    set(r, c, value);
    }

    void rect(int r0, int c0, int r1, int c1, double value) {
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c)
                set(r, c, value);
    }

    // Thick segment: all pixels within `half_width` of the segment.
    void line(double r0, double c0, double r1, double c1, double half_width, double value) {
        const double dr = r1 - r0;
        const double dc = c1 - c0;
        const double len2 = dr * dr + dc * dc;
        for (int r = 0; r < h_; ++r)
            for (int c = 0; c < w_; ++c) {
                double t = len2 > 0 ? ((r - r0) * dr + (c - c0) * dc) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                if (std::hypot(r - (r0 + t * dr), c - (c0 + t * dc)) <= half_width)
                    set(r, c, value);
            }
    }

    LikelihoodMap likelihood() const { return {h_, w_, v_}; }
    BinaryMask mask() const {
        std::vector<std::uint8_t> out(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i)
            out[i] = v_[i] >= 0.5 ? 1 : 0;
        return {h_, w_, std::move(out)};
    }

private:
    int h_;
    int w_;
    std::vector<double> v_;
};

struct RingGeometry {
    double centre;
    double radius;
    double half_width;
};

inline RingGeometry ring_geometry(int size) {
    return {(size - 1) / 2.0, size * 0.3, 1.5};
}

/// Closed ring (value `ring_value`) on `background`.
inline LikelihoodMap ring(int size, double ring_value = 1.0, double background = 0.0) {
    const auto geo = ring_geometry(size);
    Canvas canvas(size, size, background);
    canvas.ring(geo.centre, geo.centre, geo.radius, geo.half_width, ring_value);
    return canvas.likelihood();
}

/// Ring at `ring_value` whose top is cut by a 3-pixel-wide gap at
/// `gap_value`; the ground truth is the closed ring.
inline FixturePair broken_ring(int size = 65, double gap_value = 0.1, double ring_value = 0.9,
                               double background = 0.0) {
    if (size < 9)
        throw std::invalid_argument("broken ring needs size >= 9");
    const auto geo = ring_geometry(size);
    Canvas truth(size, size, 0.0);
    truth.ring(geo.centre, geo.centre, geo.radius, geo.half_width, 1.0);
    Canvas pred(size, size, background);
    pred.ring(geo.centre, geo.centre, geo.radius, geo.half_width, ring_value);
    const int mid = static_cast<int>(std::lround(geo.centre));
    for (int r = 0; r < mid; ++r)
        for (int c = mid - 1; c <= mid + 1; ++c)
            if (truth.get(r, c) == 1.0)
                pred.set(r, c, gap_value);
    return {pred.likelihood(), truth.mask()};
}

/// Y-shaped branch whose three arms reach the patch border.
inline LikelihoodMap y_branch(int size = default_patch_size, double value = 1.0, double background = 0.0) {
    Canvas canvas(size, size, background);
    const double mid = (size - 1) / 2.0;
    const double last = size - 1;
    canvas.line(mid, mid, last, mid, 1.0, value);
    canvas.line(mid, mid, 0.0, size * 0.2, 1.0, value);
    canvas.line(mid, mid, 0.0, last - size * 0.2, 1.0, value);
    return canvas.likelihood();
}

/// Two blocks joined by a bridge; in the prediction the bridge has a gap at
/// `gap_value`.
inline FixturePair broken_bridge(int size = 33, double gap_value = 0.3, double block_value = 0.9,
                                 double background = 0.0) {
    if (size < 11)
        throw std::invalid_argument("broken bridge needs size >= 11");
    const int mid = size / 2;
    const int q = size / 4;
    Canvas truth(size, size, 0.0);
    truth.rect(q, 1, size - q, q, 1.0);
    truth.rect(q, size - 1 - q, size - q, size - 2, 1.0);
    truth.rect(mid - 1, q, mid + 1, size - 1 - q, 1.0);
    Canvas pred(size, size, background);
    pred.rect(q, 1, size - q, q, block_value);
    pred.rect(q, size - 1 - q, size - q, size - 2, block_value);
    pred.rect(mid - 1, q, mid + 1, size - 1 - q, block_value);
    pred.rect(mid - 1, mid - 1, mid + 1, mid + 1, gap_value);
    return {pred.likelihood(), truth.mask()};
}

/// One component with two handles: a rectangle outline split by a middle bar.
inline LikelihoodMap figure_eight(int height = 9, int width = 13, double value = 1.0, double background = 0.0) {
    if (height < 5 || width < 7)
        throw std::invalid_argument("figure eight needs at least 5x7");
    Canvas canvas(height, width, background);
    canvas.rect(1, 1, 1, width - 2, value);
    canvas.rect(height - 2, 1, height - 2, width - 2, value);
    canvas.rect(1, 1, height - 2, 1, value);
    canvas.rect(1, width - 2, height - 2, width - 2, value);
    canvas.rect(1, width / 2, height - 2, width / 2, value);
    return canvas.likelihood();
}

/// Grid of small rings, used as structured benchmark input.
inline LikelihoodMap ring_grid(int size, int pitch = 8) {
    Canvas canvas(size, size, 0.0);
    for (int r = pitch / 2; r + pitch / 2 <= size; r += pitch)
        for (int c = pitch / 2; c + pitch / 2 <= size; c += pitch)
            canvas.ring(r - 0.5, c - 0.5, pitch * 0.3, 0.75, 0.8 + 0.2 * ((r + c) % 3) / 3.0);
    return canvas.likelihood();
}

/// Uniform random values on [0, 1).
inline LikelihoodMap random_map(int height, int width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(height) * width);
    for (double& x : v)
        x = u(rng);
    return {height, width, std::move(v)};
}

} // namespace topoloss::fixtures
