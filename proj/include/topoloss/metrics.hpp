#pragma once

// Segmentation metrics: pixel accuracy, patchwise Betti number error, and
// the region-partition scores (adapted Rand index, variation of information).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "topoloss/betti.hpp"
#include "topoloss/grid.hpp"

namespace topoloss {

/// Label 0 marks foreground (membrane) pixels; labels >= 1 are the
/// 4-connected components of the background, numbered by first row-major
/// occurrence.
class RegionLabeling : public Grid<int> {
public:
    using Grid<int>::Grid;

    int region_count() const {
        int n = 0;
        for (int v : values())
            n = std::max(n, v);
        return n;
    }
};

inline RegionLabeling label_regions(const Grid<std::uint8_t>& mask) {
    std::vector<char> background(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        background[i] = mask.values()[i] == 0;
    std::vector<int> labels;
    detail::label_components(mask.height(), mask.width(), background, labels);
    for (int& l : labels)
        l += 1; // -1 (foreground) becomes 0
    return {mask.height(), mask.width(), std::move(labels)};
}

inline double pixel_accuracy(const Grid<std::uint8_t>& pred, const Grid<std::uint8_t>& gt) {
    if (!pred.same_shape(gt))
        throw ValidationError("prediction and ground truth shapes differ");
    std::size_t same = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        same += pred.values()[i] == gt.values()[i];
    return static_cast<double>(same) / static_cast<double>(pred.size());
}

struct BettiErrorConfig {
    int patches = 100;
    int size = default_patch_size;
    std::uint64_t seed = 0;
    int dimension = 1;
    double alpha = 0.5;
    bool relative = true;
};

/// Mean |beta_d(pred patch) - beta_d(gt patch)| over aligned random patches.
inline double betti_error(const BinaryMask& pred, const BinaryMask& gt, const BettiErrorConfig& cfg = {}) {
    if (!pred.same_shape(gt))
        throw ValidationError("prediction and ground truth shapes differ");
    if (cfg.dimension != 0 && cfg.dimension != 1)
        throw std::invalid_argument("Betti error dimension must be 0 or 1");
    const auto origins = sample_patch_origins(pred.height(), pred.width(), cfg.patches, cfg.size, cfg.seed);
    double total = 0.0;
    for (Pixel o : origins) {
        const auto a = extract_patch(pred, o, cfg.size).data.to_likelihood();
        const auto b = extract_patch(gt, o, cfg.size).data.to_likelihood();
        const int ba = betti_at_threshold(a, cfg.alpha, cfg.relative)[cfg.dimension];
        const int bb = betti_at_threshold(b, cfg.alpha, cfg.relative)[cfg.dimension];
        total += std::abs(ba - bb);
    }
    return total / static_cast<double>(origins.size());
}

namespace detail {

struct Contingency {
    std::map<std::pair<int, int>, double> joint; // (pred, gt) -> count
    std::map<int, double> pred;
    std::map<int, double> gt;
    double total = 0.0;
};

// Restricted to pixels whose ground-truth label is not 0.
inline Contingency contingency(const Grid<int>& pred, const Grid<int>& gt) {
    if (!pred.same_shape(gt))
        throw ValidationError("prediction and ground truth shapes differ");
    Contingency t;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const int b = gt.values()[i];
        if (b == 0)
            continue;
        const int a = pred.values()[i];
        t.joint[{a, b}] += 1.0;
        t.pred[a] += 1.0;
        t.gt[b] += 1.0;
        t.total += 1.0;
    }
    if (t.total == 0.0)
        throw ValidationError("ground truth has no pixel with a nonzero label");
    return t;
}

} // namespace detail

/// F-score of the foreground-restricted Rand index; 1.0 for identical
/// partitions.
inline double adapted_rand(const Grid<int>& pred, const Grid<int>& gt) {
    const auto t = detail::contingency(pred, gt);
    double joint = 0.0;
    double pred_sq = 0.0;
    double gt_sq = 0.0;
    for (const auto& [key, c] : t.joint)
        joint += c * c;
    for (const auto& [key, c] : t.pred)
        pred_sq += c * c;
    for (const auto& [key, c] : t.gt)
        gt_sq += c * c;
    const double precision = joint / pred_sq;
    const double recall = joint / gt_sq;
    return 2.0 * precision * recall / (precision + recall);
}

/// H(pred | gt) + H(gt | pred) in nats, on the same restricted domain as
/// adapted_rand.
inline double variation_of_information(const Grid<int>& pred, const Grid<int>& gt) {
    const auto t = detail::contingency(pred, gt);
    double h_pred_given_gt = 0.0;
    double h_gt_given_pred = 0.0;
    for (const auto& [key, c] : t.joint) {
        const double p = c / t.total;
        h_pred_given_gt -= p * std::log(c / t.gt.at(key.second));
        h_gt_given_pred -= p * std::log(c / t.pred.at(key.first));
    }
    return h_pred_given_gt + h_gt_given_pred;
}

struct SegmentationScores {
    double accuracy = 0.0;
    double ari = 0.0;
    double voi = 0.0;
    double betti_error = 0.0;
};

inline SegmentationScores evaluate_segmentation(const BinaryMask& pred, const BinaryMask& gt,
                                                const BettiErrorConfig& cfg = {}) {
    const auto pr = label_regions(pred);
    const auto gr = label_regions(gt);
    return {pixel_accuracy(pred, gt), adapted_rand(pr, gr), variation_of_information(pr, gr),
            betti_error(pred, gt, cfg)};
}

} // namespace topoloss
