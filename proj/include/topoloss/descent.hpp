#pragma once

// Projected gradient descent directly on pixel values: the likelihood map is
// its own parameter vector, so df(c)/dw is an indicator and each step is
//   f <- clamp(f - step * (dL_bce/df + lambda * dL_topo/df)).
// Diagrams and the matching are recomputed at every iteration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topoloss/grid.hpp"
#include "topoloss/io.hpp"
#include "topoloss/loss.hpp"

namespace topoloss {

struct DescentConfig {
    double step_size = 0.05;
    int iterations = 200;
    double lambda = 1.0;
    DimensionSet dims = DimensionSet::both();
    bool relative = false;
    MatchingMode mode = MatchingMode::symmetric;
    // sum scales the BCE pull on each pixel by the pixel count, so it is
    // no longer dwarfed by the topological term on a single critical pixel.
    Reduction bce_reduction = Reduction::mean;
    int snapshot_every = 0; // 0 disables snapshots
    std::filesystem::path snapshot_dir;
    std::uint64_t seed = 0;
    bool clamp = true;

    void validate() const {
        if (!(step_size > 0.0) || !std::isfinite(step_size))
            throw ValidationError("step size must be finite and positive");
        if (iterations < 1)
            throw ValidationError("iterations must be at least 1");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw ValidationError("lambda must be finite and non-negative");
        if (snapshot_every < 0)
            throw ValidationError("snapshot interval must be non-negative");
    }
};

class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DescentStep {
    int iteration = 0;
    double l_bce = 0.0;
    double l_topo = 0.0;
    double l_total = 0.0;
    std::size_t pred_dots = 0;
    std::size_t gradient_entries = 0;
    std::string snapshot; // empty when no snapshot was written
};

struct DescentResult {
    std::vector<DescentStep> trajectory;
    Grid<double> final_map;
    LossReport final_report; // evaluated at final_map
};

/// Iteration k (1-based) evaluates the loss at the current map, records it,
/// then takes one step. Snapshots are the map after step k thresholded at 0.5.
inline DescentResult run_descent(const Grid<double>& f0, const Grid<std::uint8_t>& g, const DescentConfig& cfg) {
    cfg.validate();
    if (!f0.same_shape(g))
        throw ValidationError("prediction and ground truth shapes differ");
    const TopoOptions opts{cfg.dims, cfg.relative, cfg.mode};

    std::vector<double> f(f0.values().begin(), f0.values().end());
    std::vector<DescentStep> trajectory;
    trajectory.reserve(static_cast<std::size_t>(cfg.iterations));
    if (cfg.snapshot_every > 0 && !cfg.snapshot_dir.empty())
        std::filesystem::create_directories(cfg.snapshot_dir);

    for (int it = 1; it <= cfg.iterations; ++it) {
        const Grid<double> current(f0.height(), f0.width(), f);
        const LossReport report = total_loss(current, g, cfg.lambda, opts, cfg.bce_reduction);
        if (!std::isfinite(report.l_total))
            throw DivergenceError("non-finite loss at iteration " + std::to_string(it) +
                                  " (bce=" + std::to_string(report.l_bce) +
                                  ", topo=" + std::to_string(report.l_topo) + ")");

        const auto grad = report.total_gradient->values();
        for (std::size_t i = 0; i < f.size(); ++i) {
            double v = f[i] - cfg.step_size * grad[i];
            if (cfg.clamp)
                v = std::clamp(v, 0.0, 1.0);
            f[i] = v;
        }

        DescentStep step{it, report.l_bce, report.l_topo, report.l_total, report.pred_diagram.size(),
                         report.topo_gradient.entries().size(), {}};
        if (cfg.snapshot_every > 0 && it % cfg.snapshot_every == 0 && !cfg.snapshot_dir.empty()) {
            const auto path = cfg.snapshot_dir / ("iter_" + std::to_string(it) + ".pgm");
            save_map(path, threshold(Grid<double>(f0.height(), f0.width(), f), 0.5));
            step.snapshot = path.string();
        }
        trajectory.push_back(std::move(step));
    }

    Grid<double> final_map(f0.height(), f0.width(), f);
    LossReport final_report = total_loss(final_map, g, cfg.lambda, opts, cfg.bce_reduction);
    return {std::move(trajectory), std::move(final_map), std::move(final_report)};
}

} // namespace topoloss
