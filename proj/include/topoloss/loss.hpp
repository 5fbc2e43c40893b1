#pragma once

// Training loss L = L_bce + lambda * L_topo and its gradient with respect to
// the pixel values of the likelihood map.
//
// The topological gradient is nonzero only at critical pixels: for every dot
// p of the prediction diagram matched to target t (a ground-truth dot or the
// diagonal projection of p),
//   dL/df(c_b(p)) += 2 (birth(p) - birth(t))
//   dL/df(c_d(p)) += 2 (death(p) - death(t)).
// It is the derivative with the filtration order and the matching held
// fixed, which is exact wherever pixel values are pairwise distinct.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "topoloss/grid.hpp"
#include "topoloss/matching.hpp"
#include "topoloss/persistence.hpp"

namespace topoloss {

inline constexpr double bce_epsilon = 1e-7;

enum class Reduction { mean, sum };

/// Sparse map pixel -> dL_topo/df(pixel).
class GradientMap {
public:
    GradientMap(int height, int width) : height_(height), width_(width) {}

    int height() const { return height_; }
    int width() const { return width_; }

    void add(Pixel p, double v) { entries_[p] += v; }

    void drop_zeros() {
        std::erase_if(entries_, [](const auto& kv) { return kv.second == 0.0; });
    }

    double at(Pixel p) const {
        auto it = entries_.find(p);
        return it == entries_.end() ? 0.0 : it->second;
    }

    const std::map<Pixel, double>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    Grid<double> dense() const {
        std::vector<double> out(static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_), 0.0);
        for (const auto& [p, v] : entries_)
            out[static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.col)] = v;
        return {height_, width_, std::move(out)};
    }

private:
    int height_;
    int width_;
    std::map<Pixel, double> entries_;
};

struct BceResult {
    double value = 0.0;
    Grid<double> gradient;
};

/// Pixel-wise binary cross-entropy. f is clamped to [eps, 1 - eps] before the
/// logs; the gradient is that of the clamped expression, so pixels outside
/// the clamp range get zero.
inline BceResult bce_loss(const Grid<double>& f, const Grid<std::uint8_t>& g,
                          Reduction reduction = Reduction::mean) {
    if (!f.same_shape(g))
        throw ValidationError("prediction and ground truth shapes differ");
    const double lo = bce_epsilon;
    const double hi = 1.0 - bce_epsilon;
    const double scale = reduction == Reduction::mean ? 1.0 / static_cast<double>(f.size()) : 1.0;

    double total = 0.0;
    std::vector<double> grad(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double raw = f.values()[i];
        const double p = std::clamp(raw, lo, hi);
        const bool fg = g.values()[i] != 0;
        total += fg ? -std::log(p) : -std::log1p(-p);
        if (raw >= lo && raw <= hi)
            grad[i] = (fg ? -1.0 / p : 1.0 / (1.0 - p)) * scale;
    }
    return {total * scale, Grid<double>(f.height(), f.width(), std::move(grad))};
}

struct TopoOptions {
    DimensionSet dims = DimensionSet::both();
    bool relative = false;
    MatchingMode mode = MatchingMode::symmetric;
};

struct LossReport {
    double l_bce = 0.0;
    std::array<double, 2> l_topo_by_dim{0.0, 0.0};
    double l_topo = 0.0;
    double lambda = 0.0;
    double l_total = 0.0;
    PersistenceDiagram pred_diagram;
    PersistenceDiagram truth_diagram;
    std::vector<DiagramMatching> matching;
    GradientMap topo_gradient{2, 2};
    // Dense BCE gradient + lambda * topological gradient; set by total_loss.
    std::optional<Grid<double>> total_gradient;
};

/// Topological loss and its gradient. Only l_topo* and the diagram fields
/// are populated.
inline LossReport topo_grad(const Grid<double>& f, const Grid<std::uint8_t>& g, const TopoOptions& opts = {}) {
    if (!f.same_shape(g))
        throw ValidationError("prediction and ground truth shapes differ");
    LossReport report;
    report.pred_diagram = compute_diagram(f, opts.relative);
    std::vector<double> gv(g.values().begin(), g.values().end());
    report.truth_diagram = compute_diagram(Grid<double>(g.height(), g.width(), std::move(gv)), opts.relative);
    report.matching = match_diagrams(report.pred_diagram, report.truth_diagram, opts.dims, opts.mode);

    GradientMap grad(f.height(), f.width());
    for (const auto& m : report.matching) {
        const auto& pred = report.pred_diagram.dots(m.dimension);
        const auto& truth = report.truth_diagram.dots(m.dimension);
        report.l_topo_by_dim[static_cast<std::size_t>(m.dimension)] = m.cost;
        report.l_topo += m.cost;
        for (const auto& pair : m.pairs) {
            if (!pair.from)
                continue; // ground-truth dot sent to the diagonal: no pixel of f involved
            const auto& p = pred[static_cast<std::size_t>(*pair.from)];
            const PersistenceDot* q = pair.to ? &truth[static_cast<std::size_t>(*pair.to)] : nullptr;
            const auto [target_birth, target_death] = match_target(p, q);
            if (p.birth_pixel)
                grad.add(*p.birth_pixel, 2.0 * (p.birth - target_birth));
            if (p.death_pixel)
                grad.add(*p.death_pixel, 2.0 * (p.death - target_death));
        }
    }
    grad.drop_zeros();
    report.topo_gradient = std::move(grad);
    return report;
}

/// L = L_bce + lambda * L_topo with the combined dense gradient.
inline LossReport total_loss(const Grid<double>& f, const Grid<std::uint8_t>& g, double lambda,
                             const TopoOptions& opts = {}, Reduction reduction = Reduction::mean) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ValidationError("lambda must be finite and non-negative");
    BceResult bce = bce_loss(f, g, reduction);
    LossReport report = topo_grad(f, g, opts);
    report.l_bce = bce.value;
    report.lambda = lambda;
    report.l_total = report.l_bce + lambda * report.l_topo;

    std::vector<double> combined(bce.gradient.values().begin(), bce.gradient.values().end());
    for (const auto& [p, v] : report.topo_gradient.entries())
        combined[f.index(p.row, p.col)] += lambda * v;
    report.total_gradient = Grid<double>(f.height(), f.width(), std::move(combined));
    return report;
}

} // namespace topoloss
