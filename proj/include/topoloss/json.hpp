#pragma once

// JSON views of diagrams, matchings, loss reports and descent trajectories.

#include <optional>
#include <vector>

#include <json.hpp>

#include "topoloss/descent.hpp"
#include "topoloss/loss.hpp"
#include "topoloss/matching.hpp"
#include "topoloss/metrics.hpp"
#include "topoloss/persistence.hpp"

namespace topoloss {

using json = nlohmann::json;

namespace detail {

inline json pixel_json(const std::optional<Pixel>& p) {
    if (!p)
        return nullptr;
    return json::array({p->row, p->col});
}

inline json index_json(const std::optional<int>& i) {
    if (!i)
        return "diag";
    return *i;
}

} // namespace detail

inline json to_json(const PersistenceDiagram& diagram) {
    json out = json::array();
    for (int d = 0; d < 2; ++d)
        for (const auto& p : diagram.dots(d))
            out.push_back({{"dim", d},
                           {"birth", p.birth},
                           {"death", p.death},
                           {"birth_pixel", detail::pixel_json(p.birth_pixel)},
                           {"death_pixel", detail::pixel_json(p.death_pixel)}});
    return out;
}

inline json to_json(const std::vector<DiagramMatching>& matching) {
    json out = json::array();
    for (const auto& m : matching)
        for (const auto& pair : m.pairs)
            out.push_back({{"dim", m.dimension},
                           {"from", detail::index_json(pair.from)},
                           {"to", detail::index_json(pair.to)},
                           {"cost", pair.cost}});
    return out;
}

inline json to_json(const GradientMap& grad) {
    json out = json::array();
    for (const auto& [p, v] : grad.entries())
        out.push_back(json::array({p.row, p.col, v}));
    return out;
}

inline json to_json(const LossReport& r) {
    return {{"l_bce", r.l_bce},
            {"l_topo", r.l_topo},
            {"l_topo_dim", json::array({r.l_topo_by_dim[0], r.l_topo_by_dim[1]})},
            {"lambda", r.lambda},
            {"l_total", r.l_total},
            {"pred_diagram", to_json(r.pred_diagram)},
            {"truth_diagram", to_json(r.truth_diagram)},
            {"matching", to_json(r.matching)},
            {"gradient", to_json(r.topo_gradient)}};
}

inline json to_json(const BettiErrorConfig& c) {
    return {{"patches", c.patches}, {"size", c.size},         {"seed", c.seed},
            {"dim", c.dimension},   {"alpha", c.alpha},       {"relative", c.relative}};
}

inline json to_json(const SegmentationScores& s, const BettiErrorConfig& c) {
    return {{"accuracy", s.accuracy}, {"ari", s.ari}, {"voi", s.voi},
            {"betti_error", s.betti_error}, {"config", to_json(c)}};
}

inline json to_json(const DescentConfig& c) {
    json dims = json::array();
    for (int d = 0; d < 2; ++d)
        if (c.dims.contains(d))
            dims.push_back(d);
    return {{"step_size", c.step_size},
            {"iterations", c.iterations},
            {"lambda", c.lambda},
            {"dims", dims},
            {"relative", c.relative},
            {"mode", c.mode == MatchingMode::symmetric ? "symmetric" : "asymmetric"},
            {"bce_reduction", c.bce_reduction == Reduction::sum ? "sum" : "mean"},
            {"snapshot_every", c.snapshot_every},
            {"seed", c.seed},
            {"clamp", c.clamp}};
}

inline json to_json(const DescentResult& result, const DescentConfig& cfg) {
    json steps = json::array();
    for (const auto& s : result.trajectory) {
        json step = {{"iteration", s.iteration}, {"l_bce", s.l_bce},
                     {"l_topo", s.l_topo},       {"l_total", s.l_total},
                     {"pred_dots", s.pred_dots}, {"gradient_entries", s.gradient_entries}};
        step["snapshot"] = s.snapshot.empty() ? json(nullptr) : json(s.snapshot);
        steps.push_back(std::move(step));
    }
    return {{"config", to_json(cfg)},
            {"trajectory", std::move(steps)},
            {"final", {{"l_bce", result.final_report.l_bce},
                       {"l_topo", result.final_report.l_topo},
                       {"l_total", result.final_report.l_total}}}};
}

} // namespace topoloss
