#pragma once

// Optimal correspondence between two persistence diagrams, dimension by
// dimension, with unmatched dots sent to their diagonal projection.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "topoloss/hungarian.hpp"
#include "topoloss/persistence.hpp"

namespace topoloss {

/// Subset of {0, 1}.
struct DimensionSet {
    bool zero = true;
    bool one = true;

    bool contains(int d) const { return d == 0 ? zero : (d == 1 && one); }

    static DimensionSet both() { return {true, true}; }
    static DimensionSet only(int d) { return {d == 0, d == 1}; }

    /// Parses "0", "1", "0,1".
    static DimensionSet parse(std::string_view text) {
        DimensionSet s{false, false};
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            if (comma == std::string_view::npos)
                comma = text.size();
            const std::string_view item = text.substr(pos, comma - pos);
            if (item == "0")
                s.zero = true;
            else if (item == "1")
                s.one = true;
            else
                throw std::invalid_argument("dimension must be 0 or 1, got '" + std::string(item) + "'");
            pos = comma + 1;
        }
        return s;
    }

    friend bool operator==(const DimensionSet&, const DimensionSet&) = default;
};

/// symmetric: unmatched dots of either diagram pay their diagonal distance.
/// asymmetric: only dots of the prediction are charged; unmatched
/// ground-truth dots are free.
enum class MatchingMode { symmetric, asymmetric };

struct MatchedPair {
    std::optional<int> from; // index into the prediction's dots, empty = diagonal
    std::optional<int> to;   // index into the ground truth's dots, empty = diagonal
    double cost = 0.0;
};

struct DiagramMatching {
    int dimension = 0;
    std::vector<MatchedPair> pairs;
    double cost = 0.0;
};

/// Squared distance of a dot to its orthogonal projection on birth == death.
inline double diagonal_cost(const PersistenceDot& p) {
    const double gap = p.birth - p.death;
    return gap * gap / 2.0;
}

inline double dot_cost(const PersistenceDot& p, const PersistenceDot& q) {
    const double db = p.birth - q.birth;
    const double dd = p.death - q.death;
    return db * db + dd * dd;
}

/// Point a prediction dot is pulled toward: its matched dot, or its diagonal
/// projection.
inline std::pair<double, double> match_target(const PersistenceDot& p, const PersistenceDot* matched) {
    if (matched)
        return {matched->birth, matched->death};
    const double mid = (p.birth + p.death) / 2.0;
    return {mid, mid};
}

/// Solves the (n+m) x (n+m) augmented assignment problem for one dimension.
/// Rows are prediction dots followed by m diagonal slots; columns are
/// ground-truth dots followed by n diagonal slots.
inline DiagramMatching match_dimension(const std::vector<PersistenceDot>& pred,
                                       const std::vector<PersistenceDot>& truth, int dimension,
                                       MatchingMode mode = MatchingMode::symmetric) {
    const int n = static_cast<int>(pred.size());
    const int m = static_cast<int>(truth.size());
    const int size = n + m;
    std::vector<double> cost(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0);
    auto at = [&](int i, int j) -> double& {
        return cost[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) + static_cast<std::size_t>(j)];
    };
    for (int i = 0; i < n; ++i) {
        const auto& p = pred[static_cast<std::size_t>(i)];
        for (int j = 0; j < m; ++j)
            at(i, j) = dot_cost(p, truth[static_cast<std::size_t>(j)]);
        const double diag = diagonal_cost(p);
        for (int j = m; j < size; ++j)
            at(i, j) = diag;
    }
    for (int i = n; i < size; ++i)
        for (int j = 0; j < m; ++j)
            at(i, j) = mode == MatchingMode::symmetric ? diagonal_cost(truth[static_cast<std::size_t>(j)]) : 0.0;

    const Assignment assignment = solve_assignment(cost, size);

    DiagramMatching out;
    out.dimension = dimension;
    for (int i = 0; i < n; ++i) {
        const int j = assignment.column_of_row[static_cast<std::size_t>(i)];
        MatchedPair pair{i, std::nullopt, at(i, j)};
        if (j < m)
            pair.to = j;
        out.pairs.push_back(pair);
    }
    for (int i = n; i < size; ++i) {
        const int j = assignment.column_of_row[static_cast<std::size_t>(i)];
        if (j < m)
            out.pairs.push_back({std::nullopt, j, at(i, j)});
    }
    for (const auto& pair : out.pairs)
        out.cost += pair.cost;
    return out;
}

/// One matching per requested dimension, in ascending dimension order.
inline std::vector<DiagramMatching> match_diagrams(const PersistenceDiagram& pred,
                                                   const PersistenceDiagram& truth,
                                                   DimensionSet dims = DimensionSet::both(),
                                                   MatchingMode mode = MatchingMode::symmetric) {
    std::vector<DiagramMatching> out;
    for (int d = 0; d <= 1; ++d)
        if (dims.contains(d))
            out.push_back(match_dimension(pred.dots(d), truth.dots(d), d, mode));
    return out;
}

/// Topological loss: total squared distance of the optimal matching.
inline double topo_loss_value(const PersistenceDiagram& pred, const PersistenceDiagram& truth,
                              DimensionSet dims = DimensionSet::both(),
                              MatchingMode mode = MatchingMode::symmetric) {
    double total = 0.0;
    for (const auto& m : match_diagrams(pred, truth, dims, mode))
        total += m.cost;
    return total;
}

} // namespace topoloss
