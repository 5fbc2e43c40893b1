#pragma once

// Test-only helpers: diagram multisets, exhaustive matching and bottleneck
// distance, random maps on a value lattice.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include "topoloss/topoloss.hpp"

namespace topoloss {

// gtest failure output.
inline void PrintTo(const Pixel& p, std::ostream* os) { *os << "(" << p.row << ", " << p.col << ")"; }
inline void PrintTo(const BettiNumbers& b, std::ostream* os) { *os << "(" << b.b0 << ", " << b.b1 << ")"; }

} // namespace topoloss

namespace testing_support {

using topoloss::Grid;
using topoloss::PersistenceDiagram;
using topoloss::PersistenceDot;

using Multiset = std::vector<std::pair<double, double>>; // (birth, death), sorted

inline Multiset multiset(const PersistenceDiagram& d, int dim) {
    Multiset out;
    for (const auto& p : d.dots(dim))
        out.emplace_back(p.birth, p.death);
    std::sort(out.begin(), out.end());
    return out;
}

inline Grid<double> grid(int h, int w, std::vector<double> v) { return {h, w, std::move(v)}; }

// Values k/denominator, k uniform in [0, denominator].
inline Grid<double> lattice_map(int h, int w, int denominator, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> k(0, denominator);
    std::vector<double> v(static_cast<std::size_t>(h) * w);
    for (double& x : v)
        x = k(rng) / static_cast<double>(denominator);
    return {h, w, std::move(v)};
}

// Pairwise-distinct values: a random permutation of (i + 0.5) / n.
inline Grid<double> distinct_map(int h, int w, std::mt19937_64& rng) {
    const int n = h * w;
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = (idx[static_cast<std::size_t>(i)] + 0.5) / n;
    return {h, w, std::move(v)};
}

inline topoloss::BinaryMask mask(int h, int w, std::vector<std::uint8_t> v) { return {h, w, std::move(v)}; }

inline topoloss::BinaryMask random_mask(int h, int w, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution b(p);
    std::vector<std::uint8_t> v(static_cast<std::size_t>(h) * w);
    for (auto& x : v)
        x = b(rng) ? 1 : 0;
    return {h, w, std::move(v)};
}

// Minimum over all bijections of the (n+m)-augmented problem, written out
// from the cost definitions rather than the library's helpers.
inline double exhaustive_matching_cost(const std::vector<PersistenceDot>& a, const std::vector<PersistenceDot>& b,
                                       bool symmetric = true) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int size = n + m;
    auto cost = [&](int i, int j) -> double {
        const bool real_i = i < n;
        const bool real_j = j < m;
        if (real_i && real_j) {
            const double db = a[i].birth - b[j].birth;
            const double dd = a[i].death - b[j].death;
            return db * db + dd * dd;
        }
        if (real_i) {
            const double h = (a[i].birth - a[i].death) / 2.0;
            return 2.0 * h * h;
        }
        if (real_j) {
            if (!symmetric)
                return 0.0;
            const double h = (b[j].birth - b[j].death) / 2.0;
            return 2.0 * h * h;
        }
        return 0.0;
    };
    std::vector<int> perm(static_cast<std::size_t>(size));
    std::iota(perm.begin(), perm.end(), 0);
    double best = size == 0 ? 0.0 : INFINITY;
    if (size == 0)
        return best;
    do {
        double total = 0.0;
        for (int i = 0; i < size; ++i)
            total += cost(i, perm[static_cast<std::size_t>(i)]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Bottleneck distance between (birth, death) multisets.
inline double bottleneck(const Multiset& a, const Multiset& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int size = n + m;
    if (size == 0)
        return 0.0;
    auto cost = [&](int i, int j) -> double {
        if (i < n && j < m)
            return std::max(std::abs(a[i].first - b[j].first), std::abs(a[i].second - b[j].second));
        if (i < n)
            return (a[i].first - a[i].second) / 2.0;
        if (j < m)
            return (b[j].first - b[j].second) / 2.0;
        return 0.0;
    };
    std::vector<double> candidates;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            candidates.push_back(cost(i, j));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto perfect = [&](double t) {
        std::vector<int> match_col(static_cast<std::size_t>(size), -1);
        std::function<bool(int, std::vector<char>&)> augment = [&](int i, std::vector<char>& seen) {
            for (int j = 0; j < size; ++j) {
                if (cost(i, j) > t || seen[static_cast<std::size_t>(j)])
                    continue;
                seen[static_cast<std::size_t>(j)] = 1;
                if (match_col[static_cast<std::size_t>(j)] < 0 || augment(match_col[static_cast<std::size_t>(j)], seen)) {
                    match_col[static_cast<std::size_t>(j)] = i;
                    return true;
                }
            }
            return false;
        };
        for (int i = 0; i < size; ++i) {
            std::vector<char> seen(static_cast<std::size_t>(size), 0);
            if (!augment(i, seen))
                return false;
        }
        return true;
    };
    for (double t : candidates)
        if (perfect(t))
            return t;
    return candidates.back();
}

inline PersistenceDot dot(double birth, double death) { return {0, birth, death, std::nullopt, std::nullopt}; }

struct FdResult {
    double max_abs_error = 0.0;
    int checked = 0;
    int skipped = 0;
};

inline bool same_matching(const std::vector<topoloss::DiagramMatching>& a,
                          const std::vector<topoloss::DiagramMatching>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].pairs.size() != b[i].pairs.size())
            return false;
        for (std::size_t j = 0; j < a[i].pairs.size(); ++j)
            if (a[i].pairs[j].from != b[i].pairs[j].from || a[i].pairs[j].to != b[i].pairs[j].to)
                return false;
    }
    return true;
}

inline bool same_critical_pixels(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    for (int d = 0; d < 2; ++d) {
        if (a.dots(d).size() != b.dots(d).size())
            return false;
        for (std::size_t i = 0; i < a.dots(d).size(); ++i)
            if (a.dots(d)[i].birth_pixel != b.dots(d)[i].birth_pixel ||
                a.dots(d)[i].death_pixel != b.dots(d)[i].death_pixel)
                return false;
    }
    return true;
}

// Central differences of topo_loss_value against topo_grad, skipping pixels
// whose perturbation changes the critical cells or the matching.
inline FdResult topo_fd_check(const Grid<double>& f, const topoloss::BinaryMask& g,
                              const topoloss::TopoOptions& opts, double h = 1e-6) {
    using namespace topoloss;
    const LossReport base = topo_grad(f, g, opts);
    const auto truth = base.truth_diagram;
    FdResult out;
    std::vector<double> v(f.values().begin(), f.values().end());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = v[i];
        v[i] = x + h;
        const Grid<double> fp(f.height(), f.width(), v);
        v[i] = x - h;
        const Grid<double> fm(f.height(), f.width(), v);
        v[i] = x;
        const auto dp = compute_diagram(fp, opts.relative);
        const auto dm = compute_diagram(fm, opts.relative);
        const auto mp = match_diagrams(dp, truth, opts.dims, opts.mode);
        const auto mm = match_diagrams(dm, truth, opts.dims, opts.mode);
        if (!same_critical_pixels(dp, base.pred_diagram) || !same_critical_pixels(dm, base.pred_diagram) ||
            !same_matching(mp, base.matching) || !same_matching(mm, base.matching)) {
            ++out.skipped;
            continue;
        }
        const double fd = (topo_loss_value(dp, truth, opts.dims, opts.mode) -
                            topo_loss_value(dm, truth, opts.dims, opts.mode)) / (2.0 * h);
        const double analytic = base.topo_gradient.at(f.pixel(i));
        out.max_abs_error = std::max(out.max_abs_error, std::abs(fd - analytic));
        ++out.checked;
    }
    return out;
}

// Max relative error of the BCE gradient against central differences.
inline double bce_fd_relative_error(const Grid<double>& f, const topoloss::BinaryMask& g,
                                    topoloss::Reduction reduction, double h = 1e-6) {
    using namespace topoloss;
    const auto base = bce_loss(f, g, reduction);
    std::vector<double> v(f.values().begin(), f.values().end());
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = v[i];
        v[i] = x + h;
        const double lp = bce_loss(Grid<double>(f.height(), f.width(), v), g, reduction).value;
        v[i] = x - h;
        const double lm = bce_loss(Grid<double>(f.height(), f.width(), v), g, reduction).value;
        v[i] = x;
        const double fd = (lp - lm) / (2.0 * h);
        const double analytic = base.gradient.values()[i];
        worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300));
    }
    return worst;
}

} // namespace testing_support
