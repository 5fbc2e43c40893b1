#pragma once

// Wall-clock timing of compute_diagram against patch size.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "topoloss/error.hpp"
#include "topoloss/fixtures.hpp"
#include "topoloss/io.hpp"
#include "topoloss/persistence.hpp"

namespace topoloss {

struct BenchRow {
    int size = 0;
    std::string kind; // "random" or "ring-grid"
    double mean_seconds = 0.0;
    std::size_t dots = 0;
};

inline std::vector<BenchRow> run_bench(const std::vector<int>& sizes, int repeats, std::uint64_t seed) {
    if (repeats < 1)
        throw ValidationError("bench repeats must be at least 1");
    for (int s : sizes)
        if (s < 3)
            throw ValidationError("bench sizes must be at least 3");

    using clock = std::chrono::steady_clock;
    std::vector<BenchRow> rows;
    for (int s : sizes) {
        const LikelihoodMap inputs[] = {fixtures::random_map(s, s, seed + static_cast<std::uint64_t>(s)),
                                        fixtures::ring_grid(s)};
        const char* kinds[] = {"random", "ring-grid"};
        for (int k = 0; k < 2; ++k) {
            std::size_t dots = 0;
            const auto start = clock::now();
            for (int r = 0; r < repeats; ++r)
                dots = compute_diagram(inputs[k]).size();
            const std::chrono::duration<double> elapsed = clock::now() - start;
            rows.push_back({s, kinds[k], elapsed.count() / repeats, dots});
        }
    }
    return rows;
}

/// Mean time per size over all input kinds.
inline double bench_mean_time(const std::vector<BenchRow>& rows, int size) {
    double total = 0.0;
    int n = 0;
    for (const auto& r : rows)
        if (r.size == size) {
            total += r.mean_seconds;
            ++n;
        }
    return n ? total / n : 0.0;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "size,kind,mean_seconds,dots\n";
    for (const auto& r : rows) {
        out += std::to_string(r.size) + "," + r.kind + ",";
        detail::append_double(out, r.mean_seconds);
        out += "," + std::to_string(r.dots) + "\n";
    }
    return out;
}

} // namespace topoloss
