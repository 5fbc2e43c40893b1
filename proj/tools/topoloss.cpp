#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topoloss/json.hpp"
#include "topoloss/topoloss.hpp"

namespace fs = std::filesystem;
using namespace topoloss;

namespace {

struct Common {
    std::string out;
    std::string format = "json";
    bool relative = false;
    std::string dims = "0,1";
    std::uint64_t seed = 0;
};

void emit(const Common& c, const std::string& text) {
    if (c.out.empty())
        std::cout << text;
    else
        detail::write_file(c.out, text);
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (format == a)
            return;
    throw ValidationError("format '" + format + "' is not supported by this subcommand");
}

MatchingMode parse_mode(const std::string& s) {
    if (s == "symmetric")
        return MatchingMode::symmetric;
    if (s == "asymmetric")
        return MatchingMode::asymmetric;
    throw ValidationError("matching mode must be symmetric or asymmetric");
}

Reduction parse_reduction(const std::string& s) {
    if (s == "mean")
        return Reduction::mean;
    if (s == "sum")
        return Reduction::sum;
    throw ValidationError("reduction must be mean or sum");
}

std::string diagram_csv(const PersistenceDiagram& d) {
    std::string out = "dim,birth,death,birth_row,birth_col,death_row,death_col\n";
    auto pix = [&](const std::optional<Pixel>& p) {
        return p ? std::to_string(p->row) + "," + std::to_string(p->col) : std::string(",");
    };
    for (int dim = 0; dim < 2; ++dim)
        for (const auto& p : d.dots(dim)) {
            out += std::to_string(dim) + ",";
            detail::append_double(out, p.birth);
            out += ",";
            detail::append_double(out, p.death);
            out += "," + pix(p.birth_pixel) + "," + pix(p.death_pixel) + "\n";
        }
    return out;
}

void add_common(CLI::App* cmd, Common& c, bool topo) {
    cmd->add_option("--out", c.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", c.format, "json|csv|pgm");
    cmd->add_option("--seed", c.seed);
    if (topo) {
        cmd->add_flag("--relative{true},!--no-relative", c.relative, "Pad a frame and use relative homology");
        cmd->add_option("--dims", c.dims, "Homology dimensions, e.g. 0,1");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistence diagrams, topological loss and repair descent on 2D likelihood maps"};
    app.require_subcommand(1);

    Common c;
    std::string input, pred, gt;
    double lambda = 1.0;
    std::string mode = "symmetric";
    std::string reduction = "mean";

    auto* diagram = app.add_subcommand("diagram", "Persistence diagram of a likelihood map");
    add_common(diagram, c, true);
    diagram->add_option("--input", input)->required();

    auto add_pair = [&](CLI::App* cmd) {
        add_common(cmd, c, true);
        cmd->add_option("--pred", pred)->required();
        cmd->add_option("--gt", gt)->required();
        cmd->add_option("--lambda", lambda);
        cmd->add_option("--mode", mode, "symmetric|asymmetric");
    };

    auto* loss = app.add_subcommand("loss", "BCE + lambda * topological loss");
    add_pair(loss);
    loss->add_option("--reduction", reduction, "BCE reduction: mean|sum");

    auto* grad = app.add_subcommand("grad", "Topological gradient (sparse JSON or dense CSV)");
    add_pair(grad);

    DescentConfig dc;
    std::string out_dir = "descent";
    std::string descent_reduction = "mean";
    auto* descend = app.add_subcommand("descend", "Gradient descent on pixel values");
    add_pair(descend);
    descend->add_option("--step", dc.step_size);
    descend->add_option("--iterations", dc.iterations);
    descend->add_option("--snapshot-every", dc.snapshot_every);
    descend->add_option("--out-dir", out_dir, "Directory for trajectory, loss curve and snapshots");
    descend->add_option("--reduction", descent_reduction, "BCE reduction: mean|sum");
    descend->add_flag("!--no-clamp", dc.clamp);

    BettiErrorConfig bc;
    bool patch_size_given = false;
    double threshold_alpha = -1.0;
    auto* metrics = app.add_subcommand("metrics", "Accuracy, ARI, VOI and Betti error of two masks");
    add_common(metrics, c, false);
    metrics->add_option("--pred", pred)->required();
    metrics->add_option("--gt", gt)->required();
    metrics->add_option("--patches", bc.patches);
    metrics->add_option("--patch-size", bc.size)->each([&](const std::string&) { patch_size_given = true; });
    metrics->add_option("--dim", bc.dimension);
    metrics->add_option("--alpha", bc.alpha, "Threshold used inside the Betti error");
    metrics->add_option("--threshold", threshold_alpha, "Threshold likelihood inputs into masks first");
    metrics->add_flag("--absolute{false}", bc.relative, "Betti numbers without the frame");

    std::vector<int> sizes{17, 33, 65, 129};
    int repeats = 3;
    auto* bench = app.add_subcommand("bench", "Time compute_diagram against patch size");
    add_common(bench, c, false);
    bench->add_option("--sizes", sizes)->delimiter(',');
    bench->add_option("--repeats", repeats);

    std::string kind;
    int size = 0;
    double gap = -1.0;
    std::string gt_out;
    auto* gen = app.add_subcommand("gen-fixture", "Write a synthetic map");
    add_common(gen, c, false);
    gen->add_option("kind", kind, "ring|broken-ring|y-branch|broken-bridge|figure-eight")
        ->required()
        ->check(CLI::IsMember({"ring", "broken-ring", "y-branch", "broken-bridge", "figure-eight"}));
    gen->add_option("--size", size);
    gen->add_option("--gap", gap, "Gap value for broken fixtures");
    gen->add_option("--gt-out", gt_out, "Ground-truth path for paired fixtures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const DimensionSet dims = DimensionSet::parse(c.dims);

        if (*diagram) {
            require_format(c.format, {"json", "csv"});
            const auto f = load_likelihood(input);
            const auto d = compute_diagram(f, c.relative);
            emit(c, c.format == "csv" ? diagram_csv(d) : to_json(d).dump(2) + "\n");
        } else if (*loss || *grad) {
            const auto f = load_likelihood(pred);
            const auto g = load_mask(gt);
            const TopoOptions opts{dims, c.relative, parse_mode(mode)};
            if (*loss) {
                require_format(c.format, {"json"});
                emit_json(c, to_json(total_loss(f, g, lambda, opts, parse_reduction(reduction))));
            } else {
                require_format(c.format, {"json", "csv"});
                const auto r = topo_grad(f, g, opts);
                if (c.format == "csv")
                    emit(c, encode_csv(r.topo_gradient.dense()));
                else
                    emit_json(c, {{"l_topo", r.l_topo}, {"gradient", to_json(r.topo_gradient)}});
            }
        } else if (*descend) {
            const auto f = load_likelihood(pred);
            const auto g = load_mask(gt);
            dc.lambda = lambda;
            dc.dims = dims;
            dc.relative = c.relative;
            dc.mode = parse_mode(mode);
            dc.bce_reduction = parse_reduction(descent_reduction);
            dc.seed = c.seed;
            dc.snapshot_dir = fs::path(out_dir) / "snapshots";
            dc.validate();
            fs::create_directories(out_dir);
            const auto result = run_descent(f, g, dc);

            detail::write_file(fs::path(out_dir) / "trajectory.json", to_json(result, dc).dump(2) + "\n");
            std::string curve = "iteration,l_bce,l_topo,l_total\n";
            for (const auto& s : result.trajectory) {
                curve += std::to_string(s.iteration);
                for (double v : {s.l_bce, s.l_topo, s.l_total}) {
                    curve += ",";
                    detail::append_double(curve, v);
                }
                curve += "\n";
            }
            detail::write_file(fs::path(out_dir) / "loss.csv", curve);
            save_map(fs::path(out_dir) / "final.csv", result.final_map);
            save_map(fs::path(out_dir) / "final_mask.pgm", threshold(result.final_map, 0.5));

            const auto b = betti_at_threshold(result.final_map, 0.5);
            const auto bg = betti_at_threshold(g.to_likelihood(), 0.5);
            emit_json(c, {{"iterations", dc.iterations},
                          {"final", {{"l_bce", result.final_report.l_bce},
                                     {"l_topo", result.final_report.l_topo},
                                     {"l_total", result.final_report.l_total}}},
                          {"betti", {b.b0, b.b1}},
                          {"gt_betti", {bg.b0, bg.b1}},
                          {"out_dir", out_dir}});
        } else if (*metrics) {
            require_format(c.format, {"json"});
            auto load = [&](const std::string& path) {
                return threshold_alpha >= 0.0 ? threshold(load_likelihood(path), threshold_alpha) : load_mask(path);
            };
            const auto p = load(pred);
            const auto g = load(gt);
            if (!patch_size_given)
                bc.size = std::min({bc.size, g.height(), g.width()});
            bc.seed = c.seed;
            emit_json(c, to_json(evaluate_segmentation(p, g, bc), bc));
        } else if (*bench) {
            require_format(c.format, {"csv", "json"});
            const auto rows = run_bench(sizes, repeats, c.seed);
            if (c.format == "json") {
                json out = json::array();
                for (const auto& r : rows)
                    out.push_back({{"size", r.size}, {"kind", r.kind}, {"mean_seconds", r.mean_seconds}, {"dots", r.dots}});
                emit_json(c, out);
            } else {
                emit(c, bench_csv(rows));
            }
        } else if (*gen) {
            require_format(c.format, {"json", "pgm", "csv"});
            if (c.out.empty())
                throw ValidationError("gen-fixture needs --out");
            auto sized = [&](int fallback) { return size > 0 ? size : fallback; };
            if (kind == "broken-ring" || kind == "broken-bridge") {
                const auto pair = kind == "broken-ring"
                                      ? fixtures::broken_ring(sized(65), gap >= 0 ? gap : 0.1)
                                      : fixtures::broken_bridge(sized(33), gap >= 0 ? gap : 0.3);
                save_map(c.out, pair.pred);
                if (!gt_out.empty())
                    save_map(gt_out, pair.truth);
            } else if (kind == "ring") {
                save_map(c.out, fixtures::ring(sized(65)));
            } else if (kind == "y-branch") {
                save_map(c.out, fixtures::y_branch(sized(65)));
            } else {
                save_map(c.out, size > 0 ? fixtures::figure_eight(size, size + size / 2) : fixtures::figure_eight());
            }
        }
    } catch (const std::invalid_argument& e) { // ValidationError and bad numeric input
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
