// Command-line surface for building, querying, verifying, and plotting
// truth-invariant open NuCAD trees.
//
// Exit codes: 0 success, 2 input/parse error, 3 cell safety cap exceeded,
// 4 query point on a cell boundary, 1 verification violations.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nucad/nucad.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

std::vector<nucad::Rational> parse_point(const std::string& text, int n) {
    std::vector<nucad::Rational> pt;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) pt.push_back(nucad::parse_rational(item));
    if (static_cast<int>(pt.size()) != n)
        throw std::invalid_argument("point has " + std::to_string(pt.size()) + " coordinates, tree has " +
                                    std::to_string(n));
    return pt;
}

nucad::NuCADTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return nucad::read_tree(in);
}

int cmd_build(const std::string& formula_path, const std::string& out_path,
              const std::string& policy, int workers, size_t max_cells) {
    nucad::Formula f;
    try {
        f = nucad::parse_formula(read_file(formula_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    nucad::SplitPolicy sp;
    sp.q_policy = policy == "full" ? nucad::QPolicy::Full : nucad::QPolicy::Greedy;
    sp.workers = workers;
    sp.max_cells = max_cells;
    nucad::NuCADTree tree;
    try {
        tree = nucad::build_tree(f, sp);
    } catch (const nucad::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    nucad::TreeStats s = nucad::stats(tree);
    std::cout << "leaves: " << s.leaves << "\n";
    std::cout << "cells: " << s.cells << "\n";
    std::cout << "factors: " << s.distinct_factors << "\n";
    if (!out_path.empty()) write_file(out_path, nucad::write_tree_text(tree));
    return 0;
}

int cmd_query(const std::string& tree_path, const std::string& point_text) {
    nucad::NuCADTree tree = load_tree(tree_path);
    std::vector<nucad::Rational> pt;
    try {
        pt = parse_point(point_text, tree.n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    nucad::LocateResult r = nucad::locate(tree, pt);
    if (r.boundary) {
        std::cout << "boundary: point lies on a cell section\n";
        return 4;
    }
    std::cout << (r.label.empty() ? "@" : r.label) << " " << (r.truth ? "true" : "false") << "\n";
    return 0;
}

int cmd_verify(const std::string& tree_path, size_t samples, uint64_t seed) {
    nucad::NuCADTree tree = load_tree(tree_path);
    bool ok = true;
    for (const auto& rep : {nucad::verify_truth_invariance(tree, tree.formula, samples, seed),
                            nucad::verify_weak_decomposition(tree, samples, seed),
                            nucad::verify_bpolys_in_closure(tree, tree.formula)}) {
        std::cout << rep.to_text();
        ok = ok && rep.pass();
    }
    return ok ? 0 : 1;
}

int cmd_stats(const std::string& tree_path) {
    nucad::NuCADTree tree = load_tree(tree_path);
    nucad::TreeStats s = nucad::stats(tree);
    std::cout << "cells: " << s.cells << ", leaves: " << s.leaves << ", factors: " << s.distinct_factors
              << "\n";
    std::cout << "x-cells: " << s.x_cells << ", depth: " << s.max_depth << "\n";
    return 0;
}

int cmd_plot(const std::string& tree_path, const std::string& out_path, int grid,
             const std::string& window_text) {
    nucad::NuCADTree tree = load_tree(tree_path);
    if (tree.n != 2) {
        std::cerr << "error: plot requires a two-variable tree\n";
        return 2;
    }
    nucad::PlotWindow w;
    if (!window_text.empty()) {
        std::stringstream ss(window_text);
        std::string item;
        std::vector<nucad::Rational> vals;
        while (std::getline(ss, item, ',')) vals.push_back(nucad::parse_rational(item));
        if (vals.size() != 4) throw std::invalid_argument("window must be x0,x1,y0,y1");
        w = nucad::PlotWindow{vals[0], vals[1], vals[2], vals[3]};
    }
    write_file(out_path, nucad::render_svg(tree, w, grid));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truth-invariant open NuCAD construction and queries"};
    app.require_subcommand(1);

    std::string formula_path, tree_path, out_path, point_text, window_text = "-2,2,-2,2";
    std::string policy = "greedy";
    int workers = 1, grid = 400;
    size_t samples = 10000, max_cells = 100000;
    uint64_t seed = 0;

    auto* build = app.add_subcommand("build", "build a tree from a formula file");
    build->add_option("formula", formula_path, "formula file")->required();
    build->add_option("-o,--out", out_path, "output tree file");
    build->add_option("--policy", policy, "merge-set choice policy")
        ->check(CLI::IsMember({"greedy", "full"}));
    build->add_option("--workers", workers, "worker thread count");
    build->add_option("--max-cells", max_cells, "cell safety cap");
    build->add_option("--seed", seed, "(accepted for interface symmetry; build is deterministic)");

    auto* query = app.add_subcommand("query", "locate a point in a tree");
    query->add_option("tree", tree_path, "tree file")->required();
    query->add_option("-p,--point", point_text, "comma-separated rational coordinates")->required();

    auto* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("tree", tree_path, "tree file")->required();
    verify->add_option("--samples", samples, "sample count per suite");
    verify->add_option("--seed", seed, "sampling seed");

    auto* stats_cmd = app.add_subcommand("stats", "print tree statistics");
    stats_cmd->add_option("tree", tree_path, "tree file")->required();

    auto* plot = app.add_subcommand("plot", "render a 2D tree to SVG by grid point location");
    plot->add_option("tree", tree_path, "tree file")->required();
    plot->add_option("-o,--out", out_path, "output SVG file")->required();
    plot->add_option("--grid", grid, "grid resolution");
    plot->add_option("--window", window_text, "plot window x0,x1,y0,y1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build->parsed()) return cmd_build(formula_path, out_path, policy, workers, max_cells);
        if (query->parsed()) return cmd_query(tree_path, point_text);
        if (verify->parsed()) return cmd_verify(tree_path, samples, seed);
        if (stats_cmd->parsed()) return cmd_stats(tree_path);
        if (plot->parsed()) return cmd_plot(tree_path, out_path, grid, window_text);
    } catch (const nucad::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nucad::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
