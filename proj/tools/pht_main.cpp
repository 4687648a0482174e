#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pht/bounds.hpp"
#include "pht/io.hpp"
#include "pht/kan.hpp"
#include "pht/parallel.hpp"

namespace fs = std::filesystem;
using namespace pht;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCorrupt = 3;

constexpr double kPi = 3.14159265358979323846;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

// Grid spec: plain integer = that many uniform values across X (sup included),
// comma list = explicit values.
std::vector<double> parse_grid_spec(const std::string& spec, geom::Coords c) {
    double lo = geom::param_inf(c), hi = geom::param_sup(c);
    if (spec.find(',') == std::string::npos && spec.find('.') == std::string::npos) {
        int n = std::stoi(spec);
        if (n < 1) throw std::invalid_argument("grid count must be positive");
        std::vector<double> g;
        if (n == 1) return {hi};
        for (int k = 0; k < n; ++k) g.push_back(lo + (hi - lo) * k / (n - 1));
        return g;
    }
    return parse_double_list(spec);
}

geom::DirectionSet parse_direction_spec(const std::string& spec, geom::SphereMetric m) {
    if (spec.find(',') == std::string::npos && spec.find('.') == std::string::npos)
        return geom::generate_net(std::stoi(spec), 2, m);
    std::vector<geom::Direction> dirs;
    for (double a : parse_double_list(spec)) dirs.push_back(geom::Direction::from_angle(a));
    return geom::DirectionSet(dirs, m);
}

geom::Direction parse_query(const std::string& spec) {
    auto vals = parse_double_list(spec);
    if (vals.size() == 1) return geom::Direction::from_angle(vals[0]);
    double norm = 0.0;
    for (double v : vals) norm += v * v;
    norm = std::sqrt(norm);
    if (std::abs(norm - 1.0) > 1e-12)
        std::cerr << "warning: query direction normalized (|v| = " << norm << ")\n";
    if (vals.size() == 2) return geom::Direction(vals[0], vals[1]);
    if (vals.size() == 3) return geom::Direction(vals[0], vals[1], vals[2]);
    throw std::invalid_argument("query must be an angle or 2-3 coordinates");
}

struct CommonOptions {
    std::string coords = "theta";
    std::string metric;  // optional; must match coords when given
    uint32_t field = 2;
    uint64_t seed = 0;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--coords", o.coords, "coordinate system: theta or euclidean");
    cmd->add_option("--metric", o.metric, "sphere metric: geodesic or euclidean");
    cmd->add_option("--field", o.field, "field characteristic (prime)");
    cmd->add_option("--seed", o.seed, "seed recorded in outputs and used for trials");
    cmd->add_option("--workers", o.workers, "worker thread count");
    cmd->set_config("--config");
}

geom::Coords resolve_coords(const CommonOptions& o) {
    geom::Coords c = geom::coords_from_string(o.coords);
    if (!o.metric.empty()) {
        geom::SphereMetric want = geom::metric_for(c);
        if (o.metric != geom::to_string(want))
            throw std::invalid_argument(std::string("coordinate system '") + o.coords +
                                        "' pairs with the " + geom::to_string(want) + " metric");
    }
    return c;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

int run_sample(const std::string& mesh_path, const CommonOptions& common,
               const std::string& directions, const std::string& grid_spec,
               const std::vector<int>& degrees, const std::string& out_dir) {
    geom::Coords coords = resolve_coords(common);
    linalg::Field field(common.field);
    geom::EmbeddedComplex mesh = geom::rescale_to_unit_disk(io::load_mesh(mesh_path));
    geom::DirectionSet net = parse_direction_spec(directions, geom::metric_for(coords));
    spacetime::SampleGrid grid(net, parse_grid_spec(grid_spec, coords), coords);

    fs::create_directories(out_dir);
    for (int degree : degrees) {
        kan::VectDiagram d = kan::sample_pht(mesh, grid, degree, field, common.workers);
        auto report = kan::check_coherence(d);
        if (!report.ok()) {
            std::cerr << "sampled diagram is incoherent (" << report.violations.size()
                      << " triangle violations)\n";
            return kExitCheckFailed;
        }
        fs::path manifest = fs::path(out_dir) / ("diagram_h" + std::to_string(degree) + ".json");
        io::save_diagram(manifest, d, common.seed, mesh_path);
        std::cout << "wrote " << manifest.string() << " (" << grid.dir_count() << " directions x "
                  << grid.param_count() << " parameters, degree " << degree << ")\n";
    }
    return kExitOk;
}

int run_extend(const std::string& manifest, const std::vector<std::string>& query_specs,
               const std::vector<std::string>& flavors, const std::string& query_grid_spec,
               const CommonOptions& common, const std::string& out_dir) {
    kan::VectDiagram d = io::load_diagram(manifest);
    std::vector<geom::Direction> queries;
    for (const auto& spec : query_specs) queries.push_back(parse_query(spec));
    std::vector<double> query_grid = query_grid_spec.empty()
                                         ? kan::default_query_grid(d.grid())
                                         : parse_grid_spec(query_grid_spec, d.grid().coords);
    fs::create_directories(out_dir);
    for (const auto& name : flavors) {
        if (name.empty() || name == "none") continue;  // explicit no-op
        kan::Flavor flavor = kan::flavor_from_string(name);
        std::vector<std::pair<double, bars::Barcode>> per_direction;
        for (size_t qi = 0; qi < queries.size(); ++qi) {
            bars::GridModule module = kan::extend_module(queries[qi], query_grid, d, flavor);
            bars::Barcode code = bars::decompose(module);
            std::string stem = "barcode_" + name + "_h" + std::to_string(d.degree());
            if (queries.size() > 1) stem += "_q" + std::to_string(qi);
            io::save_barcode_json(fs::path(out_dir) / (stem + ".json"), code, common.seed);
            io::save_barcode_csv(fs::path(out_dir) / (stem + ".csv"), code, common.seed);
            std::cout << stem << ": " << code.bars.size() << " bars\n";
            per_direction.emplace_back(queries[qi].angle(), std::move(code));
        }
        io::save_plot_csv(fs::path(out_dir) /
                              ("plot_" + name + "_h" + std::to_string(d.degree()) + ".csv"),
                          per_direction, common.seed);
    }
    return kExitOk;
}

int run_distance(const std::string& a_path, const std::string& b_path) {
    bars::Barcode a = io::load_barcode_json(a_path);
    bars::Barcode b = io::load_barcode_json(b_path);
    if (a.coords != b.coords) {
        std::cerr << "barcodes use different coordinate systems\n";
        return kExitUsage;
    }
    double d = bars::bottleneck(a, b);
    if (std::isinf(d))
        std::cout << "inf\n";
    else
        std::cout << format_double(d) << "\n";
    return kExitOk;
}

int run_net(int count, int dim, const CommonOptions& common, const std::string& out_dir) {
    geom::Coords coords = resolve_coords(common);
    geom::DirectionSet net = geom::generate_net(count, dim, geom::metric_for(coords));
    geom::HausdorffResult h = geom::hausdorff_to_sphere(net);
    std::ostringstream out;
    out.precision(17);
    for (const auto& v : net.directions()) {
        out << v.x() << " " << v.y();
        if (dim == 3) out << " " << v.z();
        out << "\n";
    }
    std::cout << out.str();
    std::cout << "covering_radius " << format_double(h.value) << " ("
              << (h.exact ? "exact" : "sampled, n=" + std::to_string(h.sample_count)) << ")\n";
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        io::atomic_write(fs::path(out_dir) / "net.txt", out.str());
    }
    return kExitOk;
}

int run_verify(const std::string& mesh_path, const CommonOptions& common,
               const std::string& directions, const std::string& grid_spec,
               const std::vector<int>& degrees, const std::vector<std::string>& checks,
               const std::string& query_spec, int test_direction_count, int trials,
               const std::string& out_dir, int corrupt_arrow) {
    geom::Coords coords = resolve_coords(common);
    linalg::Field field(common.field);
    geom::EmbeddedComplex mesh = geom::rescale_to_unit_disk(io::load_mesh(mesh_path));
    geom::DirectionSet net = parse_direction_spec(directions, geom::metric_for(coords));
    spacetime::SampleGrid grid(net, parse_grid_spec(grid_spec, coords), coords);
    geom::Direction w = query_spec.empty() ? geom::Direction::from_angle(kPi / 2.0)
                                           : parse_query(query_spec);

    std::vector<bounds::BoundReport> reports;
    bool all_ok = true;
    auto wants = [&](const std::string& name) {
        return checks.empty() || std::find(checks.begin(), checks.end(), name) != checks.end();
    };

    for (int degree : degrees) {
        kan::VectDiagram d = kan::sample_pht(mesh, grid, degree, field, common.workers);
        if (corrupt_arrow >= 0 &&
            corrupt_arrow < static_cast<int>(d.generator_arrows().size())) {
            const auto& current = d.generator_arrows()[corrupt_arrow];
            linalg::Matrix scrambled(current.rows(), current.cols(), current.prime());
            // Flip the top-left entry; enough to break a triangle.
            if (current.rows() > 0 && current.cols() > 0)
                scrambled.set(0, 0, current.at(0, 0) == 0 ? 1 : 0);
            d.corrupt_generator(static_cast<size_t>(corrupt_arrow), scrambled);
        }

        if (wants("coherence")) {
            auto rep = kan::check_coherence(d);
            bounds::BoundReport r = bounds::make_report(
                "coherence", static_cast<double>(rep.violations.size()), 0.0, 0.0,
                "degree=" + std::to_string(degree));
            reports.push_back(r);
            all_ok = all_ok && r.pass;
        }
        if (wants("directionwise")) {
            reports.push_back(bounds::check_directionwise(mesh, d, w, field));
            all_ok = all_ok && reports.back().pass;
        }
        if (wants("global") || wants("discrete")) {
            geom::DirectionSet test =
                geom::offset_test_directions(test_direction_count, geom::metric_for(coords));
            if (wants("global")) {
                reports.push_back(bounds::check_global(mesh, d, test, field, kan::Flavor::left,
                                                       0.0, common.workers));
                all_ok = all_ok && reports.back().pass;
            }
            if (wants("discrete")) {
                reports.push_back(bounds::check_discrete(mesh, d, test, field, kan::Flavor::left,
                                                         0.0, common.workers));
                all_ok = all_ok && reports.back().pass;
            }
        }
        if (wants("reparam") && coords == geom::Coords::theta) {
            reports.push_back(bounds::check_reparam(mesh, d, w, field));
            all_ok = all_ok && reports.back().pass;
        }
        if (wants("lipschitz")) {
            reports.push_back(bounds::check_lipschitz(mesh, d, field));
            all_ok = all_ok && reports.back().pass;
        }
    }
    if (wants("trials") && trials > 0) {
        bounds::TrialConfig cfg;
        cfg.trials = trials;
        cfg.seed = common.seed;
        cfg.coords = coords;
        cfg.workers = common.workers;
        auto trial_reports = bounds::run_random_trials(cfg, field);
        for (auto& r : trial_reports) {
            all_ok = all_ok && r.pass;
            reports.push_back(std::move(r));
        }
    }

    for (const auto& r : reports) {
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.name
                  << " measured=" << format_double(r.measured)
                  << " bound=" << format_double(r.bound) << " slack=" << format_double(r.slack)
                  << " (" << r.context << ")\n";
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        io::save_reports_json(fs::path(out_dir) / "reports.json", reports, common.seed);
        io::save_reports_csv(fs::path(out_dir) / "reports.csv", reports, common.seed);
    }
    return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistent homology transform sampling, Kan extension and verification"};
    app.require_subcommand(1);

    CommonOptions common;

    // sample
    auto* sample = app.add_subcommand("sample", "sample the transform of a mesh on a grid");
    std::string mesh_path, directions = "6", grid_spec = "7", out_dir = "out";
    std::vector<int> degrees = {0};
    sample->add_option("--mesh", mesh_path, "mesh file (.json or .off)")->required();
    sample->add_option("--directions", directions, "direction count or angle list");
    sample->add_option("--grid", grid_spec, "filtration grid: count or value list");
    sample->add_option("--degree", degrees, "homology degrees");
    sample->add_option("--out", out_dir, "output directory");
    add_common(sample, common);

    // extend
    auto* extend = app.add_subcommand("extend", "Kan-extend a sampled diagram at directions");
    std::string manifest, query_grid_spec;
    std::vector<std::string> query_specs = {"1.5707963267948966"};
    std::vector<std::string> flavors = {"left", "right", "center"};
    extend->add_option("--diagram", manifest, "diagram manifest path")->required();
    extend->add_option("--query", query_specs, "query directions: angles or coordinates");
    extend->add_option("--flavor", flavors, "extension flavors (left/right/center/none)");
    extend->add_option("--query-grid", query_grid_spec, "query grid: count or value list");
    extend->add_option("--out", out_dir, "output directory");
    add_common(extend, common);

    // distance
    auto* distance = app.add_subcommand("distance", "bottleneck distance of two barcode files");
    std::string bar_a, bar_b;
    distance->add_option("a", bar_a, "first barcode JSON")->required();
    distance->add_option("b", bar_b, "second barcode JSON")->required();

    // net
    auto* net_cmd = app.add_subcommand("net", "generate a deterministic direction net");
    int net_count = 6, net_dim = 2;
    net_cmd->add_option("--count", net_count, "direction count");
    net_cmd->add_option("--dim", net_dim, "ambient dimension (2 or 3)");
    net_cmd->add_option("--out", out_dir, "output directory");
    add_common(net_cmd, common);

    // verify
    auto* verify = app.add_subcommand("verify", "run the quantitative bound checks");
    std::vector<std::string> checks;
    std::string verify_query;
    int test_direction_count = 360, trials = 0, corrupt_arrow = -1;
    verify->add_option("--mesh", mesh_path, "mesh file (.json or .off)")->required();
    verify->add_option("--directions", directions, "direction count or angle list");
    verify->add_option("--grid", grid_spec, "filtration grid: count or value list");
    verify->add_option("--degree", degrees, "homology degrees");
    verify->add_option("--checks", checks,
                       "subset of coherence,directionwise,global,discrete,reparam,lipschitz,trials");
    verify->add_option("--query", verify_query, "query direction for direction-wise checks");
    verify->add_option("--test-directions", test_direction_count, "test direction count");
    verify->add_option("--trials", trials, "random-shape trial count");
    verify->add_option("--out", out_dir, "output directory for reports");
    verify->add_option("--corrupt-arrow", corrupt_arrow, "test hook: scramble one arrow")
        ->group("");  // hidden
    add_common(verify, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sample->parsed())
            return run_sample(mesh_path, common, directions, grid_spec, degrees, out_dir);
        if (extend->parsed())
            return run_extend(manifest, query_specs, flavors, query_grid_spec, common, out_dir);
        if (distance->parsed()) return run_distance(bar_a, bar_b);
        if (net_cmd->parsed()) return run_net(net_count, net_dim, common, out_dir);
        if (verify->parsed())
            return run_verify(mesh_path, common, directions, grid_spec, degrees, checks,
                              verify_query, test_direction_count, trials, out_dir, corrupt_arrow);
    } catch (const io::CorruptData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCorrupt;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
