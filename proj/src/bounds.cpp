#include "pht/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pht/homology.hpp"
#include "pht/parallel.hpp"

namespace pht::bounds {

using geom::Direction;
using geom::EmbeddedComplex;
using kan::VectDiagram;
using linalg::Field;

BoundReport make_report(std::string name, double measured, double bound, double tolerance,
                        std::string context) {
    BoundReport r;
    r.name = std::move(name);
    r.measured = measured;
    r.bound = bound;
    r.tolerance = tolerance;
    r.slack = bound - measured;
    r.pass = r.slack >= -tolerance;
    r.context = std::move(context);
    return r;
}

namespace {

double query_grid_step(const std::vector<double>& grid) {
    double s = 0.0;
    for (size_t i = 1; i < grid.size(); ++i) s = std::max(s, grid[i] - grid[i - 1]);
    return s;
}

double nearest_sample_distance(const VectDiagram& d, const Direction& w) {
    double best = std::numeric_limits<double>::infinity();
    for (const Direction& v : d.grid().directions.directions())
        best = std::min(best, geom::sphere_distance(v, w, d.grid().metric()));
    return best;
}

}  // namespace

double measured_direction_error(const EmbeddedComplex& k, const VectDiagram& d,
                                const Direction& w, const std::vector<double>& query_grid,
                                kan::Flavor flavor, const Field& field) {
    bars::GridModule truth =
        homology::direction_diagram(k, w, d.degree(), query_grid, d.grid().coords, field);
    bars::GridModule extended = kan::extend_module(w, query_grid, d, flavor);
    return bars::interleaving_distance(truth, extended);
}

BoundReport check_directionwise(const EmbeddedComplex& k, const VectDiagram& d,
                                const Direction& w, const Field& field, kan::Flavor flavor,
                                double extra_tolerance) {
    auto query = kan::default_query_grid(d.grid());
    double measured = measured_direction_error(k, d, w, query, flavor, field);
    double bound = 2.0 * nearest_sample_distance(d, w);
    std::ostringstream ctx;
    ctx << "w=(" << w.x() << "," << w.y() << ") flavor=" << kan::to_string(flavor)
        << " shape=" << k.label();
    return make_report("directionwise", measured, bound,
                       query_grid_step(query) + extra_tolerance, ctx.str());
}

BoundReport check_global(const EmbeddedComplex& k, const VectDiagram& d,
                         const geom::DirectionSet& test_directions, const Field& field,
                         kan::Flavor flavor, double extra_tolerance, int workers) {
    auto query = kan::default_query_grid(d.grid());
    std::vector<double> errs(test_directions.size(), 0.0);
    parallel_for(test_directions.size(), workers, [&](int i) {
        errs[i] = measured_direction_error(k, d, test_directions[i], query, flavor, field);
    });
    double measured = *std::max_element(errs.begin(), errs.end());
    double bound = 2.0 * geom::hausdorff_to_sphere(d.grid().directions).value;
    std::ostringstream ctx;
    ctx << "net=" << d.grid().dir_count() << " test_dirs=" << test_directions.size()
        << " shape=" << k.label();
    return make_report("global", measured, bound, query_grid_step(query) + extra_tolerance,
                       ctx.str());
}

BoundReport check_discrete(const EmbeddedComplex& k, const VectDiagram& d,
                           const geom::DirectionSet& test_directions, const Field& field,
                           kan::Flavor flavor, double extra_tolerance, int workers) {
    auto query = kan::default_query_grid(d.grid());
    std::vector<double> errs(test_directions.size(), 0.0);
    parallel_for(test_directions.size(), workers, [&](int i) {
        errs[i] = measured_direction_error(k, d, test_directions[i], query, flavor, field);
    });
    double measured = *std::max_element(errs.begin(), errs.end());
    double eps_a = d.grid().epsilon_directions();
    double eps_t = d.grid().epsilon_params();
    double bound = 2.0 * eps_a + eps_t;
    std::ostringstream ctx;
    ctx << "net=" << d.grid().dir_count() << " eps_A=" << eps_a << " eps_T=" << eps_t
        << " shape=" << k.label();
    return make_report("discrete", measured, bound, query_grid_step(query) + extra_tolerance,
                       ctx.str());
}

BoundReport check_reparam(const EmbeddedComplex& k, const VectDiagram& d, const Direction& w,
                          const Field& field, double extra_tolerance) {
    if (d.grid().coords != geom::Coords::theta)
        throw std::invalid_argument("reparameterized bound needs angular coordinates");
    auto query = kan::default_query_grid(d.grid());
    bars::GridModule truth =
        homology::direction_diagram(k, w, d.degree(), query, geom::Coords::theta, field);
    bars::GridModule extended = kan::extend_module(w, query, d, kan::Flavor::left);
    bars::Barcode truth_i = bars::reparameterize(bars::decompose(truth));
    bars::Barcode ext_i = bars::reparameterize(bars::decompose(extended));
    double measured = bars::bottleneck(truth_i, ext_i);

    double nearest = nearest_sample_distance(d, w);
    double bound = 2.0 * std::sin(nearest);
    // The angular route is never worse than the Euclidean-coordinate bound.
    double euclidean_bound = 2.0 * 2.0 * std::sin(nearest / 2.0);
    std::ostringstream ctx;
    ctx << "w=(" << w.x() << "," << w.y() << ") euclidean_bound=" << euclidean_bound
        << " shape=" << k.label();
    BoundReport r = make_report("reparam", measured, bound,
                                query_grid_step(query) + extra_tolerance, ctx.str());
    if (bound > euclidean_bound + geom::kEps) r.pass = false;
    return r;
}

BoundReport check_lipschitz(const EmbeddedComplex& k, const VectDiagram& d, const Field& field) {
    auto query = kan::default_query_grid(d.grid());
    double step = query_grid_step(query);
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_measure = 0.0, worst_bound = 0.0;
    const auto& dirs = d.grid().directions;
    std::vector<bars::GridModule> modules;
    for (int i = 0; i < dirs.size(); ++i)
        modules.push_back(
            homology::direction_diagram(k, dirs[i], d.degree(), query, d.grid().coords, field));
    for (int i = 0; i < dirs.size(); ++i) {
        for (int j = i + 1; j < dirs.size(); ++j) {
            double dist = geom::sphere_distance(dirs[i], dirs[j], d.grid().metric());
            double err = bars::interleaving_distance(modules[i], modules[j]);
            if (err - dist > worst_excess) {
                worst_excess = err - dist;
                worst_measure = err;
                worst_bound = dist;
            }
        }
    }
    std::ostringstream ctx;
    ctx << "pairs=" << dirs.size() * (dirs.size() - 1) / 2 << " shape=" << k.label();
    return make_report("lipschitz", worst_measure, worst_bound, step, ctx.str());
}

std::vector<BoundReport> run_random_trials(const TrialConfig& cfg, const Field& field) {
    std::vector<double> steps = cfg.grid_steps;
    if (steps.empty()) {
        double span = geom::param_sup(cfg.coords) - geom::param_inf(cfg.coords);
        steps = {span / 6.0, span / 12.0, span / 24.0};
    }
    std::vector<BoundReport> reports(cfg.trials);
    std::mt19937_64 seeder(cfg.seed);
    std::vector<uint64_t> trial_seeds(cfg.trials);
    for (auto& s : trial_seeds) s = seeder();

    parallel_for(cfg.trials, cfg.workers, [&](int t) {
        std::mt19937_64 rng(trial_seeds[t]);
        std::uniform_int_distribution<int> net_size(cfg.min_net, cfg.max_net);
        std::uniform_int_distribution<int> poly_size(cfg.min_polygon, cfg.max_polygon);
        std::uniform_int_distribution<size_t> step_pick(0, steps.size() - 1);
        std::uniform_int_distribution<int> shape_pick(0, 1);

        EmbeddedComplex shape = shape_pick(rng) == 0
                                    ? geom::random_convex_polygon_mesh(rng, poly_size(rng))
                                    : geom::random_star_polygon_mesh(rng, poly_size(rng));
        int n = net_size(rng);
        double step = steps[step_pick(rng)];

        geom::DirectionSet net = geom::generate_net(n, 2, geom::metric_for(cfg.coords));
        std::vector<double> params;
        double lo = geom::param_inf(cfg.coords), hi = geom::param_sup(cfg.coords);
        for (double x = lo; x < hi + geom::kEps; x += step) params.push_back(x);
        spacetime::SampleGrid grid(net, params, cfg.coords);

        VectDiagram diagram = kan::sample_pht(shape, grid, cfg.degree, field, 1);
        geom::DirectionSet test =
            geom::offset_test_directions(cfg.test_directions, geom::metric_for(cfg.coords));
        BoundReport r = check_discrete(shape, diagram, test, field, kan::Flavor::left, 0.0, 1);
        std::ostringstream ctx;
        ctx << "trial=" << t << " " << r.context << " grid_step=" << step
            << " degree=" << cfg.degree;
        r.context = ctx.str();
        reports[t] = std::move(r);
    });
    return reports;
}

}  // namespace pht::bounds
