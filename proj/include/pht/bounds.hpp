#pragma once

#include <string>
#include <vector>

#include "pht/barcodes.hpp"
#include "pht/geometry.hpp"
#include "pht/kan.hpp"
#include "pht/spacetime.hpp"

namespace pht::bounds {

struct BoundReport {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    double slack = 0.0;      // bound - measured
    double tolerance = 0.0;
    bool pass = false;       // measured <= bound + tolerance
    std::string context;
};

BoundReport make_report(std::string name, double measured, double bound, double tolerance,
                        std::string context);

// Interleaving between the true direction module and the Kan-extended module
// at one direction, on a shared query grid.
double measured_direction_error(const geom::EmbeddedComplex& k, const kan::VectDiagram& d,
                                const geom::Direction& w, const std::vector<double>& query_grid,
                                kan::Flavor flavor, const linalg::Field& field);

// Direction-wise bound: error at w <= 2 * distance(w, nearest sample).
BoundReport check_directionwise(const geom::EmbeddedComplex& k, const kan::VectDiagram& d,
                                const geom::Direction& w, const linalg::Field& field,
                                kan::Flavor flavor = kan::Flavor::left,
                                double extra_tolerance = 0.0);

// Global bound: max error over test directions <= 2 * covering radius of A.
BoundReport check_global(const geom::EmbeddedComplex& k, const kan::VectDiagram& d,
                         const geom::DirectionSet& test_directions, const linalg::Field& field,
                         kan::Flavor flavor = kan::Flavor::left, double extra_tolerance = 0.0,
                         int workers = 1);

// Fully discrete bound: max error <= 2 eps_A + eps_T.
BoundReport check_discrete(const geom::EmbeddedComplex& k, const kan::VectDiagram& d,
                           const geom::DirectionSet& test_directions, const linalg::Field& field,
                           kan::Flavor flavor = kan::Flavor::left, double extra_tolerance = 0.0,
                           int workers = 1);

// Reparameterized bound: the I-coordinate error after the angular extension
// is pulled through cos is at most 2 sin(d_g(v, w)), which never exceeds the
// Euclidean-coordinate bound.
BoundReport check_reparam(const geom::EmbeddedComplex& k, const kan::VectDiagram& d,
                          const geom::Direction& w, const linalg::Field& field,
                          double extra_tolerance = 0.0);

// Sampled directions are 1-Lipschitz: interleaving of two sampled direction
// modules is at most their sphere distance (plus grid resolution).
BoundReport check_lipschitz(const geom::EmbeddedComplex& k, const kan::VectDiagram& d,
                            const linalg::Field& field);

struct TrialConfig {
    int trials = 100;
    uint64_t seed = 7;
    geom::Coords coords = geom::Coords::theta;
    int degree = 0;
    int min_net = 3, max_net = 12;
    std::vector<double> grid_steps;  // sample-grid steps to draw from
    int test_directions = 60;
    int min_polygon = 5, max_polygon = 16;
    int workers = 1;
};

// Random-shape trials of the fully discrete bound; one report per trial.
std::vector<BoundReport> run_random_trials(const TrialConfig& cfg, const linalg::Field& field);

}  // namespace pht::bounds
