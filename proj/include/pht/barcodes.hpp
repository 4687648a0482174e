#pragma once

#include <vector>

#include "pht/geometry.hpp"
#include "pht/linalg.hpp"

namespace pht::bars {

// One-parameter persistence module over a finite ordered grid: a space
// dimension per grid point and a transition matrix between consecutive points.
struct GridModule {
    geom::Coords coords = geom::Coords::theta;
    std::vector<double> grid;          // sorted ascending, last value == sup X
    std::vector<int> dims;             // per grid point
    std::vector<linalg::Matrix> maps;  // maps[i] : dims[i] -> dims[i+1]
    uint32_t prime = 2;

    int size() const { return static_cast<int>(grid.size()); }
    void validate() const;  // throws on inconsistent shapes or a bad grid
};

struct Bar {
    double birth = 0.0;
    double death = 0.0;   // equals sup X when reaches_cap
    bool reaches_cap = false;
};

struct Barcode {
    geom::Coords coords = geom::Coords::theta;
    std::vector<Bar> bars;
};

// Interval decomposition. Multiplicities come from the composite-rank counts,
// so the output satisfies the defining rank condition by construction. Finite
// bars are reported half-open at grid resolution: a bar last alive at grid
// point g dies at the next grid value.
Barcode decompose(const GridModule& m);

// Bottleneck matching distance under the capped-shift convention: bars that
// reach sup X behave like essential classes. They match only among themselves
// at cost |birth - birth'| and can never be deleted; finite bars match at
// cost max(|db|,|dd|) or die alone at half their length. Returns infinity
// when the cap-bar counts differ.
double bottleneck(const Barcode& a, const Barcode& b);

// Restriction of the module (in its left-constant reading) to a finer grid.
// The finer grid must contain every original grid value.
GridModule refine_to_grid(const GridModule& m, const std::vector<double>& finer);

// Union of both grids plus midpoints of consecutive values.
std::vector<double> merged_grid(const GridModule& a, const GridModule& b);

// Interleaving distance computed as the bottleneck of the decompositions
// after refining both modules to a common grid.
double interleaving_distance(const GridModule& a, const GridModule& b);

// Change of coordinates Theta -> I: endpoints through cos, cap flag kept.
Barcode reparameterize(const Barcode& a);

// Max interleaving distance over matching direction lists.
double pht_distance(const geom::DirectionSet& dirs_a, const std::vector<GridModule>& a,
                    const geom::DirectionSet& dirs_b, const std::vector<GridModule>& b);

}  // namespace pht::bars
