#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pht/barcodes.hpp"
#include "pht/geometry.hpp"
#include "pht/homology.hpp"
#include "pht/linalg.hpp"
#include "pht/spacetime.hpp"

namespace pht::kan {

enum class Flavor { left, right, center };
const char* to_string(Flavor f);
Flavor flavor_from_string(const std::string& s);

// The sampled transform as a Vect-valued diagram on the space-time category:
// a space dimension per sampled point and one linear map per generating
// morphism. Composite arrows are derived on demand; thin-commutativity makes
// any derivation path equivalent (see check_coherence).
class VectDiagram {
public:
    VectDiagram(spacetime::SampleGrid grid, int degree, uint32_t prime,
                std::vector<int> dims, std::vector<std::pair<int, int>> gens,
                std::vector<linalg::Matrix> gen_arrows);

    const spacetime::SampleGrid& grid() const { return grid_; }
    int degree() const { return degree_; }
    uint32_t prime() const { return prime_; }
    int dim(int point_id) const { return dims_[point_id]; }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<std::pair<int, int>>& generators() const { return gens_; }
    const std::vector<linalg::Matrix>& generator_arrows() const { return arrows_; }

    const linalg::Matrix* find_generator_arrow(int p, int q) const;

    // Arrow of an arbitrary morphism p -> q, composed along chain, staircase
    // and top-cycle generators.
    linalg::Matrix arrow(int p, int q) const;

    // Test hook: overwrite one generator arrow in place.
    void corrupt_generator(size_t index, const linalg::Matrix& m);

private:
    spacetime::SampleGrid grid_;
    int degree_;
    uint32_t prime_;
    std::vector<int> dims_;
    std::vector<std::pair<int, int>> gens_;
    std::vector<linalg::Matrix> arrows_;
    std::unordered_map<int64_t, int> arrow_index_;
};

// Samples homology of the sublevel sets at every grid point and the induced
// maps along every generating morphism.
VectDiagram sample_pht(const geom::EmbeddedComplex& k, const spacetime::SampleGrid& g,
                       int degree, const linalg::Field& field, int workers = 1);

// Value of one Kan extension at one query point, with enough of the
// presentation to factor maps through it.
struct KanValue {
    Flavor flavor = Flavor::left;
    spacetime::SpaceTimePoint query;
    int dim = 0;

    // Anchor points: chain maxima of the past cone (left) or strict chain
    // minima of the future cone (right); block offsets into presentation
    // coordinates.
    std::vector<int> anchor_points;
    std::vector<int> anchor_offsets;  // size anchors+1
    // left: cokernel projection (dim x total anchor dim);
    // right: kernel basis (total anchor dim x dim);
    // center: image basis inside the right-side limit (lim dim x dim).
    linalg::Matrix presentation;
    // center only: the canonical map colim -> lim in their bases.
    linalg::Matrix factor;
    int left_dim = 0, right_dim = 0;  // center only
};

// Colimit of the diagram over a past light cone, computed after eliminating
// the chain summands: relations live on the chain maxima only. Dimension
// equals dim(+)spaces - rank of the standard difference map on the full cone.
KanValue colimit(const spacetime::LightCone& c, const VectDiagram& d);

// Limit of the diagram over the strict part of a future light cone (the
// members and arrows given by the metric inequality; formal top morphisms
// stay out of the limit diagram). Tuples are coordinatized on chain minima.
KanValue limit(const spacetime::LightCone& c, const VectDiagram& d);

// Image of the canonical map from the colimit over the past cone to the limit
// over the future cone.
KanValue center(const spacetime::SpaceTimePoint& q, const VectDiagram& d);

// The extended persistence module in direction w sampled on a query grid,
// with the internal maps induced by nested light cones.
bars::GridModule extend_module(const geom::Direction& w, const std::vector<double>& query_grid,
                               const VectDiagram& d, Flavor flavor);

// Default query grid: the sample grid refined by midpoints of consecutive
// values.
std::vector<double> default_query_grid(const spacetime::SampleGrid& g);

struct CoherenceReport {
    struct Violation {
        int via = 0;            // intermediate point id
        int src = 0, dst = 0;   // endpoints of the ambiguous composite
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Thin-commutativity of the diagram: all two-step composites between the same
// endpoints (and any direct generator) must agree.
CoherenceReport check_coherence(const VectDiagram& d);

}  // namespace pht::kan
