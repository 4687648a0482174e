#pragma once

#include <vector>

#include "pht/barcodes.hpp"
#include "pht/geometry.hpp"
#include "pht/linalg.hpp"

namespace pht::homology {

// A face-closed selection of simplices of a parent complex.
class Subcomplex {
public:
    Subcomplex(const geom::EmbeddedComplex& parent, std::vector<char> included);

    // Every simplex whose vertices all lie in the given vertex set.
    static Subcomplex full_on_vertices(const geom::EmbeddedComplex& parent,
                                       const std::vector<char>& vertex_included);

    const geom::EmbeddedComplex& parent() const { return *parent_; }
    bool includes(int simplex_id) const { return included_[simplex_id] != 0; }
    bool subset_of(const Subcomplex& other) const;
    bool same_as(const Subcomplex& other) const { return included_ == other.included_; }
    int count_of_dim(int k) const;
    bool empty() const;
    int euler_characteristic() const;

    // Connected components of the 1-skeleton; -1 for excluded vertices.
    std::vector<int> vertex_components() const;
    int component_count() const;

private:
    const geom::EmbeddedComplex* parent_;
    std::vector<char> included_;
};

// Vertices at height <= param_to_height(x) + tolerance, then the full
// subcomplex on them (lower-star convention).
Subcomplex sublevel_subcomplex(const geom::EmbeddedComplex& k, const geom::Direction& v,
                               double x, geom::Coords c);

struct HomologyGroup {
    int degree = 0;
    int dim = 0;
    // Cycle representatives as chain vectors over the parent's degree-simplices
    // (one column per class).
    linalg::Matrix representatives;
    Subcomplex complex;
};

HomologyGroup homology(const Subcomplex& s, int degree, const linalg::Field& field);

// Map on homology induced by the inclusion of nested subcomplexes of the same
// parent. Throws "not a valid morphism" when the subcomplexes do not nest.
linalg::Matrix induced_map(const HomologyGroup& from, const HomologyGroup& to,
                           const linalg::Field& field);

// The one-direction persistence module sampled on a parameter grid: homology
// at every grid value with the inclusion-induced transition maps.
bars::GridModule direction_diagram(const geom::EmbeddedComplex& k, const geom::Direction& v,
                                   int degree, const std::vector<double>& grid, geom::Coords c,
                                   const linalg::Field& field);

}  // namespace pht::homology
