#pragma once

#include <vector>

#include "pht/geometry.hpp"

namespace pht::spacetime {

struct SpaceTimePoint {
    geom::Direction dir{1.0, 0.0};
    double param = 0.0;
    // Index into the sample grid's direction list, -1 for a free query.
    int dir_index = -1;
};

// Finite sample of the space-time category: directions A and filtration
// values T (sorted, ending at sup X).
struct SampleGrid {
    geom::DirectionSet directions;
    std::vector<double> params;
    geom::Coords coords = geom::Coords::theta;

    SampleGrid(geom::DirectionSet dirs, std::vector<double> params_in, geom::Coords c);

    int dir_count() const { return directions.size(); }
    int param_count() const { return static_cast<int>(params.size()); }
    int point_count() const { return dir_count() * param_count(); }
    int point_id(int dir, int par) const { return dir * param_count() + par; }
    int dir_of(int point) const { return point / param_count(); }
    int par_of(int point) const { return point % param_count(); }
    SpaceTimePoint point(int id) const {
        return SpaceTimePoint{directions[dir_of(id)], params[par_of(id)], dir_of(id)};
    }
    geom::SphereMetric metric() const { return directions.metric(); }
    double sup_param() const { return geom::param_sup(coords); }

    // Covering radius of the direction sample (exact for S^1).
    double epsilon_directions() const;
    // One-sided covering radius of the filtration values: the smallest e such
    // that every y in X has a grid value in [y, y+e].
    double epsilon_params() const;
};

// Pre-order of the space-time category: true iff p.param + d(p.dir, q.dir)
// <= q.param (up to tolerance) or q sits on the top slice. Reflexive and
// transitive; top-slice points are mutually comparable, so this is not a
// partial order.
bool leq(const SpaceTimePoint& p, const SpaceTimePoint& q, geom::SphereMetric m, double sup_param);

struct ConeMember {
    int dir = 0;
    int par = 0;
    // False when the member is present only through a formal top morphism
    // rather than the metric inequality.
    bool strict = true;
};

struct Generator {
    int src = 0;  // indices into the member list
    int dst = 0;
};

struct LightCone {
    enum class Flavor { past, future };
    Flavor flavor = Flavor::past;
    SpaceTimePoint query;
    std::vector<ConeMember> members;     // sorted by (dir, par)
    std::vector<Generator> generators;   // closure equals the member relation
    bool empty() const { return members.empty(); }
};

// All sampled points with a morphism into the query / out of the query.
// Future cones always contain the whole top slice (formal members when the
// inequality does not reach them).
LightCone past_light_cone(const SpaceTimePoint& q, const SampleGrid& g);
LightCone future_light_cone(const SpaceTimePoint& q, const SampleGrid& g);

// Connectivity of the undirected generator graph; an empty cone counts as
// connected.
bool is_connected(const LightCone& c);

// Optimization for past cones: keep the maximal members plus, for every pair
// of maximal members, the maximal common lower bounds that tie them together.
// Falls back to the input when nothing shrinks. Callers must cross-check the
// colimit against the unreduced cone.
LightCone cofinal_reduction(const LightCone& c);

// Generating morphisms for the whole sampled category: consecutive chain
// steps, minimal cross-direction steps, and the symmetric top-slice cycle.
// Transitive closure recovers the full relation (including formal morphisms).
std::vector<std::pair<int, int>> diagram_generators(const SampleGrid& g);

}  // namespace pht::spacetime
