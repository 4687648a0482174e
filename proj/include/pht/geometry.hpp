#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace pht::geom {

// Comparison tolerance for every <= test on heights, angles and cone predicates.
inline constexpr double kEps = 1e-9;

enum class SphereMetric { euclidean, geodesic };
enum class Coords { euclidean, theta };

// Index interval: [-1,1] for euclidean height coordinates, [-pi,0] for angular.
double param_inf(Coords c);
double param_sup(Coords c);

// The coordinate system fixes the sphere metric it is paired with.
SphereMetric metric_for(Coords c);

const char* to_string(Coords c);
const char* to_string(SphereMetric m);
Coords coords_from_string(const std::string& s);

// Unit vector in R^2 or R^3, normalized on construction.
class Direction {
public:
    Direction(double x, double y);
    Direction(double x, double y, double z);
    static Direction from_angle(double angle);  // d=2, angle measured from +x axis

    int ambient_dim() const { return dim_; }
    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }
    double dot(const Direction& o) const;
    double dot_point(const std::array<double, 3>& p) const;
    double angle() const;  // d=2 only, in (-pi, pi]

    bool operator==(const Direction& o) const;

private:
    std::array<double, 3> v_;
    int dim_;
};

double sphere_distance(const Direction& v, const Direction& w, SphereMetric m);

// Ordered sample set of pairwise distinct directions, with the metric the
// space-time relation will use.
class DirectionSet {
public:
    DirectionSet(std::vector<Direction> dirs, SphereMetric metric);

    const std::vector<Direction>& directions() const { return dirs_; }
    SphereMetric metric() const { return metric_; }
    int size() const { return static_cast<int>(dirs_.size()); }
    const Direction& operator[](int i) const { return dirs_[i]; }

private:
    std::vector<Direction> dirs_;
    SphereMetric metric_;
};

double param_to_height(double x, Coords c);
double height_to_param(double t, Coords c);

struct HausdorffResult {
    double value = 0.0;
    bool exact = true;       // exact for d=2, sampled for d=3
    long sample_count = 0;   // number of probe points used when sampled
    operator double() const { return value; }
};

// Covering radius of the direction set on the sphere, in the set's own metric.
// d=2 is computed exactly from sorted angular gaps; d=3 is a supremum over a
// deterministic Fibonacci-lattice sample of at least 10^5 points.
HausdorffResult hausdorff_to_sphere(const DirectionSet& a);

// Deterministic direction nets: equally spaced on S^1 (starting at angle 0),
// Fibonacci lattice on S^2.
DirectionSet generate_net(int count, int dim, SphereMetric m);

// Uniform S^1 net rotated off any lattice alignment, for adversarial queries.
DirectionSet offset_test_directions(int count, SphereMetric m);

// Finite geometric simplicial complex with vertex coordinates. Simplices are
// stored sorted by (dimension, lexicographic vertex tuple); once built, the
// complex is immutable and closed under faces.
class EmbeddedComplex {
public:
    EmbeddedComplex(int ambient_dim,
                    std::vector<std::array<double, 3>> vertices,
                    const std::vector<std::vector<int>>& simplices,
                    std::string label = "");

    int ambient_dim() const { return ambient_dim_; }
    const std::string& label() const { return label_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const std::array<double, 3>& vertex(int i) const { return vertices_[i]; }

    int simplex_count() const { return static_cast<int>(simplices_.size()); }
    int max_simplex_dim() const { return max_dim_; }
    const std::vector<int>& simplex(int id) const { return simplices_[id]; }
    int simplex_dim(int id) const { return static_cast<int>(simplices_[id].size()) - 1; }

    // Global ids of the k-simplices form the contiguous range [first, first+count).
    int first_of_dim(int k) const;
    int count_of_dim(int k) const;

    // Faces of a simplex with orientation signs (+1/-1), as global simplex ids.
    const std::vector<std::pair<int, int>>& faces_of(int id) const { return faces_[id]; }

    int find_simplex(const std::vector<int>& sorted_vertices) const;

    double max_vertex_norm() const;
    int euler_characteristic() const;

private:
    int ambient_dim_;
    int max_dim_;
    std::string label_;
    std::vector<std::array<double, 3>> vertices_;
    std::vector<std::vector<int>> simplices_;
    std::vector<int> dim_offsets_;
    std::vector<std::vector<std::pair<int, int>>> faces_;
};

// Uniformly scales vertices by 1/max||x|| when that max exceeds 1. Idempotent;
// throws on an empty complex.
EmbeddedComplex rescale_to_unit_disk(const EmbeddedComplex& k);

// Fixture meshes.
EmbeddedComplex regular_disk_mesh(int boundary_vertices);
EmbeddedComplex single_point_complex(double x, double y);
EmbeddedComplex random_convex_polygon_mesh(std::mt19937_64& rng, int boundary_vertices);
EmbeddedComplex random_star_polygon_mesh(std::mt19937_64& rng, int boundary_vertices);

}  // namespace pht::geom
