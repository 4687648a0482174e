#include "pht/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace pht::geom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double param_inf(Coords c) { return c == Coords::euclidean ? -1.0 : -kPi; }
double param_sup(Coords c) { return c == Coords::euclidean ? 1.0 : 0.0; }

SphereMetric metric_for(Coords c) {
    return c == Coords::euclidean ? SphereMetric::euclidean : SphereMetric::geodesic;
}

const char* to_string(Coords c) { return c == Coords::euclidean ? "euclidean" : "theta"; }
const char* to_string(SphereMetric m) {
    return m == SphereMetric::euclidean ? "euclidean" : "geodesic";
}

Coords coords_from_string(const std::string& s) {
    if (s == "euclidean") return Coords::euclidean;
    if (s == "theta") return Coords::theta;
    throw std::invalid_argument("unknown coordinate system: " + s);
}

Direction::Direction(double x, double y) : v_{x, y, 0.0}, dim_(2) {
    double n = std::sqrt(x * x + y * y);
    if (n < 1e-12) throw std::invalid_argument("cannot normalize near-zero direction");
    v_[0] /= n;
    v_[1] /= n;
}

Direction::Direction(double x, double y, double z) : v_{x, y, z}, dim_(3) {
    double n = std::sqrt(x * x + y * y + z * z);
    if (n < 1e-12) throw std::invalid_argument("cannot normalize near-zero direction");
    for (double& c : v_) c /= n;
}

Direction Direction::from_angle(double angle) { return Direction(std::cos(angle), std::sin(angle)); }

double Direction::dot(const Direction& o) const {
    return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2];
}

double Direction::dot_point(const std::array<double, 3>& p) const {
    return v_[0] * p[0] + v_[1] * p[1] + v_[2] * p[2];
}

double Direction::angle() const { return std::atan2(v_[1], v_[0]); }

bool Direction::operator==(const Direction& o) const {
    return dim_ == o.dim_ && std::abs(v_[0] - o.v_[0]) < 1e-12 &&
           std::abs(v_[1] - o.v_[1]) < 1e-12 && std::abs(v_[2] - o.v_[2]) < 1e-12;
}

double sphere_distance(const Direction& v, const Direction& w, SphereMetric m) {
    if (m == SphereMetric::euclidean) {
        double dx = v.x() - w.x(), dy = v.y() - w.y(), dz = v.z() - w.z();
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    // Clamp guards rounding at identical/antipodal directions.
    double d = std::clamp(v.dot(w), -1.0, 1.0);
    return std::acos(d);
}

DirectionSet::DirectionSet(std::vector<Direction> dirs, SphereMetric metric)
    : dirs_(std::move(dirs)), metric_(metric) {
    if (dirs_.empty()) throw std::invalid_argument("direction set must be nonempty");
    for (size_t i = 0; i < dirs_.size(); ++i)
        for (size_t j = i + 1; j < dirs_.size(); ++j)
            if (dirs_[i] == dirs_[j]) throw std::invalid_argument("duplicate directions in set");
}

double param_to_height(double x, Coords c) {
    if (x < param_inf(c) - kEps || x > param_sup(c) + kEps)
        throw std::out_of_range("parameter outside index interval");
    return c == Coords::euclidean ? x : std::cos(x);
}

double height_to_param(double t, Coords c) {
    if (t < -1.0 - kEps || t > 1.0 + kEps) throw std::out_of_range("height outside [-1,1]");
    return c == Coords::euclidean ? t : -std::acos(std::clamp(t, -1.0, 1.0));
}

namespace {

std::vector<Direction> fibonacci_lattice(long count) {
    // Deterministic near-uniform sample of S^2.
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Direction> out;
    out.reserve(count);
    for (long k = 0; k < count; ++k) {
        double z = 1.0 - 2.0 * (k + 0.5) / static_cast<double>(count);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = 2.0 * kPi * static_cast<double>(k) / golden;
        out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return out;
}

double max_angular_gap(const DirectionSet& a) {
    std::vector<double> angles;
    angles.reserve(a.size());
    for (const Direction& d : a.directions()) angles.push_back(d.angle());
    std::sort(angles.begin(), angles.end());
    double gap = 2.0 * kPi - (angles.back() - angles.front());
    for (size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    return gap;
}

}  // namespace

HausdorffResult hausdorff_to_sphere(const DirectionSet& a) {
    HausdorffResult out;
    if (a[0].ambient_dim() == 2) {
        // The farthest sphere point sits mid-gap; both metrics are monotone in
        // the angular offset, so the max gap determines the covering radius.
        double gap = max_angular_gap(a);
        out.exact = true;
        out.value = (a.metric() == SphereMetric::geodesic) ? gap / 2.0
                                                           : 2.0 * std::sin(gap / 4.0);
        return out;
    }
    const long n = 100000;
    out.exact = false;
    out.sample_count = n;
    double worst = 0.0;
    for (const Direction& probe : fibonacci_lattice(n)) {
        double best = std::numeric_limits<double>::infinity();
        for (const Direction& d : a.directions())
            best = std::min(best, sphere_distance(probe, d, a.metric()));
        worst = std::max(worst, best);
    }
    out.value = worst;
    return out;
}

DirectionSet generate_net(int count, int dim, SphereMetric m) {
    if (count < 1) throw std::invalid_argument("direction count must be positive");
    std::vector<Direction> dirs;
    dirs.reserve(count);
    if (dim == 2) {
        for (int k = 0; k < count; ++k) dirs.push_back(Direction::from_angle(2.0 * kPi * k / count));
    } else if (dim == 3) {
        dirs = fibonacci_lattice(count);
    } else {
        throw std::invalid_argument("supported sphere dimensions are S^1 and S^2");
    }
    return DirectionSet(std::move(dirs), m);
}

DirectionSet offset_test_directions(int count, SphereMetric m) {
    if (count < 1) throw std::invalid_argument("direction count must be positive");
    // Golden-ratio fraction of one gap keeps queries off every net alignment.
    const double offset = (2.0 * kPi / count) * 0.6180339887498949;
    std::vector<Direction> dirs;
    dirs.reserve(count);
    for (int k = 0; k < count; ++k)
        dirs.push_back(Direction::from_angle(offset + 2.0 * kPi * k / count));
    return DirectionSet(std::move(dirs), m);
}

EmbeddedComplex::EmbeddedComplex(int ambient_dim,
                                 std::vector<std::array<double, 3>> vertices,
                                 const std::vector<std::vector<int>>& simplices,
                                 std::string label)
    : ambient_dim_(ambient_dim), max_dim_(0), label_(std::move(label)),
      vertices_(std::move(vertices)) {
    if (ambient_dim_ != 2 && ambient_dim_ != 3)
        throw std::invalid_argument("ambient dimension must be 2 or 3");
    if (vertices_.empty()) throw std::invalid_argument("empty shape");
    if (ambient_dim_ == 2) {
        for (const auto& v : vertices_)
            if (v[2] != 0.0) throw std::invalid_argument("planar complex with nonzero z");
    }

    // Canonicalize, complete faces, dedupe.
    std::set<std::vector<int>> closed;
    std::vector<std::vector<int>> queue;
    for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) queue.push_back({i});
    for (const auto& s : simplices) queue.push_back(s);
    while (!queue.empty()) {
        std::vector<int> s = std::move(queue.back());
        queue.pop_back();
        if (s.empty()) throw std::invalid_argument("empty simplex");
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("repeated vertex in simplex");
        for (int v : s)
            if (v < 0 || v >= static_cast<int>(vertices_.size()))
                throw std::invalid_argument("vertex index out of range");
        if (static_cast<int>(s.size()) - 1 > ambient_dim_)
            throw std::invalid_argument("simplex dimension exceeds ambient dimension");
        if (!closed.insert(s).second) continue;
        if (s.size() > 1) {
            for (size_t j = 0; j < s.size(); ++j) {
                std::vector<int> face = s;
                face.erase(face.begin() + static_cast<long>(j));
                queue.push_back(std::move(face));
            }
        }
    }

    simplices_.assign(closed.begin(), closed.end());
    std::sort(simplices_.begin(), simplices_.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    for (const auto& s : simplices_) max_dim_ = std::max(max_dim_, static_cast<int>(s.size()) - 1);

    dim_offsets_.assign(max_dim_ + 2, 0);
    std::map<std::vector<int>, int> index_of;
    for (int id = 0; id < static_cast<int>(simplices_.size()); ++id)
        index_of[simplices_[id]] = id;
    for (const auto& s : simplices_) dim_offsets_[s.size()] += 1;
    int running = 0;
    for (size_t k = 0; k + 1 < dim_offsets_.size(); ++k) {
        int c = dim_offsets_[k + 1];
        dim_offsets_[k + 1] = running;
        running += c;
    }
    dim_offsets_[0] = 0;  // unused slot kept for symmetry
    // dim_offsets_[k+1] now holds the first global id of the k-simplices.

    faces_.resize(simplices_.size());
    for (int id = 0; id < static_cast<int>(simplices_.size()); ++id) {
        const auto& s = simplices_[id];
        if (s.size() == 1) continue;
        int sign = 1;
        for (size_t j = 0; j < s.size(); ++j) {
            std::vector<int> face = s;
            face.erase(face.begin() + static_cast<long>(j));
            faces_[id].emplace_back(index_of.at(face), sign);
            sign = -sign;
        }
    }
}

int EmbeddedComplex::first_of_dim(int k) const {
    if (k < 0 || k > max_dim_) return simplex_count();
    return dim_offsets_[k + 1];
}

int EmbeddedComplex::count_of_dim(int k) const {
    if (k < 0 || k > max_dim_) return 0;
    int next = (k == max_dim_) ? simplex_count() : dim_offsets_[k + 2];
    return next - dim_offsets_[k + 1];
}

int EmbeddedComplex::find_simplex(const std::vector<int>& sorted_vertices) const {
    int k = static_cast<int>(sorted_vertices.size()) - 1;
    int lo = first_of_dim(k), hi = lo + count_of_dim(k);
    auto it = std::lower_bound(simplices_.begin() + lo, simplices_.begin() + hi, sorted_vertices);
    if (it == simplices_.begin() + hi || *it != sorted_vertices) return -1;
    return static_cast<int>(it - simplices_.begin());
}

double EmbeddedComplex::max_vertex_norm() const {
    double m = 0.0;
    for (const auto& v : vertices_)
        m = std::max(m, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
    return m;
}

int EmbeddedComplex::euler_characteristic() const {
    int chi = 0;
    for (int k = 0; k <= max_dim_; ++k) chi += (k % 2 == 0 ? 1 : -1) * count_of_dim(k);
    return chi;
}

EmbeddedComplex rescale_to_unit_disk(const EmbeddedComplex& k) {
    double m = k.max_vertex_norm();
    if (m <= 1.0) return k;
    std::vector<std::array<double, 3>> scaled;
    scaled.reserve(k.vertex_count());
    for (int i = 0; i < k.vertex_count(); ++i) {
        auto v = k.vertex(i);
        scaled.push_back({v[0] / m, v[1] / m, v[2] / m});
    }
    std::vector<std::vector<int>> simplices;
    for (int id = 0; id < k.simplex_count(); ++id) simplices.push_back(k.simplex(id));
    return EmbeddedComplex(k.ambient_dim(), std::move(scaled), simplices, k.label());
}

EmbeddedComplex regular_disk_mesh(int boundary_vertices) {
    if (boundary_vertices < 3) throw std::invalid_argument("need at least 3 boundary vertices");
    std::vector<std::array<double, 3>> verts;
    for (int k = 0; k < boundary_vertices; ++k) {
        double a = 2.0 * kPi * k / boundary_vertices;
        verts.push_back({std::cos(a), std::sin(a), 0.0});
    }
    verts.push_back({0.0, 0.0, 0.0});
    int center = boundary_vertices;
    std::vector<std::vector<int>> tris;
    for (int k = 0; k < boundary_vertices; ++k)
        tris.push_back({k, (k + 1) % boundary_vertices, center});
    return EmbeddedComplex(2, std::move(verts), tris, "disk" + std::to_string(boundary_vertices));
}

EmbeddedComplex single_point_complex(double x, double y) {
    return EmbeddedComplex(2, {{x, y, 0.0}}, {}, "point");
}

namespace {

EmbeddedComplex fan_mesh(const std::vector<std::array<double, 3>>& boundary,
                         std::array<double, 3> apex, const std::string& label) {
    std::vector<std::array<double, 3>> verts = boundary;
    verts.push_back(apex);
    int center = static_cast<int>(boundary.size());
    std::vector<std::vector<int>> tris;
    for (int k = 0; k < center; ++k) tris.push_back({k, (k + 1) % center, center});
    return EmbeddedComplex(2, std::move(verts), tris, label);
}

}  // namespace

EmbeddedComplex random_convex_polygon_mesh(std::mt19937_64& rng, int boundary_vertices) {
    // Random support angles and a common radius profile convexified by sorting
    // slope turns: sample points on a circle of random radius, take the hull.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> angles(boundary_vertices);
    for (double& a : angles) a = 2.0 * kPi * unit(rng);
    std::sort(angles.begin(), angles.end());
    double radius = 0.3 + 0.7 * unit(rng);
    double cx = 0.4 * (unit(rng) - 0.5), cy = 0.4 * (unit(rng) - 0.5);
    std::vector<std::array<double, 3>> pts;
    for (double a : angles)
        pts.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a), 0.0});
    // Points on a common circle are in convex position by construction.
    EmbeddedComplex mesh = fan_mesh(pts, {cx, cy, 0.0}, "convex");
    return rescale_to_unit_disk(mesh);
}

EmbeddedComplex random_star_polygon_mesh(std::mt19937_64& rng, int boundary_vertices) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> angles(boundary_vertices);
    for (double& a : angles) a = 2.0 * kPi * unit(rng);
    std::sort(angles.begin(), angles.end());
    // Enforce distinct angles so the fan triangles are nondegenerate.
    for (size_t i = 1; i < angles.size(); ++i)
        if (angles[i] - angles[i - 1] < 1e-3) angles[i] = angles[i - 1] + 1e-3;
    std::vector<std::array<double, 3>> pts;
    for (double a : angles) {
        double r = 0.2 + 0.8 * unit(rng);
        pts.push_back({r * std::cos(a), r * std::sin(a), 0.0});
    }
    EmbeddedComplex mesh = fan_mesh(pts, {0.0, 0.0, 0.0}, "star");
    return rescale_to_unit_disk(mesh);
}

}  // namespace pht::geom
