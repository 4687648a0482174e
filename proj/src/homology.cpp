#include "pht/homology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pht::homology {

using linalg::Field;
using linalg::Matrix;

Subcomplex::Subcomplex(const geom::EmbeddedComplex& parent, std::vector<char> included)
    : parent_(&parent), included_(std::move(included)) {
    if (static_cast<int>(included_.size()) != parent.simplex_count())
        throw std::invalid_argument("subcomplex mask size mismatch");
    for (int id = 0; id < parent.simplex_count(); ++id) {
        if (included_[id]) {
            for (auto [face, sign] : parent.faces_of(id)) {
                (void)sign;
                if (!included_[face])
                    throw std::invalid_argument("subcomplex not closed under faces");
            }
        } else {
            // Must equal the full subcomplex on its vertices: a simplex whose
            // vertices are all present cannot be missing.
            bool all_vertices_in = true;
            int v_first = parent.first_of_dim(0);
            for (int v : parent.simplex(id)) {
                if (!included_[v_first + v]) { all_vertices_in = false; break; }
            }
            if (all_vertices_in)
                throw std::invalid_argument("subcomplex is not full on its vertices");
        }
    }
}

Subcomplex Subcomplex::full_on_vertices(const geom::EmbeddedComplex& parent,
                                        const std::vector<char>& vertex_included) {
    if (static_cast<int>(vertex_included.size()) != parent.vertex_count())
        throw std::invalid_argument("vertex mask size mismatch");
    std::vector<char> mask(parent.simplex_count(), 0);
    for (int id = 0; id < parent.simplex_count(); ++id) {
        bool all = true;
        for (int v : parent.simplex(id)) {
            if (!vertex_included[v]) { all = false; break; }
        }
        mask[id] = all ? 1 : 0;
    }
    return Subcomplex(parent, std::move(mask));
}

bool Subcomplex::subset_of(const Subcomplex& other) const {
    if (parent_ != other.parent_) return false;
    for (size_t i = 0; i < included_.size(); ++i)
        if (included_[i] && !other.included_[i]) return false;
    return true;
}

int Subcomplex::count_of_dim(int k) const {
    int first = parent_->first_of_dim(k), n = parent_->count_of_dim(k);
    int c = 0;
    for (int id = first; id < first + n; ++id) c += included_[id] ? 1 : 0;
    return c;
}

bool Subcomplex::empty() const {
    return std::none_of(included_.begin(), included_.end(), [](char c) { return c != 0; });
}

int Subcomplex::euler_characteristic() const {
    int chi = 0;
    for (int k = 0; k <= parent_->max_simplex_dim(); ++k)
        chi += (k % 2 == 0 ? 1 : -1) * count_of_dim(k);
    return chi;
}

std::vector<int> Subcomplex::vertex_components() const {
    const auto& p = *parent_;
    std::vector<int> uf(p.vertex_count());
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int a) {
        while (uf[a] != a) { uf[a] = uf[uf[a]]; a = uf[a]; }
        return a;
    };
    int e_first = p.first_of_dim(1), e_count = p.count_of_dim(1);
    for (int id = e_first; id < e_first + e_count; ++id) {
        if (!included_[id]) continue;
        const auto& e = p.simplex(id);
        uf[find(e[0])] = find(e[1]);
    }
    // Labels in order of the smallest vertex of each component.
    std::vector<int> comp(p.vertex_count(), -1);
    std::vector<int> label(p.vertex_count(), -1);
    int next = 0;
    int v_first = p.first_of_dim(0);
    for (int v = 0; v < p.vertex_count(); ++v) {
        if (!included_[v_first + v]) continue;
        int r = find(v);
        if (label[r] < 0) label[r] = next++;
        comp[v] = label[r];
    }
    return comp;
}

int Subcomplex::component_count() const {
    auto comp = vertex_components();
    int m = -1;
    for (int c : comp) m = std::max(m, c);
    return m + 1;
}

Subcomplex sublevel_subcomplex(const geom::EmbeddedComplex& k, const geom::Direction& v,
                               double x, geom::Coords c) {
    double t = geom::param_to_height(x, c);
    std::vector<char> verts(k.vertex_count(), 0);
    for (int i = 0; i < k.vertex_count(); ++i)
        verts[i] = v.dot_point(k.vertex(i)) <= t + geom::kEps ? 1 : 0;
    return Subcomplex::full_on_vertices(k, verts);
}

namespace {

// Boundaries of the included degree-simplices as columns over the parent's
// (degree-1)-chain coordinates.
Matrix boundary_columns(const Subcomplex& s, int degree, uint32_t prime,
                        std::vector<int>* column_ids = nullptr) {
    const auto& p = s.parent();
    int rows = degree >= 1 ? p.count_of_dim(degree - 1) : 0;
    int first = p.first_of_dim(degree), n = p.count_of_dim(degree);
    std::vector<int> cols;
    for (int id = first; id < first + n; ++id)
        if (s.includes(id)) cols.push_back(id);
    Matrix out(rows, static_cast<int>(cols.size()), prime);
    Field f(prime);
    if (degree >= 1) {
        int row_first = p.first_of_dim(degree - 1);
        for (size_t j = 0; j < cols.size(); ++j) {
            for (auto [face, sign] : p.faces_of(cols[j]))
                out.set(face - row_first, static_cast<int>(j), f.reduce(sign));
        }
    }
    if (column_ids) *column_ids = std::move(cols);
    return out;
}

Matrix expand_to_parent(const Matrix& local, const std::vector<int>& column_ids,
                        const geom::EmbeddedComplex& p, int degree) {
    Matrix out(p.count_of_dim(degree), local.cols(), local.prime());
    int first = p.first_of_dim(degree);
    for (size_t i = 0; i < column_ids.size(); ++i)
        for (int j = 0; j < local.cols(); ++j)
            out.set(column_ids[i] - first, j, local.at(static_cast<int>(i), j));
    return out;
}

HomologyGroup homology_degree_zero(const Subcomplex& s, const Field& field) {
    const auto& p = s.parent();
    auto comp = s.vertex_components();
    int classes = 0;
    for (int c : comp) classes = std::max(classes, c + 1);
    // One representative vertex per component: the smallest one.
    Matrix reps(p.count_of_dim(0), classes, field.prime());
    std::vector<char> seen(classes, 0);
    for (int v = 0; v < p.vertex_count(); ++v) {
        int c = comp[v];
        if (c >= 0 && !seen[c]) {
            reps.set(v, c, 1);
            seen[c] = 1;
        }
    }
    return HomologyGroup{0, classes, std::move(reps), s};
}

}  // namespace

HomologyGroup homology(const Subcomplex& s, int degree, const Field& field) {
    const auto& p = s.parent();
    if (degree < 0 || degree > p.ambient_dim())
        throw std::invalid_argument("homology degree out of range");
    if (degree == 0) return homology_degree_zero(s, field);

    std::vector<int> n_ids;
    Matrix d_n = boundary_columns(s, degree, field.prime(), &n_ids);
    Matrix cycles = expand_to_parent(linalg::kernel_basis(d_n), n_ids, p, degree);
    Matrix d_up = boundary_columns(s, degree + 1, field.prime());

    // Cycle columns completing the boundary space to a basis of the cycle
    // space: pivots of [boundaries | cycles] inside the cycle block.
    std::vector<int> chosen;
    for (int c : linalg::pivot_columns(d_up.hconcat(cycles)))
        if (c >= d_up.cols()) chosen.push_back(c - d_up.cols());

    return HomologyGroup{degree, static_cast<int>(chosen.size()), cycles.columns(chosen), s};
}

linalg::Matrix induced_map(const HomologyGroup& from, const HomologyGroup& to,
                           const Field& field) {
    if (&from.complex.parent() != &to.complex.parent() || from.degree != to.degree)
        throw std::invalid_argument("not a valid morphism");
    if (!from.complex.subset_of(to.complex))
        throw std::invalid_argument("not a valid morphism");

    if (to.dim == 0 || from.dim == 0) return Matrix(to.dim, from.dim, field.prime());

    if (from.degree == 0) {
        // Class of a vertex maps to the class of its component in the target.
        const auto& p = from.complex.parent();
        auto comp = to.complex.vertex_components();
        std::vector<int> class_of_component(to.dim, -1);
        for (int j = 0; j < to.dim; ++j) {
            for (int v = 0; v < p.vertex_count(); ++v) {
                if (to.representatives.at(v, j) != 0 && comp[v] >= 0) {
                    class_of_component[j] = comp[v];
                    break;
                }
            }
        }
        std::vector<int> component_class(to.dim, -1);
        for (int j = 0; j < to.dim; ++j) component_class[class_of_component[j]] = j;
        Matrix out(to.dim, from.dim, field.prime());
        for (int j = 0; j < from.dim; ++j) {
            for (int v = 0; v < p.vertex_count(); ++v) {
                uint32_t coef = from.representatives.at(v, j);
                if (coef == 0) continue;
                int cls = component_class[comp[v]];
                out.set(cls, j, field.add(out.at(cls, j), coef));
            }
        }
        return out;
    }

    // Express each source cycle in the target basis modulo boundaries:
    // solve [target reps | target boundaries] x = source rep.
    Matrix d_up = boundary_columns(to.complex, to.degree + 1, field.prime());
    Matrix system = to.representatives.hconcat(d_up);
    auto sol = linalg::solve_in_image(system, from.representatives);
    if (!sol) throw std::logic_error("induced_map: source cycle not expressible in target");
    return sol->block(0, 0, to.dim, from.dim);
}

bars::GridModule direction_diagram(const geom::EmbeddedComplex& k, const geom::Direction& v,
                                   int degree, const std::vector<double>& grid, geom::Coords c,
                                   const Field& field) {
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("parameter grid must be sorted and nonempty");
    if (std::abs(grid.back() - geom::param_sup(c)) > geom::kEps)
        throw std::invalid_argument("parameter grid must end at sup X");

    bars::GridModule m;
    m.coords = c;
    m.grid = grid;
    m.prime = field.prime();
    std::vector<HomologyGroup> groups;
    groups.reserve(grid.size());
    for (double x : grid) groups.push_back(homology(sublevel_subcomplex(k, v, x, c), degree, field));
    for (const auto& g : groups) m.dims.push_back(g.dim);
    for (size_t i = 0; i + 1 < groups.size(); ++i)
        m.maps.push_back(induced_map(groups[i], groups[i + 1], field));
    m.validate();
    return m;
}

}  // namespace pht::homology
