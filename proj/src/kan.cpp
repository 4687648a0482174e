#include "pht/kan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>

#include "pht/parallel.hpp"

namespace pht::kan {

using linalg::Field;
using linalg::Matrix;
using spacetime::LightCone;
using spacetime::SampleGrid;
using spacetime::SpaceTimePoint;

const char* to_string(Flavor f) {
    switch (f) {
        case Flavor::left: return "left";
        case Flavor::right: return "right";
        default: return "center";
    }
}

Flavor flavor_from_string(const std::string& s) {
    if (s == "left") return Flavor::left;
    if (s == "right") return Flavor::right;
    if (s == "center") return Flavor::center;
    throw std::invalid_argument("unknown extension flavor: " + s);
}

VectDiagram::VectDiagram(SampleGrid grid, int degree, uint32_t prime, std::vector<int> dims,
                         std::vector<std::pair<int, int>> gens, std::vector<Matrix> gen_arrows)
    : grid_(std::move(grid)), degree_(degree), prime_(prime), dims_(std::move(dims)),
      gens_(std::move(gens)), arrows_(std::move(gen_arrows)) {
    if (static_cast<int>(dims_.size()) != grid_.point_count())
        throw std::invalid_argument("diagram dimension list does not match the grid");
    if (gens_.size() != arrows_.size())
        throw std::invalid_argument("diagram arrows do not match the generators");
    for (size_t i = 0; i < gens_.size(); ++i) {
        auto [p, q] = gens_[i];
        if (arrows_[i].cols() != dims_[p] || arrows_[i].rows() != dims_[q])
            throw std::invalid_argument("generator arrow shape mismatch");
        arrow_index_[static_cast<int64_t>(p) * grid_.point_count() + q] = static_cast<int>(i);
    }
}

const Matrix* VectDiagram::find_generator_arrow(int p, int q) const {
    auto it = arrow_index_.find(static_cast<int64_t>(p) * grid_.point_count() + q);
    return it == arrow_index_.end() ? nullptr : &arrows_[it->second];
}

void VectDiagram::corrupt_generator(size_t index, const Matrix& m) {
    if (index >= arrows_.size()) throw std::out_of_range("generator index out of range");
    if (m.rows() != arrows_[index].rows() || m.cols() != arrows_[index].cols())
        throw std::invalid_argument("corrupt_generator: shape mismatch");
    arrows_[index] = m;
}

Matrix VectDiagram::arrow(int p, int q) const {
    if (p == q) return Matrix::identity(dims_[p], prime_);
    const int np = grid_.param_count();
    const int di = grid_.dir_of(p), dj = grid_.dir_of(q);
    const int ti = grid_.par_of(p), tj = grid_.par_of(q);
    const auto& T = grid_.params;

    auto chain_step = [&](int dir, int k) -> const Matrix& {
        const Matrix* m = find_generator_arrow(grid_.point_id(dir, k), grid_.point_id(dir, k + 1));
        if (!m) throw std::logic_error("missing chain generator arrow");
        return *m;
    };
    auto chain_composite = [&](int dir, int from, int to) {
        Matrix acc = Matrix::identity(dims_[grid_.point_id(dir, from)], prime_);
        for (int k = from; k < to; ++k) acc = chain_step(dir, k) * acc;
        return acc;
    };

    if (di == dj) {
        if (ti > tj) throw std::invalid_argument("arrow requested against the order");
        return chain_composite(di, ti, tj);
    }

    double d = geom::sphere_distance(grid_.directions[di], grid_.directions[dj], grid_.metric());
    // Strict route: climb chain di to the highest source whose cross step
    // still lands at or below tj, take the stored staircase edge (it exists
    // exactly for that source), then climb chain dj.
    int t_star = -1;
    for (int k = np - 1; k >= ti; --k) {
        if (T[k] + d <= T[tj] + geom::kEps) { t_star = k; break; }
    }
    if (t_star >= 0) {
        int s_star = -1;
        for (int s = 0; s < np; ++s) {
            if (T[t_star] + d <= T[s] + geom::kEps) { s_star = s; break; }
        }
        const Matrix* cross =
            find_generator_arrow(grid_.point_id(di, t_star), grid_.point_id(dj, s_star));
        if (cross) {
            return chain_composite(dj, s_star, tj) * (*cross) * chain_composite(di, ti, t_star);
        }
    }
    // Formal route through the top slice.
    if (tj == np - 1) {
        Matrix acc = chain_composite(di, ti, np - 1);
        int dir = di;
        const int nd = grid_.dir_count();
        while (dir != dj) {
            int next = (dir + 1) % nd;
            const Matrix* cyc =
                find_generator_arrow(grid_.point_id(dir, np - 1), grid_.point_id(next, np - 1));
            if (!cyc) throw std::logic_error("missing top-cycle generator arrow");
            acc = (*cyc) * acc;
            dir = next;
        }
        return acc;
    }
    throw std::invalid_argument("arrow requested for a non-morphism");
}

VectDiagram sample_pht(const geom::EmbeddedComplex& k, const SampleGrid& g, int degree,
                       const Field& field, int workers) {
    if (k.max_vertex_norm() > 1.0 + geom::kEps)
        throw std::invalid_argument("shape must be rescaled into the unit disk");

    const int np = g.param_count(), nd = g.dir_count();
    std::vector<std::optional<homology::HomologyGroup>> groups(
        static_cast<size_t>(nd) * static_cast<size_t>(np));

    parallel_for(nd, workers, [&](int i) {
        for (int t = 0; t < np; ++t) {
            auto sub = homology::sublevel_subcomplex(k, g.directions[i], g.params[t], g.coords);
            groups[g.point_id(i, t)] = homology::homology(sub, degree, field);
        }
    });

    std::vector<int> dims(g.point_count());
    for (int p = 0; p < g.point_count(); ++p) dims[p] = groups[p]->dim;

    auto gens = spacetime::diagram_generators(g);
    std::vector<Matrix> arrows(gens.size());
    parallel_for(static_cast<int>(gens.size()), workers, [&](int a) {
        auto [p, q] = gens[a];
        arrows[a] = homology::induced_map(*groups[p], *groups[q], field);
    });

    return VectDiagram(g, degree, field.prime(), std::move(dims), std::move(gens),
                       std::move(arrows));
}

namespace {

// Per-direction chains of a cone, with each member's composite map into the
// chain anchor (max for colimits, min for limits).
struct ConeChains {
    // For each direction present: ordered member indices (ascending param).
    std::vector<int> dirs;                       // direction ids, ascending
    std::vector<std::vector<int>> members;       // per dir: indices into cone.members
    std::vector<int> anchor_member;              // per dir: index into cone.members
    std::vector<int> anchor_point;               // per dir: grid point id
    std::vector<int> anchor_offset;              // prefix dims, size dirs+1
};

int point_of(const LightCone& c, const SampleGrid& g, int member_index) {
    const auto& m = c.members[member_index];
    return g.point_id(m.dir, m.par);
}

ConeChains cone_chains(const LightCone& c, const SampleGrid& g, const VectDiagram& d,
                       bool strict_only, bool anchor_at_max) {
    ConeChains out;
    std::map<int, std::vector<int>> per_dir;
    for (int i = 0; i < static_cast<int>(c.members.size()); ++i) {
        if (strict_only && !c.members[i].strict) continue;
        per_dir[c.members[i].dir].push_back(i);
    }
    for (auto& [dir, mem] : per_dir) {
        std::sort(mem.begin(), mem.end(),
                  [&](int a, int b) { return c.members[a].par < c.members[b].par; });
        out.dirs.push_back(dir);
        out.members.push_back(mem);
        out.anchor_member.push_back(anchor_at_max ? mem.back() : mem.front());
    }
    out.anchor_offset.assign(out.dirs.size() + 1, 0);
    for (size_t i = 0; i < out.dirs.size(); ++i) {
        out.anchor_point.push_back(point_of(c, g, out.anchor_member[i]));
        out.anchor_offset[i + 1] = out.anchor_offset[i] + d.dim(out.anchor_point.back());
    }
    return out;
}

// Composite of each member into its chain anchor, swept along the chain.
std::vector<Matrix> maps_to_chain_max(const ConeChains& ch, const LightCone& c,
                                      const SampleGrid& g, const VectDiagram& d,
                                      std::vector<int>* chain_of_member) {
    std::vector<Matrix> to_anchor(c.members.size());
    if (chain_of_member) chain_of_member->assign(c.members.size(), -1);
    for (size_t ci = 0; ci < ch.dirs.size(); ++ci) {
        const auto& mem = ch.members[ci];
        Matrix acc = Matrix::identity(d.dim(point_of(c, g, mem.back())), d.prime());
        to_anchor[mem.back()] = acc;
        if (chain_of_member) (*chain_of_member)[mem.back()] = static_cast<int>(ci);
        for (int k = static_cast<int>(mem.size()) - 2; k >= 0; --k) {
            acc = acc * d.arrow(point_of(c, g, mem[k]), point_of(c, g, mem[k + 1]));
            to_anchor[mem[k]] = acc;
            if (chain_of_member) (*chain_of_member)[mem[k]] = static_cast<int>(ci);
        }
    }
    return to_anchor;
}

std::vector<Matrix> maps_from_chain_min(const ConeChains& ch, const LightCone& c,
                                        const SampleGrid& g, const VectDiagram& d,
                                        std::vector<int>* chain_of_member) {
    std::vector<Matrix> from_anchor(c.members.size());
    if (chain_of_member) chain_of_member->assign(c.members.size(), -1);
    for (size_t ci = 0; ci < ch.dirs.size(); ++ci) {
        const auto& mem = ch.members[ci];
        Matrix acc = Matrix::identity(d.dim(point_of(c, g, mem.front())), d.prime());
        from_anchor[mem.front()] = acc;
        if (chain_of_member) (*chain_of_member)[mem.front()] = static_cast<int>(ci);
        for (size_t k = 1; k < mem.size(); ++k) {
            acc = d.arrow(point_of(c, g, mem[k - 1]), point_of(c, g, mem[k])) * acc;
            from_anchor[mem[k]] = acc;
            if (chain_of_member) (*chain_of_member)[mem[k]] = static_cast<int>(ci);
        }
    }
    return from_anchor;
}

bool generator_is_formal(const spacetime::Generator& e, const LightCone& c, const SampleGrid& g) {
    const auto& s = c.members[e.src];
    const auto& t = c.members[e.dst];
    double d = geom::sphere_distance(g.directions[s.dir], g.directions[t.dir], g.metric());
    return g.params[s.par] + d > g.params[t.par] + geom::kEps;
}

}  // namespace

KanValue colimit(const LightCone& c, const VectDiagram& d) {
    if (c.flavor != LightCone::Flavor::past)
        throw std::invalid_argument("colimit expects a past light cone");
    const SampleGrid& g = d.grid();
    Field f(d.prime());

    KanValue out;
    out.flavor = Flavor::left;
    out.query = c.query;
    if (c.empty()) {
        out.presentation = Matrix(0, 0, d.prime());
        return out;
    }

    ConeChains ch = cone_chains(c, g, d, /*strict_only=*/false, /*anchor_at_max=*/true);
    std::vector<int> chain_of_member;
    std::vector<Matrix> up = maps_to_chain_max(ch, c, g, d, &chain_of_member);
    const int total = ch.anchor_offset.back();

    // Relations: one block per cross-chain generator e: s -> t,
    //   (map of s into its anchor) - (map of t's anchor) o (arrow of e).
    std::vector<const spacetime::Generator*> cross;
    int cols = 0;
    for (const auto& e : c.generators) {
        if (chain_of_member[e.src] == chain_of_member[e.dst]) continue;
        cross.push_back(&e);
        cols += d.dim(point_of(c, g, e.src));
    }
    Matrix rel(total, cols, d.prime());
    int col0 = 0;
    for (const auto* e : cross) {
        int s_pt = point_of(c, g, e->src);
        int cs = chain_of_member[e->src], ct = chain_of_member[e->dst];
        const Matrix& us = up[e->src];
        Matrix ut = up[e->dst] * d.arrow(s_pt, point_of(c, g, e->dst));
        for (int r = 0; r < us.rows(); ++r)
            for (int j = 0; j < us.cols(); ++j)
                rel.set(ch.anchor_offset[cs] + r, col0 + j, us.at(r, j));
        for (int r = 0; r < ut.rows(); ++r)
            for (int j = 0; j < ut.cols(); ++j)
                rel.set(ch.anchor_offset[ct] + r, col0 + j,
                        f.sub(rel.at(ch.anchor_offset[ct] + r, col0 + j), ut.at(r, j)));
        col0 += us.cols();
    }

    linalg::Cokernel ck = linalg::cokernel(rel);
    out.dim = ck.dim;
    out.presentation = std::move(ck.projection);
    out.anchor_points = ch.anchor_point;
    out.anchor_offsets = ch.anchor_offset;
    return out;
}

KanValue limit(const LightCone& c, const VectDiagram& d) {
    if (c.flavor != LightCone::Flavor::future)
        throw std::invalid_argument("limit expects a future light cone");
    const SampleGrid& g = d.grid();
    Field f(d.prime());

    KanValue out;
    out.flavor = Flavor::right;
    out.query = c.query;

    ConeChains ch = cone_chains(c, g, d, /*strict_only=*/true, /*anchor_at_max=*/false);
    if (ch.dirs.empty()) {
        out.presentation = Matrix(0, 0, d.prime());
        return out;
    }
    std::vector<int> chain_of_member;
    std::vector<Matrix> down = maps_from_chain_min(ch, c, g, d, &chain_of_member);
    const int total = ch.anchor_offset.back();

    // Constraints from strict cross-chain generators: F_e x_s = x_t with both
    // sides written through the chain minima.
    std::vector<const spacetime::Generator*> cross;
    int rows = 0;
    for (const auto& e : c.generators) {
        if (!c.members[e.src].strict || !c.members[e.dst].strict) continue;
        if (chain_of_member[e.src] < 0 || chain_of_member[e.dst] < 0) continue;
        if (chain_of_member[e.src] == chain_of_member[e.dst]) continue;
        if (generator_is_formal(e, c, g)) continue;
        cross.push_back(&e);
        rows += d.dim(point_of(c, g, e.dst));
    }
    Matrix sys(rows, total, d.prime());
    int row0 = 0;
    for (const auto* e : cross) {
        int s_pt = point_of(c, g, e->src), t_pt = point_of(c, g, e->dst);
        int cs = chain_of_member[e->src], ct = chain_of_member[e->dst];
        Matrix lhs = d.arrow(s_pt, t_pt) * down[e->src];
        const Matrix& rhs = down[e->dst];
        for (int r = 0; r < lhs.rows(); ++r)
            for (int j = 0; j < lhs.cols(); ++j)
                sys.set(row0 + r, ch.anchor_offset[cs] + j, lhs.at(r, j));
        for (int r = 0; r < rhs.rows(); ++r)
            for (int j = 0; j < rhs.cols(); ++j)
                sys.set(row0 + r, ch.anchor_offset[ct] + j,
                        f.sub(sys.at(row0 + r, ch.anchor_offset[ct] + j), rhs.at(r, j)));
        row0 += lhs.rows();
    }

    out.presentation = linalg::kernel_basis(sys);
    out.dim = out.presentation.cols();
    out.anchor_points = ch.anchor_point;
    out.anchor_offsets = ch.anchor_offset;
    return out;
}

namespace {

// The canonical map colim -> lim between computed Kan values at one query.
Matrix canonical_factor(const KanValue& left, const KanValue& right, const VectDiagram& d) {
    Field f(d.prime());
    if (left.dim == 0 || right.dim == 0) return Matrix(right.dim, left.dim, d.prime());

    // Preimages of the colimit basis on the past anchors.
    auto pre = linalg::solve_in_image(left.presentation, Matrix::identity(left.dim, d.prime()));
    if (!pre) throw std::logic_error("colimit projection is not surjective");

    const int n_right = right.anchor_offsets.back();
    Matrix tuples(n_right, left.dim, d.prime());
    for (size_t a = 0; a < left.anchor_points.size(); ++a) {
        int a_dim = left.anchor_offsets[a + 1] - left.anchor_offsets[a];
        if (a_dim == 0) continue;
        Matrix xa = pre->block(left.anchor_offsets[a], 0, a_dim, left.dim);
        for (size_t b = 0; b < right.anchor_points.size(); ++b) {
            int b_dim = right.anchor_offsets[b + 1] - right.anchor_offsets[b];
            if (b_dim == 0) continue;
            Matrix add = d.arrow(left.anchor_points[a], right.anchor_points[b]) * xa;
            for (int r = 0; r < b_dim; ++r)
                for (int j = 0; j < left.dim; ++j)
                    tuples.set(right.anchor_offsets[b] + r, j,
                               f.add(tuples.at(right.anchor_offsets[b] + r, j), add.at(r, j)));
        }
    }
    auto phi = linalg::solve_in_image(right.presentation, tuples);
    if (!phi) throw std::logic_error("canonical cocone tuple escapes the limit");
    return *phi;
}

}  // namespace

KanValue center(const SpaceTimePoint& q, const VectDiagram& d) {
    KanValue left = colimit(spacetime::past_light_cone(q, d.grid()), d);
    KanValue right = limit(spacetime::future_light_cone(q, d.grid()), d);

    KanValue out;
    out.flavor = Flavor::center;
    out.query = q;
    out.left_dim = left.dim;
    out.right_dim = right.dim;
    out.anchor_points = right.anchor_points;
    out.anchor_offsets = right.anchor_offsets;
    out.factor = canonical_factor(left, right, d);
    out.presentation = linalg::image_basis(out.factor);
    out.dim = out.presentation.cols();
    return out;
}

std::vector<double> default_query_grid(const SampleGrid& g) {
    std::vector<double> q = g.params;
    for (size_t i = 0; i + 1 < g.params.size(); ++i)
        q.push_back((g.params[i] + g.params[i + 1]) / 2.0);
    std::sort(q.begin(), q.end());
    return q;
}

namespace {

struct LeftState {
    KanValue value;
    LightCone cone;
};

// Transition colim(beta_k) -> colim(beta_k+1) through the universal property:
// send each anchor of the smaller cone into the larger colimit and factor
// through the smaller projection.
Matrix left_transition(const LeftState& a, const LeftState& b, const VectDiagram& d) {
    Field f(d.prime());
    if (a.value.dim == 0) return Matrix(b.value.dim, 0, d.prime());
    auto pre = linalg::solve_in_image(a.value.presentation,
                                      Matrix::identity(a.value.dim, d.prime()));
    if (!pre) throw std::logic_error("colimit projection is not surjective");
    Matrix out(b.value.dim, a.value.dim, d.prime());
    for (size_t ai = 0; ai < a.value.anchor_points.size(); ++ai) {
        int a_dim = a.value.anchor_offsets[ai + 1] - a.value.anchor_offsets[ai];
        if (a_dim == 0) continue;
        int a_pt = a.value.anchor_points[ai];
        int a_dir = d.grid().dir_of(a_pt);
        // Anchor of the same direction in the larger cone.
        int b_anchor = -1;
        for (size_t bi = 0; bi < b.value.anchor_points.size(); ++bi)
            if (d.grid().dir_of(b.value.anchor_points[bi]) == a_dir) {
                b_anchor = static_cast<int>(bi);
                break;
            }
        if (b_anchor < 0) throw std::logic_error("direction vanished from a growing cone");
        int b_pt = b.value.anchor_points[b_anchor];
        Matrix moved = d.arrow(a_pt, b_pt) * pre->block(a.value.anchor_offsets[ai], 0, a_dim,
                                                        a.value.dim);
        int b_dim = b.value.anchor_offsets[b_anchor + 1] - b.value.anchor_offsets[b_anchor];
        Matrix proj = b.value.presentation.block(0, b.value.anchor_offsets[b_anchor], b.value.dim,
                                                 b_dim);
        Matrix add = proj * moved;
        for (int r = 0; r < add.rows(); ++r)
            for (int j = 0; j < add.cols(); ++j) out.set(r, j, f.add(out.at(r, j), add.at(r, j)));
    }
    return out;
}

// Transition lim(beta_k) -> lim(beta_k+1): restrict tuples to the smaller
// strict cone and re-coordinate in its kernel basis.
Matrix right_transition(const KanValue& a, const KanValue& b, const VectDiagram& d) {
    if (b.dim == 0) return Matrix(0, a.dim, d.prime());
    const int nb = b.anchor_offsets.back();
    Matrix restricted(nb, a.dim, d.prime());
    for (size_t bi = 0; bi < b.anchor_points.size(); ++bi) {
        int b_dim = b.anchor_offsets[bi + 1] - b.anchor_offsets[bi];
        if (b_dim == 0) continue;
        int b_pt = b.anchor_points[bi];
        int b_dir = d.grid().dir_of(b_pt);
        int a_anchor = -1;
        for (size_t ai = 0; ai < a.anchor_points.size(); ++ai)
            if (d.grid().dir_of(a.anchor_points[ai]) == b_dir) {
                a_anchor = static_cast<int>(ai);
                break;
            }
        if (a_anchor < 0) throw std::logic_error("direction appeared in a shrinking cone");
        int a_dim_block = a.anchor_offsets[a_anchor + 1] - a.anchor_offsets[a_anchor];
        Matrix xa = a.presentation.block(a.anchor_offsets[a_anchor], 0, a_dim_block, a.dim);
        Matrix moved = d.arrow(a.anchor_points[a_anchor], b_pt) * xa;
        restricted.insert_block(b.anchor_offsets[bi], 0, moved);
    }
    auto sol = linalg::solve_in_image(b.presentation, restricted);
    if (!sol) throw std::logic_error("restricted limit tuple escapes the smaller limit");
    return *sol;
}

}  // namespace

bars::GridModule extend_module(const geom::Direction& w, const std::vector<double>& query_grid,
                               const VectDiagram& d, Flavor flavor) {
    const SampleGrid& g = d.grid();
    std::vector<double> grid = query_grid;
    grid.push_back(geom::param_sup(g.coords));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double x, double y) { return std::abs(x - y) < geom::kEps; }),
               grid.end());

    bars::GridModule m;
    m.coords = g.coords;
    m.grid = grid;
    m.prime = d.prime();

    if (flavor == Flavor::left) {
        std::vector<LeftState> states;
        states.reserve(grid.size());
        for (double beta : grid) {
            SpaceTimePoint q{w, beta, -1};
            LeftState st{KanValue{}, spacetime::past_light_cone(q, g)};
            st.value = colimit(st.cone, d);
            states.push_back(std::move(st));
        }
        for (const auto& st : states) m.dims.push_back(st.value.dim);
        for (size_t i = 0; i + 1 < states.size(); ++i)
            m.maps.push_back(left_transition(states[i], states[i + 1], d));
    } else if (flavor == Flavor::right) {
        std::vector<KanValue> values;
        values.reserve(grid.size());
        for (double beta : grid)
            values.push_back(limit(spacetime::future_light_cone(SpaceTimePoint{w, beta, -1}, g), d));
        for (const auto& v : values) m.dims.push_back(v.dim);
        for (size_t i = 0; i + 1 < values.size(); ++i)
            m.maps.push_back(right_transition(values[i], values[i + 1], d));
    } else {
        // Center: restrict the right-side transitions to the image subspaces;
        // naturality of the canonical map is asserted along the way.
        std::vector<LeftState> lefts;
        std::vector<KanValue> rights;
        std::vector<Matrix> factors;
        for (double beta : grid) {
            SpaceTimePoint q{w, beta, -1};
            LeftState st{KanValue{}, spacetime::past_light_cone(q, g)};
            st.value = colimit(st.cone, d);
            rights.push_back(limit(spacetime::future_light_cone(q, g), d));
            factors.push_back(canonical_factor(st.value, rights.back(), d));
            lefts.push_back(std::move(st));
        }
        std::vector<Matrix> images;
        for (size_t i = 0; i < grid.size(); ++i) {
            images.push_back(linalg::image_basis(factors[i]));
            m.dims.push_back(images.back().cols());
        }
        for (size_t i = 0; i + 1 < grid.size(); ++i) {
            Matrix u = left_transition(lefts[i], lefts[i + 1], d);
            Matrix r = right_transition(rights[i], rights[i + 1], d);
            // Naturality square of the canonical map.
            if (!(factors[i + 1] * u == r * factors[i]))
                throw std::logic_error("canonical map is not natural across the query grid");
            Matrix moved = r * images[i];
            auto sol = linalg::solve_in_image(images[i + 1], moved);
            if (!sol) throw std::logic_error("center image does not land in the next image");
            m.maps.push_back(std::move(*sol));
        }
    }
    m.validate();
    return m;
}

CoherenceReport check_coherence(const VectDiagram& d) {
    CoherenceReport report;
    const auto& gens = d.generators();
    std::vector<std::vector<int>> out_of(d.grid().point_count());
    for (size_t i = 0; i < gens.size(); ++i) out_of[gens[i].first].push_back(static_cast<int>(i));

    // All two-step composites with the same endpoints must agree, and agree
    // with a direct generator when one exists.
    std::map<std::pair<int, int>, std::pair<Matrix, int>> seen;
    auto record = [&](int p, int r, const Matrix& m, int via) {
        auto key = std::make_pair(p, r);
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(key, std::make_pair(m, via));
        } else if (!(it->second.first == m)) {
            report.violations.push_back({via, p, r});
        }
    };
    for (size_t e1 = 0; e1 < gens.size(); ++e1) {
        int p = gens[e1].first, q = gens[e1].second;
        for (int e2 : out_of[q]) {
            int r = gens[e2].second;
            Matrix comp = d.generator_arrows()[e2] * d.generator_arrows()[e1];
            if (r == p) {
                // Round trips are endomorphisms of a thin object: identity.
                if (!(comp == Matrix::identity(d.dim(p), d.prime())))
                    report.violations.push_back({q, p, r});
                continue;
            }
            record(p, r, comp, q);
        }
    }
    for (size_t e = 0; e < gens.size(); ++e)
        record(gens[e].first, gens[e].second, d.generator_arrows()[e], gens[e].first);
    return report;
}

}  // namespace pht::kan
