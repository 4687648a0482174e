#include "pht/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pht::spacetime {

SampleGrid::SampleGrid(geom::DirectionSet dirs, std::vector<double> params_in, geom::Coords c)
    : directions(std::move(dirs)), params(std::move(params_in)), coords(c) {
    if (directions.metric() != geom::metric_for(c))
        throw std::invalid_argument("coordinate system and sphere metric must match");
    double lo = geom::param_inf(c), hi = geom::param_sup(c);
    for (double p : params)
        if (p < lo - geom::kEps || p > hi + geom::kEps)
            throw std::invalid_argument("filtration value outside index interval");
    params.push_back(hi);  // sup X always belongs to the grid
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end(),
                             [](double a, double b) { return std::abs(a - b) < geom::kEps; }),
                 params.end());
}

double SampleGrid::epsilon_directions() const { return geom::hausdorff_to_sphere(directions); }

double SampleGrid::epsilon_params() const {
    double e = params.front() - geom::param_inf(coords);
    for (size_t i = 1; i < params.size(); ++i) e = std::max(e, params[i] - params[i - 1]);
    return e;
}

bool leq(const SpaceTimePoint& p, const SpaceTimePoint& q, geom::SphereMetric m, double sup_param) {
    if (q.param >= sup_param - geom::kEps) return true;  // formal top morphism
    return p.param + geom::sphere_distance(p.dir, q.dir, m) <= q.param + geom::kEps;
}

namespace {

// Chains: per direction, the sorted (param value, member index) pairs present
// in a cone (or in the whole grid). The structural generating set is built
// from these lists alone.
struct Chains {
    std::vector<std::vector<std::pair<double, int>>> per_dir;  // ascending params
};

std::vector<Generator> structural_generators(const Chains& chains,
                                             const geom::DirectionSet& dirs,
                                             double sup_param) {
    std::vector<Generator> gens;
    const int nd = static_cast<int>(chains.per_dir.size());
    // Consecutive steps within a chain.
    for (const auto& chain : chains.per_dir)
        for (size_t k = 0; k + 1 < chain.size(); ++k)
            gens.push_back({chain[k].second, chain[k + 1].second});
    // Minimal cross-direction steps: for each target, only the latest source.
    for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < nd; ++j) {
            if (i == j || chains.per_dir[i].empty() || chains.per_dir[j].empty()) continue;
            double d = geom::sphere_distance(dirs[i], dirs[j], dirs.metric());
            const auto& ci = chains.per_dir[i];
            const auto& cj = chains.per_dir[j];
            int last_target = -1;
            int pending_src = -1;
            for (const auto& [t, src] : ci) {
                auto it = std::lower_bound(cj.begin(), cj.end(),
                                           std::make_pair(t + d - geom::kEps, -1));
                if (it == cj.end()) break;
                int tgt = static_cast<int>(it - cj.begin());
                if (tgt != last_target && pending_src >= 0)
                    gens.push_back({pending_src, cj[last_target].second});
                last_target = tgt;
                pending_src = src;
            }
            if (pending_src >= 0) gens.push_back({pending_src, cj[last_target].second});
        }
    }
    // Symmetric cycle among top-slice members, so mutually isomorphic top
    // points are identified by any colimit over them.
    std::vector<int> tops;
    for (const auto& chain : chains.per_dir)
        if (!chain.empty() && chain.back().first >= sup_param - geom::kEps)
            tops.push_back(chain.back().second);
    if (tops.size() > 1) {
        for (size_t k = 0; k < tops.size(); ++k)
            gens.push_back({tops[k], tops[(k + 1) % tops.size()]});
    }
    return gens;
}

LightCone build_cone(LightCone::Flavor flavor, const SpaceTimePoint& q, const SampleGrid& g) {
    LightCone cone;
    cone.flavor = flavor;
    cone.query = q;
    const double sup = g.sup_param();
    const auto& T = g.params;
    Chains chains;
    chains.per_dir.resize(g.dir_count());

    for (int i = 0; i < g.dir_count(); ++i) {
        double d = geom::sphere_distance(g.directions[i], q.dir, g.metric());
        if (flavor == LightCone::Flavor::past) {
            bool top_query = q.param >= sup - geom::kEps;
            for (int k = 0; k < g.param_count(); ++k) {
                bool strict = T[k] + d <= q.param + geom::kEps;
                if (strict || top_query) {
                    int idx = static_cast<int>(cone.members.size());
                    cone.members.push_back({i, k, strict});
                    chains.per_dir[i].push_back({T[k], idx});
                }
            }
        } else {
            for (int k = 0; k < g.param_count(); ++k) {
                bool strict = q.param + d <= T[k] + geom::kEps;
                bool formal_top = k == g.param_count() - 1;  // top slice always present
                if (strict || formal_top) {
                    int idx = static_cast<int>(cone.members.size());
                    cone.members.push_back({i, k, strict});
                    chains.per_dir[i].push_back({T[k], idx});
                }
            }
        }
    }
    cone.generators = structural_generators(chains, g.directions, sup);
    return cone;
}

}  // namespace

LightCone past_light_cone(const SpaceTimePoint& q, const SampleGrid& g) {
    return build_cone(LightCone::Flavor::past, q, g);
}

LightCone future_light_cone(const SpaceTimePoint& q, const SampleGrid& g) {
    return build_cone(LightCone::Flavor::future, q, g);
}

bool is_connected(const LightCone& c) {
    if (c.members.empty()) return true;
    std::vector<int> uf(c.members.size());
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int a) {
        while (uf[a] != a) { uf[a] = uf[uf[a]]; a = uf[a]; }
        return a;
    };
    for (const auto& gen : c.generators) uf[find(gen.src)] = find(gen.dst);
    int root = find(0);
    for (size_t i = 1; i < c.members.size(); ++i)
        if (find(static_cast<int>(i)) != root) return false;
    return true;
}

LightCone cofinal_reduction(const LightCone& c) {
    if (c.flavor != LightCone::Flavor::past)
        throw std::invalid_argument("cofinal reduction applies to past light cones");
    if (c.members.size() <= 1) return c;

    // The grid is not available here, so compare members through the stored
    // (dir, par) data of the query's grid snapshot: reconstruct leq from the
    // generators' transitive closure instead of the metric.
    const int n = static_cast<int>(c.members.size());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) reach[i][i] = 1;
    for (const auto& g : c.generators) reach[g.src][g.dst] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (int j = 0; j < n; ++j)
                if (reach[k][j]) reach[i][j] = 1;
        }

    auto strictly_below = [&](int a, int b) { return reach[a][b] && !reach[b][a]; };

    std::vector<int> maximal;
    for (int i = 0; i < n; ++i) {
        bool is_max = true;
        for (int j = 0; j < n && is_max; ++j)
            if (j != i && strictly_below(i, j)) is_max = false;
        if (is_max) maximal.push_back(i);
    }

    std::vector<char> keep(n, 0);
    for (int m : maximal) keep[m] = 1;
    for (size_t a = 0; a < maximal.size(); ++a) {
        for (size_t b = a + 1; b < maximal.size(); ++b) {
            std::vector<int> common;
            for (int i = 0; i < n; ++i)
                if (reach[i][maximal[a]] && reach[i][maximal[b]]) common.push_back(i);
            for (int i : common) {
                bool top_of_common = true;
                for (int j : common)
                    if (j != i && strictly_below(i, j)) { top_of_common = false; break; }
                if (top_of_common) keep[i] = 1;
            }
        }
    }

    int kept = std::accumulate(keep.begin(), keep.end(), 0);
    if (kept == n) return c;

    LightCone out;
    out.flavor = c.flavor;
    out.query = c.query;
    std::vector<int> new_index(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        new_index[i] = static_cast<int>(out.members.size());
        out.members.push_back(c.members[i]);
    }
    // Generators of the reduced cone: group kept members into isomorphism
    // classes (mutual reachability), take Hasse edges of the class order, and
    // keep a cycle inside every nontrivial class.
    std::vector<int> kept_ids;
    for (int i = 0; i < n; ++i)
        if (keep[i]) kept_ids.push_back(i);
    const int m = static_cast<int>(kept_ids.size());
    std::vector<int> cls(m, -1);
    int n_cls = 0;
    for (int a = 0; a < m; ++a) {
        if (cls[a] >= 0) continue;
        cls[a] = n_cls;
        for (int b = a + 1; b < m; ++b)
            if (reach[kept_ids[a]][kept_ids[b]] && reach[kept_ids[b]][kept_ids[a]]) cls[b] = n_cls;
        ++n_cls;
    }
    std::vector<std::vector<int>> class_members(n_cls);
    for (int a = 0; a < m; ++a) class_members[cls[a]].push_back(kept_ids[a]);
    for (const auto& members : class_members) {
        for (size_t k = 0; members.size() > 1 && k < members.size(); ++k)
            out.generators.push_back({new_index[members[k]],
                                      new_index[members[(k + 1) % members.size()]]});
    }
    auto class_reach = [&](int ca, int cb) {
        return reach[class_members[ca].front()][class_members[cb].front()] != 0;
    };
    for (int ca = 0; ca < n_cls; ++ca) {
        for (int cb = 0; cb < n_cls; ++cb) {
            if (ca == cb || !class_reach(ca, cb)) continue;
            bool hasse = true;
            for (int ck = 0; ck < n_cls && hasse; ++ck)
                if (ck != ca && ck != cb && class_reach(ca, ck) && class_reach(ck, cb)) hasse = false;
            if (hasse)
                out.generators.push_back({new_index[class_members[ca].front()],
                                          new_index[class_members[cb].front()]});
        }
    }
    return out;
}

std::vector<std::pair<int, int>> diagram_generators(const SampleGrid& g) {
    Chains chains;
    chains.per_dir.resize(g.dir_count());
    for (int i = 0; i < g.dir_count(); ++i)
        for (int k = 0; k < g.param_count(); ++k)
            chains.per_dir[i].push_back({g.params[k], g.point_id(i, k)});
    auto gens = structural_generators(chains, g.directions, g.sup_param());
    std::vector<std::pair<int, int>> out;
    out.reserve(gens.size());
    for (const auto& gen : gens) out.emplace_back(gen.src, gen.dst);
    return out;
}

}  // namespace pht::spacetime
