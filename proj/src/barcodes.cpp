#include "pht/barcodes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace pht::bars {

using linalg::Matrix;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void GridModule::validate() const {
    if (grid.empty()) throw std::invalid_argument("grid module needs at least one grid point");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("grid values must be sorted");
    if (std::abs(grid.back() - geom::param_sup(coords)) > geom::kEps)
        throw std::invalid_argument("grid must contain sup X as its last value");
    if (dims.size() != grid.size()) throw std::invalid_argument("dimension list size mismatch");
    if (maps.size() + 1 != grid.size()) throw std::invalid_argument("transition map count mismatch");
    for (size_t i = 0; i < maps.size(); ++i)
        if (maps[i].cols() != dims[i] || maps[i].rows() != dims[i + 1])
            throw std::invalid_argument("transition map shape mismatch");
}

Barcode decompose(const GridModule& m) {
    m.validate();
    const int n = m.size();
    // Ranks of all composite transition maps. rank[i][j] = rank of V_i -> V_j.
    std::vector<std::vector<int>> rk(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
        rk[i][i] = m.dims[i];
        if (i + 1 > n - 1) continue;
        Matrix acc = Matrix::identity(m.dims[i], m.prime);
        for (int j = i + 1; j < n; ++j) {
            acc = m.maps[j - 1] * acc;
            rk[i][j] = linalg::rank(acc);
        }
    }
    auto r = [&](int i, int j) {
        if (i < 0 || j > n - 1) return 0;
        return rk[i][j];
    };

    Barcode out;
    out.coords = m.coords;
    // Number of bars alive exactly on [i..j] by inclusion-exclusion of the
    // containment counts; the structure theorem keeps these nonnegative.
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            int count = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1);
            if (count < 0)
                throw std::logic_error("negative interval multiplicity: input is not a module");
            for (int c = 0; c < count; ++c) {
                Bar b;
                b.birth = m.grid[i];
                b.reaches_cap = (j == n - 1);
                b.death = b.reaches_cap ? m.grid[n - 1] : m.grid[j + 1];
                out.bars.push_back(b);
            }
        }
    }
    return out;
}

namespace {

// Feasibility of a bottleneck matching at cost eps: cap bars must pair within
// |birth difference| <= eps, finite bars pair within max-coordinate distance
// or die alone at half length. Small sizes; Kuhn's augmenting paths suffice.
struct MatchProblem {
    std::vector<const Bar*> fin_a, fin_b, cap_a, cap_b;
};

bool bipartite_perfect(const std::vector<std::vector<int>>& adj, int n_right) {
    int n_left = static_cast<int>(adj.size());
    std::vector<int> match_right(n_right, -1);
    std::vector<char> used;
    std::function<bool(int)> try_kuhn = [&](int u) -> bool {
        for (int v : adj[u]) {
            if (used[v]) continue;
            used[v] = 1;
            if (match_right[v] < 0 || try_kuhn(match_right[v])) {
                match_right[v] = u;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < n_left; ++u) {
        used.assign(n_right, 0);
        if (!try_kuhn(u)) return false;
    }
    return true;
}

bool feasible(const MatchProblem& p, double eps) {
    // Cap side: perfect matching on birth distances.
    {
        int n = static_cast<int>(p.cap_a.size());
        std::vector<std::vector<int>> adj(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (std::abs(p.cap_a[i]->birth - p.cap_b[j]->birth) <= eps + geom::kEps)
                    adj[i].push_back(j);
        if (!bipartite_perfect(adj, n)) return false;
    }
    // Finite side with deletion dummies.
    {
        int na = static_cast<int>(p.fin_a.size());
        int nb = static_cast<int>(p.fin_b.size());
        int n = na + nb;  // left: bars of a then dummies; right: bars of b then dummies
        std::vector<std::vector<int>> adj(n);
        auto deletable = [&](const Bar* b) {
            return (b->death - b->birth) / 2.0 <= eps + geom::kEps;
        };
        for (int i = 0; i < na; ++i) {
            for (int j = 0; j < nb; ++j) {
                double cost = std::max(std::abs(p.fin_a[i]->birth - p.fin_b[j]->birth),
                                       std::abs(p.fin_a[i]->death - p.fin_b[j]->death));
                if (cost <= eps + geom::kEps) adj[i].push_back(j);
            }
            if (deletable(p.fin_a[i]))
                for (int j = nb; j < n; ++j) adj[i].push_back(j);
        }
        for (int i = na; i < n; ++i) {
            for (int j = 0; j < nb; ++j)
                if (deletable(p.fin_b[j])) adj[i].push_back(j);
            for (int j = nb; j < n; ++j) adj[i].push_back(j);  // dummy-dummy is free
        }
        if (!bipartite_perfect(adj, n)) return false;
    }
    return true;
}

}  // namespace

double bottleneck(const Barcode& a, const Barcode& b) {
    if (a.coords != b.coords)
        throw std::invalid_argument("bottleneck of barcodes in different coordinates");
    MatchProblem p;
    for (const Bar& bar : a.bars) (bar.reaches_cap ? p.cap_a : p.fin_a).push_back(&bar);
    for (const Bar& bar : b.bars) (bar.reaches_cap ? p.cap_b : p.fin_b).push_back(&bar);
    // A cap bar is never interleaved with zero under the capped shift, so the
    // counts must agree.
    if (p.cap_a.size() != p.cap_b.size()) return kInf;

    std::vector<double> candidates{0.0};
    for (auto* x : p.cap_a)
        for (auto* y : p.cap_b) candidates.push_back(std::abs(x->birth - y->birth));
    for (auto* x : p.fin_a)
        for (auto* y : p.fin_b)
            candidates.push_back(std::max(std::abs(x->birth - y->birth),
                                          std::abs(x->death - y->death)));
    for (auto* x : p.fin_a) candidates.push_back((x->death - x->birth) / 2.0);
    for (auto* y : p.fin_b) candidates.push_back((y->death - y->birth) / 2.0);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    int lo = 0, hi = static_cast<int>(candidates.size()) - 1;
    if (!feasible(p, candidates[hi])) return kInf;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (feasible(p, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

GridModule refine_to_grid(const GridModule& m, const std::vector<double>& finer) {
    m.validate();
    GridModule out;
    out.coords = m.coords;
    out.grid = finer;
    out.prime = m.prime;
    // Left-constant reading: a refined point carries the value at the largest
    // original grid point at or below it; below the first point the module
    // is zero.
    size_t src = 0;
    std::vector<int> src_of(finer.size(), -1);
    for (size_t i = 0; i < finer.size(); ++i) {
        while (src < m.grid.size() && m.grid[src] <= finer[i] + geom::kEps) ++src;
        src_of[i] = static_cast<int>(src) - 1;
        out.dims.push_back(src_of[i] < 0 ? 0 : m.dims[src_of[i]]);
    }
    for (size_t i = 0; i + 1 < finer.size(); ++i) {
        int s0 = src_of[i], s1 = src_of[i + 1];
        if (s0 < 0) {
            out.maps.push_back(Matrix(out.dims[i + 1], 0, m.prime));
        } else if (s0 == s1) {
            out.maps.push_back(Matrix::identity(out.dims[i], m.prime));
        } else {
            Matrix acc = Matrix::identity(m.dims[s0], m.prime);
            for (int k = s0; k < s1; ++k) acc = m.maps[k] * acc;
            out.maps.push_back(std::move(acc));
        }
    }
    out.validate();
    // Every original grid value must appear in the refinement.
    for (double g : m.grid) {
        bool hit = false;
        for (double x : finer)
            if (std::abs(x - g) < geom::kEps) { hit = true; break; }
        if (!hit) throw std::invalid_argument("refinement grid drops an original value");
    }
    return out;
}

std::vector<double> merged_grid(const GridModule& a, const GridModule& b) {
    std::vector<double> g = a.grid;
    g.insert(g.end(), b.grid.begin(), b.grid.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double x, double y) { return std::abs(x - y) < geom::kEps; }),
            g.end());
    std::vector<double> with_mid = g;
    for (size_t i = 0; i + 1 < g.size(); ++i) with_mid.push_back((g[i] + g[i + 1]) / 2.0);
    std::sort(with_mid.begin(), with_mid.end());
    return with_mid;
}

double interleaving_distance(const GridModule& a, const GridModule& b) {
    if (a.coords != b.coords)
        throw std::invalid_argument("interleaving of modules in different coordinates");
    std::vector<double> common = merged_grid(a, b);
    GridModule ra = refine_to_grid(a, common);
    GridModule rb = refine_to_grid(b, common);
    return bottleneck(decompose(ra), decompose(rb));
}

Barcode reparameterize(const Barcode& a) {
    if (a.coords != geom::Coords::theta)
        throw std::invalid_argument("reparameterize expects angular coordinates");
    Barcode out;
    out.coords = geom::Coords::euclidean;
    for (const Bar& b : a.bars) {
        Bar nb;
        nb.birth = std::cos(b.birth);
        nb.death = std::cos(b.death);
        nb.reaches_cap = b.reaches_cap;
        out.bars.push_back(nb);
    }
    return out;
}

double pht_distance(const geom::DirectionSet& dirs_a, const std::vector<GridModule>& a,
                    const geom::DirectionSet& dirs_b, const std::vector<GridModule>& b) {
    if (dirs_a.size() != dirs_b.size() || a.size() != b.size() ||
        static_cast<int>(a.size()) != dirs_a.size())
        throw std::invalid_argument("direction lists do not match");
    for (int i = 0; i < dirs_a.size(); ++i)
        if (!(dirs_a[i] == dirs_b[i])) throw std::invalid_argument("direction lists do not match");
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, interleaving_distance(a[i], b[i]));
    return worst;
}

}  // namespace pht::bars
