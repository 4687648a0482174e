#pragma once

// Test-only oracles, independent of the code paths they certify, plus random
// object generators shared by the suites.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "pht/barcodes.hpp"
#include "pht/geometry.hpp"
#include "pht/homology.hpp"
#include "pht/kan.hpp"
#include "pht/linalg.hpp"
#include "pht/spacetime.hpp"

namespace support {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// A self-contained GF(p) rank, written against int64 matrices so the oracle
// does not share the production elimination code.

inline int oracle_rank(std::vector<std::vector<int64_t>> m, int64_t p) {
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : 0;
    auto norm = [&](int64_t v) { return ((v % p) + p) % p; };
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (norm(m[r][c]) != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        // Scale pivot row to 1 via Fermat inverse.
        int64_t inv = 1, base = norm(m[rank][c]), e = p - 2;
        while (e) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        for (auto& v : m[rank]) v = norm(v) * inv % p;
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            int64_t f = norm(m[r][c]);
            if (!f) continue;
            for (int j = 0; j < cols; ++j) m[r][j] = norm(m[r][j] - f * m[rank][j]);
        }
        ++rank;
    }
    return rank;
}

// Homology dimension from scratch: dim ker d_n - rank d_{n+1}.
inline int oracle_homology_dim(const pht::homology::Subcomplex& s, int degree, int64_t p) {
    const auto& parent = s.parent();
    auto boundary = [&](int deg) {
        std::vector<std::vector<int64_t>> m;
        int rows = deg >= 1 ? parent.count_of_dim(deg - 1) : 0;
        std::vector<int> cols;
        int first = parent.first_of_dim(deg);
        for (int id = first; id < first + parent.count_of_dim(deg); ++id)
            if (s.includes(id)) cols.push_back(id);
        m.assign(std::max(rows, 1), std::vector<int64_t>(cols.size(), 0));
        if (deg >= 1) {
            int row_first = parent.first_of_dim(deg - 1);
            for (size_t j = 0; j < cols.size(); ++j)
                for (auto [face, sign] : parent.faces_of(cols[j]))
                    m[face - row_first][j] = sign;
        }
        if (rows == 0) m.assign(1, std::vector<int64_t>(cols.size(), 0));
        return std::make_pair(m, static_cast<int>(cols.size()));
    };
    auto [dn, n_count] = boundary(degree);
    int rank_dn = degree == 0 ? 0 : oracle_rank(dn, p);
    auto [dup, up_count] = boundary(degree + 1);
    (void)up_count;
    int rank_dup = oracle_rank(dup, p);
    return (n_count - rank_dn) - rank_dup;
}

// ---------------------------------------------------------------------------
// Brute-force Kan values: difference maps over all members and all morphism
// pairs of the cone, with no chain elimination and no generator pruning.

inline bool members_leq(const pht::spacetime::LightCone& c, const pht::spacetime::SampleGrid& g,
                        int a, int b) {
    const auto& ma = c.members[a];
    const auto& mb = c.members[b];
    return pht::spacetime::leq({g.directions[ma.dir], g.params[ma.par], ma.dir},
                               {g.directions[mb.dir], g.params[mb.par], mb.dir}, g.metric(),
                               g.sup_param());
}

inline int colimit_dim_bruteforce(const pht::spacetime::LightCone& c,
                                  const pht::kan::VectDiagram& d) {
    const auto& g = d.grid();
    const int n = static_cast<int>(c.members.size());
    std::vector<int> offset(n + 1, 0);
    auto pt = [&](int i) { return g.point_id(c.members[i].dir, c.members[i].par); };
    for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + d.dim(pt(i));
    int cols = 0;
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !members_leq(c, g, a, b)) continue;
            pairs.emplace_back(a, b);
            cols += d.dim(pt(a));
        }
    pht::linalg::Matrix D(offset[n], cols, d.prime());
    pht::linalg::Field f(d.prime());
    int c0 = 0;
    for (auto [a, b] : pairs) {
        pht::linalg::Matrix arr = d.arrow(pt(a), pt(b));
        for (int j = 0; j < arr.cols(); ++j) D.set(offset[a] + j, c0 + j, f.neg(1));
        for (int r = 0; r < arr.rows(); ++r)
            for (int j = 0; j < arr.cols(); ++j)
                D.set(offset[b] + r, c0 + j, f.add(D.at(offset[b] + r, c0 + j), arr.at(r, j)));
        c0 += arr.cols();
    }
    return offset[n] - pht::linalg::rank(D);
}

inline int limit_dim_bruteforce(const pht::spacetime::LightCone& c,
                                const pht::kan::VectDiagram& d) {
    const auto& g = d.grid();
    // Strict members and strict (inequality) morphisms only.
    std::vector<int> strict;
    for (int i = 0; i < static_cast<int>(c.members.size()); ++i)
        if (c.members[i].strict) strict.push_back(i);
    const int n = static_cast<int>(strict.size());
    auto pt = [&](int i) { return g.point_id(c.members[strict[i]].dir, c.members[strict[i]].par); };
    auto strict_leq = [&](int a, int b) {
        const auto& ma = c.members[strict[a]];
        const auto& mb = c.members[strict[b]];
        double dist =
            pht::geom::sphere_distance(g.directions[ma.dir], g.directions[mb.dir], g.metric());
        return g.params[ma.par] + dist <= g.params[mb.par] + pht::geom::kEps;
    };
    std::vector<int> offset(n + 1, 0);
    for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + d.dim(pt(i));
    std::vector<std::pair<int, int>> pairs;
    int rows = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !strict_leq(a, b)) continue;
            pairs.emplace_back(a, b);
            rows += d.dim(pt(b));
        }
    pht::linalg::Matrix D(rows, offset[n], d.prime());
    pht::linalg::Field f(d.prime());
    int r0 = 0;
    for (auto [a, b] : pairs) {
        pht::linalg::Matrix arr = d.arrow(pt(a), pt(b));
        for (int r = 0; r < arr.rows(); ++r)
            for (int j = 0; j < arr.cols(); ++j) D.set(r0 + r, offset[a] + j, arr.at(r, j));
        for (int r = 0; r < arr.rows(); ++r)
            D.set(r0 + r, offset[b] + r, f.sub(D.at(r0 + r, offset[b] + r), 1));
        r0 += arr.rows();
    }
    return offset[n] - pht::linalg::rank(D);
}

// ---------------------------------------------------------------------------
// Random grid modules synthesized from known bars, optionally hidden behind
// random changes of basis.

struct BarSpec {
    int birth_index;
    int last_index;  // last grid index alive; == last grid point means capped
};

inline pht::bars::GridModule module_from_bars(const std::vector<BarSpec>& bars,
                                              const std::vector<double>& grid,
                                              pht::geom::Coords coords, uint32_t prime) {
    pht::bars::GridModule m;
    m.coords = coords;
    m.grid = grid;
    m.prime = prime;
    const int n = static_cast<int>(grid.size());
    for (int i = 0; i < n; ++i) {
        int dim = 0;
        for (const auto& b : bars)
            if (b.birth_index <= i && i <= b.last_index) ++dim;
        m.dims.push_back(dim);
    }
    for (int i = 0; i + 1 < n; ++i) {
        pht::linalg::Matrix t(m.dims[i + 1], m.dims[i], prime);
        int src = 0;
        for (const auto& b : bars) {
            if (!(b.birth_index <= i && i <= b.last_index)) continue;
            if (b.birth_index <= i + 1 && i + 1 <= b.last_index) {
                // Row index of this bar at i+1: count alive bars before it.
                int dst = 0;
                for (const auto& b2 : bars) {
                    if (&b2 == &b) break;
                    if (b2.birth_index <= i + 1 && i + 1 <= b2.last_index) ++dst;
                }
                t.set(dst, src, 1);
            }
            ++src;
        }
        m.maps.push_back(std::move(t));
    }
    m.validate();
    return m;
}

inline pht::linalg::Matrix random_invertible(std::mt19937_64& rng, int n, uint32_t prime) {
    if (n == 0) return pht::linalg::Matrix(0, 0, prime);
    std::uniform_int_distribution<uint32_t> coin(0, prime - 1);
    while (true) {
        pht::linalg::Matrix m(n, n, prime);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m.set(r, c, coin(rng));
        if (pht::linalg::rank(m) == n) return m;
    }
}

inline pht::linalg::Matrix inverse_of(const pht::linalg::Matrix& m) {
    auto sol = pht::linalg::solve_in_image(m, pht::linalg::Matrix::identity(m.rows(), m.prime()));
    return *sol;
}

// Conjugates each space by a random invertible matrix; the isomorphism class
// (and hence the barcode) is unchanged.
inline pht::bars::GridModule scramble_bases(std::mt19937_64& rng, const pht::bars::GridModule& m) {
    pht::bars::GridModule out = m;
    std::vector<pht::linalg::Matrix> bases;
    for (int dim : m.dims) bases.push_back(random_invertible(rng, dim, m.prime));
    for (size_t i = 0; i + 1 < m.dims.size(); ++i)
        out.maps[i] = bases[i + 1] * m.maps[i] * inverse_of(bases[i]);
    out.validate();
    return out;
}

inline pht::bars::GridModule random_module(std::mt19937_64& rng, const std::vector<double>& grid,
                                           pht::geom::Coords coords, int max_bars, uint32_t prime,
                                           std::vector<BarSpec>* out_bars = nullptr) {
    std::uniform_int_distribution<int> nbars(0, max_bars);
    std::uniform_int_distribution<int> idx(0, static_cast<int>(grid.size()) - 1);
    std::vector<BarSpec> bars;
    int n = nbars(rng);
    for (int i = 0; i < n; ++i) {
        int a = idx(rng), b = idx(rng);
        if (a > b) std::swap(a, b);
        bars.push_back({a, b});
    }
    if (out_bars) *out_bars = bars;
    return scramble_bases(rng, module_from_bars(bars, grid, coords, prime));
}

// ---------------------------------------------------------------------------
// Interleaving oracle: smallest eps among the candidates for which a pair of
// natural transformations with the capped-shift triangle identities exists.
// Works over GF(2); Phi ranges over its whole homomorphism space and Psi is
// found by linear solving.

namespace detail {

using pht::linalg::Matrix;

struct Unknowns {
    // Per grid index x: the component U(x) -> V(shift(x)) is a dim_v x dim_u
    // block; offsets flatten all entries into one vector.
    std::vector<int> offset;
    int total = 0;
};

inline Unknowns layout(const std::vector<int>& du, const std::vector<int>& dv,
                       const std::vector<int>& shift) {
    Unknowns u;
    u.offset.assign(du.size() + 1, 0);
    for (size_t x = 0; x < du.size(); ++x)
        u.offset[x + 1] = u.offset[x] + du[x] * dv[shift[x]];
    u.total = u.offset.back();
    return u;
}

// Index of entry (r, c) of the component at grid index x.
inline int entry(const Unknowns& u, const std::vector<int>& du, const std::vector<int>& dv,
                 const std::vector<int>& shift, int x, int r, int c) {
    (void)dv;
    (void)shift;
    return u.offset[x] + r * du[x] + c;
}

// Rows expressing naturality of a transformation U => V o shift with the
// internal maps of U and V.
inline std::vector<std::vector<uint32_t>> naturality_rows(
    const pht::bars::GridModule& U, const pht::bars::GridModule& V, const std::vector<int>& shift,
    const Unknowns& u) {
    std::vector<std::vector<uint32_t>> rows;
    const int n = U.size();
    auto v_map = [&](int from, int to) {  // composite V(from) -> V(to)
        Matrix acc = Matrix::identity(V.dims[from], V.prime);
        for (int k = from; k < to; ++k) acc = V.maps[k] * acc;
        return acc;
    };
    for (int x = 0; x + 1 < n; ++x) {
        // V(s(x)->s(x+1)) Phi_x = Phi_{x+1} U(x->x+1)
        Matrix vm = v_map(shift[x], shift[x + 1]);
        const Matrix& um = U.maps[x];
        int rows_dim = V.dims[shift[x + 1]], cols_dim = U.dims[x];
        for (int r = 0; r < rows_dim; ++r) {
            for (int c = 0; c < cols_dim; ++c) {
                std::vector<uint32_t> row(u.total + 1, 0);
                for (int k = 0; k < V.dims[shift[x]]; ++k)
                    row[entry(u, U.dims, V.dims, shift, x, k, c)] ^= vm.at(r, k);
                for (int k = 0; k < U.dims[x + 1]; ++k)
                    row[entry(u, U.dims, V.dims, shift, x + 1, r, k)] ^= um.at(k, c);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

inline std::optional<Matrix> solve_gf2(std::vector<std::vector<uint32_t>> rows, int unknowns) {
    // Gaussian elimination on an augmented system; returns one solution.
    int rank = 0;
    std::vector<int> pivot_of_col(unknowns, -1);
    for (int c = 0; c < unknowns && rank < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][c]) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r != rank && rows[r][c]) {
                for (int j = c; j <= unknowns; ++j) rows[r][j] ^= rows[rank][j];
            }
        }
        pivot_of_col[c] = rank;
        ++rank;
    }
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        bool all_zero = true;
        for (int c = 0; c < unknowns; ++c)
            if (rows[r][c]) { all_zero = false; break; }
        if (all_zero && rows[r][unknowns]) return std::nullopt;
    }
    Matrix x(unknowns, 1, 2);
    for (int c = 0; c < unknowns; ++c)
        if (pivot_of_col[c] >= 0) x.set(c, 0, rows[pivot_of_col[c]][unknowns]);
    return x;
}

}  // namespace detail

// Returns the smallest feasible epsilon from `candidates` (sorted ascending),
// or infinity. U and V must share a uniform grid; every candidate must map
// grid points to grid points under the capped shift.
inline double oracle_interleaving(const pht::bars::GridModule& U, const pht::bars::GridModule& V,
                                  const std::vector<double>& candidates) {
    using detail::entry;
    using detail::layout;
    using pht::linalg::Matrix;
    const int n = U.size();
    const double sup = U.grid.back();

    auto shift_indices = [&](double eps) {
        std::vector<int> s(n, n - 1);
        for (int x = 0; x < n; ++x) {
            double target = std::min(U.grid[x] + eps, sup);
            for (int y = x; y < n; ++y)
                if (std::abs(U.grid[y] - target) < 1e-7) { s[x] = y; break; }
        }
        return s;
    };
    auto composite = [&](const pht::bars::GridModule& M, int from, int to) {
        Matrix acc = Matrix::identity(M.dims[from], M.prime);
        for (int k = from; k < to; ++k) acc = M.maps[k] * acc;
        return acc;
    };

    auto feasible_at = [&](double eps) {
        std::vector<int> s = shift_indices(eps);
        std::vector<int> s2 = shift_indices(2 * eps);
        // Hom space of Phi: U => V T_eps.
        auto u_phi = layout(U.dims, V.dims, s);
        auto nat_phi = detail::naturality_rows(U, V, s, u_phi);
        for (auto& row : nat_phi) row.back() = 0;
        // Kernel via solving homogeneous system for a basis: collect the free
        // coordinates by elimination on the production routine.
        Matrix phi_sys(static_cast<int>(nat_phi.size()), u_phi.total, 2);
        for (size_t r = 0; r < nat_phi.size(); ++r)
            for (int c = 0; c < u_phi.total; ++c)
                phi_sys.set(static_cast<int>(r), c, nat_phi[r][c]);
        Matrix phi_basis = pht::linalg::kernel_basis(phi_sys);
        int h = phi_basis.cols();
        if (h > 18) throw std::runtime_error("oracle hom space too large to enumerate");

        auto u_psi = layout(V.dims, U.dims, s);
        auto nat_psi = detail::naturality_rows(V, U, s, u_psi);

        bool found = false;
        for (uint64_t mask = 0; mask < (1ull << h) && !found; ++mask) {
            // Phi = combination of the hom basis.
            std::vector<uint32_t> phi(u_phi.total, 0);
            for (int b = 0; b < h; ++b)
                if (mask & (1ull << b))
                    for (int i = 0; i < u_phi.total; ++i) phi[i] ^= phi_basis.at(i, b);

            // Linear system for Psi: naturality + both triangle identities.
            std::vector<std::vector<uint32_t>> rows = nat_psi;
            // Psi_{s(x)} Phi_x = U(x -> s2(x)).
            for (int x = 0; x < n; ++x) {
                Matrix sigma = composite(U, x, s2[x]);
                // Components: Psi at grid index s(x) maps V(s(x)) -> U(s(s(x))).
                // Under the capped shift s(s(x)) == s2(x).
                for (int r = 0; r < U.dims[s2[x]]; ++r) {
                    for (int c = 0; c < U.dims[x]; ++c) {
                        std::vector<uint32_t> row(u_psi.total + 1, 0);
                        for (int k = 0; k < V.dims[s[x]]; ++k) {
                            uint32_t phi_kc =
                                phi[entry(u_phi, U.dims, V.dims, s, x, k, c)];
                            if (phi_kc)
                                row[entry(u_psi, V.dims, U.dims, s, s[x], r, k)] ^= phi_kc;
                        }
                        row[u_psi.total] = sigma.at(r, c);
                        rows.push_back(std::move(row));
                    }
                }
            }
            // Phi_{s(x)} Psi_x = V(x -> s2(x)).
            for (int x = 0; x < n; ++x) {
                Matrix sigma = composite(V, x, s2[x]);
                for (int r = 0; r < V.dims[s2[x]]; ++r) {
                    for (int c = 0; c < V.dims[x]; ++c) {
                        std::vector<uint32_t> row(u_psi.total + 1, 0);
                        for (int k = 0; k < U.dims[s[x]]; ++k) {
                            uint32_t phi_rk =
                                phi[entry(u_phi, U.dims, V.dims, s, s[x], r, k)];
                            if (phi_rk)
                                row[entry(u_psi, V.dims, U.dims, s, x, k, c)] ^= phi_rk;
                        }
                        row[u_psi.total] = sigma.at(r, c);
                        rows.push_back(std::move(row));
                    }
                }
            }
            if (detail::solve_gf2(std::move(rows), u_psi.total)) found = true;
        }
        return found;
    };

    // Feasibility is monotone in eps (compose with the canonical shifts), so
    // the smallest feasible candidate is found by binary search.
    int lo = 0, hi = static_cast<int>(candidates.size()) - 1;
    if (hi < 0 || !feasible_at(candidates[hi]))
        return std::numeric_limits<double>::infinity();
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (feasible_at(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

// ---------------------------------------------------------------------------
// Random small complexes for functoriality / nesting properties.

inline pht::geom::EmbeddedComplex random_complex(std::mt19937_64& rng, int max_vertices = 8) {
    std::uniform_int_distribution<int> nv(1, max_vertices);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 3);
    int n = nv(rng);
    std::vector<std::array<double, 3>> verts;
    for (int i = 0; i < n; ++i) verts.push_back({coord(rng), coord(rng), 0.0});
    std::vector<std::vector<int>> simplices;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) == 0) simplices.push_back({i, j});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (coin(rng) == 0 && coin(rng) == 0) simplices.push_back({i, j, k});
    auto complex = pht::geom::EmbeddedComplex(2, std::move(verts), simplices, "random");
    return pht::geom::rescale_to_unit_disk(complex);
}

}  // namespace support
