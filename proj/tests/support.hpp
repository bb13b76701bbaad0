#pragma once

// Brute-force oracles for cross-checking the engine on small inputs. Everything
// here is deliberately naive: direct quantifier loops over submask enumerations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "teamdim/setfam.hpp"

namespace brute {

using teamdim::Mask;

inline std::vector<Mask> submasks(Mask a) {
    std::vector<Mask> out;
    Mask s = a;
    while (true) {
        out.push_back(s);
        if (!s) break;
        s = (s - 1) & a;
    }
    return out;
}

inline bool interval_inside(const teamdim::SetFamily& f, Mask a, Mask b) {
    for (Mask c : submasks(b & ~a))
        if (!f.contains(a | c)) return false;
    return true;
}

inline std::set<Mask> shadow(const teamdim::SetFamily& f, Mask apex, bool dual) {
    std::set<Mask> out;
    if (!dual) {
        for (Mask b : submasks(apex))
            if (interval_inside(f, b, apex)) out.insert(b);
    } else {
        for (Mask c : submasks(f.base_mask() & ~apex))
            if (interval_inside(f, apex, apex | c)) out.insert(apex | c);
    }
    return out;
}

inline std::set<Mask> critical(const teamdim::SetFamily& f, bool dual) {
    std::vector<std::set<Mask>> shadows;
    for (Mask m : f.members()) shadows.push_back(shadow(f, m, dual));
    std::set<Mask> out;
    for (std::size_t i = 0; i < shadows.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < shadows.size() && !dominated; ++j) {
            if (i == j) continue;
            if (shadows[i] != shadows[j] &&
                std::includes(shadows[j].begin(), shadows[j].end(), shadows[i].begin(),
                              shadows[i].end()))
                dominated = true;
        }
        if (!dominated) out.insert(f.member(i));
    }
    return out;
}

// smallest k such that some k-subset of `rows` covers all of `universe`; also
// reports the lexicographically least witness (by row index) among minimum covers
// drawn from the given rows.
inline std::size_t min_cover(const std::vector<std::vector<std::size_t>>& rows,
                             std::size_t universe, std::vector<std::size_t>* witness = nullptr) {
    std::size_t n = rows.size();
    for (std::size_t k = 0; k <= n; ++k) {
        // k-subsets tried in lexicographic order of index sequences
        std::vector<std::size_t> idx;
        std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                                std::size_t left) -> bool {
            if (!left) {
                std::vector<bool> cov(universe, false);
                for (auto r : idx)
                    for (auto e : rows[r]) cov[e] = true;
                for (bool b : cov)
                    if (!b) return false;
                return true;
            }
            for (std::size_t i = start; i + left <= n; ++i) {
                idx.push_back(i);
                if (rec(i + 1, left - 1)) return true;
                idx.pop_back();
            }
            return false;
        };
        if (rec(0, k)) {
            if (witness) *witness = idx;
            return k;
        }
    }
    return n + 1;
}

// minimum shadow cover over ALL members (not just critical ones)
inline std::size_t dim_cover(const teamdim::SetFamily& f, bool dual,
                             std::vector<std::size_t>* witness = nullptr) {
    std::vector<std::vector<std::size_t>> rows;
    for (Mask m : f.members()) {
        std::vector<std::size_t> row;
        for (Mask s : shadow(f, m, dual)) row.push_back(f.index_of(s));
        rows.push_back(row);
    }
    return min_cover(rows, f.size(), witness);
}

// minimum cover by intervals inside f; every interval extends to a maximal
// one, so using all of them gives the same minimum as maximal-only
inline std::size_t cyl_cover(const teamdim::SetFamily& f) {
    std::vector<std::vector<std::size_t>> rows;
    for (Mask a : f.members())
        for (Mask b : f.members()) {
            if (!teamdim::subset_of(a, b) || !interval_inside(f, a, b)) continue;
            std::vector<std::size_t> row;
            for (std::size_t j = 0; j < f.size(); ++j)
                if (teamdim::subset_of(a, f.member(j)) && teamdim::subset_of(f.member(j), b))
                    row.push_back(j);
            rows.push_back(row);
        }
    return min_cover(rows, f.size());
}

// smallest subfamily generating f under unions (meet=false) or intersections
// (meet=true); the empty combination yields ∅ resp. the base set
inline std::size_t min_generators(const teamdim::SetFamily& f, bool meet) {
    std::size_t n = f.size();
    auto generates = [&](const std::vector<std::size_t>& idx) {
        std::set<Mask> gen{meet ? f.base_mask() : Mask{0}};
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<Mask> cur(gen.begin(), gen.end());
            for (Mask s : cur)
                for (auto gi : idx) {
                    Mask next = meet ? (s & f.member(gi)) : (s | f.member(gi));
                    if (gen.insert(next).second) grew = true;
                }
        }
        if (gen.size() != f.size()) return false;
        for (Mask g : gen)
            if (!f.contains(g)) return false;
        return true;
    };
    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<std::size_t> idx;
        std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                                std::size_t left) -> bool {
            if (!left) return generates(idx);
            for (std::size_t i = start; i + left <= n; ++i) {
                idx.push_back(i);
                if (rec(i + 1, left - 1)) return true;
                idx.pop_back();
            }
            return false;
        };
        if (rec(0, k)) return k;
    }
    return n + 1;
}

inline teamdim::SetFamily random_family(std::mt19937_64& rng, unsigned base, double density) {
    std::size_t lat = std::size_t{1} << base;
    std::vector<Mask> members;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t m = 0; m < lat; ++m)
        if (u(rng) < density) members.push_back(static_cast<Mask>(m));
    if (members.empty()) members.push_back(static_cast<Mask>(rng() & (lat - 1)));
    return teamdim::SetFamily(teamdim::BaseSet(base), std::move(members));
}

} // namespace brute
