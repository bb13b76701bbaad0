#include "teamdim/dimension.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "shadow_engine.hpp"
#include "teamdim/error.hpp"

namespace teamdim {

namespace {

using detail::LatticeView;

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return static_cast<std::size_t>(b.hash()); }
};

// Exact minimum set cover over rows of member-index bits. Phase one finds the
// optimum size by branch-and-bound; phase two finds the lexicographically
// least cover of that size as an ascending index sequence. Row order is the
// canonical order of whatever the rows stand for, which makes "least" mean
// least witness.
class CoverSolver {
public:
    CoverSolver(std::vector<Bitset> rows, std::size_t universe)
        : rows_(std::move(rows)), universe_(universe) {}

    std::uint32_t optimum() {
        if (universe_ == 0) return 0;
        best_ = greedy();
        Bitset uncovered(universe_);
        uncovered.fill();
        branch(uncovered, 0);
        return best_;
    }

    std::vector<std::size_t> lex_witness(std::uint32_t k) {
        suffix_.assign(rows_.size() + 1, Bitset(universe_));
        for (std::size_t i = rows_.size(); i-- > 0;) {
            suffix_[i] = suffix_[i + 1];
            suffix_[i] |= rows_[i];
        }
        Bitset uncovered(universe_);
        uncovered.fill();
        choice_.clear();
        if (!lex_dfs(uncovered, 0, k))
            throw DomainError("no cover of the claimed optimal size exists");
        return choice_;
    }

private:
    std::uint32_t greedy() {
        Bitset uncovered(universe_);
        uncovered.fill();
        std::uint32_t used = 0;
        while (uncovered.any()) {
            std::size_t pick = Bitset::npos, pick_gain = 0;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                std::size_t gain = (rows_[i] & uncovered).count();
                if (gain > pick_gain) {
                    pick_gain = gain;
                    pick = i;
                }
            }
            if (pick == Bitset::npos)
                throw DomainError("candidate rows do not cover the family");
            uncovered.and_not(rows_[pick]);
            ++used;
        }
        return used;
    }

    void branch(const Bitset& uncovered, std::uint32_t used) {
        if (uncovered.none()) {
            best_ = std::min(best_, used);
            return;
        }
        if (used + 1 >= best_) return;
        if (auto it = seen_.find(uncovered); it != seen_.end() && it->second <= used) return;
        if (seen_.size() < kMemoCap) seen_[uncovered] = used;

        // branch on the uncovered element with the fewest covering rows
        std::size_t elem = Bitset::npos, fan = rows_.size() + 1;
        for (std::size_t e = uncovered.find_first(); e != Bitset::npos;
             e = uncovered.find_next_from(e + 1)) {
            std::size_t c = 0;
            for (const auto& r : rows_)
                if (r.test(e)) ++c;
            if (c < fan) {
                fan = c;
                elem = e;
                if (c <= 1) break;
            }
        }
        if (fan == 0) throw DomainError("candidate rows do not cover the family");
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!rows_[i].test(elem)) continue;
            Bitset next = uncovered;
            next.and_not(rows_[i]);
            branch(next, used + 1);
        }
    }

    // A minimum cover never contains a row disjoint from what is still
    // uncovered, so the skip below cannot skip past the least witness.
    bool lex_dfs(const Bitset& uncovered, std::size_t from, std::uint32_t slots) {
        if (uncovered.none()) return slots == 0;
        if (slots == 0) return false;
        for (std::size_t i = from; i + slots <= rows_.size(); ++i) {
            if (!uncovered.subset_of(suffix_[i])) break;
            if (!uncovered.intersects(rows_[i])) continue;
            choice_.push_back(i);
            Bitset next = uncovered;
            next.and_not(rows_[i]);
            if (lex_dfs(next, i + 1, slots - 1)) return true;
            choice_.pop_back();
        }
        return false;
    }

    static constexpr std::size_t kMemoCap = std::size_t{1} << 20;

    std::vector<Bitset> rows_;
    std::size_t universe_;
    std::uint32_t best_ = 0;
    std::vector<std::size_t> choice_;
    std::vector<Bitset> suffix_;
    std::unordered_map<Bitset, std::uint32_t, BitsetHash> seen_;
};

struct ShadowRows {
    std::vector<std::size_t> candidates; // member indices, ascending
    std::vector<Bitset> rows;            // covered member indices per candidate
};

ShadowRows critical_shadow_rows(const SetFamily& f, const LatticeView& v, bool dual,
                                const DimensionOptions& opt) {
    auto flags = detail::critical_flags(v, dual);
    ShadowRows out;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (flags[i]) out.candidates.push_back(i);
    if (static_cast<std::uint64_t>(out.candidates.size()) * f.size() > opt.max_cover_bits)
        throw CapError("shadow cover matrix exceeds the size budget");
    out.rows.reserve(out.candidates.size());
    for (std::size_t ci : out.candidates) {
        Bitset sh = detail::shadow_bits(v, f.member(ci), dual);
        Bitset row(f.size());
        for (std::size_t j = 0; j < f.size(); ++j)
            if (sh.test(f.member(j))) row.set(j);
        out.rows.push_back(std::move(row));
    }
    return out;
}

void fill_fast(DimensionReport& r, std::uint64_t value, std::vector<Mask> witness,
               const char* detail) {
    r.value = value;
    r.witness = std::move(witness);
    r.path = DimensionPath::fast_closed_form;
    r.path_detail = detail;
}

// Witness for a known fast-path value that has no canonical witness formula:
// the least cover of that size over critical shadows.
std::vector<Mask> searched_witness(const SetFamily& f, const LatticeView& v, bool dual,
                                   std::uint32_t value, const DimensionOptions& opt) {
    auto sr = critical_shadow_rows(f, v, dual, opt);
    CoverSolver solver(std::move(sr.rows), f.size());
    auto idx = solver.lex_witness(value);
    std::vector<Mask> w;
    w.reserve(idx.size());
    for (auto i : idx) w.push_back(f.member(sr.candidates[i]));
    return w;
}

DimensionReport cover_dimension(const SetFamily& f, bool dual, const DimensionOptions& opt,
                                DimensionReport r) {
    const auto& p = r.profile;
    if (!opt.force_exact) {
        if (p.downward_closed) {
            if (!dual) {
                auto mx = extremal_sets(f, Extremal::max);
                fill_fast(r, mx.size(), mx.members(), "downward_closed");
            } else {
                fill_fast(r, 1, {Mask{0}}, "downward_closed");
            }
            return r;
        }
        if (p.upward_closed) {
            if (!dual) {
                fill_fast(r, 1, {f.base_mask()}, "upward_closed");
            } else {
                auto mn = extremal_sets(f, Extremal::min);
                fill_fast(r, mn.size(), mn.members(), "upward_closed");
            }
            return r;
        }
        if (p.convex) {
            auto ext = extremal_sets(f, dual ? Extremal::min : Extremal::max);
            fill_fast(r, ext.size(), ext.members(), "convex");
            return r;
        }
        if (p.quasi_downward) {
            if (!dual) {
                auto mq = extremal_sets(f, Extremal::max_q);
                fill_fast(r, mq.size(), mq.members(), "quasi_downward");
            } else {
                LatticeView v(f);
                fill_fast(r, 2, {}, "quasi_downward");
                if (opt.want_witness) r.witness = searched_witness(f, v, true, 2, opt);
            }
            return r;
        }
        if (p.quasi_upward) {
            if (!dual) {
                LatticeView v(f);
                fill_fast(r, 2, {}, "quasi_upward");
                if (opt.want_witness) r.witness = searched_witness(f, v, false, 2, opt);
            } else {
                auto mq = extremal_sets(f, Extremal::min_q);
                fill_fast(r, mq.size(), mq.members(), "quasi_upward");
            }
            return r;
        }
    }

    LatticeView v(f);
    auto sr = critical_shadow_rows(f, v, dual, opt);
    CoverSolver solver(std::move(sr.rows), f.size());
    std::uint32_t k = solver.optimum();
    r.value = k;
    r.path = DimensionPath::exact_cover;
    r.path_detail = "general";
    if (opt.want_witness) {
        auto idx = solver.lex_witness(k);
        for (auto i : idx) r.witness.push_back(f.member(sr.candidates[i]));
    }
    return r;
}

DimensionReport cylindrical_dimension(const SetFamily& f, const DimensionOptions& opt,
                                      DimensionReport r) {
    std::uint64_t n = f.size();
    if (n * n > opt.max_interval_pairs)
        throw CapError("cylindrical interval enumeration exceeds the pair budget");
    LatticeView v(f);

    // valid pairs: (lo, hi) with lo in the shadow of hi, i.e. [lo,hi] inside F
    std::vector<std::vector<Mask>> his(f.size());
    for (std::size_t bi = 0; bi < f.size(); ++bi) {
        Bitset sh = detail::shadow_bits(v, f.member(bi), false);
        for (std::size_t ai = 0; ai < f.size(); ++ai)
            if (sh.test(f.member(ai))) his[ai].push_back(f.member(bi));
    }

    // A maximal interval survives restricting each lo to its maximal his, and
    // every dominated pair keeps a dominator of that restricted shape.
    std::vector<std::pair<Mask, Mask>> cands;
    for (std::size_t ai = 0; ai < f.size(); ++ai) {
        for (Mask h : his[ai]) {
            bool dominated = false;
            for (Mask h2 : his[ai])
                if (h2 != h && subset_of(h, h2)) {
                    dominated = true;
                    break;
                }
            if (!dominated) cands.emplace_back(f.member(ai), h);
        }
    }
    if (static_cast<std::uint64_t>(cands.size()) * cands.size() > opt.max_interval_pairs)
        throw CapError("maximal interval filtering exceeds the pair budget");

    std::vector<std::pair<Mask, Mask>> maximal;
    for (const auto& [lo, hi] : cands) {
        bool dominated = false;
        for (const auto& [lo2, hi2] : cands) {
            if (lo2 == lo && hi2 == hi) continue;
            if (subset_of(lo2, lo) && subset_of(hi, hi2)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) maximal.emplace_back(lo, hi);
    }
    std::sort(maximal.begin(), maximal.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return canonical_less(x.first, y.first);
        return canonical_less(x.second, y.second);
    });

    std::vector<Bitset> rows;
    rows.reserve(maximal.size());
    for (const auto& [lo, hi] : maximal) {
        Bitset row(f.size());
        for (std::size_t j = 0; j < f.size(); ++j)
            if (subset_of(lo, f.member(j)) && subset_of(f.member(j), hi)) row.set(j);
        rows.push_back(std::move(row));
    }
    CoverSolver solver(std::move(rows), f.size());
    std::uint32_t k = solver.optimum();
    r.value = k;
    r.path = DimensionPath::exact_cover;
    r.path_detail = "maximal_intervals";
    if (opt.want_witness)
        for (auto i : solver.lex_witness(k)) r.intervals.push_back(maximal[i]);
    return r;
}

// Join-irreducible members: not the union of their strict member subsets. The
// empty union makes the empty set always reducible; dually the base set is
// always meet-reducible.
std::vector<char> irreducible_flags(const SetFamily& f, bool meet) {
    unsigned dims = static_cast<unsigned>(f.base().size());
    Mask full = f.base_mask();
    std::vector<char> flags(f.size(), 0);
    if (dims <= 22) {
        std::vector<Mask> acc(std::size_t{1} << dims);
        for (std::size_t c = 0; c < acc.size(); ++c) {
            Mask m = static_cast<Mask>(meet ? full : 0);
            if (f.contains(static_cast<Mask>(c))) m = static_cast<Mask>(c);
            acc[c] = m;
        }
        for (unsigned d = 0; d < dims; ++d) {
            std::size_t bit = std::size_t{1} << d;
            for (std::size_t c = 0; c < acc.size(); ++c) {
                if (!meet && (c & bit)) acc[c] |= acc[c ^ bit];
                if (meet && !(c & bit)) acc[c] &= acc[c | bit];
            }
        }
        for (std::size_t i = 0; i < f.size(); ++i) {
            Mask m = f.member(i);
            Mask strict = meet ? full : 0;
            Mask axes = meet ? (full & ~m) : m;
            for (Mask rest = axes; rest;) {
                Mask d = rest & (~rest + 1);
                rest ^= d;
                if (meet)
                    strict &= acc[m | d];
                else
                    strict |= acc[m ^ d];
            }
            flags[i] = (strict != m);
        }
        return flags;
    }
    if (static_cast<std::uint64_t>(f.size()) * f.size() > (std::uint64_t{1} << 26))
        throw CapError("irreducible member scan exceeds the size budget");
    for (std::size_t i = 0; i < f.size(); ++i) {
        Mask m = f.member(i);
        Mask strict = meet ? full : 0;
        for (Mask b : f.members()) {
            if (b == m) continue;
            if (!meet && subset_of(b, m)) strict |= b;
            if (meet && subset_of(m, b)) strict &= b;
            if (strict == m) break;
        }
        flags[i] = (strict != m);
    }
    return flags;
}

DimensionReport generator_dimension(const SetFamily& f, bool meet, DimensionReport r) {
    const auto& p = r.profile;
    if (!meet && !(p.union_closed && p.has_empty_set))
        throw DomainError("union dimension requires a union closed family containing the empty set");
    if (meet && !(p.intersection_closed && p.has_base_set))
        throw DomainError(
            "intersection dimension requires an intersection closed family containing the base set");
    auto flags = irreducible_flags(f, meet);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (flags[i]) r.witness.push_back(f.member(i));
    r.value = r.witness.size();
    r.path = DimensionPath::fast_closed_form;
    r.path_detail = meet ? "meet_irreducible" : "join_irreducible";
    return r;
}

std::vector<std::size_t> mask_to_indices(Mask m) {
    std::vector<std::size_t> out;
    for (unsigned i = 0; i < 32; ++i)
        if (m & (Mask{1} << i)) out.push_back(i);
    return out;
}

nlohmann::json profile_json(const ClosureProfile& p) {
    return {{"downward_closed", p.downward_closed},
            {"upward_closed", p.upward_closed},
            {"quasi_downward", p.quasi_downward},
            {"quasi_upward", p.quasi_upward},
            {"convex", p.convex},
            {"union_closed", p.union_closed},
            {"intersection_closed", p.intersection_closed},
            {"has_empty_set", p.has_empty_set},
            {"has_base_set", p.has_base_set},
            {"flat_compatible", p.flat_compatible}};
}

} // namespace

std::string to_string(DimensionKind k) {
    switch (k) {
    case DimensionKind::upper: return "upper";
    case DimensionKind::dual_upper: return "dual_upper";
    case DimensionKind::cylindrical: return "cylindrical";
    case DimensionKind::union_: return "union";
    case DimensionKind::intersection: return "intersection";
    }
    return "?";
}

DimensionKind dimension_kind_from_string(std::string_view s) {
    if (s == "upper") return DimensionKind::upper;
    if (s == "dual_upper" || s == "dual") return DimensionKind::dual_upper;
    if (s == "cylindrical") return DimensionKind::cylindrical;
    if (s == "union") return DimensionKind::union_;
    if (s == "intersection") return DimensionKind::intersection;
    throw DomainError("unknown dimension kind: " + std::string(s));
}

DimensionReport compute_dimension(const SetFamily& f, DimensionKind kind,
                                  const DimensionOptions& opt) {
    if (f.empty()) throw DomainError("dimension of an empty family is undefined");
    DimensionReport r;
    r.kind = kind;
    r.profile = closure_profile(f);
    switch (kind) {
    case DimensionKind::upper: return cover_dimension(f, false, opt, std::move(r));
    case DimensionKind::dual_upper: return cover_dimension(f, true, opt, std::move(r));
    case DimensionKind::cylindrical: return cylindrical_dimension(f, opt, std::move(r));
    case DimensionKind::union_: return generator_dimension(f, false, std::move(r));
    case DimensionKind::intersection: return generator_dimension(f, true, std::move(r));
    }
    throw DomainError("unknown dimension kind");
}

bool verify_witness(const SetFamily& f, const DimensionReport& report) {
    switch (report.kind) {
    case DimensionKind::upper:
    case DimensionKind::dual_upper: {
        if (report.witness.size() != report.value) return false;
        for (Mask w : report.witness)
            if (!f.contains(w)) return false;
        LatticeView v(f);
        Bitset acc(v.membership.size());
        bool dual = report.kind == DimensionKind::dual_upper;
        for (Mask w : report.witness) acc |= detail::shadow_bits(v, w, dual);
        return v.membership.subset_of(acc);
    }
    case DimensionKind::cylindrical: {
        if (report.intervals.size() != report.value) return false;
        LatticeView v(f);
        Bitset covered(f.size());
        for (const auto& [lo, hi] : report.intervals) {
            if (!f.contains(lo) || !f.contains(hi) || !subset_of(lo, hi)) return false;
            if (!detail::shadow_bits(v, hi, false).test(lo)) return false;
            for (std::size_t j = 0; j < f.size(); ++j)
                if (subset_of(lo, f.member(j)) && subset_of(f.member(j), hi)) covered.set(j);
        }
        return covered.count() == f.size();
    }
    case DimensionKind::union_:
    case DimensionKind::intersection: {
        if (report.witness.size() != report.value) return false;
        for (Mask w : report.witness)
            if (!f.contains(w)) return false;
        bool meet = report.kind == DimensionKind::intersection;
        std::unordered_set<Mask> gen;
        std::vector<Mask> queue{meet ? f.base_mask() : Mask{0}};
        gen.insert(queue[0]);
        while (!queue.empty()) {
            Mask cur = queue.back();
            queue.pop_back();
            if (!f.contains(cur)) return false;
            for (Mask w : report.witness) {
                Mask next = meet ? (cur & w) : (cur | w);
                if (gen.insert(next).second) queue.push_back(next);
            }
        }
        return gen.size() == f.size();
    }
    }
    return false;
}

DimensionIdentities check_dimension_identities(const SetFamily& f) {
    DimensionOptions opt;
    opt.want_witness = false;
    DimensionIdentities ids;
    ids.upper = compute_dimension(f, DimensionKind::upper, opt).value;
    ids.dual_upper = compute_dimension(f, DimensionKind::dual_upper, opt).value;
    ids.cylindrical = compute_dimension(f, DimensionKind::cylindrical, opt).value;
    ids.convex = closure_profile(f).convex;
    ids.upper_le_cylindrical = ids.upper <= ids.cylindrical;
    ids.dual_le_cylindrical = ids.dual_upper <= ids.cylindrical;
    ids.cylindrical_le_product = !ids.convex || ids.cylindrical <= ids.upper * ids.dual_upper;
    ids.pass = ids.upper_le_cylindrical && ids.dual_le_cylindrical && ids.cylindrical_le_product;
    return ids;
}

std::string report_to_json(const DimensionReport& report) {
    nlohmann::json j;
    j["kind"] = to_string(report.kind);
    j["value"] = report.value;
    if (report.kind == DimensionKind::cylindrical) {
        auto arr = nlohmann::json::array();
        for (const auto& [lo, hi] : report.intervals)
            arr.push_back({{"lo", mask_to_indices(lo)}, {"hi", mask_to_indices(hi)}});
        j["witness"] = arr;
    } else {
        auto arr = nlohmann::json::array();
        for (Mask w : report.witness) arr.push_back(mask_to_indices(w));
        j["witness"] = arr;
    }
    j["path"] = report.path == DimensionPath::fast_closed_form ? "fast_closed_form" : "exact_cover";
    j["path_detail"] = report.path_detail;
    j["profile"] = profile_json(report.profile);
    return j.dump();
}

std::string identities_to_json(const DimensionIdentities& ids) {
    nlohmann::json j{{"upper", ids.upper},
                     {"dual_upper", ids.dual_upper},
                     {"cylindrical", ids.cylindrical},
                     {"convex", ids.convex},
                     {"upper_le_cylindrical", ids.upper_le_cylindrical},
                     {"dual_le_cylindrical", ids.dual_le_cylindrical},
                     {"cylindrical_le_product", ids.cylindrical_le_product},
                     {"pass", ids.pass}};
    return j.dump();
}

} // namespace teamdim
