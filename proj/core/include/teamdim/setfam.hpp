#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamdim/bitset.hpp"

namespace teamdim {

// A ground set is a subset of the base encoded as a bit mask: element i <-> bit i.
using Mask = std::uint32_t;

inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }
inline int set_size(Mask a) { return __builtin_popcount(a); }

// (popcount, numeric value) order; the canonical order for families and witnesses.
inline bool canonical_less(Mask a, Mask b) {
    int pa = set_size(a), pb = set_size(b);
    return pa != pb ? pa < pb : a < b;
}

struct FamilyLimits {
    std::size_t max_base = 20;      // hard engine limit is 26
    std::size_t max_members = std::size_t{1} << 16;
};

class BaseSet {
public:
    // Default labels: a, b, c, ... for small bases, e<i> beyond.
    explicit BaseSet(std::size_t n);
    explicit BaseSet(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    Mask full_mask() const { return size() >= 32 ? ~Mask{0} : (Mask{1} << size()) - 1; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    std::optional<std::size_t> index(std::string_view name) const;

    bool operator==(const BaseSet& o) const { return labels_ == o.labels_; }

private:
    std::vector<std::string> labels_;
};

// Finite, duplicate-free family of subsets of one base set, in canonical order.
class SetFamily {
public:
    SetFamily(BaseSet base, std::vector<Mask> members, FamilyLimits limits = {});

    const BaseSet& base() const { return base_; }
    Mask base_mask() const { return base_.full_mask(); }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const std::vector<Mask>& members() const { return members_; }
    Mask member(std::size_t i) const { return members_[i]; }

    bool contains(Mask m) const;
    // index in canonical order; npos when absent
    std::size_t index_of(Mask m) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // indicator over the full subset lattice of the base (2^|base| bits)
    Bitset membership_bitset() const;

    bool operator==(const SetFamily& o) const {
        return base_ == o.base_ && members_ == o.members_;
    }

private:
    BaseSet base_;
    std::vector<Mask> members_;   // canonical order
    std::vector<Mask> by_value_;  // ascending, for contains()
};

struct ClosureProfile {
    bool downward_closed = false;
    bool upward_closed = false;
    bool quasi_downward = false;  // convention: implies not downward_closed
    bool quasi_upward = false;    // convention: implies not upward_closed
    bool convex = false;
    bool union_closed = false;        // closed under pairwise unions
    bool intersection_closed = false; // closed under pairwise intersections
    bool has_empty_set = false;
    bool has_base_set = false;
    bool flat_compatible = false; // downward_closed && union_closed && has_empty_set
    // unrestricted quasi definitions, without the not-plainly-closed convention
    bool weak_quasi_downward = false;
    bool weak_quasi_upward = false;
};

enum class Extremal { max, min, max_q, min_q };

// [A, B] over the given base; empty family when A is not a subset of B.
SetFamily interval(const BaseSet& base, Mask a, Mask b, FamilyLimits limits = {});

// Convex shadow of A in F: {B ⊆ A | [B,A] ⊆ F}; dual goes upward. Requires A ∈ F.
SetFamily convex_shadow(const SetFamily& f, Mask a, bool dual = false);

// max/min: ⊆-maximal/minimal members. max_q: Max(F∖{base}) ∪ {base}, requires
// base ∈ F; min_q: Min(F∖{∅}) ∪ {∅}, requires ∅ ∈ F.
SetFamily extremal_sets(const SetFamily& f, Extremal mode);

// Members whose (dual) shadow is ⊆-maximal among all members' shadows.
SetFamily critical_sets(const SetFamily& f, bool dual = false);

ClosureProfile closure_profile(const SetFamily& f);

// Text form: base={a,b,c}; {{},{a},{a,b}}  |  JSON form: {"base":3,"members":[[],[0],[0,1]]}
// parse_family sniffs the format from the first non-space character.
SetFamily parse_family(const std::string& text, FamilyLimits limits = {});
std::string family_to_text(const SetFamily& f);
std::string family_to_json(const SetFamily& f);

std::string groundset_to_text(const BaseSet& base, Mask m);

} // namespace teamdim
