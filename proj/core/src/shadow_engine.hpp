#pragma once

// Internal lattice machinery shared by setfam and dimension. Families are viewed
// as indicator bitsets over the full subset lattice 2^base; shadows come out of
// directed closure (zeta) sweeps instead of per-candidate interval walks.

#include <vector>

#include "teamdim/bitset.hpp"
#include "teamdim/setfam.hpp"

namespace teamdim::detail {

struct LatticeView {
    unsigned dims = 0;            // |base|
    Bitset membership;            // 2^dims bits
    std::vector<Mask> members;    // canonical order

    explicit LatticeView(const SetFamily& f);
};

// Lattice indicator of all submasks (supersets when dual) of apex within 2^dims.
Bitset cone_bits(unsigned dims, Mask apex, bool dual);

// Convex shadow of apex as lattice bits. apex must be a member.
// dual=false: {B ⊆ apex | [B,apex] ⊆ F}; dual=true: {B ⊇ apex | [apex,B] ⊆ F}.
Bitset shadow_bits(const LatticeView& v, Mask apex, bool dual);

// ⊆-minimal elements of the plain shadow (⊆-maximal of the dual one); these
// determine the whole shadow, which is a union of intervals ending at apex.
std::vector<Mask> shadow_extremes(const LatticeView& v, Mask apex, bool dual);

// flags[i] == 1 iff member i is (dual-)critical: no other member's shadow
// strictly contains member i's shadow.
std::vector<char> critical_flags(const LatticeView& v, bool dual);

} // namespace teamdim::detail
