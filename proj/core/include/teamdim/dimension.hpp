#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "teamdim/setfam.hpp"

namespace teamdim {

enum class DimensionKind { upper, dual_upper, cylindrical, union_, intersection };

std::string to_string(DimensionKind k);
DimensionKind dimension_kind_from_string(std::string_view s);

enum class DimensionPath { fast_closed_form, exact_cover };

struct DimensionOptions {
    bool force_exact = false; // skip closed-form dispatch (upper/dual_upper only)
    bool want_witness = true;
    // |F|^2 candidate-pair budget for the cylindrical kind
    std::uint64_t max_interval_pairs = std::uint64_t{1} << 24;
    // bit budget for the shadow/cover matrix on the exact path
    std::uint64_t max_cover_bits = std::uint64_t{1} << 33;
};

struct DimensionReport {
    DimensionKind kind = DimensionKind::upper;
    std::uint64_t value = 0;
    // Minimum witness, lexicographically least in canonical order: dominating
    // members (upper), supporting members (dual_upper), generators (union,
    // intersection). Cylindrical witnesses live in `intervals` instead.
    std::vector<Mask> witness;
    std::vector<std::pair<Mask, Mask>> intervals;
    DimensionPath path = DimensionPath::exact_cover;
    // which dispatch rule fired, e.g. "downward_closed", "general"
    std::string path_detail;
    ClosureProfile profile;
};

// Exact dimension with a verifying minimum witness. Closed-form fast paths for
// (quasi) downward/upward closed and convex families; branch-and-bound set
// cover over critical shadows otherwise. union/intersection kinds require the
// matching closure plus the empty/base set and count irreducible members.
DimensionReport compute_dimension(const SetFamily& f, DimensionKind kind,
                                  const DimensionOptions& opt = {});

// True iff the witness really certifies report.value for report.kind on f:
// right size, inside f, and covering/generating.
bool verify_witness(const SetFamily& f, const DimensionReport& report);

struct DimensionIdentities {
    std::uint64_t upper = 0;
    std::uint64_t dual_upper = 0;
    std::uint64_t cylindrical = 0;
    bool convex = false;
    bool upper_le_cylindrical = false;
    bool dual_le_cylindrical = false;
    bool cylindrical_le_product = false; // vacuously true when not convex
    bool pass = false;
};

// D <= D^c, D^d <= D^c, and for convex families D^c <= D * D^d.
DimensionIdentities check_dimension_identities(const SetFamily& f);

std::string report_to_json(const DimensionReport& report);
std::string identities_to_json(const DimensionIdentities& ids);

} // namespace teamdim
