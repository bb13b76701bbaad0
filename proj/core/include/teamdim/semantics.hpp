#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teamdim/formula.hpp"
#include "teamdim/setfam.hpp"

namespace teamdim {

// Ordered, duplicate-free variable list. An evaluation is encoded as an
// integer whose bit j is the value of vars[j]; its string form writes bit j at
// string position j, so "10" over [p, q] means p = 1, q = 0.
struct Scope {
    std::vector<std::string> vars;

    std::size_t size() const { return vars.size(); }
    std::size_t eval_count() const { return std::size_t{1} << vars.size(); }
    // index of a variable, or npos
    std::size_t index_of(const std::string& name) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool operator==(const Scope& o) const { return vars == o.vars; }
};

Scope make_scope(std::vector<std::string> vars);
// sorted free variables of the formula
Scope scope_of(const Formula& f);

struct Team {
    Scope scope;
    std::vector<std::uint32_t> members; // evaluation codes, ascending, unique

    // team as a bit mask over evaluation codes
    std::uint64_t eval_mask() const;

    bool operator==(const Team& o) const {
        return scope == o.scope && members == o.members;
    }
};

Team make_team(Scope scope, std::vector<std::uint32_t> members);
Team team_from_mask(Scope scope, std::uint64_t mask);

// Text form: scope=[p,q]; {11,00}
Team parse_team(const std::string& text);
std::string team_to_text(const Team& t);
// JSON form: {"scope":["p","q"],"teams":[["11","00"]]}; exactly one team
Team team_from_json(const std::string& text);
std::string team_to_json(const Team& t);

// All satisfying teams over the scope: the family's base elements are the
// evaluations (labelled by their string form) and each member is a team.
struct TeamProperty {
    Scope scope;
    SetFamily family;
};

struct EvalOptions {
    std::size_t max_property_scope = 4; // property and equivalence sweeps
    std::size_t max_scope = 6;          // satisfies() input scope
    std::size_t max_table_vars = 4;     // width of the full-table engine
    std::size_t max_total_vars = 12;    // scope plus quantifier extensions
    std::size_t max_split_team = 13;    // elementwise lax-split fallback cap
    bool force_per_team = false;        // disable table shortcuts entirely (testing)
};

// Requires free_vars(f) to be contained in the team scope.
bool satisfies(const Team& t, const Formula& f, const EvalOptions& opt = {});

TeamProperty team_property(const Formula& f, const Scope& scope,
                           const EvalOptions& opt = {});

// Project onto a subscope; duplicate projections collapse.
Team restrict_team(const Team& t, const Scope& smaller);

struct EquivalenceResult {
    bool equivalent = true;
    // first separating team in ascending evaluation-mask order
    Team counterexample;
    bool lhs = false;
    bool rhs = false;
};

// Requires free_vars(f) == free_vars(g); sweeps all teams over that scope.
EquivalenceResult check_equivalent(const Formula& f, const Formula& g,
                                   const EvalOptions& opt = {});

} // namespace teamdim
