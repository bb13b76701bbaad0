#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "teamdim/formula.hpp"

namespace teamdim {

// Arity-reducing rewrites and translations between atom families. Each rule
// rewrites a single atom node into an equivalent formula; apply_rule drives a
// rule over a whole formula, one atom at a time, and records the trail.
enum class RuleId {
    reduce_dep,              // peel the last argument of a dependence atom
    reduce_anon,             // peel the last argument of an anonymity atom
    reduce_indep_conditional, // peel the last conditioning variable
    reduce_indep,            // peel a block variable of an unconditional independence atom
    inc_to_anon,             // inclusion atom as a quantified anonymity formula
    anon_to_inc,             // anonymity atom as a quantified inclusion formula
    exc_to_dep,              // exclusion atom as a quantified dependence formula
    dep_to_exc,              // dependence atom as a quantified exclusion formula
    reduce_inc_qpl,          // arity k+1 inclusion atom to four arity k inclusion atoms
    reduce_exc_qpl,          // arity k+1 exclusion atom to four arity k exclusion atoms
    reduce_relativized,      // peel relativized inclusion/exclusion into guard conjunctions
    anon_via_nonconst,       // anonymity atom as a disjunction over value patterns
    inc_via_primitive,       // inclusion atom as a conjunction of primitive inclusion atoms
    eliminate_extended,      // bind formula arguments to fresh variables
};

std::string to_string(RuleId id);

// One rewrite of one atom. input and output are whole formulas; the deltas
// compare their fragment profiles (total team-atom occurrences, and the
// maximum atom arity over all tags).
struct ReductionStep {
    RuleId rule = RuleId::reduce_dep;
    AtomTag tag = AtomTag::dep; // tag of the rewritten atom
    Formula input;
    Formula output;
    int atom_count_delta = 0;
    int arity_delta = 0;
};

struct ReductionTrail {
    Formula result;
    std::vector<ReductionStep> steps;
};

// Fresh variable source for the quantified translations, which silently
// assume their bound variables do not occur in the atom. Names are drawn
// from a reserved leading-underscore namespace and checked against every
// name appearing in the formulas given to the constructor.
class FreshGen {
public:
    FreshGen() = default;
    explicit FreshGen(const Formula& avoid);
    void avoid(const Formula& f);
    // smallest unused _<stem><i>, i >= 1; the result is reserved
    std::string next(const std::string& stem);

private:
    std::set<std::string> used_;
    std::map<std::string, int> counters_;
};

// equality and inequality abbreviations used by the translations;
// same_value(a, b) unfolds to (a /\ b) \/ (~a /\ ~b), diff_value to its dual,
// and the tuple forms fold conjunctions/disjunctions positionwise
Formula same_value(const Formula& a, const Formula& b);
Formula diff_value(const Formula& a, const Formula& b);
Formula same_tuple(const std::vector<Formula>& xs, const std::vector<Formula>& ys);
Formula diff_tuple(const std::vector<Formula>& xs, const std::vector<Formula>& ys);

// Single-atom rewrites. Preconditions are enforced with DomainError; outputs
// follow the displayed shapes with no simplification, so shapes are stable.
Formula reduce_dep(const Formula& atom);
Formula reduce_anon(const Formula& atom);
Formula reduce_indep_conditional(const Formula& atom);
// peels the last variable of the left block, or of the right block by the
// atom's symmetry; the chosen block needs length >= 2
Formula reduce_indep(const Formula& atom, bool reduce_right = false);
Formula inc_to_anon(const Formula& atom, FreshGen& fresh);
Formula anon_to_inc(const Formula& atom, FreshGen& fresh);
Formula exc_to_dep(const Formula& atom, FreshGen& fresh);
Formula dep_to_exc(const Formula& atom, FreshGen& fresh);
Formula reduce_inc_qpl(const Formula& atom, FreshGen& fresh);
Formula reduce_exc_qpl(const Formula& atom, FreshGen& fresh);
Formula reduce_relativized(const Formula& atom);
Formula anon_via_nonconst(const Formula& atom);
Formula inc_via_primitive(const Formula& atom);
Formula eliminate_extended(const Formula& atom, FreshGen& fresh);

// True when `rule` can rewrite this exact node.
bool rule_applies(const Formula& f, RuleId rule);

// Rewrites the leftmost-innermost applicable atom, repeatedly, until the rule
// applies nowhere or max_steps rewrites happened (max_steps < 0: no limit).
// Fresh variables are drawn from one generator seeded with the whole input,
// so successive steps never collide.
ReductionTrail apply_rule(const Formula& f, RuleId rule, int max_steps = -1);

} // namespace teamdim
