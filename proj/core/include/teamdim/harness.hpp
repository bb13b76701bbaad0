#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teamdim/formula.hpp"
#include "teamdim/semantics.hpp"

namespace teamdim {

// One reproduced claim: a computed quantity checked against a stated value or
// bound. `informational` entries always pass; they record readings of results
// whose printed form is ambiguous or known to be off by an edge case, with the
// actual numbers in `note`.
enum class CheckMode { equals, at_most, less_than, informational };

struct VerificationRecord {
    std::string claim;   // stable id, unique together with params
    std::string params;
    CheckMode mode = CheckMode::equals;
    long long computed = 0;
    long long expected = 0;
    bool pass = false;
    std::string note;
    double millis = 0.0;
};

// An atom over fresh, mutually distinct variables, ready for a property sweep.
// k is the main arity; m is the right-hand block width (independence only).
struct AtomSpec {
    AtomTag kind = AtomTag::dep;
    int k = 1;
    int m = 1;
    Formula atom;
    Scope scope;
};

AtomSpec make_atom_spec(AtomTag kind, int k, int m = 1);

// Closed-form upper dimension of the plain k-ary atom (m for independence).
// `defined` is cleared when the printed closed form is known to miss the true
// value (0-ary exclusion), in which case the caller should not assert it.
long long atom_closed_form(AtomTag kind, int k, int m, bool& defined);

struct HarnessOptions {
    unsigned seed = 0x5eed5u;   // fixed default so reruns are reproducible
    std::size_t max_scope = 4;  // property sweeps refuse wider scopes
    int sample_formulas = 24;   // random formulas per closure probe record
};

// Upper dimension of a plain atom vs its closed form.
VerificationRecord atom_dimension(const AtomSpec& spec, const HarnessOptions& opt = {});

// Dual dimensions of the quasi-upward constructs over n variables:
// non-constancy, one-pattern inclusion, witnessed formulas, subteam modals,
// non-emptiness, and their NE-strengthened variants.
std::vector<VerificationRecord> dual_dimension_suite(int n, const HarnessOptions& opt = {});

// Dependence or anonymity atom with formula arguments: predicts the dimension
// from the unsatisfiable argument patterns and checks it against brute force.
VerificationRecord extended_atom_dimension(const Formula& theta, const HarnessOptions& opt = {});

// Exclusion atom with formula arguments: predicts the dimension as the number
// of maximal realizable pattern rectangles and checks it against brute force.
VerificationRecord extended_exclusion_dimension(const Formula& theta,
                                                const HarnessOptions& opt = {});

// Inclusion between a variable tuple and its componentwise negation.
VerificationRecord negated_tuple_inclusion(int k, const HarnessOptions& opt = {});

// Dimension of f op g stays within the product of the operand dimensions
// (conj/disj) or the operand dimension (quantifiers; g is ignored, var binds).
enum class KripkeOp { conj, disj, exists, forall };
VerificationRecord kripke_bound_check(const Formula& f, const Formula& g, KripkeOp op,
                                      const std::string& var = "q",
                                      const HarnessOptions& opt = {});

// Dimension of f against (atom dimension)^occurrences for the single atom kind
// occurring in f. Refuses independence atoms, mixed kinds, and formula
// arguments, where no such bound is available.
VerificationRecord aritydim_check(const Formula& f, const HarnessOptions& opt = {});

// Numeric inexpressibility gaps: the witness dimension at the higher arity
// exceeds the best bound attainable at the lower arity, for every occurrence
// budget in the provable band. Instances whose printed band extends further
// are reported as informational records.
enum class GapClaim {
    arity_step,        // k+1-ary dependence/anonymity vs k-ary, fewer than 2n uses
    to_constancy,      // k-ary dependence/anonymity vs 0-ary, fewer than n*2^k uses
    primitive_unfold,  // k-ary inclusion vs one-pattern inclusion, fewer than 2^k uses
    binary_step,       // binary inclusion/exclusion vs unary, quantifiers allowed
    higher_step        // k+1-ary inclusion/exclusion vs k-ary, k >= 2
};

struct GapParams {
    AtomTag atom = AtomTag::dep;
    int k = 0;  // lower arity of the claim
    int n = 1;  // occurrences at the higher arity
};

VerificationRecord inexpressibility_gap(GapClaim claim, const GapParams& p,
                                        const HarnessOptions& opt = {});

// Single-formula closure probes behind the strictness proofs. pl_exc checks
// that two satisfied distinguished singletons force their pair; pl_inc checks
// that membership of the all-zero valuation transfers from any satisfied team
// to its singleton. Violations count as failures unless expect_violation.
enum class ProbeLogic { pl_exc, pl_inc };
VerificationRecord closure_probe(ProbeLogic logic, const Formula& f,
                                 bool expect_violation = false,
                                 const HarnessOptions& opt = {});

// Named record suites, data driven; entries run in parallel and the merged
// result is sorted by claim id, so output is deterministic.
std::vector<std::string> suite_names();
std::vector<VerificationRecord> run_suite(const std::string& name,
                                          const HarnessOptions& opt = {});

bool all_pass(const std::vector<VerificationRecord>& records);
std::string record_to_line(const VerificationRecord& r);
std::string records_to_json(const std::vector<VerificationRecord>& records);

} // namespace teamdim
