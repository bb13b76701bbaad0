#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace teamdim {

// Team-semantics formulas. Negation exists only on proposition symbols, so
// there is no Not node; `negate` pushes negations down and is defined for
// propositional formulas only. Atom argument positions hold formulas: a plain
// atom is one whose arguments are all positive literals, anything else is the
// extended form of the same atom.
enum class NodeKind {
    True,
    False,
    Literal,
    And,
    Or,        // lax team disjunction
    GlobalOr,  // T satisfies either disjunct outright
    Exists,
    Forall,
    Dep,      // block1; target = single element of block2
    Anon,     // block1; target in block2
    Inc,      // block1 included in block2, equal lengths
    Exc,      // block1 excluded from block2, equal lengths
    Indep,    // block2 independent of block3 given block1; block1 may be empty
    RelInc,   // (block1; alpha) included in (block2; beta)
    RelExc,
    PrimInc,  // constant tuple bits included in block1 values
    NonConst,
    NE,
    Might,
    SMight,
    EMight,   // Might plus NE
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::True;
    std::string var;      // Literal name, quantifier bound variable
    bool positive = true; // Literal polarity
    Formula left, right;  // connective children; left is the quantifier/might body
    std::vector<Formula> block1, block2, block3;
    Formula alpha, beta;    // relativized atom guards
    std::vector<char> bits; // PrimInc constants, aligned with block1
};

Formula top();
Formula bot();
Formula lit(std::string name, bool positive = true);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula global_or(Formula a, Formula b);
Formula exists(std::string var, Formula body);
Formula forall(std::string var, Formula body);
Formula dep_atom(std::vector<Formula> ps, Formula q);
Formula anon_atom(std::vector<Formula> ps, Formula q);
Formula inc_atom(std::vector<Formula> ps, std::vector<Formula> qs);
Formula exc_atom(std::vector<Formula> ps, std::vector<Formula> qs);
Formula indep_atom(std::vector<Formula> cond, std::vector<Formula> ps, std::vector<Formula> qs);
Formula rel_inc_atom(std::vector<Formula> ps, Formula alpha, std::vector<Formula> qs,
                     Formula beta);
Formula rel_exc_atom(std::vector<Formula> ps, Formula alpha, std::vector<Formula> qs,
                     Formula beta);
Formula prim_inc_atom(std::vector<char> bits, std::vector<Formula> ps);
Formula nonconst_atom(std::vector<Formula> ps);
Formula ne_atom();
Formula might(Formula f);
Formula smight(Formula f);
Formula emight(Formula f);

// folds for the displayed big connectives; empty conjunction is top, empty
// disjunction is bot
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

bool is_pl(const Formula& f);
// push negation to proposition symbols; propositional input only
Formula negate(const Formula& f);

bool equal_formulas(const Formula& a, const Formula& b);

std::set<std::string> free_vars(const Formula& f);

Formula parse_formula(const std::string& text);
std::string render_formula(const Formula& f);

enum class AtomTag {
    dep,
    anon,
    inc,
    exc,
    indep,
    rel_inc,
    rel_exc,
    prim_inc,
    nonconst,
    ne,
    might,
    smight,
    emight,
};

std::string to_string(AtomTag t);

struct FragmentProfile {
    std::map<AtomTag, int> occurrences; // absent key = zero occurrences
    // dep/anon: |p̄|; inc/exc and relatives: side length; nonconst: argument count
    std::map<AtomTag, int> max_arity;
    std::array<int, 3> indep_arity{0, 0, 0}; // componentwise max over Indep atoms
    bool quantifier_free = true;
    bool has_extended_args = false; // some atom argument is not a positive literal

    int count(AtomTag t) const;
    int arity(AtomTag t) const;
    // at most n occurrences of `kind` at arity <= k and no other atom kind at all
    bool member_of(AtomTag kind, int k, int n) const;
};

FragmentProfile fragment_profile(const Formula& f);

} // namespace teamdim
