#include "teamdim/transforms.hpp"

#include <algorithm>
#include <optional>

#include "teamdim/error.hpp"

namespace teamdim {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

void collect_names(const Formula& f, std::set<std::string>& out) {
    if (!f) return;
    if (!f->var.empty()) out.insert(f->var);
    collect_names(f->left, out);
    collect_names(f->right, out);
    for (const auto& g : f->block1) collect_names(g, out);
    for (const auto& g : f->block2) collect_names(g, out);
    for (const auto& g : f->block3) collect_names(g, out);
    collect_names(f->alpha, out);
    collect_names(f->beta, out);
}

AtomTag tag_of(const Formula& f) {
    switch (f->kind) {
    case NodeKind::Dep: return AtomTag::dep;
    case NodeKind::Anon: return AtomTag::anon;
    case NodeKind::Inc: return AtomTag::inc;
    case NodeKind::Exc: return AtomTag::exc;
    case NodeKind::Indep: return AtomTag::indep;
    case NodeKind::RelInc: return AtomTag::rel_inc;
    case NodeKind::RelExc: return AtomTag::rel_exc;
    case NodeKind::PrimInc: return AtomTag::prim_inc;
    case NodeKind::NonConst: return AtomTag::nonconst;
    case NodeKind::NE: return AtomTag::ne;
    case NodeKind::Might: return AtomTag::might;
    case NodeKind::SMight: return AtomTag::smight;
    case NodeKind::EMight: return AtomTag::emight;
    default: throw DomainError("tag_of: not an atom");
    }
}

bool positive_literal(const Formula& f) {
    return f->kind == NodeKind::Literal && f->positive;
}

bool extended_block(const std::vector<Formula>& blk) {
    return std::any_of(blk.begin(), blk.end(),
                       [](const Formula& f) { return !positive_literal(f); });
}

std::vector<Formula> drop_last(const std::vector<Formula>& blk) {
    return {blk.begin(), blk.end() - 1};
}

// value pattern p1^{x1} /\ ... /\ pk^{xk}; bit (k-1-i) of code carries xi so
// codes enumerate patterns in dictionary order with the positive value first
Formula value_pattern(const std::vector<Formula>& ps, unsigned code) {
    const std::size_t k = ps.size();
    std::vector<Formula> parts;
    parts.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const bool pos = (code >> (k - 1 - i)) & 1u;
        parts.push_back(pos ? ps[i] : negate(ps[i]));
    }
    return conj_all(parts);
}

int total_atoms(const FragmentProfile& p) {
    int n = 0;
    for (const auto& [tag, cnt] : p.occurrences) n += cnt;
    return n;
}

int overall_arity(const FragmentProfile& p) {
    int m = 0;
    for (const auto& [tag, a] : p.max_arity) {
        if (tag == AtomTag::indep) continue;
        m = std::max(m, a);
    }
    if (p.count(AtomTag::indep) > 0)
        m = std::max({m, p.indep_arity[0], p.indep_arity[1], p.indep_arity[2]});
    return m;
}

} // namespace

std::string to_string(RuleId id) {
    switch (id) {
    case RuleId::reduce_dep: return "reduce_dep";
    case RuleId::reduce_anon: return "reduce_anon";
    case RuleId::reduce_indep_conditional: return "reduce_indep_conditional";
    case RuleId::reduce_indep: return "reduce_indep";
    case RuleId::inc_to_anon: return "inc_to_anon";
    case RuleId::anon_to_inc: return "anon_to_inc";
    case RuleId::exc_to_dep: return "exc_to_dep";
    case RuleId::dep_to_exc: return "dep_to_exc";
    case RuleId::reduce_inc_qpl: return "reduce_inc_qpl";
    case RuleId::reduce_exc_qpl: return "reduce_exc_qpl";
    case RuleId::reduce_relativized: return "reduce_relativized";
    case RuleId::anon_via_nonconst: return "anon_via_nonconst";
    case RuleId::inc_via_primitive: return "inc_via_primitive";
    case RuleId::eliminate_extended: return "eliminate_extended";
    }
    return "?";
}

FreshGen::FreshGen(const Formula& f) { avoid(f); }

void FreshGen::avoid(const Formula& f) { collect_names(f, used_); }

std::string FreshGen::next(const std::string& stem) {
    int& i = counters_[stem];
    for (;;) {
        ++i;
        std::string name = "_" + stem + std::to_string(i);
        if (used_.insert(name).second) return name;
    }
}

Formula same_value(const Formula& a, const Formula& b) {
    return disj(conj(a, b), conj(negate(a), negate(b)));
}

Formula diff_value(const Formula& a, const Formula& b) {
    return disj(conj(a, negate(b)), conj(negate(a), b));
}

Formula same_tuple(const std::vector<Formula>& xs, const std::vector<Formula>& ys) {
    require(xs.size() == ys.size(), "same_tuple: length mismatch");
    std::vector<Formula> parts;
    parts.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(same_value(xs[i], ys[i]));
    return conj_all(parts);
}

Formula diff_tuple(const std::vector<Formula>& xs, const std::vector<Formula>& ys) {
    require(xs.size() == ys.size(), "diff_tuple: length mismatch");
    std::vector<Formula> parts;
    parts.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(diff_value(xs[i], ys[i]));
    return disj_all(parts);
}

Formula reduce_dep(const Formula& atom) {
    require(atom && atom->kind == NodeKind::Dep, "reduce_dep: dependence atom expected");
    require(!atom->block1.empty(), "reduce_dep: arity is already 0");
    const Formula last = atom->block1.back();
    const Formula rest = dep_atom(drop_last(atom->block1), atom->block2[0]);
    return disj(conj(last, rest), conj(negate(last), rest));
}

Formula reduce_anon(const Formula& atom) {
    require(atom && atom->kind == NodeKind::Anon, "reduce_anon: anonymity atom expected");
    require(!atom->block1.empty(), "reduce_anon: arity is already 0");
    const Formula last = atom->block1.back();
    const Formula rest = anon_atom(drop_last(atom->block1), atom->block2[0]);
    return disj(conj(last, rest), conj(negate(last), rest));
}

Formula reduce_indep_conditional(const Formula& atom) {
    require(atom && atom->kind == NodeKind::Indep,
            "reduce_indep_conditional: independence atom expected");
    require(!atom->block1.empty(), "reduce_indep_conditional: unconditional input");
    const Formula last = atom->block1.back();
    const Formula rest = indep_atom(drop_last(atom->block1), atom->block2, atom->block3);
    return disj(conj(last, rest), conj(negate(last), rest));
}

Formula reduce_indep(const Formula& atom, bool reduce_right) {
    require(atom && atom->kind == NodeKind::Indep, "reduce_indep: independence atom expected");
    require(atom->block1.empty(), "reduce_indep: conditioning block must be empty");
    const auto& blk = reduce_right ? atom->block3 : atom->block2;
    require(blk.size() >= 2, "reduce_indep: chosen block needs length >= 2");
    const Formula last = blk.back();
    Formula single, rest;
    if (reduce_right) {
        single = indep_atom({}, atom->block2, {last});
        rest = indep_atom({}, atom->block2, drop_last(blk));
    } else {
        single = indep_atom({}, {last}, atom->block3);
        rest = indep_atom({}, drop_last(blk), atom->block3);
    }
    return conj(single, disj(conj(last, rest), conj(negate(last), rest)));
}

Formula inc_to_anon(const Formula& atom, FreshGen& fresh) {
    require(atom && atom->kind == NodeKind::Inc, "inc_to_anon: inclusion atom expected");
    const std::size_t k = atom->block1.size();
    require(k >= 1, "inc_to_anon: arity 0");
    const Formula z1 = lit(fresh.next("z"));
    const Formula z2 = lit(fresh.next("z"));
    std::vector<Formula> ps;
    ps.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ps.push_back(lit(fresh.next("p")));
    const Formula q = lit(fresh.next("q"));
    const Formula guard =
        disj(conj_all({same_value(z1, z2), same_value(ps[0], q), same_tuple(ps, atom->block1)}),
             conj(diff_value(z1, z2), same_tuple(ps, atom->block2)));
    Formula body = conj(guard, anon_atom(ps, q));
    body = exists(q->var, body);
    for (std::size_t i = k; i-- > 0;) body = exists(ps[i]->var, body);
    return forall(z1->var, forall(z2->var, body));
}

Formula anon_to_inc(const Formula& atom, FreshGen& fresh) {
    require(atom && atom->kind == NodeKind::Anon, "anon_to_inc: anonymity atom expected");
    const Formula u = lit(fresh.next("u"));
    const Formula q = atom->block2[0];
    std::vector<Formula> left = atom->block1;
    left.push_back(u);
    std::vector<Formula> right = atom->block1;
    right.push_back(q);
    return exists(u->var, conj(diff_value(u, q), inc_atom(std::move(left), std::move(right))));
}

Formula exc_to_dep(const Formula& atom, FreshGen& fresh) {
    require(atom && atom->kind == NodeKind::Exc, "exc_to_dep: exclusion atom expected");
    const std::size_t k = atom->block1.size();
    require(k >= 1, "exc_to_dep: arity 0");
    std::vector<Formula> ps;
    ps.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ps.push_back(lit(fresh.next("p")));
    const Formula q = lit(fresh.next("q"));
    Formula body = conj(dep_atom(ps, q),
                        disj(conj(q, diff_tuple(ps, atom->block1)),
                             conj(negate(q), diff_tuple(ps, atom->block2))));
    body = exists(q->var, body);
    for (std::size_t i = k; i-- > 0;) body = forall(ps[i]->var, body);
    return body;
}

Formula dep_to_exc(const Formula& atom, FreshGen& fresh) {
    require(atom && atom->kind == NodeKind::Dep, "dep_to_exc: dependence atom expected");
    const Formula z = lit(fresh.next("z"));
    const Formula q = atom->block2[0];
    std::vector<Formula> left = atom->block1;
    left.push_back(z);
    std::vector<Formula> right = atom->block1;
    right.push_back(q);
    return forall(z->var,
                  disj(same_value(z, q), exc_atom(std::move(left), std::move(right))));
}

namespace {

// one parallel pass: every atom matching pred is rewritten once, and the
// replacement is not revisited
template <typename Pred, typename Fn>
Formula rewrite_pass(const Formula& f, Pred pred, Fn fn) {
    if (pred(f)) return fn(f);
    switch (f->kind) {
    case NodeKind::And:
        return conj(rewrite_pass(f->left, pred, fn), rewrite_pass(f->right, pred, fn));
    case NodeKind::Or:
        return disj(rewrite_pass(f->left, pred, fn), rewrite_pass(f->right, pred, fn));
    case NodeKind::GlobalOr:
        return global_or(rewrite_pass(f->left, pred, fn), rewrite_pass(f->right, pred, fn));
    case NodeKind::Exists:
        return exists(f->var, rewrite_pass(f->left, pred, fn));
    case NodeKind::Forall:
        return forall(f->var, rewrite_pass(f->left, pred, fn));
    case NodeKind::Might:
        return might(rewrite_pass(f->left, pred, fn));
    case NodeKind::SMight:
        return smight(rewrite_pass(f->left, pred, fn));
    case NodeKind::EMight:
        return emight(rewrite_pass(f->left, pred, fn));
    default:
        return f;
    }
}

bool is_anon(const Formula& f) { return f->kind == NodeKind::Anon; }
bool is_dep(const Formula& f) { return f->kind == NodeKind::Dep; }

} // namespace

Formula reduce_inc_qpl(const Formula& atom, FreshGen& fresh) {
    require(atom && atom->kind == NodeKind::Inc, "reduce_inc_qpl: inclusion atom expected");
    require(atom->block1.size() >= 2, "reduce_inc_qpl: arity must be at least 2");
    Formula f = inc_to_anon(atom, fresh);
    f = rewrite_pass(f, is_anon, [](const Formula& a) { return reduce_anon(a); });
    f = rewrite_pass(f, is_anon, [](const Formula& a) { return reduce_anon(a); });
    return rewrite_pass(f, is_anon, [&](const Formula& a) { return anon_to_inc(a, fresh); });
}

Formula reduce_exc_qpl(const Formula& atom, FreshGen& fresh) {
    require(atom && atom->kind == NodeKind::Exc, "reduce_exc_qpl: exclusion atom expected");
    require(atom->block1.size() >= 2, "reduce_exc_qpl: arity must be at least 2");
    Formula f = exc_to_dep(atom, fresh);
    f = rewrite_pass(f, is_dep, [](const Formula& a) { return reduce_dep(a); });
    f = rewrite_pass(f, is_dep, [](const Formula& a) { return reduce_dep(a); });
    return rewrite_pass(f, is_dep, [&](const Formula& a) { return dep_to_exc(a, fresh); });
}

Formula reduce_relativized(const Formula& atom) {
    require(atom && (atom->kind == NodeKind::RelInc || atom->kind == NodeKind::RelExc),
            "reduce_relativized: relativized atom expected");
    const bool inc = atom->kind == NodeKind::RelInc;
    if (atom->block1.empty()) {
        // fully reduced: (;alpha) included in (;beta) says alpha-evals imply a
        // beta-eval somewhere, and the exclusion form forbids alpha and beta
        // from holding together
        if (inc) return disj(negate(atom->alpha), might(atom->beta));
        return global_or(negate(atom->alpha), negate(atom->beta));
    }
    const Formula p = atom->block1.back();
    const Formula q = atom->block2.back();
    const auto ps = drop_last(atom->block1);
    const auto qs = drop_last(atom->block2);
    const Formula pos_a = conj(atom->alpha, p);
    const Formula pos_b = conj(atom->beta, q);
    const Formula neg_a = conj(atom->alpha, negate(p));
    const Formula neg_b = conj(atom->beta, negate(q));
    if (inc)
        return conj(rel_inc_atom(ps, pos_a, qs, pos_b), rel_inc_atom(ps, neg_a, qs, neg_b));
    return conj(rel_exc_atom(ps, pos_a, qs, pos_b), rel_exc_atom(ps, neg_a, qs, neg_b));
}

Formula anon_via_nonconst(const Formula& atom) {
    require(atom && atom->kind == NodeKind::Anon, "anon_via_nonconst: anonymity atom expected");
    const std::size_t k = atom->block1.size();
    const Formula nc = nonconst_atom({atom->block2[0]});
    std::vector<Formula> parts;
    parts.reserve(std::size_t{1} << k);
    for (unsigned code = (1u << k); code-- > 0;)
        parts.push_back(conj(value_pattern(atom->block1, code), nc));
    return disj_all(parts);
}

Formula inc_via_primitive(const Formula& atom) {
    require(atom && atom->kind == NodeKind::Inc, "inc_via_primitive: inclusion atom expected");
    const std::size_t k = atom->block1.size();
    require(k >= 1, "inc_via_primitive: arity 0");
    std::vector<Formula> parts;
    parts.reserve(std::size_t{1} << k);
    for (unsigned code = (1u << k); code-- > 0;) {
        std::vector<char> bits(k);
        for (std::size_t i = 0; i < k; ++i)
            bits[i] = static_cast<char>((code >> (k - 1 - i)) & 1u);
        parts.push_back(disj(negate(value_pattern(atom->block1, code)),
                             prim_inc_atom(std::move(bits), atom->block2)));
    }
    return conj_all(parts);
}

Formula eliminate_extended(const Formula& atom, FreshGen& fresh) {
    require(atom != nullptr, "eliminate_extended: null formula");
    switch (atom->kind) {
    case NodeKind::Dep:
    case NodeKind::Anon:
    case NodeKind::Inc:
    case NodeKind::Exc:
    case NodeKind::Indep:
    case NodeKind::RelInc:
    case NodeKind::RelExc:
    case NodeKind::PrimInc:
    case NodeKind::NonConst:
        break;
    default:
        throw DomainError("eliminate_extended: atom expected");
    }
    if (!extended_block(atom->block1) && !extended_block(atom->block2) &&
        !extended_block(atom->block3))
        return atom;

    // bind every argument to a fresh variable and keep the bindings as
    // biconditionals next to the plain atom
    std::vector<Formula> binders, biconds;
    auto freshen = [&](const std::vector<Formula>& blk) {
        std::vector<Formula> out;
        out.reserve(blk.size());
        for (const auto& arg : blk) {
            Formula v = lit(fresh.next("q"));
            binders.push_back(v);
            biconds.push_back(same_value(v, arg));
            out.push_back(std::move(v));
        }
        return out;
    };
    const auto b1 = freshen(atom->block1);
    const auto b2 = freshen(atom->block2);
    const auto b3 = freshen(atom->block3);

    Formula plain;
    switch (atom->kind) {
    case NodeKind::Dep: plain = dep_atom(b1, b2[0]); break;
    case NodeKind::Anon: plain = anon_atom(b1, b2[0]); break;
    case NodeKind::Inc: plain = inc_atom(b1, b2); break;
    case NodeKind::Exc: plain = exc_atom(b1, b2); break;
    case NodeKind::Indep: plain = indep_atom(b1, b2, b3); break;
    case NodeKind::RelInc: plain = rel_inc_atom(b1, atom->alpha, b2, atom->beta); break;
    case NodeKind::RelExc: plain = rel_exc_atom(b1, atom->alpha, b2, atom->beta); break;
    case NodeKind::PrimInc: plain = prim_inc_atom(atom->bits, b1); break;
    case NodeKind::NonConst: plain = nonconst_atom(b1); break;
    default: break;
    }

    Formula body = conj(conj_all(biconds), plain);
    for (std::size_t i = binders.size(); i-- > 0;) body = exists(binders[i]->var, body);
    return body;
}

bool rule_applies(const Formula& f, RuleId rule) {
    if (!f) return false;
    switch (rule) {
    case RuleId::reduce_dep:
        return f->kind == NodeKind::Dep && !f->block1.empty();
    case RuleId::reduce_anon:
        return f->kind == NodeKind::Anon && !f->block1.empty();
    case RuleId::reduce_indep_conditional:
        return f->kind == NodeKind::Indep && !f->block1.empty();
    case RuleId::reduce_indep:
        return f->kind == NodeKind::Indep && f->block1.empty() &&
               (f->block2.size() >= 2 || f->block3.size() >= 2);
    case RuleId::inc_to_anon:
        return f->kind == NodeKind::Inc && !f->block1.empty();
    case RuleId::anon_to_inc:
        return f->kind == NodeKind::Anon;
    case RuleId::exc_to_dep:
        return f->kind == NodeKind::Exc && !f->block1.empty();
    case RuleId::dep_to_exc:
        return f->kind == NodeKind::Dep;
    case RuleId::reduce_inc_qpl:
        return f->kind == NodeKind::Inc && f->block1.size() >= 2;
    case RuleId::reduce_exc_qpl:
        return f->kind == NodeKind::Exc && f->block1.size() >= 2;
    case RuleId::reduce_relativized:
        return f->kind == NodeKind::RelInc || f->kind == NodeKind::RelExc;
    case RuleId::anon_via_nonconst:
        return f->kind == NodeKind::Anon;
    case RuleId::inc_via_primitive:
        return f->kind == NodeKind::Inc && !f->block1.empty();
    case RuleId::eliminate_extended:
        switch (f->kind) {
        case NodeKind::Dep:
        case NodeKind::Anon:
        case NodeKind::Inc:
        case NodeKind::Exc:
        case NodeKind::Indep:
        case NodeKind::RelInc:
        case NodeKind::RelExc:
        case NodeKind::PrimInc:
        case NodeKind::NonConst:
            return extended_block(f->block1) || extended_block(f->block2) ||
                   extended_block(f->block3);
        default:
            return false;
        }
    }
    return false;
}

namespace {

Formula apply_to_atom(const Formula& atom, RuleId rule, FreshGen& fresh) {
    switch (rule) {
    case RuleId::reduce_dep: return reduce_dep(atom);
    case RuleId::reduce_anon: return reduce_anon(atom);
    case RuleId::reduce_indep_conditional: return reduce_indep_conditional(atom);
    case RuleId::reduce_indep:
        return reduce_indep(atom, atom->block2.size() < 2);
    case RuleId::inc_to_anon: return inc_to_anon(atom, fresh);
    case RuleId::anon_to_inc: return anon_to_inc(atom, fresh);
    case RuleId::exc_to_dep: return exc_to_dep(atom, fresh);
    case RuleId::dep_to_exc: return dep_to_exc(atom, fresh);
    case RuleId::reduce_inc_qpl: return reduce_inc_qpl(atom, fresh);
    case RuleId::reduce_exc_qpl: return reduce_exc_qpl(atom, fresh);
    case RuleId::reduce_relativized: return reduce_relativized(atom);
    case RuleId::anon_via_nonconst: return anon_via_nonconst(atom);
    case RuleId::inc_via_primitive: return inc_via_primitive(atom);
    case RuleId::eliminate_extended: return eliminate_extended(atom, fresh);
    }
    throw DomainError("apply_rule: unknown rule");
}

// rewrites the leftmost applicable atom only; atoms never nest inside atom
// arguments, so depth-first order is leftmost-innermost
std::optional<Formula> rewrite_first(const Formula& f, RuleId rule, FreshGen& fresh,
                                     AtomTag& tag) {
    if (rule_applies(f, rule)) {
        tag = tag_of(f);
        return apply_to_atom(f, rule, fresh);
    }
    auto descend1 = [&](auto rebuild) -> std::optional<Formula> {
        if (auto l = rewrite_first(f->left, rule, fresh, tag)) return rebuild(*l);
        return std::nullopt;
    };
    switch (f->kind) {
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::GlobalOr: {
        if (auto l = rewrite_first(f->left, rule, fresh, tag)) {
            if (f->kind == NodeKind::And) return conj(*l, f->right);
            if (f->kind == NodeKind::Or) return disj(*l, f->right);
            return global_or(*l, f->right);
        }
        if (auto r = rewrite_first(f->right, rule, fresh, tag)) {
            if (f->kind == NodeKind::And) return conj(f->left, *r);
            if (f->kind == NodeKind::Or) return disj(f->left, *r);
            return global_or(f->left, *r);
        }
        return std::nullopt;
    }
    case NodeKind::Exists:
        return descend1([&](Formula l) { return exists(f->var, std::move(l)); });
    case NodeKind::Forall:
        return descend1([&](Formula l) { return forall(f->var, std::move(l)); });
    case NodeKind::Might:
        return descend1([&](Formula l) { return might(std::move(l)); });
    case NodeKind::SMight:
        return descend1([&](Formula l) { return smight(std::move(l)); });
    case NodeKind::EMight:
        return descend1([&](Formula l) { return emight(std::move(l)); });
    default:
        return std::nullopt;
    }
}

} // namespace

ReductionTrail apply_rule(const Formula& f, RuleId rule, int max_steps) {
    require(f != nullptr, "apply_rule: null formula");
    ReductionTrail trail;
    trail.result = f;
    FreshGen fresh(f);
    while (max_steps < 0 || static_cast<int>(trail.steps.size()) < max_steps) {
        AtomTag tag = AtomTag::dep;
        auto next = rewrite_first(trail.result, rule, fresh, tag);
        if (!next) break;
        const FragmentProfile before = fragment_profile(trail.result);
        const FragmentProfile after = fragment_profile(*next);
        ReductionStep step;
        step.rule = rule;
        step.tag = tag;
        step.input = trail.result;
        step.output = *next;
        step.atom_count_delta = total_atoms(after) - total_atoms(before);
        step.arity_delta = overall_arity(after) - overall_arity(before);
        trail.steps.push_back(step);
        trail.result = *next;
    }
    return trail;
}

} // namespace teamdim
