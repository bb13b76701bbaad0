#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "teamdim/dimension.hpp"
#include "teamdim/error.hpp"
#include "teamdim/formula.hpp"
#include "teamdim/semantics.hpp"

using namespace teamdim;

namespace {

// ---------------------------------------------------------------------------
// A deliberately naive reference evaluator, written straight from the
// satisfaction clauses: lax splits and existential choice functions are
// enumerated outright, atoms quantify over team members with no projection
// or caching. Slow and obviously correct is the point.

using Names = std::vector<std::string>;
using TeamV = std::vector<std::uint32_t>;

std::size_t rfind_var(const Names& scope, const std::string& v) {
    for (std::size_t i = scope.size(); i-- > 0;)
        if (scope[i] == v) return i;
    FAIL("unbound variable in reference evaluator");
    return 0;
}

bool opl(const Formula& f, const Names& scope, std::uint32_t e) {
    switch (f->kind) {
    case NodeKind::True: return true;
    case NodeKind::False: return false;
    case NodeKind::Literal:
        return (((e >> rfind_var(scope, f->var)) & 1u) != 0) == f->positive;
    case NodeKind::And: return opl(f->left, scope, e) && opl(f->right, scope, e);
    case NodeKind::Or: return opl(f->left, scope, e) || opl(f->right, scope, e);
    default: FAIL("not propositional"); return false;
    }
}

std::uint32_t oval(const std::vector<Formula>& blk, const Names& scope, std::uint32_t e) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < blk.size(); ++i)
        if (opl(blk[i], scope, e)) v |= 1u << i;
    return v;
}

bool oracle_atom(const Formula& f, const Names& scope, const TeamV& team);

bool oracle(const Formula& f, Names& scope, const TeamV& team) {
    // Flat subformulas hold on a team iff they hold pointwise, so large teams
    // can skip the 3^|T| split enumeration.  Teams of size <= 4 still take the
    // naive path, keeping the split logic itself under test.
    if (team.size() > 4 && is_pl(f)) {
        for (auto e : team)
            if (!opl(f, scope, e)) return false;
        return true;
    }
    switch (f->kind) {
    case NodeKind::True:
        return true;
    case NodeKind::False:
        return team.empty();
    case NodeKind::Literal:
        for (auto e : team)
            if (!opl(f, scope, e)) return false;
        return true;
    case NodeKind::And:
        return oracle(f->left, scope, team) && oracle(f->right, scope, team);
    case NodeKind::GlobalOr:
        return oracle(f->left, scope, team) || oracle(f->right, scope, team);
    case NodeKind::Or: {
        std::size_t total = 1;
        for (std::size_t i = 0; i < team.size(); ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            TeamV s1, s2;
            std::size_t c = code;
            for (auto e : team) {
                switch (c % 3) {
                case 0: s1.push_back(e); break;
                case 1: s2.push_back(e); break;
                default: s1.push_back(e); s2.push_back(e); break;
                }
                c /= 3;
            }
            if (oracle(f->left, scope, s1) && oracle(f->right, scope, s2)) return true;
        }
        return false;
    }
    case NodeKind::Exists: {
        const std::uint32_t hi = 1u << scope.size();
        std::size_t total = 1;
        for (std::size_t i = 0; i < team.size(); ++i) total *= 3;
        scope.push_back(f->var);
        bool found = false;
        for (std::size_t code = 0; !found && code < total; ++code) {
            TeamV t2;
            std::size_t c = code;
            for (auto e : team) {
                switch (c % 3) {
                case 0: t2.push_back(e); break;
                case 1: t2.push_back(e | hi); break;
                default: t2.push_back(e); t2.push_back(e | hi); break;
                }
                c /= 3;
            }
            std::sort(t2.begin(), t2.end());
            found = oracle(f->left, scope, t2);
        }
        scope.pop_back();
        return found;
    }
    case NodeKind::Forall: {
        const std::uint32_t hi = 1u << scope.size();
        TeamV t2;
        for (auto e : team) {
            t2.push_back(e);
            t2.push_back(e | hi);
        }
        std::sort(t2.begin(), t2.end());
        scope.push_back(f->var);
        bool r = oracle(f->left, scope, t2);
        scope.pop_back();
        return r;
    }
    case NodeKind::Might:
    case NodeKind::EMight: {
        if (team.empty()) return f->kind == NodeKind::Might;
        REQUIRE(team.size() <= 20);
        for (std::size_t sub = 1; sub < (std::size_t{1} << team.size()); ++sub) {
            TeamV s;
            for (std::size_t i = 0; i < team.size(); ++i)
                if ((sub >> i) & 1u) s.push_back(team[i]);
            if (oracle(f->left, scope, s)) return true;
        }
        return false;
    }
    case NodeKind::SMight: {
        if (team.empty()) return true;
        for (auto e : team)
            if (oracle(f->left, scope, TeamV{e})) return true;
        return false;
    }
    case NodeKind::NE:
        return !team.empty();
    default:
        return oracle_atom(f, scope, team);
    }
}

// Atoms quantify over team members. The argument values of each member are
// computed up front; the quantifier loops themselves follow the definitions.
bool oracle_atom(const Formula& f, const Names& scope, const TeamV& team) {
    const std::size_t m = team.size();
    auto col = [&](const std::vector<Formula>& blk) {
        std::vector<std::uint32_t> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = oval(blk, scope, team[i]);
        return v;
    };
    auto guard_col = [&](const Formula& g) {
        std::vector<char> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = opl(g, scope, team[i]) ? 1 : 0;
        return v;
    };

    switch (f->kind) {
    case NodeKind::Dep: {
        const auto x = col(f->block1), y = col(f->block2);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                if (x[a] == x[b] && y[a] != y[b]) return false;
        return true;
    }
    case NodeKind::Anon: {
        const auto x = col(f->block1), y = col(f->block2);
        for (std::size_t a = 0; a < m; ++a) {
            bool twin = false;
            for (std::size_t b = 0; b < m; ++b)
                if (x[a] == x[b] && y[a] != y[b]) twin = true;
            if (!twin) return false;
        }
        return true;
    }
    case NodeKind::Inc: {
        const auto x = col(f->block1), y = col(f->block2);
        for (std::size_t a = 0; a < m; ++a) {
            bool found = false;
            for (std::size_t b = 0; b < m; ++b)
                if (y[b] == x[a]) found = true;
            if (!found) return false;
        }
        return true;
    }
    case NodeKind::Exc: {
        const auto x = col(f->block1), y = col(f->block2);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                if (y[b] == x[a]) return false;
        return true;
    }
    case NodeKind::Indep: {
        auto x = col(f->block1), y = col(f->block2), z = col(f->block3);
        // members with equal argument values are interchangeable here
        std::set<std::array<std::uint32_t, 3>> distinct;
        for (std::size_t i = 0; i < m; ++i) distinct.insert({x[i], y[i], z[i]});
        std::vector<std::array<std::uint32_t, 3>> row(distinct.begin(), distinct.end());
        for (const auto& a : row)
            for (const auto& b : row) {
                if (a[0] != b[0]) continue;
                bool found = false;
                for (const auto& c : row)
                    if (c[0] == a[0] && c[1] == a[1] && c[2] == b[2]) found = true;
                if (!found) return false;
            }
        return true;
    }
    case NodeKind::RelInc: {
        const auto x = col(f->block1), y = col(f->block2);
        const auto ga = guard_col(f->alpha), gb = guard_col(f->beta);
        for (std::size_t a = 0; a < m; ++a) {
            if (!ga[a]) continue;
            bool found = false;
            for (std::size_t b = 0; b < m; ++b)
                if (gb[b] && y[b] == x[a]) found = true;
            if (!found) return false;
        }
        return true;
    }
    case NodeKind::RelExc: {
        const auto x = col(f->block1), y = col(f->block2);
        const auto ga = guard_col(f->alpha), gb = guard_col(f->beta);
        for (std::size_t a = 0; a < m; ++a) {
            if (!ga[a]) continue;
            for (std::size_t b = 0; b < m; ++b)
                if (gb[b] && y[b] == x[a]) return false;
        }
        return true;
    }
    case NodeKind::PrimInc: {
        if (team.empty()) return true;
        std::uint32_t want = 0;
        for (std::size_t j = 0; j < f->bits.size(); ++j)
            if (f->bits[j]) want |= 1u << j;
        for (auto v : col(f->block1))
            if (v == want) return true;
        return false;
    }
    case NodeKind::NonConst: {
        if (team.empty()) return true;
        const auto x = col(f->block1);
        for (auto v : x)
            if (v != x[0]) return true;
        return false;
    }
    default:
        FAIL("unhandled node kind");
        return false;
    }
}

// ---------------------------------------------------------------------------
// random formula generators

struct Gen {
    std::mt19937 rng;
    explicit Gen(std::uint32_t seed) : rng(seed) {}
    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    bool chance(int num, int den) { return pick(static_cast<std::size_t>(den)) <
                                           static_cast<std::size_t>(num); }

    const std::string& var(const Names& vars) { return vars[pick(vars.size())]; }

    Formula pl(const Names& vars, int depth) {
        if (depth == 0 || chance(2, 5)) {
            switch (pick(6)) {
            case 0: return top();
            case 1: return bot();
            default: return lit(var(vars), chance(1, 2));
            }
        }
        return chance(1, 2) ? conj(pl(vars, depth - 1), pl(vars, depth - 1))
                            : disj(pl(vars, depth - 1), pl(vars, depth - 1));
    }

    std::vector<Formula> block(const Names& vars, std::size_t max_len, bool allow_empty) {
        std::size_t len = pick(max_len + (allow_empty ? 1 : 0)) + (allow_empty ? 0 : 1);
        std::vector<Formula> b;
        for (std::size_t i = 0; i < len; ++i)
            b.push_back(chance(1, 5) ? pl(vars, 1) : lit(var(vars), chance(3, 4)));
        return b;
    }

    Formula atom(const Names& vars) {
        switch (pick(10)) {
        case 0: return dep_atom(block(vars, 2, true), pl(vars, 1));
        case 1: return anon_atom(block(vars, 2, true), pl(vars, 1));
        case 2: {
            auto ps = block(vars, 2, true);
            std::vector<Formula> qs;
            for (std::size_t i = 0; i < ps.size(); ++i)
                qs.push_back(chance(1, 5) ? pl(vars, 1) : lit(var(vars), chance(3, 4)));
            return inc_atom(ps, qs);
        }
        case 3: {
            auto ps = block(vars, 2, true);
            std::vector<Formula> qs;
            for (std::size_t i = 0; i < ps.size(); ++i) qs.push_back(lit(var(vars), chance(3, 4)));
            return exc_atom(ps, qs);
        }
        case 4: return indep_atom(block(vars, 1, true), block(vars, 1, false),
                                  block(vars, 1, false));
        case 5: {
            auto ps = block(vars, 2, true);
            std::vector<Formula> qs;
            for (std::size_t i = 0; i < ps.size(); ++i) qs.push_back(lit(var(vars), chance(3, 4)));
            return rel_inc_atom(ps, pl(vars, 1), qs, pl(vars, 1));
        }
        case 6: {
            auto ps = block(vars, 2, true);
            std::vector<Formula> qs;
            for (std::size_t i = 0; i < ps.size(); ++i) qs.push_back(lit(var(vars), chance(3, 4)));
            return rel_exc_atom(ps, pl(vars, 1), qs, pl(vars, 1));
        }
        case 7: {
            auto ps = block(vars, 2, false);
            std::vector<char> bits;
            for (std::size_t i = 0; i < ps.size(); ++i) bits.push_back(chance(1, 2) ? 1 : 0);
            return prim_inc_atom(bits, ps);
        }
        case 8: return nonconst_atom(block(vars, 2, false));
        default: return ne_atom();
        }
    }

    // connective mix without lax splits or subteam modals; safe under forall
    Formula calm(const Names& vars, int depth) {
        if (depth == 0 || chance(1, 3)) {
            switch (pick(4)) {
            case 0: return lit(var(vars), chance(1, 2));
            case 1: return ne_atom();
            default: return atom(vars);
            }
        }
        switch (pick(5)) {
        case 0: return conj(calm(vars, depth - 1), calm(vars, depth - 1));
        case 1: return global_or(calm(vars, depth - 1), calm(vars, depth - 1));
        case 2: return forall(var(vars), calm(vars, depth - 1));
        case 3: return smight(calm(vars, depth - 1));
        default: return conj(pl(vars, depth - 1), calm(vars, depth - 1));
        }
    }

    // full connective mix minus existentials; lax splits kept off forall paths
    Formula wild(const Names& vars, int depth) {
        if (depth == 0) return calm(vars, 0);
        switch (pick(8)) {
        case 0: return conj(wild(vars, depth - 1), wild(vars, depth - 1));
        case 1: return disj(wild(vars, depth - 1), wild(vars, depth - 1));
        case 2: return global_or(wild(vars, depth - 1), wild(vars, depth - 1));
        case 3: return forall(var(vars), calm(vars, depth - 1));
        case 4: return might(calm(vars, depth - 1));
        case 5: return emight(calm(vars, depth - 1));
        case 6: return smight(wild(vars, depth - 1));
        default: return calm(vars, depth);
        }
    }

    // existential block: flat conjuncts plus a few team conjuncts
    Formula eblock(const Names& outer, bool& two_binders) {
        static const Names pool{"u", "v", "p", "q"};
        Names binders{pool[pick(pool.size())]};
        two_binders = chance(2, 5);
        if (two_binders) binders.push_back(pool[pick(pool.size())]);
        Names inner = outer;
        for (const auto& b : binders) inner.push_back(b);

        std::vector<Formula> conjuncts{pl(inner, 2)};
        // the reference evaluator pays 3^|T| per binder, so keep doubly
        // quantified bodies lean
        std::size_t extra = two_binders ? pick(2) : pick(3);
        for (std::size_t i = 0; i < extra; ++i) {
            switch (two_binders ? pick(2) : pick(4)) {
            case 0: conjuncts.push_back(atom(inner)); break;
            case 1: conjuncts.push_back(ne_atom()); break;
            case 2: conjuncts.push_back(might(pl(inner, 1))); break;
            default: conjuncts.push_back(pl(inner, 1)); break;
            }
        }
        std::shuffle(conjuncts.begin(), conjuncts.end(), rng);
        Formula body = conj_all(conjuncts);
        for (std::size_t i = binders.size(); i-- > 0;) body = exists(binders[i], body);

        switch (pick(4)) {
        case 0: return conj(body, atom(outer));
        case 1: return disj(body, lit(var(outer), chance(1, 2)));
        default: return body;
        }
    }
};

TeamV team_of_mask(std::uint32_t mask, std::size_t nevals) {
    TeamV t;
    for (std::uint32_t e = 0; e < nevals; ++e)
        if ((mask >> e) & 1u) t.push_back(e);
    return t;
}

bool engine_sat(const Formula& f, const Scope& scope, const TeamV& team,
                const EvalOptions& opt) {
    return satisfies(make_team(scope, team), f, opt);
}

Team t2(std::initializer_list<std::uint32_t> members) {
    return make_team(make_scope({"p1", "q"}), members);
}

} // namespace

TEST_CASE("atoms on explicit two variable teams") {
    // scope [p1, q]: evaluation code bit 0 is p1, bit 1 is q
    const auto dep_pq = dep_atom({lit("p1")}, lit("q"));
    CHECK(satisfies(t2({0b11, 0b00}), dep_pq));
    CHECK_FALSE(satisfies(t2({0b11, 0b01}), dep_pq));
    CHECK(satisfies(t2({0b11, 0b01, 0b00}), dep_atom({}, lit("p1"))) == false);
    CHECK(satisfies(t2({0b11, 0b01}), dep_atom({}, lit("p1"))));

    const auto anon_pq = anon_atom({lit("p1")}, lit("q"));
    CHECK(satisfies(t2({0b01, 0b11}), anon_pq));
    CHECK_FALSE(satisfies(t2({0b01, 0b00}), anon_pq));
    CHECK_FALSE(satisfies(t2({0b11}), anon_pq));

    const auto exc_pq = exc_atom({lit("p1")}, {lit("q")});
    CHECK_FALSE(satisfies(t2({0b11, 0b00}), exc_pq));
    // 00 takes p1 to 0 and both members take q to 0, so the values meet
    CHECK_FALSE(satisfies(t2({0b01, 0b00}), exc_pq));
    CHECK(satisfies(t2({0b01}), exc_pq));

    const auto inc_pq = inc_atom({lit("p1")}, {lit("q")});
    CHECK(satisfies(t2({0b01, 0b10}), inc_pq));
    CHECK_FALSE(satisfies(t2({0b01}), inc_pq));

    const auto ind = indep_atom({}, {lit("p1")}, {lit("q")});
    CHECK(satisfies(t2({0b00, 0b01, 0b10, 0b11}), ind));
    CHECK(satisfies(t2({0b00}), ind));
    CHECK_FALSE(satisfies(t2({0b00, 0b11}), ind));
}

TEST_CASE("empty team satisfies everything except NE and strict might") {
    const Scope s = make_scope({"p1", "q"});
    const Team empty = make_team(s, {});
    const std::vector<Formula> sat_by_empty = {
        top(), bot(), lit("p1"), lit("q", false),
        conj(lit("p1"), lit("q")), disj(lit("p1"), bot()),
        dep_atom({lit("p1")}, lit("q")), anon_atom({lit("p1")}, lit("q")),
        inc_atom({lit("p1")}, {lit("q")}), exc_atom({lit("p1")}, {lit("q")}),
        indep_atom({}, {lit("p1")}, {lit("q")}),
        rel_inc_atom({lit("p1")}, top(), {lit("q")}, bot()),
        rel_exc_atom({lit("p1")}, top(), {lit("q")}, top()),
        prim_inc_atom({1}, {lit("p1")}), nonconst_atom({lit("p1")}),
        might(ne_atom()), smight(bot()), might(bot()),
        exists("z", top()), forall("z", dep_atom({lit("p1")}, lit("z"))),
    };
    for (const auto& f : sat_by_empty) {
        CAPTURE(render_formula(f));
        CHECK(satisfies(empty, f));
    }
    CHECK_FALSE(satisfies(empty, ne_atom()));
    CHECK_FALSE(satisfies(empty, emight(top())));
    CHECK_FALSE(satisfies(empty, exists("z", ne_atom())));
}

TEST_CASE("team text and json round trips") {
    const Team t = parse_team("scope=[p,q]; {11,00}");
    CHECK(t.scope.vars == std::vector<std::string>{"p", "q"});
    CHECK(t.members == std::vector<std::uint32_t>{0b00, 0b11});
    CHECK(team_to_text(t) == "scope=[p,q]; {00,11}");
    CHECK(parse_team(team_to_text(t)) == t);

    const Team empty = parse_team("scope=[p]; {}");
    CHECK(empty.members.empty());
    CHECK(team_to_text(empty) == "scope=[p]; {}");

    const Team j = team_from_json(R"({"scope":["p","q"],"teams":[["11","00"]]})");
    CHECK(j == t);
    CHECK(team_from_json(team_to_json(t)) == t);

    CHECK_THROWS_AS(parse_team("scope=[p,q]; {1}"), ParseError);
    CHECK_THROWS_AS(parse_team("scope=[p,p]; {11}"), ParseError);
    CHECK_THROWS_AS(parse_team("scope=[p]; {1} extra"), ParseError);
    CHECK_THROWS_AS(parse_team("scope=[]; {}"), ParseError);
    CHECK_THROWS_AS(team_from_json(R"({"scope":["p"],"teams":[["1"],["0"]]})"), ParseError);
    CHECK_THROWS_AS(team_from_json(R"({"scope":["p"],"teams":[["2"]]})"), ParseError);
    CHECK_THROWS_AS(team_from_json("[1,2,3]"), ParseError);
    CHECK_THROWS_AS(team_from_json("not json"), ParseError);
}

TEST_CASE("team construction masks and restriction") {
    const Scope s = make_scope({"p", "q"});
    const Team t = make_team(s, {3, 1, 3, 0});
    CHECK(t.members == std::vector<std::uint32_t>{0, 1, 3});
    CHECK(t.eval_mask() == 0b1011);
    CHECK(team_from_mask(s, 0b1011) == t);

    CHECK_THROWS_AS(make_team(s, {4}), DomainError);
    CHECK_THROWS_AS(make_scope({"p", "p"}), DomainError);
    CHECK_THROWS_AS(make_scope({""}), DomainError);

    // members 11 and 01 agree on q; projection collapses them
    const Team r = restrict_team(make_team(s, {0b11, 0b01, 0b00}), make_scope({"q"}));
    CHECK(r.members == std::vector<std::uint32_t>{0, 1});
    CHECK_THROWS_AS(restrict_team(t, make_scope({"z"})), DomainError);

    const Scope s3 = make_scope({"a", "b", "c"});
    const Team big = make_team(s3, {0b101, 0b011});
    const Team rr = restrict_team(big, make_scope({"c", "a"}));
    // 101 is a=1,b=0,c=1 -> (c,a) = 11 -> code 3; 011 is a=1,b=1,c=0 -> (c,a)=01 -> code 2
    CHECK(rr.members == std::vector<std::uint32_t>{0b10, 0b11});
}

TEST_CASE("dependence property over two variables: nine teams, dimension four") {
    const auto prop = team_property(dep_atom({lit("p1")}, lit("q")), make_scope({"p1", "q"}));
    CHECK(prop.family.size() == 9);
    CHECK(closure_profile(prop.family).downward_closed);
    CHECK(closure_profile(prop.family).has_empty_set);
    const auto rep = compute_dimension(prop.family, DimensionKind::upper);
    CHECK(rep.value == 4);

    // dimension does not depend on the ambient scope
    const auto wide =
        team_property(dep_atom({lit("p1")}, lit("q")), make_scope({"p1", "q", "r"}));
    CHECK(compute_dimension(wide.family, DimensionKind::upper).value == 4);
    const auto dual_narrow = compute_dimension(prop.family, DimensionKind::dual_upper);
    const auto dual_wide = compute_dimension(wide.family, DimensionKind::dual_upper);
    CHECK(dual_narrow.value == dual_wide.value);
}

TEST_CASE("independence property over two variables: ten teams, dimension five") {
    const auto prop = team_property(indep_atom({}, {lit("q")}, {lit("r")}),
                                    make_scope({"q", "r"}));
    CHECK(prop.family.size() == 10);
    const auto rep = compute_dimension(prop.family, DimensionKind::upper);
    CHECK(rep.value == 5);
    CHECK(verify_witness(prop.family, rep));
}

TEST_CASE("inclusion of the negated variable keeps only the empty and full teams") {
    const auto prop =
        team_property(inc_atom({lit("p")}, {lit("p", false)}), make_scope({"p"}));
    CHECK(prop.family.size() == 2);
    CHECK(prop.family.contains(0b00));
    CHECK(prop.family.contains(0b11));
    CHECK(compute_dimension(prop.family, DimensionKind::upper).value == 2);
}

TEST_CASE("flat bodies collapse the might forms") {
    Gen g(20260818u);
    const Names vars{"p", "q", "r"};
    for (int i = 0; i < 40; ++i) {
        const Formula a = g.pl(vars, 2);
        const Formula m = might(a);
        const Formula sm = smight(a);
        const Formula ri = rel_inc_atom({}, top(), {}, a);
        CAPTURE(render_formula(a));
        CHECK(check_equivalent(m, sm).equivalent);
        CHECK(check_equivalent(m, ri).equivalent);
    }
    // and on a non-flat body they differ: NE vs a two-element witness
    const Formula body = conj(ne_atom(), nonconst_atom({lit("p")}));
    const auto r = check_equivalent(might(body), smight(body));
    CHECK_FALSE(r.equivalent);
    CHECK(r.lhs);
    CHECK_FALSE(r.rhs);
    CHECK(r.counterexample.members.size() == 2);
}

TEST_CASE("singleton might of a literal pattern is primitive inclusion") {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const Formula pattern = conj(lit("p", x == 1), lit("q", y == 1));
            const Formula pi = prim_inc_atom({static_cast<char>(x), static_cast<char>(y)},
                                             {lit("p"), lit("q")});
            CHECK(check_equivalent(smight(pattern), pi).equivalent);
        }
}

TEST_CASE("downward fragment properties are downward closed with the empty team") {
    Gen g(91u);
    const Names vars{"p", "q"};
    const Scope scope = make_scope(vars);
    for (int i = 0; i < 60; ++i) {
        Formula f;
        switch (g.pick(6)) {
        case 0: f = dep_atom(g.block(vars, 2, true), g.pl(vars, 1)); break;
        case 1: {
            auto ps = g.block(vars, 2, true);
            std::vector<Formula> qs;
            for (std::size_t k = 0; k < ps.size(); ++k) qs.push_back(lit(g.var(vars)));
            f = exc_atom(ps, qs);
            break;
        }
        case 2: f = conj(dep_atom({lit("p")}, lit("q")), g.pl(vars, 2)); break;
        case 3: f = disj(dep_atom({}, g.pl(vars, 1)), exc_atom({lit("p")}, {lit("q")})); break;
        case 4: f = forall("z", dep_atom({lit("z")}, lit(g.var(vars)))); break;
        default: f = exists("z", conj(g.pl({"p", "q", "z"}, 1),
                                      dep_atom({lit(g.var(vars))}, lit("z"))));
        }
        CAPTURE(render_formula(f));
        const auto prof = closure_profile(team_property(f, scope).family);
        CHECK(prof.downward_closed);
        CHECK(prof.has_empty_set);
    }
}

TEST_CASE("union fragment properties are union closed with the empty team") {
    Gen g(92u);
    const Names vars{"p", "q"};
    const Scope scope = make_scope(vars);
    for (int i = 0; i < 60; ++i) {
        Formula f;
        switch (g.pick(6)) {
        case 0: f = anon_atom(g.block(vars, 1, true), g.pl(vars, 1)); break;
        case 1: {
            auto ps = g.block(vars, 2, true);
            std::vector<Formula> qs;
            for (std::size_t k = 0; k < ps.size(); ++k) qs.push_back(lit(g.var(vars)));
            f = inc_atom(ps, qs);
            break;
        }
        case 2: f = conj(inc_atom({lit("p")}, {lit("q")}), anon_atom({}, lit("q"))); break;
        case 3: f = disj(anon_atom({lit("p")}, lit("q")), g.pl(vars, 1)); break;
        case 4: f = might(g.pl(vars, 2)); break;
        default: f = forall("z", inc_atom({lit(g.var(vars))}, {lit("z")}));
        }
        CAPTURE(render_formula(f));
        const auto prof = closure_profile(team_property(f, scope).family);
        CHECK(prof.union_closed);
        CHECK(prof.has_empty_set);
    }
}

TEST_CASE("random formulas agree with the reference evaluator over two variables") {
    Gen g(1001u);
    Names names{"p", "q"};
    const Scope scope = make_scope(names);
    EvalOptions forced;
    forced.force_per_team = true;
    std::size_t checked = 0;
    for (int i = 0; i < 150; ++i) {
        const Formula f = g.wild(names, 3);
        CAPTURE(render_formula(f));
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            const TeamV team = team_of_mask(mask, 4);
            const bool want = oracle(f, names, team);
            CAPTURE(mask);
            REQUIRE(engine_sat(f, scope, team, {}) == want);
            REQUIRE(engine_sat(f, scope, team, forced) == want);
            ++checked;
        }
    }
    CHECK(checked == 150 * 16);
}

TEST_CASE("random formulas agree with the reference evaluator over three variables") {
    Gen g(1002u);
    Names names{"p", "q", "r"};
    const Scope scope = make_scope(names);
    EvalOptions narrow;
    narrow.max_table_vars = 2; // push wide subtrees onto the per-team paths
    for (int i = 0; i < 70; ++i) {
        const Formula f = g.calm(names, 3);
        CAPTURE(render_formula(f));
        for (std::uint32_t mask = 0; mask < 256; ++mask) {
            const TeamV team = team_of_mask(mask, 8);
            const bool want = oracle(f, names, team);
            CAPTURE(mask);
            REQUIRE(engine_sat(f, scope, team, {}) == want);
            REQUIRE(engine_sat(f, scope, team, narrow) == want);
        }
    }
}

TEST_CASE("might over wide teams matches the subset search") {
    Gen g(1006u);
    Names names{"p", "q", "r"};
    const Scope scope = make_scope(names);
    EvalOptions narrow;
    narrow.max_table_vars = 2; // the modal body no longer fits a table
    for (int i = 0; i < 12; ++i) {
        const Formula core = conj(g.atom(names), ne_atom());
        const Formula f = g.chance(1, 2) ? might(core) : emight(core);
        CAPTURE(render_formula(f));
        for (std::uint32_t mask = 0; mask < 64; ++mask) {
            const TeamV team = team_of_mask(mask, 8);
            const bool want = oracle(f, names, team);
            CAPTURE(mask);
            REQUIRE(engine_sat(f, scope, team, {}) == want);
            REQUIRE(engine_sat(f, scope, team, narrow) == want);
        }
    }
}

TEST_CASE("existential blocks agree with the reference evaluator") {
    Gen g(1003u);
    Names names{"p", "q"};
    const Scope scope = make_scope(names);
    EvalOptions forced;
    forced.force_per_team = true;
    for (int i = 0; i < 120; ++i) {
        bool two = false;
        const Formula f = g.eblock(names, two);
        CAPTURE(render_formula(f));
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            const TeamV team = team_of_mask(mask, 4);
            if (two && team.size() > 2) continue; // keep the reference sweep affordable
            const bool want = oracle(f, names, team);
            CAPTURE(mask);
            REQUIRE(engine_sat(f, scope, team, {}) == want);
            REQUIRE(engine_sat(f, scope, team, forced) == want);
        }
    }
}

TEST_CASE("existential block corner cases") {
    Names names{"p", "q"};
    const Scope scope = make_scope(names);

    // rebinding the same variable: the outer binder is dead
    const Formula shadow = parse_formula("E u. E u.(dep(u; p) /\\ NE)");
    // unused binder
    const Formula unused = parse_formula("E u.(dep(p; q))");
    // flat conjuncts only
    const Formula flat_only = parse_formula("E u.(u /\\ (p \\/ ~u))");
    // team conjuncts only
    const Formula team_only = parse_formula("E u.(incl(p, u) /\\ NE)");
    // a nested block inside a team conjunct, one device feeding another
    const Formula nested = parse_formula("E u.(u \\/ E v.(~v /\\ incl(v, p)))");
    // binder shadowing a free variable of the wrapping context
    const Formula shadow_free = conj(exists("p", conj(lit("p"), inc_atom({lit("p")}, {lit("q")}))),
                                     nonconst_atom({lit("q")}));

    for (const Formula& f : {shadow, unused, flat_only, team_only, nested, shadow_free}) {
        CAPTURE(render_formula(f));
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            const TeamV team = team_of_mask(mask, 4);
            const bool want = oracle(f, names, team);
            CAPTURE(mask);
            REQUIRE(engine_sat(f, scope, team, {}) == want);
        }
    }
}

TEST_CASE("existential blocks over a wide scope use the witness search") {
    Gen g(1004u);
    Names names{"a", "b", "c", "d", "e"};
    const Scope scope = make_scope(names);
    for (int i = 0; i < 30; ++i) {
        Names inner = names;
        inner.push_back("u");
        std::vector<Formula> conjuncts{g.pl(inner, 2)};
        if (g.chance(1, 2)) conjuncts.push_back(g.atom(Names{"u", g.var(names), g.var(names)}));
        if (g.chance(1, 2)) conjuncts.push_back(ne_atom());
        std::shuffle(conjuncts.begin(), conjuncts.end(), g.rng);
        const Formula f = exists("u", conj_all(conjuncts));
        CAPTURE(render_formula(f));
        for (int t = 0; t < 40; ++t) {
            TeamV team;
            for (int k = 0; k < 5; ++k) team.push_back(static_cast<std::uint32_t>(g.pick(32)));
            std::sort(team.begin(), team.end());
            team.erase(std::unique(team.begin(), team.end()), team.end());
            const bool want = oracle(f, names, team);
            REQUIRE(engine_sat(f, scope, team, {}) == want);
        }
    }
}

TEST_CASE("property sweeps agree between engine configurations") {
    Gen g(1005u);
    const Names vars{"p", "q"};
    const Scope scope = make_scope(vars);
    EvalOptions forced;
    forced.force_per_team = true;
    for (int i = 0; i < 25; ++i) {
        bool two = false;
        const Formula f = g.chance(1, 2) ? g.wild(vars, 2) : g.eblock(vars, two);
        CAPTURE(render_formula(f));
        const auto a = team_property(f, scope);
        const auto b = team_property(f, scope, forced);
        REQUIRE(a.family.members() == b.family.members());
    }
}

TEST_CASE("equivalence reports the first separating team") {
    const auto r = check_equivalent(ne_atom(), top());
    CHECK_FALSE(r.equivalent);
    CHECK(r.counterexample.members.empty());
    CHECK_FALSE(r.lhs);
    CHECK(r.rhs);

    const auto r2 = check_equivalent(lit("p"), conj(lit("p"), top()));
    CHECK(r2.equivalent);

    // p and might p agree on the empty team and both singletons; the full
    // team is the first separation
    const auto r3 = check_equivalent(lit("p"), might(lit("p")));
    CHECK_FALSE(r3.equivalent);
    CHECK(r3.counterexample.members == std::vector<std::uint32_t>{0, 1});

    CHECK_THROWS_AS(check_equivalent(lit("p"), lit("q")), DomainError);
}

TEST_CASE("caps and scope validation") {
    const Scope seven = make_scope({"a", "b", "c", "d", "e", "f", "g"});
    CHECK_THROWS_AS(satisfies(make_team(seven, {}), top()), CapError);

    const Scope five = make_scope({"a", "b", "c", "d", "e"});
    CHECK_THROWS_AS(team_property(top(), five), CapError);

    const Scope s = make_scope({"p"});
    CHECK_THROWS_AS(satisfies(make_team(s, {}), lit("q")), DomainError);
    CHECK_THROWS_AS(team_property(lit("q"), s), DomainError);

    // a team of 14 evaluations refuses the lax split fallback
    const Scope four = make_scope({"a", "b", "c", "d"});
    EvalOptions forced;
    forced.force_per_team = true;
    TeamV big;
    for (std::uint32_t e = 0; e < 14; ++e) big.push_back(e);
    const Formula split_heavy = disj(ne_atom(), ne_atom());
    CHECK_THROWS_AS(satisfies(make_team(four, big), split_heavy, forced), CapError);
    // with the table engine available the same query is fine
    CHECK(satisfies(make_team(four, big), split_heavy));

    // scope extension never changes satisfaction: padding variables are inert
    const Formula f = disj(dep_atom({lit("a")}, lit("b")), ne_atom());
    const Team narrow = make_team(make_scope({"a", "b"}), {0b00, 0b11});
    const Team wide = make_team(make_scope({"a", "b", "c"}), {0b000, 0b100, 0b011, 0b111});
    CHECK(satisfies(narrow, f) == satisfies(wide, f));
}
