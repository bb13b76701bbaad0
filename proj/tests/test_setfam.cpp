#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "support.hpp"
#include "teamdim/error.hpp"
#include "teamdim/setfam.hpp"

using namespace teamdim;

namespace {

Mask mk(const BaseSet& base, std::initializer_list<const char*> names) {
    Mask m = 0;
    for (auto n : names) m |= Mask{1} << *base.index(n);
    return m;
}

std::set<Mask> as_set(const SetFamily& f) {
    return std::set<Mask>(f.members().begin(), f.members().end());
}

const BaseSet b4{4}; // a b c d

SetFamily example_D() {
    return SetFamily(b4, {mk(b4, {"c"}), mk(b4, {"a", "c"}), mk(b4, {"c", "d"}),
                          mk(b4, {"a", "b", "c"})});
}

} // namespace

TEST_CASE("interval basics") {
    BaseSet b{2};
    CHECK(as_set(interval(b, 0, mk(b, {"a"}))) == std::set<Mask>{0, 1});
    CHECK(as_set(interval(b, mk(b, {"a"}), mk(b, {"a"}))) == std::set<Mask>{1});
    CHECK(interval(b, mk(b, {"a"}), 0).empty());
    CHECK(interval(b, 0, b.full_mask()).size() == 4);
    CHECK_THROWS_AS(interval(b, 0, 0x10), DomainError);
}

TEST_CASE("convex shadows of the four-member example family") {
    auto d = example_D();
    CHECK(as_set(convex_shadow(d, mk(b4, {"a", "b", "c"}))) ==
          std::set<Mask>{mk(b4, {"a", "c"}), mk(b4, {"a", "b", "c"})});
    CHECK(as_set(convex_shadow(d, mk(b4, {"a", "c"}))) ==
          std::set<Mask>{mk(b4, {"c"}), mk(b4, {"a", "c"})});
    CHECK(as_set(convex_shadow(d, mk(b4, {"c", "d"}))) ==
          std::set<Mask>{mk(b4, {"c"}), mk(b4, {"c", "d"})});
    CHECK(as_set(convex_shadow(d, mk(b4, {"c"}), true)) ==
          std::set<Mask>{mk(b4, {"c"}), mk(b4, {"a", "c"}), mk(b4, {"c", "d"})});
    CHECK_THROWS_AS(convex_shadow(d, mk(b4, {"a"})), DomainError);
}

TEST_CASE("critical sets of the four-member example family") {
    auto d = example_D();
    CHECK(as_set(critical_sets(d)) == std::set<Mask>{mk(b4, {"a", "c"}), mk(b4, {"c", "d"}),
                                                     mk(b4, {"a", "b", "c"})});
}

TEST_CASE("extremal sets") {
    BaseSet b3{3};
    SetFamily afig(b3, {0, mk(b3, {"a"}), mk(b3, {"b"}), mk(b3, {"c"}), mk(b3, {"a", "b"}),
                        mk(b3, {"b", "c"})});
    CHECK(as_set(extremal_sets(afig, Extremal::max)) ==
          std::set<Mask>{mk(b3, {"a", "b"}), mk(b3, {"b", "c"})});
    CHECK(as_set(extremal_sets(afig, Extremal::min)) == std::set<Mask>{0});

    SetFamily g(b3, {0, mk(b3, {"a"}), mk(b3, {"a", "b"}), mk(b3, {"a", "c"}),
                     mk(b3, {"a", "b", "c"})});
    CHECK(as_set(extremal_sets(g, Extremal::min_q)) == std::set<Mask>{0, mk(b3, {"a"})});
    CHECK(as_set(extremal_sets(g, Extremal::max_q)) ==
          std::set<Mask>{mk(b3, {"a", "b"}), mk(b3, {"a", "c"}), mk(b3, {"a", "b", "c"})});

    SetFamily single(BaseSet{1}, {1});
    CHECK(as_set(extremal_sets(single, Extremal::max)) == std::set<Mask>{1});

    SetFamily no_empty(b3, {mk(b3, {"a"})});
    CHECK_THROWS_AS(extremal_sets(no_empty, Extremal::min_q), DomainError);
    CHECK_THROWS_AS(extremal_sets(no_empty, Extremal::max_q), DomainError);
}

TEST_CASE("closure profile flags") {
    BaseSet bb{4};
    SetFamily bfig(bb, {0, mk(bb, {"c"}), mk(bb, {"a", "b"}), mk(bb, {"a", "b", "c"}),
                        mk(bb, {"a", "b", "c", "d"})});
    auto pb = closure_profile(bfig);
    CHECK(pb.union_closed);
    CHECK_FALSE(pb.downward_closed);

    SetFamily cfig(bb, {0, mk(bb, {"a", "b"}), mk(bb, {"b", "c"}), mk(bb, {"a", "b", "c"}),
                        mk(bb, {"a", "b", "d"}), mk(bb, {"b", "c", "d"}),
                        mk(bb, {"a", "b", "c", "d"})});
    auto pc = closure_profile(cfig);
    CHECK(pc.quasi_upward);
    CHECK_FALSE(pc.upward_closed);

    BaseSet b2{2};
    std::vector<Mask> all;
    for (Mask m = 0; m < 4; ++m) all.push_back(m);
    auto pp = closure_profile(SetFamily(b2, all));
    CHECK(pp.downward_closed);
    CHECK(pp.upward_closed);
    CHECK(pp.convex);
    CHECK(pp.union_closed);
    CHECK(pp.intersection_closed);
    CHECK_FALSE(pp.quasi_downward);
    CHECK_FALSE(pp.quasi_upward);
    CHECK(pp.flat_compatible);
}

TEST_CASE("shadow and critical sets agree with brute force on every base-3 family") {
    BaseSet b3{3};
    for (unsigned bits = 1; bits < 256; ++bits) {
        std::vector<Mask> members;
        for (unsigned i = 0; i < 8; ++i)
            if (bits & (1u << i)) members.push_back(i);
        SetFamily f(b3, members);
        for (Mask m : f.members()) {
            for (bool dual : {false, true}) {
                auto got = as_set(convex_shadow(f, m, dual));
                auto want = brute::shadow(f, m, dual);
                REQUIRE(got == std::set<Mask>(want.begin(), want.end()));
            }
        }
        for (bool dual : {false, true})
            REQUIRE(as_set(critical_sets(f, dual)) == brute::critical(f, dual));
    }
}

TEST_CASE("closure profile agrees with brute force on random base-4 families") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 300; ++iter) {
        auto f = brute::random_family(rng, 4, 0.35);
        auto p = closure_profile(f);

        bool dc = true, uc = true, convex = true, un = true, in = true;
        for (Mask a : f.members()) {
            for (Mask s : brute::submasks(a))
                if (!f.contains(s)) dc = false;
            for (Mask c : brute::submasks(f.base_mask() & ~a))
                if (!f.contains(a | c)) uc = false;
            for (Mask b : f.members()) {
                if (!f.contains(a | b)) un = false;
                if (!f.contains(a & b)) in = false;
                if (subset_of(a, b))
                    for (Mask s : brute::submasks(b & ~a))
                        if (!f.contains(a | s)) convex = false;
            }
        }
        REQUIRE(p.downward_closed == dc);
        REQUIRE(p.upward_closed == uc);
        REQUIRE(p.convex == convex);
        REQUIRE(p.union_closed == un);
        REQUIRE(p.intersection_closed == in);
        REQUIRE(p.downward_closed == (p.convex && p.has_empty_set));
        REQUIRE(p.upward_closed == (p.convex && p.has_base_set));
        if (p.quasi_downward) REQUIRE_FALSE(p.downward_closed);
        if (p.quasi_upward) REQUIRE_FALSE(p.upward_closed);

        for (Mask m : f.members()) {
            auto sh = convex_shadow(f, m);
            CHECK(sh.contains(m));
            for (Mask s : sh.members()) CHECK(subset_of(s, m));
        }
        auto mx = extremal_sets(f, Extremal::max);
        auto crit = critical_sets(f);
        for (Mask m : mx.members()) CHECK(crit.contains(m));
        auto mn = extremal_sets(f, Extremal::min);
        auto critd = critical_sets(f, true);
        for (Mask m : mn.members()) CHECK(critd.contains(m));
    }
}

TEST_CASE("quasi extremal identities from the closure lemmas") {
    std::mt19937_64 rng(7);
    int seen_qdc = 0, seen_quc = 0;
    for (int iter = 0; iter < 2000; ++iter) {
        auto f = brute::random_family(rng, 4, 0.3);
        auto p = closure_profile(f);
        if (p.convex) {
            CHECK(as_set(critical_sets(f)) == as_set(extremal_sets(f, Extremal::max)));
            CHECK(as_set(critical_sets(f, true)) == as_set(extremal_sets(f, Extremal::min)));
        }
        if (p.quasi_downward) {
            ++seen_qdc;
            CHECK(as_set(critical_sets(f)) == as_set(extremal_sets(f, Extremal::max_q)));
        }
        if (p.quasi_upward) {
            ++seen_quc;
            CHECK(as_set(critical_sets(f, true)) == as_set(extremal_sets(f, Extremal::min_q)));
        }
    }
    CHECK(seen_qdc > 0);
    CHECK(seen_quc > 0);
}

TEST_CASE("family text and JSON round trips") {
    auto d = example_D();
    CHECK(family_to_text(d) == "base={a,b,c,d}; {{c},{a,c},{c,d},{a,b,c}}");
    CHECK(parse_family(family_to_text(d)) == d);
    CHECK(parse_family(family_to_json(d)) == d);
    CHECK(parse_family("base = { a , b , c , d } ;  { { c } , { a , c },{c,d},{a,b,c}}") == d);
    CHECK(parse_family("{\"base\":4,\"members\":[[2],[0,2],[2,3],[0,1,2]]}") == d);

    SetFamily empt(BaseSet{1}, {});
    CHECK(parse_family(family_to_text(empt)) == empt);
    SetFamily with_empty(BaseSet{1}, {0});
    CHECK(family_to_text(with_empty) == "base={a}; {{}}");
    CHECK(parse_family(family_to_text(with_empty)) == with_empty);

    CHECK_THROWS_AS(parse_family("base={a}; {{b}}"), ParseError);
    CHECK_THROWS_AS(parse_family("base={a}; {{a}"), ParseError);
    CHECK_THROWS_AS(parse_family("{\"base\":1,\"members\":[[3]]}"), ParseError);
}

TEST_CASE("size caps are reported") {
    CHECK_THROWS_AS(SetFamily(BaseSet{22}, {}), CapError);
    FamilyLimits tight;
    tight.max_members = 2;
    CHECK_THROWS_AS(SetFamily(BaseSet{2}, {0, 1, 2}, tight), CapError);
    CHECK_THROWS_AS(interval(BaseSet{3}, 0, 7, tight), CapError);
}
