#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"
#include "teamdim/dimension.hpp"
#include "teamdim/error.hpp"

using namespace teamdim;

namespace {

SetFamily fam(const std::string& text) { return parse_family(text); }

std::set<Mask> as_set(const std::vector<Mask>& v) { return std::set<Mask>(v.begin(), v.end()); }

std::uint64_t dim(const SetFamily& f, DimensionKind k) { return compute_dimension(f, k).value; }

void check_report_contract(const SetFamily& f, DimensionKind kind) {
    auto r = compute_dimension(f, kind);
    CHECK(verify_witness(f, r));
    if (kind == DimensionKind::cylindrical) {
        CHECK(r.intervals.size() == r.value);
    } else {
        CHECK(r.witness.size() == r.value);
        for (Mask w : r.witness) CHECK(f.contains(w));
    }
    if (kind == DimensionKind::upper || kind == DimensionKind::dual_upper) {
        bool dual = kind == DimensionKind::dual_upper;
        auto crit = critical_sets(f, dual);
        for (Mask w : r.witness) CHECK(crit.contains(w));
        if (r.profile.convex) {
            auto ext = extremal_sets(f, dual ? Extremal::min : Extremal::max);
            for (Mask m : ext.members())
                CHECK(std::find(r.witness.begin(), r.witness.end(), m) != r.witness.end());
        }
        CHECK(r.value <= crit.size());
    }
}

} // namespace

TEST_CASE("figure family values") {
    auto a = fam("base={a,b,c}; {{},{a},{b},{c},{a,b},{b,c}}");
    CHECK(dim(a, DimensionKind::upper) == 2);
    CHECK(dim(a, DimensionKind::dual_upper) == 1);

    auto b = fam("base={a,b,c,d}; {{},{c},{a,b},{a,b,c},{a,b,c,d}}");
    CHECK(dim(b, DimensionKind::upper) == 3);
    CHECK(dim(b, DimensionKind::dual_upper) == 3);
    auto bu = compute_dimension(b, DimensionKind::union_);
    CHECK(bu.value == 3);
    CHECK(as_set(bu.witness) == as_set({0b0100, 0b0011, 0b1111}));
    CHECK(verify_witness(b, bu));

    auto c = fam("base={a,b,c,d}; {{},{a,b},{b,c},{a,b,c},{a,b,d},{b,c,d},{a,b,c,d}}");
    CHECK(dim(c, DimensionKind::upper) == 2);
    CHECK(dim(c, DimensionKind::dual_upper) == 3);
    auto cd = compute_dimension(c, DimensionKind::dual_upper);
    CHECK(as_set(cd.witness) == as_set({0, 0b0011, 0b0110}));

    auto q = fam("base={a,b}; {{},{b},{a,b}}");
    CHECK(dim(q, DimensionKind::upper) == 2);
    CHECK(dim(q, DimensionKind::dual_upper) == 2);
}

TEST_CASE("the example family beats its critical count") {
    auto d = fam("base={a,b,c,d}; {{c},{a,c},{c,d},{a,b,c}}");
    auto up = compute_dimension(d, DimensionKind::upper);
    CHECK(up.value == 2);
    CHECK(up.witness == std::vector<Mask>{0b1100, 0b0111});
    CHECK(critical_sets(d).size() == 3);
    CHECK(up.path == DimensionPath::exact_cover);

    CHECK(dim(d, DimensionKind::dual_upper) == 2);
    CHECK(dim(d, DimensionKind::cylindrical) == 2);

    DimensionReport fake;
    fake.kind = DimensionKind::upper;
    fake.value = 1;
    fake.witness = {0b0101};
    CHECK_FALSE(verify_witness(d, fake));
    DimensionReport good;
    good.kind = DimensionKind::upper;
    good.value = 2;
    good.witness = {0b1100, 0b0111};
    CHECK(verify_witness(d, good));
}

TEST_CASE("trivial shapes have dimension one in every covering sense") {
    auto iv = interval(BaseSet{3}, 0b001, 0b111);
    for (auto kind :
         {DimensionKind::upper, DimensionKind::dual_upper, DimensionKind::cylindrical}) {
        auto r = compute_dimension(iv, kind);
        CHECK(r.value == 1);
    }
    auto pow = interval(BaseSet{3}, 0, 0b111);
    CHECK(dim(pow, DimensionKind::upper) == 1);
    CHECK(dim(pow, DimensionKind::dual_upper) == 1);
    CHECK(dim(pow, DimensionKind::cylindrical) == 1);
    CHECK(check_dimension_identities(pow).pass);
}

TEST_CASE("fast paths label their dispatch") {
    auto dc = fam("base={a,b}; {{},{a},{b}}");
    auto r = compute_dimension(dc, DimensionKind::upper);
    CHECK(r.path == DimensionPath::fast_closed_form);
    CHECK(r.path_detail == "downward_closed");
    CHECK(r.witness == std::vector<Mask>{1, 2});
    auto rd = compute_dimension(dc, DimensionKind::dual_upper);
    CHECK(rd.value == 1);
    CHECK(rd.witness == std::vector<Mask>{0});

    auto uc = fam("base={a,b}; {{a},{b},{a,b}}");
    CHECK(compute_dimension(uc, DimensionKind::upper).witness == std::vector<Mask>{3});
    CHECK(compute_dimension(uc, DimensionKind::dual_upper).witness == std::vector<Mask>{1, 2});

    auto quc = fam("base={a,b,c}; {{},{a,b},{b,c},{a,b,c}}");
    auto rq = compute_dimension(quc, DimensionKind::upper);
    CHECK(rq.value == 2);
    CHECK(rq.path_detail == "quasi_upward");
    CHECK(verify_witness(quc, rq));
}

TEST_CASE("union and intersection dimensions need the closure and the unit") {
    auto not_closed = fam("base={a,b}; {{},{a},{b}}");
    CHECK_THROWS_AS(compute_dimension(not_closed, DimensionKind::union_), DomainError);
    auto no_empty = fam("base={a,b}; {{a},{a,b}}");
    CHECK_THROWS_AS(compute_dimension(no_empty, DimensionKind::union_), DomainError);
    auto no_base = fam("base={a,b}; {{},{a}}");
    CHECK_THROWS_AS(compute_dimension(no_base, DimensionKind::intersection), DomainError);

    auto pow = interval(BaseSet{2}, 0, 0b11);
    auto ui = compute_dimension(pow, DimensionKind::union_);
    CHECK(ui.value == 2);
    CHECK(as_set(ui.witness) == as_set({1, 2}));
    auto ii = compute_dimension(pow, DimensionKind::intersection);
    CHECK(ii.value == 2);
    CHECK(as_set(ii.witness) == as_set({1, 2}));

    CHECK_THROWS_AS(compute_dimension(SetFamily(BaseSet{2}, {}), DimensionKind::upper),
                    DomainError);
}

TEST_CASE("engine agrees with brute force on every base-3 family") {
    BaseSet b3{3};
    for (unsigned bits = 1; bits < 256; ++bits) {
        std::vector<Mask> members;
        for (unsigned i = 0; i < 8; ++i)
            if (bits & (1u << i)) members.push_back(i);
        SetFamily f(b3, members);

        for (bool dual : {false, true}) {
            auto kind = dual ? DimensionKind::dual_upper : DimensionKind::upper;
            auto r = compute_dimension(f, kind);
            REQUIRE(r.value == brute::dim_cover(f, dual));
            DimensionOptions strict;
            strict.force_exact = true;
            auto rx = compute_dimension(f, kind, strict);
            REQUIRE(rx.value == r.value);
            REQUIRE(rx.witness == r.witness);
            check_report_contract(f, kind);
        }

        auto rc = compute_dimension(f, DimensionKind::cylindrical);
        REQUIRE(rc.value == brute::cyl_cover(f));
        check_report_contract(f, DimensionKind::cylindrical);

        auto p = closure_profile(f);
        if (p.union_closed && p.has_empty_set) {
            auto ru = compute_dimension(f, DimensionKind::union_);
            REQUIRE(ru.value == brute::min_generators(f, false));
            check_report_contract(f, DimensionKind::union_);
        }
        if (p.intersection_closed && p.has_base_set) {
            auto ri = compute_dimension(f, DimensionKind::intersection);
            REQUIRE(ri.value == brute::min_generators(f, true));
            check_report_contract(f, DimensionKind::intersection);
        }

        auto ids = check_dimension_identities(f);
        REQUIRE(ids.pass);
        REQUIRE(ids.upper <= ids.cylindrical);
        REQUIRE(ids.dual_upper <= ids.cylindrical);
    }
}

TEST_CASE("engine agrees with brute force on random larger families") {
    std::mt19937_64 rng(2026);
    for (int iter = 0; iter < 200; ++iter) {
        unsigned base = iter % 3 == 0 ? 5 : 4;
        auto f = brute::random_family(rng, base, base == 5 ? 0.22 : 0.35);
        for (bool dual : {false, true}) {
            auto kind = dual ? DimensionKind::dual_upper : DimensionKind::upper;
            auto r = compute_dimension(f, kind);
            REQUIRE(r.value == brute::dim_cover(f, dual));
            check_report_contract(f, kind);
        }
        REQUIRE(compute_dimension(f, DimensionKind::cylindrical).value == brute::cyl_cover(f));
        REQUIRE(check_dimension_identities(f).pass);
    }
}

TEST_CASE("dimension values are invariant under base relabeling") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 60; ++iter) {
        auto f = brute::random_family(rng, 4, 0.4);
        std::vector<unsigned> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Mask> mapped;
        for (Mask m : f.members()) {
            Mask out = 0;
            for (unsigned i = 0; i < 4; ++i)
                if (m & (Mask{1} << i)) out |= Mask{1} << perm[i];
            mapped.push_back(out);
        }
        SetFamily g(BaseSet{4}, mapped);
        for (auto kind :
             {DimensionKind::upper, DimensionKind::dual_upper, DimensionKind::cylindrical})
            CHECK(dim(f, kind) == dim(g, kind));
        auto p = closure_profile(f);
        if (p.union_closed && p.has_empty_set)
            CHECK(dim(f, DimensionKind::union_) == dim(g, DimensionKind::union_));
        if (p.intersection_closed && p.has_base_set)
            CHECK(dim(f, DimensionKind::intersection) == dim(g, DimensionKind::intersection));
    }
}

TEST_CASE("caps and serialization") {
    auto d = fam("base={a,b,c,d}; {{c},{a,c},{c,d},{a,b,c}}");
    DimensionOptions tiny;
    tiny.max_interval_pairs = 4;
    CHECK_THROWS_AS(compute_dimension(d, DimensionKind::cylindrical, tiny), CapError);

    auto r = compute_dimension(d, DimensionKind::upper);
    auto js = report_to_json(r);
    CHECK(js.find("\"kind\":\"upper\"") != std::string::npos);
    CHECK(js.find("\"value\":2") != std::string::npos);
    CHECK(js.find("\"path\":\"exact_cover\"") != std::string::npos);
    CHECK(js.find("\"witness\":[[2,3],[0,1,2]]") != std::string::npos);

    auto rc = compute_dimension(d, DimensionKind::cylindrical);
    auto jc = report_to_json(rc);
    CHECK(jc.find("\"lo\"") != std::string::npos);

    CHECK(to_string(dimension_kind_from_string("union")) == "union");
    CHECK_THROWS_AS(dimension_kind_from_string("sideways"), DomainError);

    auto ids = check_dimension_identities(d);
    CHECK(identities_to_json(ids).find("\"pass\":true") != std::string::npos);
}
