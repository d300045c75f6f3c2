#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"
#include "nucad/nucad.hpp"
#include "test_support.hpp"

using namespace nucad;

namespace {

Polynomial X() { return Polynomial::variable(2, 1); }
Polynomial Y() { return Polynomial::variable(2, 2); }
Polynomial c(long v) { return Polynomial::constant(2, Integer(v)); }

Polynomial f1n() { return (c(16) * Y() - c(16) * X() * X() - c(8) * X() - c(1)).normalized(); }
Polynomial f2() { return X() * X() + Y() * Y() - c(1); }
Polynomial f3() {
    Polynomial x = X();
    return c(256) * x.pow(4) + c(256) * x.pow(3) + c(352) * x.pow(2) + c(16) * x - c(255);
}

std::vector<Rational> pt2(Rational a, Rational b) { return {std::move(a), std::move(b)}; }

// The region above the parabola section from the worked example run, with
// the sample already at (0, 1/2).
OpenCell cell_c2() {
    OpenCell c2 = universe_cell(2, pt2(Rational(0), Rational(1, 2)));
    c2.bounds[1].lower = SectionDescriptor::section(f1n(), 1);
    set_insert(c2.pset, f1n());
    c2.label = "2U";
    return c2;
}

}  // namespace

TEST_CASE("universe cells") {
    OpenCell u = universe_cell(2, pt2(Rational(0), Rational(0)));
    CHECK(u.n == 2);
    CHECK(u.pset.empty());
    CHECK(u.label.empty());
    for (const auto& bp : u.bounds) {
        CHECK(bp.lower.kind == SectionDescriptor::NegInf);
        CHECK(bp.upper.kind == SectionDescriptor::PosInf);
    }
    CHECK(universe_cell(1, {Rational(5)}).n == 1);
    CHECK(universe_cell(3, {Rational(0), Rational(0), Rational(0)}).n == 3);
    std::mt19937_64 rng(3);
    PointSampler sampler(9);
    for (int i = 0; i < 20; ++i)
        CHECK(cell_contains(u, sampler.next_point(2)) == Location::Inside);
}

TEST_CASE("merging the first constraint produces the refined sub-cell") {
    OpenCell c0 = universe_cell(2, pt2(Rational(0), Rational(0)));
    Polynomial f1_raw = c(16) * Y() - c(16) * X() * X() - c(8) * X() - c(1);
    MergeOutcome r = merge_poly(c0, f1_raw);
    REQUIRE(r.ok());
    const OpenCell& c1 = r.cell;
    CHECK(c1.sample == pt2(Rational(0), Rational(0)));
    CHECK(c1.bounds[0].lower.kind == SectionDescriptor::NegInf);
    CHECK(c1.bounds[0].upper.kind == SectionDescriptor::PosInf);
    CHECK(c1.bounds[1].lower.kind == SectionDescriptor::NegInf);
    REQUIRE(c1.bounds[1].upper.is_section());
    CHECK(c1.bounds[1].upper.poly == f1n());
    CHECK(c1.bounds[1].upper.index == 1);
    REQUIRE(c1.pset.size() == 1);
    CHECK(c1.pset[0] == f1n());
}

TEST_CASE("merging the circle reproduces the heavily bounded cell") {
    MergeOutcome r = merge_poly(cell_c2(), f2());
    REQUIRE(r.ok());
    const OpenCell& c3 = r.cell;
    CHECK(c3.sample == pt2(Rational(0), Rational(1, 2)));
    REQUIRE(c3.bounds[0].lower.is_section());
    CHECK(c3.bounds[0].lower.poly == f3());
    CHECK(c3.bounds[0].lower.index == 1);
    REQUIRE(c3.bounds[0].upper.is_section());
    CHECK(c3.bounds[0].upper.poly == f3());
    CHECK(c3.bounds[0].upper.index == 2);
    REQUIRE(c3.bounds[1].lower.is_section());
    CHECK(c3.bounds[1].lower.poly == f1n());
    CHECK(c3.bounds[1].lower.index == 1);
    REQUIRE(c3.bounds[1].upper.is_section());
    CHECK(c3.bounds[1].upper.poly == f2());
    CHECK(c3.bounds[1].upper.index == 2);
    REQUIRE(c3.pset.size() == 5);
    CHECK(set_contains(c3.pset, f1n()));
    CHECK(set_contains(c3.pset, f2()));
    CHECK(set_contains(c3.pset, f3()));
    CHECK(set_contains(c3.pset, X() + c(1)));
    CHECK(set_contains(c3.pset, X() - c(1)));
}

TEST_CASE("a vanishing sample coordinate is pre-perturbed, not failed") {
    // Entering with the sample on the circle: the merge must move it off the
    // section (downward, between the parabola root and the old coordinate).
    OpenCell c2 = cell_c2();
    c2.sample = pt2(Rational(0), Rational(1));
    MergeOutcome r = merge_poly(c2, f2());
    REQUIRE(r.ok());
    CHECK(r.cell.sample == pt2(Rational(0), Rational(1, 2)));
    CHECK(set_contains(r.cell.pset, f2()));
}

TEST_CASE("nullification fails the merge") {
    OpenCell u = universe_cell(2, pt2(Rational(0), Rational(0)));
    Polynomial p = X() * Y() + X();  // vanishes identically over x = 0
    MergeOutcome r = merge_poly(u, p);
    REQUIRE(!r.ok());
    CHECK(*r.failed == p);
}

TEST_CASE("merge_set behavior") {
    OpenCell c0 = universe_cell(2, pt2(Rational(0), Rational(0)));
    PolySet q;
    set_insert(q, f1n());
    MergeOutcome r = merge_set(c0, q);
    REQUIRE(r.ok());
    CHECK(r.cell.bounds[1].upper.poly == f1n());

    MergeOutcome r2 = merge_set(cell_c2(), PolySet{});
    REQUIRE(r2.ok());
    CHECK(r2.cell.bounds == cell_c2().bounds);
    CHECK(r2.cell.sample == cell_c2().sample);

    PolySet q3;
    set_insert(q3, f2());
    MergeOutcome r3 = merge_set(cell_c2(), q3);
    REQUIRE(r3.ok());
    CHECK(r3.cell.pset.size() == 5);
}

TEST_CASE("membership testing") {
    OpenCell c0 = universe_cell(2, pt2(Rational(0), Rational(0)));
    OpenCell c1 = merge_poly(c0, f1n()).cell;
    CHECK(cell_contains(c1, pt2(Rational(0), Rational(0))) == Location::Inside);
    CHECK(cell_contains(c1, pt2(Rational(0), Rational(1, 2))) == Location::Outside);
    CHECK(cell_contains(c1, pt2(Rational(0), Rational(1, 16))) == Location::Boundary);
    ContainsResult ex = cell_contains_ex(c1, pt2(Rational(0), Rational(1, 2)));
    CHECK(ex.exit_level == 2);
    CHECK(ex.exit_side == Side::Upper);
}

TEST_CASE("realized bounds") {
    OpenCell c0 = universe_cell(2, pt2(Rational(0), Rational(0)));
    CHECK(realize_bound(c0, 1, Side::Lower).kind == RealizedBound::NegInf);

    OpenCell c1 = merge_poly(c0, f1n()).cell;
    RealizedBound rb = realize_bound(c1, 2, Side::Upper);
    REQUIRE(rb.kind == RealizedBound::Root);
    CHECK(rb.iv.is_point());
    CHECK(rb.iv.lo == Rational(1, 16));

    OpenCell c3 = merge_poly(cell_c2(), f2()).cell;
    RealizedBound ub = realize_bound(c3, 1, Side::Upper);
    REQUIRE(ub.kind == RealizedBound::Root);
    CHECK(Rational(0) <= ub.iv.lo);
    CHECK(ub.iv.hi <= Rational(1));

    // root index out of range signals corruption
    OpenCell broken = c1;
    broken.bounds[1].upper.index = 9;
    CHECK_THROWS_AS(realize_bound(broken, 2, Side::Upper), std::out_of_range);
}

TEST_CASE("refinement containment and sign invariance by sampling") {
    OpenCell c2 = cell_c2();
    OpenCell c3 = merge_poly(c2, f2()).cell;
    // sample containment for every constructed cell
    CHECK(cell_contains(c2, c2.sample) == Location::Inside);
    CHECK(cell_contains(c3, c3.sample) == Location::Inside);

    PointSampler sampler(5);
    int kept = 0;
    std::vector<int> signs(c3.pset.size(), 0);
    for (int i = 0; i < 200000 && kept < 500; ++i) {
        auto p = sampler.next_point(2);
        if (cell_contains(c3, p) != Location::Inside) continue;
        ++kept;
        // refinement containment: points of the refined cell lie in the parent
        CHECK(cell_contains(c2, p) == Location::Inside);
        // sign invariance of every known polynomial
        for (size_t j = 0; j < c3.pset.size(); ++j) {
            int s = sign_of(c3.pset[j].evaluate(p));
            REQUIRE(s != 0);
            if (signs[j] == 0) signs[j] = s;
            CHECK(signs[j] == s);
        }
    }
    CHECK(kept == 500);
}

TEST_CASE("merged bounds stay inside the projection closure") {
    OpenCell c2 = cell_c2();
    OpenCell c3 = merge_poly(c2, f2()).cell;
    PolySet start = bound_polys(c2);
    set_insert(start, f2());
    PolySet closure = projection_closure(start);
    for (const auto& b : bound_polys(c3)) CHECK(set_contains(closure, b));
}

TEST_CASE("real root counts transport across the base") {
    OpenCell c3 = merge_poly(cell_c2(), f2()).cell;
    // Counts of each level-2 bound polynomial's specialization at the sample
    // prefix match the counts at random prefixes inside the base interval.
    auto base = level_bound_polys(c3, 2);
    int want_f1 = real_root_count_at_prefix(c3, f1n(), 2);
    int want_f2 = real_root_count_at_prefix(c3, f2(), 2);
    RealizedBound lo = realize_bound(c3, 1, Side::Lower);
    RealizedBound hi = realize_bound(c3, 1, Side::Upper);
    PointSampler sampler(12);
    int kept = 0;
    for (int i = 0; i < 5000 && kept < 100; ++i) {
        Rational x = sampler.next_coord();
        if (detail::root_vs_rational(lo.iv, x) >= 0) continue;
        if (detail::root_vs_rational(hi.iv, x) <= 0) continue;
        ++kept;
        std::vector<Rational> prefix{x};
        CHECK(static_cast<int>(isolate_real_roots(f1n().eval_partial(prefix)).size()) == want_f1);
        CHECK(static_cast<int>(isolate_real_roots(f2().eval_partial(prefix)).size()) == want_f2);
    }
    CHECK(kept == 100);
}
