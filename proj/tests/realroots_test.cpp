#include <catch2/catch_amalgamated.hpp>

#include "nucad/nucad.hpp"
#include "test_support.hpp"

using namespace nucad;

namespace {

Polynomial X() { return Polynomial::variable(1, 1); }
Polynomial c(long v) { return Polynomial::constant(1, Integer(v)); }

Polynomial f3() {
    Polynomial x = X();
    return c(256) * x.pow(4) + c(256) * x.pow(3) + c(352) * x.pow(2) + c(16) * x - c(255);
}

}  // namespace

TEST_CASE("isolation golden values") {
    auto roots = isolate_real_roots(f3());
    REQUIRE(roots.size() == 2);
    CHECK(Rational(-1) <= roots[0].lo);
    CHECK(roots[0].hi <= Rational(0));
    CHECK(Rational(0) <= roots[1].lo);
    CHECK(roots[1].hi <= Rational(1));

    auto lin = isolate_real_roots(c(16) * X() - c(1));
    REQUIRE(lin.size() == 1);
    CHECK(lin[0].is_point());
    CHECK(lin[0].lo == Rational(1, 16));

    CHECK(isolate_real_roots(X() * X() + c(1)).empty());
    CHECK_THROWS_AS(isolate_real_roots(Polynomial::zero(1)), std::invalid_argument);
}

TEST_CASE("isolation invariants against the Sturm oracle") {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 100; ++round) {
        Polynomial p = testsupport::random_univariate(rng, 8, 9);
        auto roots = isolate_real_roots(p);
        int want = sturm_count(p, std::nullopt, std::nullopt);
        REQUIRE(static_cast<int>(roots.size()) == want);
        // pairwise disjoint and increasing
        for (size_t i = 0; i + 1 < roots.size(); ++i) CHECK(roots[i].hi <= roots[i + 1].lo);
        // each interval carries a sign change or an exact root
        for (const auto& iv : roots) {
            int var = univariate_variable(iv.defining);
            auto f = detail::to_dense(iv.defining, var);
            if (iv.is_point()) {
                CHECK(sign_of(detail::eval_dense(f, iv.lo)) == 0);
            } else {
                int a = sign_of(detail::eval_dense(f, iv.lo));
                int b = sign_of(detail::eval_dense(f, iv.hi));
                CHECK(a * b < 0);
            }
        }
    }
}

TEST_CASE("compare_to_root golden values") {
    CHECK(compare_to_root(f3(), 1, Rational(-1)) == RootOrder::Below);
    CHECK(compare_to_root(c(16) * X() - c(1), 1, Rational(1, 16)) == RootOrder::Equal);
    CHECK(compare_to_root(f3(), 2, Rational(1)) == RootOrder::Above);
    CHECK_THROWS_AS(compare_to_root(f3(), 3, Rational(0)), std::out_of_range);
}

TEST_CASE("compare_to_root agrees with Sturm positioning") {
    std::mt19937_64 rng(31337);
    for (int round = 0; round < 80; ++round) {
        Polynomial p = testsupport::random_univariate(rng, 6, 6);
        auto roots = isolate_real_roots(p);
        if (roots.empty()) continue;
        int k = 1 + static_cast<int>(rng() % roots.size());
        Rational r = make_rational(Integer(static_cast<long>(rng() % 41) - 20),
                                   Integer(static_cast<long>(rng() % 8) + 1));
        RootOrder got = compare_to_root(p, k, r);
        int below_or_at = sturm_count(p, std::nullopt, r);  // roots in (-inf, r]
        int var = univariate_variable(p);
        bool r_is_root = sign_of(detail::eval_dense(detail::to_dense(p, var), r)) == 0;
        RootOrder want;
        if (r_is_root)
            want = below_or_at == k ? RootOrder::Equal
                                    : (below_or_at < k ? RootOrder::Below : RootOrder::Above);
        else
            want = below_or_at >= k ? RootOrder::Above : RootOrder::Below;
        CHECK(got == want);
        // answers are stable under refinement of the underlying intervals
        CHECK(compare_to_root(p, k, r) == got);
    }
}

TEST_CASE("simplest rational golden values") {
    CHECK(simplest_rational_between(Rational(1, 16), std::nullopt) == Rational(1));
    CHECK(simplest_rational_between(Rational(0), Rational(1)) == Rational(1, 2));
    CHECK(simplest_rational_between(Rational(3, 8), Rational(1, 2)) == Rational(2, 5));
    CHECK(simplest_rational_between(std::nullopt, std::nullopt) == Rational(0));
    CHECK(simplest_rational_between(std::nullopt, Rational(-15, 16)) == Rational(-1));
    CHECK(simplest_rational_between(Rational(-1), Rational(1)) == Rational(0));
    CHECK_THROWS_AS(simplest_rational_between(Rational(1), Rational(1)), std::invalid_argument);
}

TEST_CASE("simplest rational is simplest (brute-force oracle)") {
    std::mt19937_64 rng(808);
    for (int round = 0; round < 120; ++round) {
        Rational a = make_rational(Integer(static_cast<long>(rng() % 61) - 30),
                                   Integer(static_cast<long>(rng() % 12) + 1));
        Rational b = make_rational(Integer(static_cast<long>(rng() % 61) - 30),
                                   Integer(static_cast<long>(rng() % 12) + 1));
        if (a == b) continue;
        if (b < a) std::swap(a, b);
        Rational got = simplest_rational_between(a, b);
        CHECK(a < got);
        CHECK(got < b);
        auto want = testsupport::simplest_brute(a, b, 2000);
        REQUIRE(want.has_value());
        CHECK(got.get_den() == want->get_den());
        CHECK(abs_of(Integer(got.get_num())) == abs_of(Integer(want->get_num())));
    }
}

TEST_CASE("rational selection between realized bounds") {
    auto lin_root = isolate_real_roots(c(16) * X() - c(1))[0];
    CHECK(rational_between_bounds(RealizedBound::root(lin_root), RealizedBound::pos_inf()) == Rational(1));
    CHECK(rational_between_bounds(RealizedBound::neg_inf(), RealizedBound::root(lin_root)) == Rational(0));

    auto roots = isolate_real_roots(f3());
    CHECK(rational_between_bounds(RealizedBound::root(roots[0]), RealizedBound::root(roots[1])) ==
          Rational(0));

    CHECK_THROWS_AS(rational_between_bounds(RealizedBound::root(roots[1]), RealizedBound::root(roots[0])),
                    std::invalid_argument);
    CHECK_THROWS_AS(rational_between_bounds(RealizedBound::root(roots[0]), RealizedBound::root(roots[0])),
                    std::invalid_argument);
}

TEST_CASE("refinement narrows without losing the root") {
    auto roots = isolate_real_roots(f3());
    IsolatingInterval iv = roots[0];
    IsolatingInterval fine = refine_to_width(iv, Rational(1, 1024));
    CHECK(fine.width() <= Rational(1, 1024));
    CHECK(iv.lo <= fine.lo);
    CHECK(fine.hi <= iv.hi);
    CHECK(algebraic_compare(iv, fine) == 0);
}

TEST_CASE("algebraic comparison") {
    Polynomial a = X() * X() - c(2);
    Polynomial b = X() * X() - c(3);
    auto ra = isolate_real_roots(a);
    auto rb = isolate_real_roots(b);
    CHECK(algebraic_compare(ra[1], rb[1]) < 0);   // sqrt2 < sqrt3
    CHECK(algebraic_compare(rb[0], ra[0]) < 0);   // -sqrt3 < -sqrt2
    CHECK(algebraic_compare(ra[1], isolate_real_roots(a * c(7))[1]) == 0);
}
