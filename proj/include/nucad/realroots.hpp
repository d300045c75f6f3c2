#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "nucad/factor.hpp"
#include "nucad/polynomial.hpp"
#include "nucad/subresultant.hpp"

namespace nucad {

// Isolating interval for one real root of a univariate polynomial.
// lo == hi marks an exact rational root; otherwise the open interval (lo, hi)
// contains exactly one root of the squarefree defining polynomial and neither
// endpoint is a root. Refinement returns new values; intervals are shareable.
struct IsolatingInterval {
    Rational lo, hi;
    Polynomial defining;  // univariate, squarefree
    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }
};

namespace detail {

inline Rational eval_dense(const ZPoly& f, const Rational& x) {
    Rational acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = acc * x + Rational(f[i]);
    return acc;
}

// Number of sign variations in the coefficient list (zeros skipped).
inline int sign_variations(const ZPoly& f) {
    int v = 0, last = 0;
    for (const auto& c : f) {
        int s = sign_of(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

// Descartes bound for the number of roots of f in the open interval (a, b):
// sign variations of (1+x)^deg * T(1/(1+x)) where T carries [0,1] onto [a,b].
// Exact when the bound is 0 or 1.
inline int descartes_bound(const ZPoly& f, const Rational& a, const Rational& b) {
    int d = zdeg(f);
    assert(d >= 1);
    Integer den;
    mpz_lcm(den.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    Integer A = a.get_num() * (den / a.get_den());
    Integer B = b.get_num() * (den / b.get_den());
    Integer C = B - A;
    // T(x) = den^d * f((A + C x)/den), by Horner with linear multiplies.
    ZPoly t{f[d]};
    for (int i = d - 1; i >= 0; --i) {
        ZPoly nt(t.size() + 1, Integer(0));
        for (size_t j = 0; j < t.size(); ++j) {
            nt[j] += t[j] * A;
            nt[j + 1] += t[j] * C;
        }
        Integer scale = 1;
        for (int k = 0; k < d - i; ++k) scale *= den;
        nt[0] += f[i] * scale;
        t = std::move(nt);
    }
    // Reverse, then Taylor shift by one.
    ZPoly r(t.rbegin(), t.rend());
    r.resize(d + 1, Integer(0));
    for (int i = 0; i <= d; ++i)
        for (int j = d - 1; j >= i; --j) r[j] += r[j + 1];
    return sign_variations(r);
}

// Power of two strictly exceeding the Cauchy root bound of f.
inline Rational root_bound(const ZPoly& f) {
    int d = zdeg(f);
    Integer lead = abs_of(f[d]);
    Integer rest = 0;
    for (int i = 0; i < d; ++i) rest = std::max(rest, abs_of(f[i]));
    Integer m = 1;
    while (m * lead <= lead + rest) m <<= 1;
    return Rational(m);
}

// Exact quotient of f by (x - m), up to a positive constant (denominators of
// the synthetic division are cleared). Requires f(m) == 0.
inline ZPoly divide_out_root(const ZPoly& f, const Rational& m) {
    std::vector<Rational> q(f.size() - 1);
    Rational carry = Rational(f.back());
    for (int i = static_cast<int>(f.size()) - 2; i >= 0; --i) {
        q[i] = carry;
        carry = Rational(f[i]) + carry * m;
    }
    assert(sign_of(carry) == 0);
    Integer den = 1;
    for (const auto& c : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    ZPoly out(q.size());
    for (size_t i = 0; i < q.size(); ++i) out[i] = Integer(Rational(q[i] * Rational(den)).get_num());
    ztrim(out);
    return out;
}

struct RawInterval {
    Rational lo, hi;
    ZPoly defining;  // working polynomial; discovered rational roots divided out
};

// Precondition: f squarefree with f(a) != 0 and f(b) != 0.
inline void isolate_rec(const ZPoly& f, const Rational& a, const Rational& b,
                        std::vector<RawInterval>& out) {
    int v = descartes_bound(f, a, b);
    if (v == 0) return;
    if (v == 1) {
        out.push_back(RawInterval{a, b, f});
        return;
    }
    Rational m = (a + b) / 2;
    if (sign_of(eval_dense(f, m)) == 0) {
        ZPoly lin{Integer(-m.get_num()), Integer(m.get_den())};
        ZPoly g = divide_out_root(f, m);
        out.push_back(RawInterval{m, m, lin});
        if (zdeg(g) >= 1) {
            isolate_rec(g, a, m, out);
            isolate_rec(g, m, b, out);
        }
        return;
    }
    isolate_rec(f, a, m, out);
    isolate_rec(f, m, b, out);
}

}  // namespace detail

// One bisection refinement step; point intervals are fixed points.
inline IsolatingInterval refine_once(const IsolatingInterval& iv) {
    if (iv.is_point()) return iv;
    int var = univariate_variable(iv.defining);
    detail::ZPoly f = detail::to_dense(iv.defining, var);
    Rational m = (iv.lo + iv.hi) / 2;
    if (sign_of(detail::eval_dense(f, m)) == 0) return IsolatingInterval{m, m, iv.defining};
    Rational fl = detail::eval_dense(f, iv.lo);
    if (sign_of(fl) * sign_of(detail::eval_dense(f, m)) < 0)
        return IsolatingInterval{iv.lo, m, iv.defining};
    return IsolatingInterval{m, iv.hi, iv.defining};
}

inline IsolatingInterval refine_to_width(IsolatingInterval iv, const Rational& w) {
    while (!iv.is_point() && iv.width() > w) iv = refine_once(iv);
    return iv;
}

// Isolating intervals for all distinct real roots of a univariate polynomial,
// pairwise disjoint and sorted increasingly. Errors on the zero polynomial.
inline std::vector<IsolatingInterval> isolate_real_roots(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("cannot isolate roots of the zero polynomial");
    int var = univariate_variable(p);
    if (var == 0) return {};
    Polynomial pn = p.normalized();
    Polynomial g = gcd(pn, pn.derivative(var));
    Polynomial sf = g.is_constant() ? pn : divide_exact(pn, g).normalized();
    detail::ZPoly f = detail::to_dense(sf, var);
    if (detail::zdeg(f) < 1) return {};
    if (detail::zdeg(f) == 1) {
        Rational r = make_rational(-f[0], f[1]);
        return {IsolatingInterval{r, r, sf}};
    }
    Rational M = detail::root_bound(f);
    std::vector<detail::RawInterval> raw;
    detail::isolate_rec(f, -M, M, raw);
    std::sort(raw.begin(), raw.end(),
              [](const detail::RawInterval& a, const detail::RawInterval& b) { return a.lo < b.lo; });
    std::vector<IsolatingInterval> out;
    out.reserve(raw.size());
    for (auto& r : raw) {
        IsolatingInterval iv{r.lo, r.hi, detail::from_dense(r.defining, p.nvars(), var)};
        out.push_back(refine_to_width(std::move(iv), Rational(1)));
    }
    return out;
}

enum class RootOrder { Below, Equal, Above };

// Position of the rational r relative to the k-th smallest real root of p
// (1-based). Errors when p has fewer than k real roots.
inline RootOrder compare_to_root(const Polynomial& p, int k, const Rational& r) {
    auto roots = isolate_real_roots(p);
    if (k < 1 || static_cast<size_t>(k) > roots.size())
        throw std::out_of_range("root index exceeds real root count");
    IsolatingInterval iv = roots[k - 1];
    int var = univariate_variable(p);
    Rational val = detail::eval_dense(detail::to_dense(p, var), r);
    if (sign_of(val) == 0) {
        // r is some root of p; it is the k-th exactly when it lies in iv.
        if (iv.is_point()) return r == iv.lo ? RootOrder::Equal : (r < iv.lo ? RootOrder::Below : RootOrder::Above);
        if (iv.lo < r && r < iv.hi) return RootOrder::Equal;
        return r <= iv.lo ? RootOrder::Below : RootOrder::Above;
    }
    while (true) {
        if (iv.is_point()) return r < iv.lo ? RootOrder::Below : RootOrder::Above;
        if (r <= iv.lo) return RootOrder::Below;
        if (r >= iv.hi) return RootOrder::Above;
        iv = refine_once(iv);
    }
}

namespace detail {

// Decides whether the real root isolated by g_iv lies in the open interval
// (lo, hi), assuming the root equals neither endpoint.
inline bool root_in_open_range(IsolatingInterval g_iv, const Rational& lo, const Rational& hi) {
    while (true) {
        if (g_iv.is_point()) return lo < g_iv.lo && g_iv.lo < hi;
        if (g_iv.hi <= lo || g_iv.lo >= hi) return false;
        if (lo <= g_iv.lo && g_iv.hi <= hi) return true;
        g_iv = refine_once(g_iv);
    }
}

}  // namespace detail

// Exact comparison of two real algebraic numbers given by isolating
// intervals. Returns -1, 0, +1.
inline int algebraic_compare(IsolatingInterval a, IsolatingInterval b) {
    if (a.is_point() && b.is_point()) {
        if (a.lo == b.lo) return 0;
        return a.lo < b.lo ? -1 : 1;
    }
    if (a.is_point() || b.is_point()) {
        bool a_pt = a.is_point();
        const Rational r = a_pt ? a.lo : b.lo;
        IsolatingInterval o = a_pt ? b : a;
        int var = univariate_variable(o.defining);
        Rational val = detail::eval_dense(detail::to_dense(o.defining, var), r);
        if (sign_of(val) == 0 && o.lo < r && r < o.hi) return 0;
        while (o.lo < r && r < o.hi) o = refine_once(o);
        int root_vs_r = (r <= o.lo) ? 1 : -1;  // sign of (root(o) - r)
        return a_pt ? -root_vs_r : root_vs_r;
    }
    // Both intervals are open: equal roots are common roots of the gcd.
    Polynomial g = gcd(a.defining, b.defining);
    if (!g.is_constant()) {
        for (const auto& giv : isolate_real_roots(g)) {
            if (detail::root_in_open_range(giv, a.lo, a.hi) &&
                detail::root_in_open_range(giv, b.lo, b.hi))
                return 0;
        }
    }
    for (int round = 0; round < 100000; ++round) {
        if (a.hi <= b.lo) return -1;
        if (b.hi <= a.lo) return 1;
        a = refine_once(a);
        b = refine_once(b);
        if (a.is_point() || b.is_point()) return algebraic_compare(a, b);
    }
    throw std::logic_error("algebraic comparison failed to separate");
}

// ---------------------------------------------------------------------------
// Simple rational selection.
// ---------------------------------------------------------------------------

namespace detail {

// Simplest rational strictly inside (lo, hi), 0 <= lo < hi, hi possibly
// +infinity. Stern-Brocot / continued-fraction descent.
inline Rational simplest_nonneg(const Rational& lo, const std::optional<Rational>& hi) {
    Integer fl = floor_of(lo);
    Rational next(fl + 1);
    if (!hi || next < *hi) return next;
    Rational a = lo - Rational(fl);
    Rational b = *hi - Rational(fl);
    std::optional<Rational> upper;
    if (sign_of(a) != 0) upper = Rational(1) / a;
    Rational inner = simplest_nonneg(Rational(1) / b, upper);
    return Rational(fl) + Rational(1) / inner;
}

}  // namespace detail

// The rational with the smallest denominator (ties: smallest |numerator|,
// then negative preferred) strictly inside the open interval. nullopt bounds
// mean -infinity / +infinity. Errors on empty intervals.
inline Rational simplest_rational_between(const std::optional<Rational>& lo,
                                          const std::optional<Rational>& hi) {
    if (lo && hi && !(*lo < *hi)) throw std::invalid_argument("empty interval");
    if (!lo && !hi) return Rational(0);
    if (!lo) {
        if (sign_of(*hi) > 0) return Rational(0);
        if (is_integer(*hi)) return Rational(Integer(hi->get_num() - 1));
        return Rational(floor_of(*hi));
    }
    if (!hi) {
        if (sign_of(*lo) < 0) return Rational(0);
        return Rational(floor_of(*lo) + 1);
    }
    if (sign_of(*lo) < 0 && sign_of(*hi) > 0) return Rational(0);
    if (sign_of(*hi) <= 0) {
        Rational nlo = -*hi, nhi = -*lo;
        return -simplest_rational_between(nlo, nhi);
    }
    return detail::simplest_nonneg(*lo, *hi);
}

// Simplest rational in an interval with possibly attainable (closed) finite
// endpoints. Infinite sides are open.
inline Rational simplest_rational_in(const std::optional<Rational>& lo, bool lo_closed,
                                     const std::optional<Rational>& hi, bool hi_closed) {
    std::optional<Rational> best;
    auto consider = [&](const Rational& c) {
        if (!best || simpler_than(c, *best)) best = c;
    };
    if (lo && lo_closed && (!hi || *lo < *hi || (hi_closed && *lo == *hi))) consider(*lo);
    if (hi && hi_closed && (!lo || *lo < *hi || (lo_closed && *lo == *hi))) consider(*hi);
    if (!lo || !hi || *lo < *hi) consider(simplest_rational_between(lo, hi));
    if (!best) throw std::invalid_argument("empty interval");
    return *best;
}

// ---------------------------------------------------------------------------
// Realized section bounds.
// ---------------------------------------------------------------------------

// A realized cell bound over a sample prefix: an infinity, or a designated
// real root carried by its isolating interval.
struct RealizedBound {
    enum Kind { NegInf, PosInf, Root } kind;
    IsolatingInterval iv;  // valid when kind == Root

    static RealizedBound neg_inf() { return RealizedBound{NegInf, {}}; }
    static RealizedBound pos_inf() { return RealizedBound{PosInf, {}}; }
    static RealizedBound root(IsolatingInterval i) { return RealizedBound{Root, std::move(i)}; }
};

// A rational strictly between two realized bounds, refining the isolating
// intervals until disjoint and taking the simplest rational in the gap.
// Errors with "empty fiber" when the bounds are equal or crossed.
inline Rational rational_between_bounds(const RealizedBound& lo, const RealizedBound& hi) {
    if (lo.kind == RealizedBound::PosInf || hi.kind == RealizedBound::NegInf)
        throw std::invalid_argument("empty fiber");
    if (lo.kind == RealizedBound::NegInf && hi.kind == RealizedBound::PosInf) return Rational(0);
    if (lo.kind == RealizedBound::NegInf) {
        const IsolatingInterval& iv = hi.iv;
        if (iv.is_point()) return simplest_rational_between(std::nullopt, iv.lo);
        return simplest_rational_in(std::nullopt, false, iv.lo, true);
    }
    if (hi.kind == RealizedBound::PosInf) {
        const IsolatingInterval& iv = lo.iv;
        if (iv.is_point()) return simplest_rational_between(iv.lo, std::nullopt);
        return simplest_rational_in(iv.hi, true, std::nullopt, false);
    }
    IsolatingInterval a = lo.iv, b = hi.iv;
    if (algebraic_compare(a, b) >= 0) throw std::invalid_argument("empty fiber");
    while (true) {
        Rational gap_lo = a.hi, gap_hi = b.lo;
        bool lo_cl = !a.is_point(), hi_cl = !b.is_point();
        if (gap_lo < gap_hi || (gap_lo == gap_hi && lo_cl && hi_cl))
            return simplest_rational_in(gap_lo, lo_cl, gap_hi, hi_cl);
        a = refine_once(a);
        b = refine_once(b);
    }
}

}  // namespace nucad
