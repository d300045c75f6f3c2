#pragma once

#include <stdexcept>

#include "nucad/polynomial.hpp"

namespace nucad {

// Pseudo-remainder: ldcf(b,var)^(deg a - deg b + 1) * a  mod  b, computed in
// the dense view over var. Requires deg(a,var) >= deg(b,var) >= 0, b nonzero.
inline Polynomial prem(const Polynomial& a, const Polynomial& b, int var) {
    int da = a.degree(var), db = b.degree(var);
    assert(!b.is_zero() && da >= db && db >= 0);
    std::vector<Polynomial> r = a.coeffs_in(var);
    std::vector<Polynomial> bc = b.coeffs_in(var);
    Polynomial lb = bc[db];
    int e = da - db + 1;
    while (true) {
        int dr = static_cast<int>(r.size()) - 1;
        while (dr >= 0 && r[dr].is_zero()) --dr;
        if (dr < db) break;
        // r <- lb*r - r_lead * b * var^(dr-db)
        Polynomial lr = r[dr];
        for (auto& c : r) c = c * lb;
        for (int i = 0; i <= db; ++i) r[dr - db + i] = r[dr - db + i] - lr * bc[i];
        --e;
    }
    Polynomial rem = Polynomial::from_coeffs_in(a.nvars(), var, r);
    // Pad remaining multiplier so the total factor is exactly lb^(da-db+1).
    for (int i = 0; i < e; ++i) rem = rem * lb;
    return rem;
}

namespace detail {
Polynomial gcd_impl(const Polynomial& a, const Polynomial& b);
}

// Content of p viewed as a univariate polynomial in var: the gcd of its
// coefficient polynomials (normalized).
inline Polynomial content_in(const Polynomial& p, int var) {
    auto cs = p.coeffs_in(var);
    Polynomial g = Polynomial::zero(p.nvars());
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.normalized() : detail::gcd_impl(g, c);
        if (g.is_constant() && g.constant_value() == 1) break;
    }
    return g;
}

inline Polynomial primitive_in(const Polynomial& p, int var) {
    Polynomial c = content_in(p, var);
    if (c.is_zero()) return p;
    return divide_exact(p, c);
}

namespace detail {

// Multivariate gcd via primitive subresultant remainder sequences.
// Result is normalized (primitive, positive leading coefficient).
inline Polynomial gcd_impl(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    if (a.is_constant() && b.is_constant()) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), a.constant_value().get_mpz_t(), b.constant_value().get_mpz_t());
        return Polynomial::constant(a.nvars(), g);
    }
    int v = std::max(a.level(), b.level());
    if (a.degree(v) == 0) return gcd_impl(content_in(b, v), a);
    if (b.degree(v) == 0) return gcd_impl(content_in(a, v), b);

    Polynomial ca = content_in(a, v), cb = content_in(b, v);
    Polynomial c = gcd_impl(ca, cb);
    Polynomial A = divide_exact(a, ca), B = divide_exact(b, cb);
    if (A.degree(v) < B.degree(v)) std::swap(A, B);

    Polynomial g = Polynomial::constant(a.nvars(), 1);
    Polynomial h = g;
    while (true) {
        int delta = A.degree(v) - B.degree(v);
        Polynomial R = prem(A, B, v);
        if (R.is_zero()) {
            Polynomial pp = primitive_in(B, v);
            return (c * pp).normalized();
        }
        if (R.degree(v) == 0) {
            // Coprime apart from content.
            return c.normalized();
        }
        A = B;
        Polynomial div = g * h.pow(delta);
        B = divide_exact(R, div);
        g = A.leading_coeff_in(v);
        // h <- g^delta * h^(1-delta)
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = divide_exact(g.pow(delta), h.pow(delta - 1));
    }
}

}  // namespace detail

inline Polynomial gcd(const Polynomial& a, const Polynomial& b) { return detail::gcd_impl(a, b); }

// Resultant of p and q with respect to var, by the subresultant PRS.
// Convention: equals det(Syl(p,q)) with the rows of p first.
// Throws when neither input involves var.
inline Polynomial resultant(const Polynomial& p, const Polynomial& q, int var) {
    int dp = p.degree(var), dq = q.degree(var);
    if (dp <= 0 && dq <= 0) throw std::invalid_argument("no elimination variable");
    if (p.is_zero() || q.is_zero()) return Polynomial::zero(p.nvars());
    int sgn = 1;
    Polynomial A = p, B = q;
    if (dp < dq) {
        std::swap(A, B);
        if ((dp & 1) && (dq & 1)) sgn = -sgn;
    }
    int da = A.degree(var), db = B.degree(var);
    if (db == 0) {
        // res(A, const-in-var) = B^deg(A)
        Polynomial r = B.pow(da);
        return sgn < 0 ? -r : r;
    }
    Polynomial ca = content_in(A, var), cb = content_in(B, var);
    A = divide_exact(A, ca);
    B = divide_exact(B, cb);
    Polynomial t = ca.pow(db) * cb.pow(da);
    Polynomial g = Polynomial::constant(p.nvars(), 1);
    Polynomial h = g;
    while (true) {
        int delta = A.degree(var) - B.degree(var);
        if ((A.degree(var) & 1) && (B.degree(var) & 1)) sgn = -sgn;
        Polynomial R = prem(A, B, var);
        A = B;
        Polynomial div = g * h.pow(delta);
        if (R.is_zero()) return Polynomial::zero(p.nvars());
        B = divide_exact(R, div);
        g = A.leading_coeff_in(var);
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = divide_exact(g.pow(delta), h.pow(delta - 1));
        if (B.degree(var) <= 0) break;
    }
    int dA = A.degree(var);
    // h <- ldcf(B)^deg(A) / h^(deg(A)-1)
    Polynomial num = B.pow(dA);
    Polynomial res = dA >= 1 ? divide_exact(num, h.pow(dA - 1)) : num;
    res = t * res;
    return sgn < 0 ? -res : res;
}

// Discriminant with respect to var:
//   (-1)^(d(d-1)/2) * res(p, dp/dvar, var) / ldcf(p, var),  d = deg(p, var).
// Degree-1 inputs have discriminant 1 by convention; constants are an error.
inline Polynomial discriminant(const Polynomial& p, int var) {
    int d = p.degree(var);
    if (d <= 0) throw std::invalid_argument("discriminant of a polynomial constant in the variable");
    if (d == 1) return Polynomial::constant(p.nvars(), 1);
    Polynomial r = resultant(p, p.derivative(var), var);
    Polynomial q = divide_exact(r, p.leading_coeff_in(var));
    long k = static_cast<long>(d) * (d - 1) / 2;
    return (k % 2 == 1) ? -q : q;
}

}  // namespace nucad
