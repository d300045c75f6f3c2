#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <random>

#include "nucad/nucad.hpp"

namespace testsupport {

using nucad::Integer;
using nucad::Polynomial;
using nucad::Rational;

// Resultant of two univariate polynomials as the Sylvester determinant,
// computed by fraction-free Gaussian elimination over the rationals. This is
// a separate route from the subresultant remainder sequence.
inline Rational sylvester_resultant(const std::vector<Rational>& p, const std::vector<Rational>& q) {
    int m = static_cast<int>(p.size()) - 1;
    int n = static_cast<int>(q.size()) - 1;
    if (m < 0 || n < 0) return Rational(0);
    int dim = m + n;
    if (dim == 0) return Rational(1);
    std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim, Rational(0)));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c <= m; ++c) a[r][r + c] = p[m - c];
    for (int r = 0; r < m; ++r)
        for (int c = 0; c <= n; ++c) a[n + r][r + c] = q[n - c];
    Rational det = 1;
    for (int col = 0; col < dim; ++col) {
        int piv = -1;
        for (int r = col; r < dim; ++r)
            if (nucad::sign_of(a[r][col]) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return Rational(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < dim; ++r) {
            if (nucad::sign_of(a[r][col]) == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (int c = col; c < dim; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

// Dense rational coefficient list (ascending powers) of a univariate
// polynomial after specializing all other variables.
inline std::vector<Rational> dense_in(const Polynomial& p, int var,
                                      const std::vector<Rational>& others) {
    // others supplies values for every variable except var, by index order.
    int d = std::max(p.degree(var), 0);
    std::vector<Rational> out(d + 1, Rational(0));
    for (const auto& t : p.terms()) {
        Rational c(t.coeff);
        size_t oi = 0;
        for (int v = 0; v < p.nvars(); ++v) {
            if (v + 1 == var) continue;
            for (unsigned e = 0; e < t.exps[v]; ++e) c *= others[oi];
            ++oi;
        }
        (void)oi;
        out[t.exps[var - 1]] += c;
    }
    while (out.size() > 1 && nucad::sign_of(out.back()) == 0) out.pop_back();
    return out;
}

// Simplest rational in the open interval by brute denominator sweep.
inline std::optional<Rational> simplest_brute(const Rational& lo, const Rational& hi, long max_den) {
    for (long d = 1; d <= max_den; ++d) {
        Integer n0 = nucad::floor_of(lo * Rational(d)) + 1;
        Integer n1 = nucad::ceil_of(hi * Rational(d)) - 1;
        std::optional<Rational> best;
        for (Integer n = n0; n <= n1; ++n) {
            Rational cand = nucad::make_rational(n, Integer(d));
            if (!(lo < cand && cand < hi)) continue;
            if (cand.get_den() != d) continue;  // not in lowest terms at this denominator
            if (!best || nucad::abs_of(Integer(cand.get_num())) < nucad::abs_of(Integer(best->get_num())) ||
                (nucad::abs_of(Integer(cand.get_num())) == nucad::abs_of(Integer(best->get_num())) &&
                 cand < *best))
                best = cand;
        }
        if (best) return best;
    }
    return std::nullopt;
}

// Irreducibility certificate for a degree-4 integer polynomial modulo a
// small prime: no linear factor (no roots) and no monic quadratic factor,
// checked by exhaustive trial division. Independent of the library's
// factorization machinery.
inline bool quartic_irreducible_mod(const std::vector<Integer>& f, long p) {
    auto md = [&](const Integer& z) {
        Integer r;
        mpz_mod_ui(r.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(p));
        return r.get_si();
    };
    std::vector<long> g;
    for (const auto& c : f) g.push_back(md(c));
    if (g.size() != 5 || g[4] % p == 0) return false;
    auto eval = [&](long x) {
        long acc = 0;
        for (size_t i = g.size(); i-- > 0;) acc = (acc * x + g[i]) % p;
        return (acc % p + p) % p;
    };
    for (long x = 0; x < p; ++x)
        if (eval(x) == 0) return false;
    // Monic-ize g for quadratic trial division.
    long inv = 1;
    for (long t = 1; t < p; ++t)
        if ((g[4] * t) % p == 1) {
            inv = t;
            break;
        }
    std::vector<long> mg;
    for (long c : g) mg.push_back(((c * inv) % p + p) % p);
    for (long b = 0; b < p; ++b)
        for (long c = 0; c < p; ++c) {
            // divide mg by x^2 + b x + c, checking the remainder
            std::vector<long> r = mg;
            for (int k = 2; k >= 0; --k) {
                long lead = r[k + 2] % p;
                r[k + 1] = (((r[k + 1] - lead * b) % p) + p * p) % p;
                r[k] = (((r[k] - lead * c) % p) + p * p) % p;
            }
            if (r[0] % p == 0 && r[1] % p == 0) return false;
        }
    return true;
}

// Deterministic random polynomial over x1..xn.
inline Polynomial random_poly(std::mt19937_64& rng, int nvars, int max_total_deg, int max_terms,
                              long coeff_range) {
    while (true) {
        std::vector<nucad::Term> ts;
        int terms = 1 + static_cast<int>(rng() % max_terms);
        for (int t = 0; t < terms; ++t) {
            nucad::Exponents e(nvars, 0);
            int budget = static_cast<int>(rng() % (max_total_deg + 1));
            for (int b = 0; b < budget; ++b) e[rng() % nvars] += 1;
            long c = static_cast<long>(rng() % (2 * coeff_range)) - coeff_range;
            if (c >= 0) ++c;
            ts.push_back(nucad::Term{e, Integer(c)});
        }
        Polynomial p = Polynomial::from_terms(nvars, std::move(ts));
        if (!p.is_constant()) return p;
    }
}

// Deterministic random univariate polynomial of degree <= max_deg (>= 1).
inline Polynomial random_univariate(std::mt19937_64& rng, int max_deg, long coeff_range) {
    while (true) {
        int d = 1 + static_cast<int>(rng() % max_deg);
        std::vector<nucad::Term> ts;
        for (int i = 0; i <= d; ++i) {
            long c = static_cast<long>(rng() % (2 * coeff_range + 1)) - coeff_range;
            if (i == d && c == 0) c = 1;
            if (c == 0) continue;
            nucad::Exponents e(1, 0);
            e[0] = static_cast<unsigned>(i);
            ts.push_back(nucad::Term{e, Integer(c)});
        }
        Polynomial p = Polynomial::from_terms(1, std::move(ts));
        if (p.degree(1) >= 1) return p;
    }
}

}  // namespace testsupport
