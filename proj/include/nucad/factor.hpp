#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nucad/polynomial.hpp"
#include "nucad/subresultant.hpp"

namespace nucad {

namespace detail {

// ---------------------------------------------------------------------------
// Dense univariate polynomials over Z (index = power, no trailing zeros).
// ---------------------------------------------------------------------------
using ZPoly = std::vector<Integer>;

inline void ztrim(ZPoly& f) {
    while (!f.empty() && sign_of(f.back()) == 0) f.pop_back();
}

inline int zdeg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Integer(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ztrim(r);
    return r;
}

inline void zmod_coeffs(ZPoly& f, const Integer& m) {
    for (auto& c : f) {
        mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    }
    ztrim(f);
}

inline ZPoly zmul_mod(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly r = zmul(a, b);
    zmod_coeffs(r, m);
    return r;
}

inline ZPoly zsub_mod(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly r(std::max(a.size(), b.size()), Integer(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    zmod_coeffs(r, m);
    return r;
}

inline ZPoly zadd_mod(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly r(std::max(a.size(), b.size()), Integer(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    zmod_coeffs(r, m);
    return r;
}

// Division by a monic divisor over Z/m; returns {quotient, remainder}.
inline std::pair<ZPoly, ZPoly> zdivmod_monic_mod(const ZPoly& a, const ZPoly& d, const Integer& m) {
    assert(!d.empty() && d.back() == 1);
    ZPoly r = a;
    zmod_coeffs(r, m);
    int dd = zdeg(d);
    ZPoly q;
    if (zdeg(r) >= dd) q.assign(zdeg(r) - dd + 1, Integer(0));
    while (zdeg(r) >= dd) {
        int k = zdeg(r) - dd;
        Integer c = r.back();
        q[k] = c;
        for (int i = 0; i <= dd; ++i) {
            Integer t = r[k + i] - c * d[i];
            mpz_mod(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
            r[k + i] = t;
        }
        ztrim(r);
    }
    ztrim(q);
    return {q, r};
}

// Exact division over Z by a monic divisor; nullopt when not divisible.
inline std::optional<ZPoly> zdivide_monic_exact(const ZPoly& a, const ZPoly& d) {
    assert(!d.empty() && d.back() == 1);
    ZPoly r = a;
    int dd = zdeg(d);
    if (zdeg(r) < dd) return r.empty() ? std::optional<ZPoly>(ZPoly{}) : std::nullopt;
    ZPoly q(zdeg(r) - dd + 1, Integer(0));
    while (zdeg(r) >= dd) {
        int k = zdeg(r) - dd;
        Integer c = r.back();
        q[k] = c;
        for (int i = 0; i <= dd; ++i) r[k + i] -= c * d[i];
        ztrim(r);
    }
    if (!r.empty()) return std::nullopt;
    ztrim(q);
    return q;
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over GF(p), p a small odd prime.
// ---------------------------------------------------------------------------
struct GFp {
    long p;
    long norm(long v) const {
        v %= p;
        return v < 0 ? v + p : v;
    }
    long mul(long a, long b) const { return (a * b) % p; }
    long inv(long a) const {
        long t = 0, nt = 1, r = p, nr = norm(a);
        while (nr != 0) {
            long q = r / nr;
            long tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        assert(r == 1);
        return norm(t);
    }
};

using PPoly = std::vector<long>;

inline void ptrim(PPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int pdeg(const PPoly& f) { return static_cast<int>(f.size()) - 1; }

inline PPoly pmul(const GFp& F, const PPoly& a, const PPoly& b) {
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % F.p;
    ptrim(r);
    return r;
}

inline std::pair<PPoly, PPoly> pdivmod(const GFp& F, PPoly a, const PPoly& d) {
    assert(!d.empty());
    long linv = F.inv(d.back());
    PPoly q;
    if (pdeg(a) >= pdeg(d)) q.assign(pdeg(a) - pdeg(d) + 1, 0);
    while (pdeg(a) >= pdeg(d)) {
        int k = pdeg(a) - pdeg(d);
        long c = F.mul(a.back(), linv);
        q[k] = c;
        for (size_t i = 0; i < d.size(); ++i) a[k + i] = F.norm(a[k + i] - c * d[i]);
        ptrim(a);
    }
    ptrim(q);
    return {q, a};
}

inline PPoly pmod(const GFp& F, const PPoly& a, const PPoly& d) { return pdivmod(F, a, d).second; }

inline PPoly pmonic(const GFp& F, PPoly a) {
    ptrim(a);
    if (a.empty()) return a;
    long inv = F.inv(a.back());
    for (auto& c : a) c = F.mul(c, inv);
    return a;
}

inline PPoly pgcd(const GFp& F, PPoly a, PPoly b) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        PPoly r = pmod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return pmonic(F, a);
}

// Extended gcd: returns (g, s, t) with s*a + t*b = g (g monic).
inline std::tuple<PPoly, PPoly, PPoly> pext_gcd(const GFp& F, PPoly a, PPoly b) {
    PPoly s0{1}, s1{}, t0{}, t1{1};
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        auto [q, r] = pdivmod(F, a, b);
        a = std::move(b);
        b = std::move(r);
        PPoly s2(std::max(s0.size(), s1.size() + q.size()), 0);
        for (size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
        PPoly qs1 = pmul(F, q, s1);
        for (size_t i = 0; i < qs1.size(); ++i) s2[i] = F.norm(s2[i] - qs1[i]);
        ptrim(s2);
        s0 = std::move(s1);
        s1 = std::move(s2);
        PPoly t2(std::max(t0.size(), t1.size() + q.size()), 0);
        for (size_t i = 0; i < t0.size(); ++i) t2[i] = t0[i];
        PPoly qt1 = pmul(F, q, t1);
        for (size_t i = 0; i < qt1.size(); ++i) t2[i] = F.norm(t2[i] - qt1[i]);
        ptrim(t2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.empty()) return {a, s0, t0};
    long inv = F.inv(a.back());
    auto scale = [&](PPoly f) {
        for (auto& c : f) c = F.mul(c, inv);
        return f;
    };
    return {scale(a), scale(s0), scale(t0)};
}

inline PPoly pderiv(const GFp& F, const PPoly& a) {
    PPoly r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(F.norm(static_cast<long>(i) * a[i]));
    ptrim(r);
    return r;
}

// x^e mod d by square-and-multiply.
inline PPoly ppow_x_mod(const GFp& F, long e, const PPoly& d) {
    PPoly result{1};
    PPoly base{0, 1};
    base = pmod(F, base, d);
    while (e > 0) {
        if (e & 1) result = pmod(F, pmul(F, result, base), d);
        base = pmod(F, pmul(F, base, base), d);
        e >>= 1;
    }
    return result;
}

// Deterministic Berlekamp factorization of a monic squarefree f mod p.
inline std::vector<PPoly> berlekamp(const GFp& F, const PPoly& f) {
    int n = pdeg(f);
    assert(n >= 1);
    if (n == 1) return {f};
    // Q[i] = coefficients of x^(p*i) mod f.
    std::vector<PPoly> Q(n);
    Q[0] = PPoly{1};
    PPoly xp = ppow_x_mod(F, F.p, f);
    for (int i = 1; i < n; ++i) Q[i] = pmod(F, pmul(F, Q[i - 1], xp), f);
    // Nullspace of transpose(Q - I): column vectors v with v(x)^p = v(x) mod f.
    std::vector<std::vector<long>> M(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) {
        for (size_t j = 0; j < Q[i].size(); ++j) M[j][i] = Q[i][j];
        M[i][i] = F.norm(M[i][i] - 1);
    }
    std::vector<int> pivot_col(n, -1);
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int piv = -1;
        for (int row = rank; row < n; ++row)
            if (M[row][col] != 0) {
                piv = row;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        long inv = F.inv(M[rank][col]);
        for (int j = 0; j < n; ++j) M[rank][j] = F.mul(M[rank][j], inv);
        for (int row = 0; row < n; ++row) {
            if (row == rank || M[row][col] == 0) continue;
            long c = M[row][col];
            for (int j = 0; j < n; ++j) M[row][j] = F.norm(M[row][j] - c * M[rank][j]);
        }
        pivot_col[rank++] = col;
    }
    std::vector<PPoly> basis;
    std::vector<bool> is_pivot(n, false);
    for (int i = 0; i < rank; ++i) is_pivot[pivot_col[i]] = true;
    for (int col = 0; col < n; ++col) {
        if (is_pivot[col]) continue;
        PPoly v(n, 0);
        v[col] = 1;
        for (int i = 0; i < rank; ++i) v[pivot_col[i]] = F.norm(-M[i][col]);
        ptrim(v);
        basis.push_back(std::move(v));
    }
    size_t r = basis.size();  // number of irreducible factors
    std::vector<PPoly> work{f};
    for (const PPoly& v : basis) {
        if (work.size() == r) break;
        if (pdeg(v) < 1) continue;
        std::vector<PPoly> next;
        for (PPoly& u : work) {
            if (pdeg(u) == 1) {
                next.push_back(std::move(u));
                continue;
            }
            PPoly rem = u;
            PPoly vu = pmod(F, v, rem);
            for (long s = 0; s < F.p && pdeg(rem) > 0; ++s) {
                PPoly shifted = vu;
                if (shifted.empty()) shifted = PPoly{F.norm(-s)};
                else shifted[0] = F.norm(shifted[0] - s);
                ptrim(shifted);
                PPoly g = pgcd(F, rem, shifted);
                if (pdeg(g) >= 1 && pdeg(g) < pdeg(rem)) {
                    next.push_back(g);
                    rem = pdivmod(F, rem, g).first;
                    vu = pmod(F, v, rem);
                }
            }
            if (pdeg(rem) >= 1) next.push_back(std::move(rem));
        }
        work = std::move(next);
    }
    for (auto& g : work) g = pmonic(F, g);
    std::sort(work.begin(), work.end(), [](const PPoly& a, const PPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return work;
}

// One quadratic Hensel step: from f = g*h (mod m), s*g + t*h = 1 (mod m),
// f, g, h monic, to the same congruences mod m^2.
inline void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Integer& m) {
    Integer m2 = m * m;
    ZPoly e = zsub_mod(f, zmul(g, h), m2);
    auto [q, r] = zdivmod_monic_mod(zmul_mod(s, e, m2), h, m2);
    ZPoly gstar = zadd_mod(zadd_mod(g, zmul_mod(t, e, m2), m2), zmul_mod(q, g, m2), m2);
    ZPoly hstar = zadd_mod(h, r, m2);
    ZPoly b = zsub_mod(zadd_mod(zmul_mod(s, gstar, m2), zmul_mod(t, hstar, m2), m2), ZPoly{Integer(1)}, m2);
    auto [c, d] = zdivmod_monic_mod(zmul_mod(s, b, m2), hstar, m2);
    ZPoly sstar = zsub_mod(s, d, m2);
    ZPoly tstar = zsub_mod(zsub_mod(t, zmul_mod(t, b, m2), m2), zmul_mod(c, gstar, m2), m2);
    g = std::move(gstar);
    h = std::move(hstar);
    s = std::move(sstar);
    t = std::move(tstar);
}

inline ZPoly lift_to_z(const PPoly& f) {
    ZPoly r;
    for (long c : f) r.emplace_back(c);
    ztrim(r);
    return r;
}

// Lifts the factorization f = prod(mods) (mod p) to modulus >= target,
// f monic over Z, mods monic mod p. Returns the lifted monic factors and the
// final modulus.
inline void hensel_lift_tree(const ZPoly& f, const std::vector<PPoly>& mods, const GFp& F,
                             const Integer& target, std::vector<ZPoly>& out, Integer& final_mod) {
    if (mods.size() == 1) {
        ZPoly g = f;
        final_mod = F.p;
        while (final_mod < target) final_mod *= final_mod;
        zmod_coeffs(g, final_mod);
        out.push_back(std::move(g));
        return;
    }
    size_t half = mods.size() / 2;
    std::vector<PPoly> left(mods.begin(), mods.begin() + half);
    std::vector<PPoly> right(mods.begin() + half, mods.end());
    PPoly g0{1}, h0{1};
    for (const auto& u : left) g0 = pmul(F, g0, u);
    for (const auto& u : right) h0 = pmul(F, h0, u);
    auto [one, s0, t0] = pext_gcd(F, g0, h0);
    assert(pdeg(one) == 0);
    ZPoly g = lift_to_z(g0), h = lift_to_z(h0), s = lift_to_z(s0), t = lift_to_z(t0);
    Integer m = F.p;
    while (m < target) {
        hensel_step(f, g, h, s, t, m);
        m *= m;
    }
    final_mod = m;
    Integer sub_mod;
    hensel_lift_tree(g, left, F, target, out, sub_mod);
    hensel_lift_tree(h, right, F, target, out, sub_mod);
}

inline Integer symmetric_rep(const Integer& c, const Integer& m) {
    Integer half = m / 2;
    return c > half ? Integer(c - m) : c;
}

// Zassenhaus factorization of a monic squarefree polynomial over Z.
inline std::vector<ZPoly> zassenhaus_monic(const ZPoly& f) {
    int d = zdeg(f);
    assert(d >= 1 && f.back() == 1);
    if (d == 1) return {f};
    // Pick an odd prime with good (squarefree) reduction.
    GFp F{0};
    PPoly fbar;
    for (long p = 3;; p += 2) {
        bool prime = true;
        for (long q = 3; q * q <= p; q += 2)
            if (p % q == 0) {
                prime = false;
                break;
            }
        if (!prime) continue;
        F.p = p;
        fbar.clear();
        for (const auto& c : f) {
            Integer r;
            mpz_mod_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(p));
            fbar.push_back(r.get_si());
        }
        ptrim(fbar);
        if (pdeg(fbar) != d) continue;
        PPoly der = pderiv(F, fbar);
        if (pdeg(pgcd(F, fbar, der)) == 0) break;
        if (p > 10000) throw std::logic_error("no good reduction prime found");
    }
    std::vector<PPoly> mods = berlekamp(F, pmonic(F, fbar));
    if (mods.size() == 1) return {f};
    // Mignotte-style bound on factor coefficients: 2^d * ||f||_2.
    Integer s2 = 0;
    for (const auto& c : f) s2 += c * c;
    Integer norm2;
    mpz_sqrt(norm2.get_mpz_t(), s2.get_mpz_t());
    norm2 += 1;
    Integer bound = (Integer(1) << d) * norm2;
    Integer target = 2 * bound + 1;
    std::vector<ZPoly> lifted;
    Integer modulus;
    hensel_lift_tree(f, mods, F, target, lifted, modulus);
    // Recombination: try subsets in increasing cardinality.
    std::vector<ZPoly> factors;
    std::vector<ZPoly> avail = lifted;
    ZPoly remaining = f;
    size_t subset_size = 1;
    while (2 * subset_size <= avail.size()) {
        bool found = false;
        std::vector<size_t> idx(subset_size);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            ZPoly cand{Integer(1)};
            for (size_t i : idx) cand = zmul_mod(cand, avail[i], modulus);
            for (auto& c : cand) c = symmetric_rep(c, modulus);
            ztrim(cand);
            if (!cand.empty() && cand.back() == 1) {
                auto q = zdivide_monic_exact(remaining, cand);
                if (q) {
                    factors.push_back(cand);
                    remaining = *q;
                    std::vector<ZPoly> navail;
                    for (size_t i = 0; i < avail.size(); ++i)
                        if (std::find(idx.begin(), idx.end(), i) == idx.end()) navail.push_back(avail[i]);
                    avail = std::move(navail);
                    found = true;
                    break;
                }
            }
            // next combination
            int pos = static_cast<int>(subset_size) - 1;
            while (pos >= 0 && idx[pos] == avail.size() - subset_size + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (size_t j = pos + 1; j < subset_size; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++subset_size;
    }
    if (zdeg(remaining) >= 1) factors.push_back(remaining);
    return factors;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

// Index of the unique variable occurring in p, or 0 if p is constant.
// Throws when more than one variable occurs.
inline int univariate_variable(const Polynomial& p) {
    int var = 0;
    for (const auto& t : p.terms())
        for (int i = 0; i < p.nvars(); ++i)
            if (t.exps[i] > 0) {
                if (var != 0 && var != i + 1) throw std::invalid_argument("polynomial is not univariate");
                var = i + 1;
            }
    return var;
}

inline bool is_univariate(const Polynomial& p) {
    int var = 0;
    for (const auto& t : p.terms())
        for (int i = 0; i < p.nvars(); ++i)
            if (t.exps[i] > 0) {
                if (var != 0 && var != i + 1) return false;
                var = i + 1;
            }
    return true;
}

namespace detail {

inline ZPoly to_dense(const Polynomial& p, int var) {
    ZPoly f(std::max(p.degree(var), 0) + 1, Integer(0));
    for (const auto& t : p.terms()) f[t.exps[var - 1]] = t.coeff;
    ztrim(f);
    return f;
}

inline Polynomial from_dense(const ZPoly& f, int nvars, int var) {
    std::vector<Term> ts;
    for (size_t i = 0; i < f.size(); ++i) {
        if (sign_of(f[i]) == 0) continue;
        Exponents e(nvars, 0);
        e[var - 1] = static_cast<unsigned>(i);
        ts.push_back(Term{std::move(e), f[i]});
    }
    return Polynomial::from_terms(nvars, std::move(ts));
}

}  // namespace detail

// Irreducible factorization over Q of the primitive squarefree part of a
// univariate polynomial. Output factors are primitive with positive leading
// coefficient, in canonical order. Constants factor to the empty set.
inline PolySet factor_univariate(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("factor of zero polynomial");
    int var = univariate_variable(p);
    if (var == 0) return {};
    Polynomial pn = p.normalized();
    Polynomial g = gcd(pn, pn.derivative(var));
    Polynomial sf = g.is_constant() ? pn : divide_exact(pn, g).normalized();
    int d = sf.degree(var);
    if (d <= 0) return {};
    if (d == 1) return {sf.normalized()};
    detail::ZPoly f = detail::to_dense(sf, var);
    // Monicize: factor l^(d-1) * f(x/l), then map factors back via x -> l*x.
    Integer l = f.back();
    std::vector<detail::ZPoly> raw;
    if (l == 1) {
        raw = detail::zassenhaus_monic(f);
    } else {
        // F(x) = l^(d-1) * f(x/l) is monic with integer coefficients.
        detail::ZPoly F(f.size());
        F[d] = 1;
        Integer pw = 1;
        for (int i = d - 1; i >= 0; --i) {
            F[i] = f[i] * pw;
            pw *= l;
        }
        raw = detail::zassenhaus_monic(F);
        for (auto& h : raw) {
            Integer pw2 = 1;
            for (size_t i = 0; i < h.size(); ++i) {
                h[i] *= pw2;
                pw2 *= l;
            }
        }
    }
    PolySet out;
    for (const auto& h : raw) set_insert(out, detail::from_dense(h, p.nvars(), var).normalized());
    return out;
}

namespace detail {

// Splits p into primitive, squarefree pieces: recursive content extraction
// per level, then squarefree-part peeling. The repeated part recurses so the
// coprime refinement can separate factors of different multiplicity, keeping
// products-with-multiplicity recoverable from the basis.
inline void squarefree_pieces(const Polynomial& p, std::vector<Polynomial>& out) {
    Polynomial q = p.normalized();
    if (q.is_constant()) return;
    int v = q.level();
    Polynomial c = content_in(q, v);
    if (!c.is_constant()) {
        squarefree_pieces(c, out);
        q = divide_exact(q, c).normalized();
    }
    Polynomial g = gcd(q, q.derivative(v));
    if (g.is_constant()) {
        out.push_back(q);
    } else {
        out.push_back(divide_exact(q, g).normalized());
        squarefree_pieces(g, out);
    }
}

}  // namespace detail

// Finest basis of a set of nonzero polynomials: pairwise coprime, squarefree,
// primitive with positive leading coefficient, univariate elements irreducible
// over Q; canonical order. Products with multiplicity recover each input up to
// rational constants.
inline PolySet squarefree_basis(const std::vector<Polynomial>& inputs) {
    std::vector<Polynomial> pieces;
    for (const auto& p : inputs) {
        if (p.is_zero()) throw std::invalid_argument("zero polynomial in squarefree basis input");
        detail::squarefree_pieces(p, pieces);
    }
    std::vector<Polynomial> basis;
    for (Polynomial q : pieces) {
        if (q.is_constant()) continue;
        for (size_t i = 0; i < basis.size() && !q.is_constant(); ++i) {
            Polynomial g = gcd(q, basis[i]);
            if (g.is_constant()) continue;
            Polynomial rest = divide_exact(basis[i], g).normalized();
            basis[i] = g;
            if (!rest.is_constant()) basis.push_back(rest);
            q = divide_exact(q, g).normalized();
        }
        if (!q.is_constant()) basis.push_back(q.normalized());
    }
    PolySet out;
    for (const auto& b : basis) {
        if (is_univariate(b)) {
            for (const auto& f : factor_univariate(b)) set_insert(out, f);
        } else {
            set_insert(out, b.normalized());
        }
    }
    return out;
}

// Basis refinement of a single nonzero polynomial.
inline PolySet basis_factors(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("factors of zero polynomial");
    if (p.is_constant()) return {};
    return squarefree_basis({p});
}

}  // namespace nucad
