#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nucad/rational.hpp"

namespace nucad {

// Exponent vector over the ambient variables x1..xn.
using Exponents = std::vector<unsigned>;

// Graded lexicographic order with x1 < ... < xn: higher total degree wins,
// ties broken by the exponent of the highest variable where they differ.
// Returns -1 / 0 / +1 with a < b meaning "a comes later in printed order".
inline int compare_monomials(const Exponents& a, const Exponents& b) {
    assert(a.size() == b.size());
    long ta = 0, tb = 0;
    for (unsigned e : a) ta += e;
    for (unsigned e : b) tb += e;
    if (ta != tb) return ta < tb ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

struct Term {
    Exponents exps;
    Integer coeff;
};

// Sparse multivariate polynomial with integer coefficients over a fixed
// ambient variable list x1..xn. Terms are kept unique, nonzero, and sorted
// in descending graded-lex order, so the leading term is terms().front().
class Polynomial {
  public:
    Polynomial() : nvars_(0) {}

    static Polynomial zero(int nvars) {
        Polynomial p;
        p.nvars_ = nvars;
        return p;
    }

    static Polynomial constant(int nvars, Integer c) {
        Polynomial p;
        p.nvars_ = nvars;
        if (sign_of(c) != 0) p.terms_.push_back(Term{Exponents(nvars, 0), std::move(c)});
        return p;
    }

    // 1-based variable index.
    static Polynomial variable(int nvars, int index) {
        assert(index >= 1 && index <= nvars);
        Polynomial p;
        p.nvars_ = nvars;
        Exponents e(nvars, 0);
        e[index - 1] = 1;
        p.terms_.push_back(Term{std::move(e), Integer(1)});
        return p;
    }

    static Polynomial from_terms(int nvars, std::vector<Term> ts) {
        Polynomial p;
        p.nvars_ = nvars;
        std::map<Exponents, Integer, std::greater<>> acc;  // placeholder ordering, re-sorted below
        for (auto& t : ts) {
            assert(static_cast<int>(t.exps.size()) == nvars);
            acc[t.exps] += t.coeff;
        }
        for (auto& [e, c] : acc)
            if (sign_of(c) != 0) p.terms_.push_back(Term{e, c});
        p.sort_terms();
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree() == 0); }
    const std::vector<Term>& terms() const { return terms_; }

    // Value of a constant polynomial (0 for the zero polynomial).
    Integer constant_value() const {
        assert(is_constant());
        return terms_.empty() ? Integer(0) : terms_.front().coeff;
    }

    // Index of the highest variable occurring with positive degree; 0 for constants.
    int level() const {
        int lvl = 0;
        for (const auto& t : terms_)
            for (int i = nvars_; i > lvl; --i)
                if (t.exps[i - 1] > 0) {
                    lvl = i;
                    break;
                }
        return lvl;
    }

    // Degree in one variable; -1 for the zero polynomial.
    int degree(int var) const {
        if (terms_.empty()) return -1;
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, t.exps[var - 1]);
        return static_cast<int>(d);
    }

    int total_degree() const {
        if (terms_.empty()) return -1;
        long d = 0;
        for (const auto& t : terms_) {
            long s = 0;
            for (unsigned e : t.exps) s += e;
            d = std::max(d, s);
        }
        return static_cast<int>(d);
    }

    // Leading coefficient under the canonical term order.
    const Integer& lead_coeff() const {
        assert(!terms_.empty());
        return terms_.front().coeff;
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return add_scaled(a, b, 1); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return add_scaled(a, b, -1); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        assert(a.nvars_ == b.nvars_);
        std::map<Exponents, Integer> acc;
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                Exponents e(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i) e[i] = ta.exps[i] + tb.exps[i];
                acc[e] += ta.coeff * tb.coeff;
            }
        Polynomial r;
        r.nvars_ = a.nvars_;
        for (auto& [e, c] : acc)
            if (sign_of(c) != 0) r.terms_.push_back(Term{e, c});
        r.sort_terms();
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Integer& c) {
        if (sign_of(c) == 0) return zero(a.nvars_);
        Polynomial r = a;
        for (auto& t : r.terms_) t.coeff *= c;
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial pow(unsigned e) const {
        Polynomial r = constant(nvars_, 1);
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1u) r = r * base;
            base = base * base;
            e >>= 1u;
        }
        return r;
    }

    Polynomial derivative(int var) const {
        std::vector<Term> ts;
        for (const auto& t : terms_) {
            unsigned e = t.exps[var - 1];
            if (e == 0) continue;
            Term nt = t;
            nt.exps[var - 1] = e - 1;
            nt.coeff *= e;
            ts.push_back(std::move(nt));
        }
        return from_terms(nvars_, std::move(ts));
    }

    // Coefficient of var^power, with var's exponent dropped to zero
    // (same ambient variable count).
    Polynomial coeff_of(int var, unsigned power) const {
        std::vector<Term> ts;
        for (const auto& t : terms_) {
            if (t.exps[var - 1] != power) continue;
            Term nt = t;
            nt.exps[var - 1] = 0;
            ts.push_back(std::move(nt));
        }
        return from_terms(nvars_, std::move(ts));
    }

    // Coefficient of the highest power of var (the polynomial itself when
    // var does not occur).
    Polynomial leading_coeff_in(int var) const {
        int d = degree(var);
        if (d <= 0) return *this;
        return coeff_of(var, static_cast<unsigned>(d));
    }

    // Dense coefficient list in var: index i holds the coefficient of var^i.
    std::vector<Polynomial> coeffs_in(int var) const {
        int d = std::max(degree(var), 0);
        std::vector<Polynomial> cs(d + 1, zero(nvars_));
        std::vector<std::vector<Term>> buckets(d + 1);
        for (const auto& t : terms_) {
            Term nt = t;
            unsigned e = nt.exps[var - 1];
            nt.exps[var - 1] = 0;
            buckets[e].push_back(std::move(nt));
        }
        for (int i = 0; i <= d; ++i) cs[i] = from_terms(nvars_, std::move(buckets[i]));
        return cs;
    }

    static Polynomial from_coeffs_in(int nvars, int var, const std::vector<Polynomial>& cs) {
        std::vector<Term> ts;
        for (size_t i = 0; i < cs.size(); ++i)
            for (const auto& t : cs[i].terms()) {
                Term nt = t;
                assert(nt.exps[var - 1] == 0);
                nt.exps[var - 1] = static_cast<unsigned>(i);
                ts.push_back(std::move(nt));
            }
        return from_terms(nvars, std::move(ts));
    }

    // Nonnegative gcd of all coefficients; 0 for the zero polynomial.
    Integer content() const {
        Integer g = 0;
        for (const auto& t : terms_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    Polynomial primitive_part() const {
        Integer c = content();
        if (c == 0 || c == 1) return *this;
        return divide_exact(c);
    }

    // Primitive with positive leading coefficient under the canonical order.
    Polynomial normalized() const {
        if (is_zero()) return *this;
        Polynomial p = primitive_part();
        if (sign_of(p.lead_coeff()) < 0) p = -p;
        return p;
    }

    Polynomial divide_exact(const Integer& c) const {
        assert(sign_of(c) != 0);
        Polynomial r = *this;
        for (auto& t : r.terms_) {
            Integer q;
            mpz_divexact(q.get_mpz_t(), t.coeff.get_mpz_t(), c.get_mpz_t());
            t.coeff = q;
        }
        return r;
    }

    // Exact value at a full rational point.
    Rational evaluate(std::span<const Rational> point) const {
        assert(static_cast<int>(point.size()) == nvars_);
        Rational acc = 0;
        for (const auto& t : terms_) {
            Rational m(t.coeff);
            for (int i = 0; i < nvars_; ++i)
                for (unsigned e = 0; e < t.exps[i]; ++e) m *= point[i];
            acc += m;
        }
        return acc;
    }

    // Binds x1..xk to the prefix and renumbers the remaining variables to
    // x1..x(n-k). Denominators are cleared by a positive scale factor, so
    // roots and signs over the fiber are preserved exactly.
    Polynomial eval_partial(std::span<const Rational> prefix) const {
        int k = static_cast<int>(prefix.size());
        assert(k <= nvars_);
        int m = nvars_ - k;
        std::map<Exponents, Rational> acc;
        for (const auto& t : terms_) {
            Rational c(t.coeff);
            for (int i = 0; i < k; ++i)
                for (unsigned e = 0; e < t.exps[i]; ++e) c *= prefix[i];
            if (sign_of(c) == 0) continue;
            Exponents e(m);
            for (int i = 0; i < m; ++i) e[i] = t.exps[k + i];
            acc[e] += c;
        }
        Integer den = 1;
        for (auto& [e, c] : acc)
            if (sign_of(c) != 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
        std::vector<Term> ts;
        for (auto& [e, c] : acc) {
            if (sign_of(c) == 0) continue;
            Rational scaled = c * Rational(den);
            assert(is_integer(scaled));
            ts.push_back(Term{e, Integer(scaled.get_num())});
        }
        return from_terms(m, std::move(ts));
    }

    // Canonical text: descending term order, '^' powers, coefficient glued to
    // the first variable, '*' between variables, e.g. "256x^4+16x-255".
    std::string to_string(std::span<const std::string> names) const {
        assert(static_cast<int>(names.size()) == nvars_);
        if (terms_.empty()) return "0";
        std::string out;
        for (size_t i = 0; i < terms_.size(); ++i) {
            const Term& t = terms_[i];
            Integer a = abs_of(t.coeff);
            bool neg = sign_of(t.coeff) < 0;
            if (i == 0) {
                if (neg) out += '-';
            } else {
                out += neg ? '-' : '+';
            }
            bool any_var = false;
            std::string mono;
            for (int v = 0; v < nvars_; ++v) {
                if (t.exps[v] == 0) continue;
                if (any_var) mono += '*';
                mono += names[v];
                if (t.exps[v] > 1) {
                    mono += '^';
                    mono += std::to_string(t.exps[v]);
                }
                any_var = true;
            }
            if (!any_var) {
                out += a.get_str();
            } else {
                if (a != 1) out += a.get_str();
                out += mono;
            }
        }
        return out;
    }

    std::string to_string() const { return to_string(default_names(nvars_)); }

    static std::vector<std::string> default_names(int n) {
        static const char* small[] = {"x", "y", "z", "w"};
        std::vector<std::string> names;
        if (n <= 4) {
            for (int i = 0; i < n; ++i) names.emplace_back(small[i]);
        } else {
            for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
        }
        return names;
    }

  private:
    static Polynomial add_scaled(const Polynomial& a, const Polynomial& b, int s) {
        assert(a.nvars_ == b.nvars_);
        std::vector<Term> ts = a.terms_;
        ts.reserve(ts.size() + b.terms_.size());
        for (const auto& t : b.terms_) ts.push_back(Term{t.exps, s < 0 ? Integer(-t.coeff) : t.coeff});
        return from_terms(a.nvars_, std::move(ts));
    }

    void sort_terms() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return compare_monomials(x.exps, y.exps) > 0; });
    }

    int nvars_;
    std::vector<Term> terms_;
};

// Canonical total order on polynomials: level, then total degree, then the
// term lists (monomials descending, then coefficients). Used wherever a
// deterministic polynomial ordering is required.
inline int compare(const Polynomial& a, const Polynomial& b) {
    if (a.level() != b.level()) return a.level() < b.level() ? -1 : 1;
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree() ? -1 : 1;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    size_t k = std::min(ta.size(), tb.size());
    for (size_t i = 0; i < k; ++i) {
        // Ambient sizes can differ; compare padded exponent vectors.
        Exponents ea = ta[i].exps, eb = tb[i].exps;
        size_t n = std::max(ea.size(), eb.size());
        ea.resize(n, 0);
        eb.resize(n, 0);
        int c = compare_monomials(ea, eb);
        if (c != 0) return c;
        c = cmp(ta[i].coeff, tb[i].coeff);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
    return 0;
}

inline bool poly_less(const Polynomial& a, const Polynomial& b) { return compare(a, b) < 0; }

// Merge preference order: ascending level, then total degree, then canonical.
inline bool merge_order_less(const Polynomial& a, const Polynomial& b) {
    if (a.level() != b.level()) return a.level() < b.level();
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
    return compare(a, b) < 0;
}

// A set of polynomials kept sorted in canonical order without duplicates.
using PolySet = std::vector<Polynomial>;

inline bool set_contains(const PolySet& s, const Polynomial& p) {
    auto it = std::lower_bound(s.begin(), s.end(), p, poly_less);
    return it != s.end() && *it == p;
}

inline void set_insert(PolySet& s, const Polynomial& p) {
    auto it = std::lower_bound(s.begin(), s.end(), p, poly_less);
    if (it == s.end() || !(*it == p)) s.insert(it, p);
}

// Sparse exact division: returns a/b when b divides a, nullopt otherwise.
inline std::optional<Polynomial> try_divide_exact(const Polynomial& a, const Polynomial& b) {
    assert(a.nvars() == b.nvars());
    if (b.is_zero()) return std::nullopt;
    Polynomial r = a;
    std::vector<Term> qt;
    const Term& lb = b.terms().front();
    while (!r.is_zero()) {
        const Term& lr = r.terms().front();
        Exponents e(a.nvars());
        for (int i = 0; i < a.nvars(); ++i) {
            if (lr.exps[i] < lb.exps[i]) return std::nullopt;
            e[i] = lr.exps[i] - lb.exps[i];
        }
        if (!mpz_divisible_p(lr.coeff.get_mpz_t(), lb.coeff.get_mpz_t())) return std::nullopt;
        Integer c;
        mpz_divexact(c.get_mpz_t(), lr.coeff.get_mpz_t(), lb.coeff.get_mpz_t());
        Polynomial t = Polynomial::from_terms(a.nvars(), {Term{e, c}});
        qt.push_back(Term{e, c});
        r = r - t * b;
    }
    return Polynomial::from_terms(a.nvars(), std::move(qt));
}

inline Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
    auto q = try_divide_exact(a, b);
    if (!q) throw std::logic_error("inexact polynomial division");
    return *q;
}

}  // namespace nucad
