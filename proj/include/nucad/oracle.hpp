#pragma once

#include <functional>
#include <random>
#include <sstream>

#include "nucad/tree.hpp"
#include "nucad/tree_io.hpp"

namespace nucad {

// ---------------------------------------------------------------------------
// Sturm sequences: an independent real-root counting path (dense rational
// remainder chain; no Descartes machinery involved).
// ---------------------------------------------------------------------------

namespace detail {

using QPoly = std::vector<Rational>;

inline void qtrim(QPoly& f) {
    while (!f.empty() && sign_of(f.back()) == 0) f.pop_back();
}

inline QPoly qrem(QPoly a, const QPoly& b) {
    assert(!b.empty());
    while (a.size() >= b.size()) {
        Rational c = a.back() / b.back();
        size_t k = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[k + i] -= c * b[i];
        qtrim(a);
        if (a.empty()) break;
    }
    return a;
}

inline QPoly qdiv_exact(const QPoly& a, const QPoly& b) {
    QPoly r = a, q(a.size() - b.size() + 1, Rational(0));
    while (r.size() >= b.size()) {
        Rational c = r.back() / b.back();
        size_t k = r.size() - b.size();
        q[k] = c;
        for (size_t i = 0; i < b.size(); ++i) r[k + i] -= c * b[i];
        qtrim(r);
        if (r.empty()) break;
    }
    assert(r.empty());
    qtrim(q);
    return q;
}

inline int qsign_at(const QPoly& f, const std::optional<Rational>& x, bool neg_inf) {
    if (f.empty()) return 0;
    if (!x) {
        int s = sign_of(f.back());
        if (neg_inf && (f.size() - 1) % 2 == 1) s = -s;
        return s;
    }
    Rational acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = acc * *x + f[i];
    return sign_of(acc);
}

}  // namespace detail

// Number of distinct real roots of p in the half-open interval (lo, hi],
// counted by Sturm sign variations. nullopt bounds mean -/+ infinity.
// Errors on the zero polynomial.
inline int sturm_count(const Polynomial& p, const std::optional<Rational>& lo,
                       const std::optional<Rational>& hi) {
    if (p.is_zero()) throw std::invalid_argument("sturm count of zero polynomial");
    if (lo && hi && !(*lo < *hi)) throw std::invalid_argument("empty interval");
    int var = univariate_variable(p);
    if (var == 0) return 0;
    detail::QPoly f;
    for (const auto& c : detail::to_dense(p, var)) f.emplace_back(c);
    detail::qtrim(f);
    if (f.size() <= 1) return 0;
    std::vector<detail::QPoly> chain;
    chain.push_back(f);
    detail::QPoly d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * Rational(static_cast<long>(i)));
    detail::qtrim(d);
    chain.push_back(d);
    while (!chain.back().empty()) {
        detail::QPoly r = detail::qrem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    chain.pop_back();
    // Divide out the gcd so the chain belongs to the squarefree part; the
    // variation count then handles repeated roots of p as single roots.
    const detail::QPoly g = chain.back();
    if (g.size() > 1)
        for (auto& e : chain) e = detail::qdiv_exact(e, g);
    auto variations = [&](const std::optional<Rational>& x, bool neg) {
        int v = 0, last = 0;
        for (const auto& e : chain) {
            int s = detail::qsign_at(e, x, neg);
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    };
    return variations(lo, true) - variations(hi, false);
}

// ---------------------------------------------------------------------------
// Seeded rational point sampling: a bounded box with occasional reciprocal
// draws so unbounded cells get probed.
// ---------------------------------------------------------------------------

class PointSampler {
  public:
    explicit PointSampler(uint64_t seed, int range = 48) : rng_(seed), range_(range) {}

    Rational next_coord() {
        long num = static_cast<long>(rng_() % (2 * range_ + 1)) - range_;
        long den = static_cast<long>(rng_() % range_) + 1;
        bool reciprocal = (rng_() & 7u) == 0;
        if (reciprocal && num != 0) return make_rational(Integer(den), Integer(num));
        return make_rational(Integer(num), Integer(den));
    }

    std::vector<Rational> next_point(int n) {
        std::vector<Rational> p;
        p.reserve(n);
        for (int i = 0; i < n; ++i) p.push_back(next_coord());
        return p;
    }

  private:
    std::mt19937_64 rng_;
    int range_;
};

// ---------------------------------------------------------------------------
// Verification reports.
// ---------------------------------------------------------------------------

struct VerificationReport {
    std::string name;
    size_t samples = 0;
    size_t boundary_resamples = 0;
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }

    std::string to_text() const {
        std::ostringstream os;
        os << "report " << name << '\n';
        os << "samples " << samples << '\n';
        os << "boundary-resamples " << boundary_resamples << '\n';
        os << "violations " << violations.size() << '\n';
        for (const auto& v : violations) os << "violation " << v << '\n';
        os << "pass " << (pass() ? 1 : 0) << '\n';
        return os.str();
    }
};

namespace detail {

inline std::string point_text(std::span<const Rational> p) {
    std::string s = "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += to_string(p[i]);
    }
    s += ")";
    return s;
}

}  // namespace detail

// Draws seeded random points, locates each, and compares the formula's value
// with the leaf's cached truth. Boundary hits are resampled and counted.
inline VerificationReport verify_truth_invariance(const NuCADTree& tree, const Formula& f,
                                                  size_t samples, uint64_t seed) {
    VerificationReport rep;
    rep.name = "truth-invariance";
    PointSampler sampler(seed);
    for (size_t s = 0; s < samples; ++s) {
        ++rep.samples;
        for (int attempt = 0;; ++attempt) {
            std::vector<Rational> pt = sampler.next_point(tree.n);
            LocateResult loc;
            try {
                loc = locate(tree, pt);
            } catch (const std::exception& e) {
                rep.violations.push_back("locate failed at " + detail::point_text(pt) + ": " + e.what());
                break;
            }
            if (loc.boundary) {
                ++rep.boundary_resamples;
                if (attempt > 64) {
                    rep.violations.push_back("persistent boundary hits near " + detail::point_text(pt));
                    break;
                }
                continue;
            }
            bool actual = evaluate(f, pt);
            if (actual != loc.truth)
                rep.violations.push_back("leaf " + loc.label + " caches " +
                                         (loc.truth ? "true" : "false") + " but F" +
                                         detail::point_text(pt) + " = " + (actual ? "true" : "false"));
            break;
        }
    }
    return rep;
}

// Checks that random points land in exactly one leaf, and that the children
// of every non-leaf on the containment path partition it.
inline VerificationReport verify_weak_decomposition(const NuCADTree& tree, size_t samples,
                                                    uint64_t seed) {
    VerificationReport rep;
    rep.name = "weak-decomposition";
    std::map<std::string, std::vector<std::string>, LabelLess> children;
    for (const auto& [label, node] : tree.cells)
        if (!label.empty()) children[node.parent].push_back(label);
    PointSampler sampler(seed);
    for (size_t s = 0; s < samples; ++s) {
        ++rep.samples;
        for (int attempt = 0;; ++attempt) {
            std::vector<Rational> pt = sampler.next_point(tree.n);
            IsolationCache cache;
            bool boundary = false;
            // Exactly one leaf contains the point.
            size_t hits = 0;
            std::string hit_label;
            try {
                for (const auto& [label, node] : tree.cells) {
                    if (!node.leaf) continue;
                    Location loc = cell_contains(node.cell, pt, &cache);
                    if (loc == Location::Boundary) {
                        boundary = true;
                        break;
                    }
                    if (loc == Location::Inside) {
                        ++hits;
                        hit_label = label;
                    }
                }
            } catch (const std::exception& e) {
                rep.violations.push_back("membership test failed at " + detail::point_text(pt) +
                                         ": " + e.what());
                break;
            }
            if (!boundary) {
                if (hits != 1)
                    rep.violations.push_back(detail::point_text(pt) + " lies in " +
                                             std::to_string(hits) + " leaves");
                // Children partition each non-leaf along the containment path.
                std::string cur = "";
                while (!boundary) {
                    auto it = tree.cells.find(cur);
                    if (it == tree.cells.end() || it->second.leaf) break;
                    size_t inside = 0;
                    std::string next;
                    for (const auto& ch : children[cur]) {
                        Location loc = cell_contains(tree.cells.at(ch).cell, pt, &cache);
                        if (loc == Location::Boundary) {
                            boundary = true;
                            break;
                        }
                        if (loc == Location::Inside) {
                            ++inside;
                            next = ch;
                        }
                    }
                    if (boundary) break;
                    if (inside != 1) {
                        rep.violations.push_back(detail::point_text(pt) + " lies in " +
                                                 std::to_string(inside) + " children of " +
                                                 (cur.empty() ? "@" : cur));
                        break;
                    }
                    cur = next;
                }
            }
            if (boundary) {
                ++rep.boundary_resamples;
                if (attempt > 64) {
                    rep.violations.push_back("persistent boundary hits near " + detail::point_text(pt));
                    break;
                }
                continue;
            }
            break;
        }
    }
    return rep;
}

// Closure of a factor set under the open McCallum projection, swept from the
// highest level down (projections only feed lower levels). Throws when the
// closure exceeds the cap.
inline PolySet projection_closure(const PolySet& factors, size_t cap = 4096) {
    PolySet closure = factors;
    int maxlvl = 0;
    for (const auto& p : closure) maxlvl = std::max(maxlvl, p.level());
    for (int level = maxlvl; level >= 1; --level) {
        PolySet at_level;
        for (const auto& p : closure)
            if (p.level() == level) set_insert(at_level, p);
        for (const auto& p : at_level) {
            PolySet neighbors;
            for (const auto& q : at_level)
                if (!(q == p)) set_insert(neighbors, q);
            for (const auto& g : proj_open_mc(p, neighbors)) {
                set_insert(closure, g);
                if (closure.size() > cap) throw std::length_error("projection closure exceeds cap");
            }
        }
    }
    return closure;
}

// Checks that every bound polynomial of every cell lies in the projection
// closure of the formula's factors.
inline VerificationReport verify_bpolys_in_closure(const NuCADTree& tree, const Formula& f,
                                                   size_t cap = 4096) {
    VerificationReport rep;
    rep.name = "bound-polynomials-in-closure";
    PolySet closure;
    try {
        closure = projection_closure(factors_of_formula(f), cap);
    } catch (const std::length_error& e) {
        rep.violations.push_back(std::string("closure diagnostic: ") + e.what());
        return rep;
    }
    for (const auto& [label, node] : tree.cells) {
        ++rep.samples;
        for (const auto& b : bound_polys(node.cell))
            if (!set_contains(closure, b))
                rep.violations.push_back("cell " + (label.empty() ? "@" : label) +
                                         " has foreign bound polynomial " +
                                         b.to_string(f.vars()));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Classical open CAD baseline (n <= 3): counts the open cells of the sign-
// invariant decomposition induced by the full projection closure.
// ---------------------------------------------------------------------------

inline long build_open_cad(const Formula& f) {
    int n = f.nvars();
    if (n > 3) throw std::invalid_argument("open CAD baseline supports at most 3 variables");
    PolySet closure = projection_closure(factors_of_formula(f));
    std::function<long(int, std::vector<Rational>&)> rec = [&](int level,
                                                               std::vector<Rational>& prefix) -> long {
        std::vector<IsolatingInterval> roots;
        for (const auto& p : closure) {
            if (p.level() != level) continue;
            Polynomial u = p.eval_partial(prefix);
            if (u.is_zero() || u.is_constant()) continue;
            for (auto& iv : isolate_real_roots(u)) {
                // Insert in increasing order; drop coincident roots.
                bool dup = false;
                auto pos = roots.begin();
                for (; pos != roots.end(); ++pos) {
                    int c = algebraic_compare(iv, *pos);
                    if (c == 0) {
                        dup = true;
                        break;
                    }
                    if (c < 0) break;
                }
                if (!dup) roots.insert(pos, iv);
            }
        }
        size_t m = roots.size();
        if (level == n) return static_cast<long>(m) + 1;
        long total = 0;
        for (size_t i = 0; i <= m; ++i) {
            RealizedBound lo = i == 0 ? RealizedBound::neg_inf() : RealizedBound::root(roots[i - 1]);
            RealizedBound hi = i == m ? RealizedBound::pos_inf() : RealizedBound::root(roots[i]);
            prefix.push_back(rational_between_bounds(lo, hi));
            total += rec(level + 1, prefix);
            prefix.pop_back();
        }
        return total;
    };
    std::vector<Rational> prefix;
    return rec(1, prefix);
}

}  // namespace nucad
