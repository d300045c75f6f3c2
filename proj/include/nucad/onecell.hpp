#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nucad/projection.hpp"
#include "nucad/realroots.hpp"

namespace nucad {

enum class Side { Lower, Upper };

// One side of a cylindrical cell at some level: an infinity or the k-th real
// root of a level-i polynomial specialized at the cell's sample prefix.
struct SectionDescriptor {
    enum Kind { NegInf, PosInf, Section } kind = NegInf;
    Polynomial poly;  // meaningful when kind == Section
    int index = 0;    // 1-based root index

    bool is_section() const { return kind == Section; }

    static SectionDescriptor neg_inf() { return SectionDescriptor{NegInf, {}, 0}; }
    static SectionDescriptor pos_inf() { return SectionDescriptor{PosInf, {}, 0}; }
    static SectionDescriptor section(Polynomial p, int k) {
        return SectionDescriptor{Section, std::move(p), k};
    }

    friend bool operator==(const SectionDescriptor& a, const SectionDescriptor& b) {
        if (a.kind != b.kind) return false;
        if (a.kind != Section) return true;
        return a.index == b.index && a.poly == b.poly;
    }
    friend bool operator!=(const SectionDescriptor& a, const SectionDescriptor& b) { return !(a == b); }
};

struct BoundPair {
    SectionDescriptor lower = SectionDescriptor::neg_inf();
    SectionDescriptor upper = SectionDescriptor::pos_inf();
    friend bool operator==(const BoundPair& a, const BoundPair& b) {
        return a.lower == b.lower && a.upper == b.upper;
    }
};

// Open cylindrical cell with per-level section bounds, a rational sample
// point strictly inside, and the set P of polynomials known sign-invariant
// on the cell. Immutable by convention: refinement produces new cells.
struct OpenCell {
    int n = 0;
    std::vector<BoundPair> bounds;  // bounds[i-1] holds level i
    std::vector<Rational> sample;
    PolySet pset;
    std::string label;

    std::span<const Rational> prefix(int k) const {
        return std::span<const Rational>(sample.data(), static_cast<size_t>(k));
    }
};

inline OpenCell universe_cell(int n, std::vector<Rational> alpha) {
    assert(static_cast<int>(alpha.size()) == n);
    OpenCell c;
    c.n = n;
    c.bounds.assign(n, BoundPair{});
    c.sample = std::move(alpha);
    return c;
}

// Polynomials whose sections bound the cell.
inline PolySet bound_polys(const OpenCell& c) {
    PolySet out;
    for (const auto& bp : c.bounds) {
        if (bp.lower.is_section()) set_insert(out, bp.lower.poly);
        if (bp.upper.is_section()) set_insert(out, bp.upper.poly);
    }
    return out;
}

inline PolySet level_bound_polys(const OpenCell& c, int level) {
    PolySet out;
    const BoundPair& bp = c.bounds[level - 1];
    if (bp.lower.is_section()) set_insert(out, bp.lower.poly);
    if (bp.upper.is_section()) set_insert(out, bp.upper.poly);
    return out;
}

// Realizes a bound over the cell's own sample prefix. Throws when the stored
// root index is invalid for the specialization (data-structure corruption).
inline RealizedBound realize_bound(const OpenCell& c, int level, Side side) {
    const SectionDescriptor& sd =
        side == Side::Lower ? c.bounds[level - 1].lower : c.bounds[level - 1].upper;
    if (sd.kind == SectionDescriptor::NegInf) return RealizedBound::neg_inf();
    if (sd.kind == SectionDescriptor::PosInf) return RealizedBound::pos_inf();
    Polynomial u = sd.poly.eval_partial(c.prefix(level - 1));
    if (u.is_zero()) throw std::logic_error("bound polynomial nullified at sample prefix");
    auto roots = isolate_real_roots(u);
    if (sd.index < 1 || static_cast<size_t>(sd.index) > roots.size())
        throw std::out_of_range("root index out of range");
    return RealizedBound::root(roots[sd.index - 1]);
}

namespace detail {

// Sign of (root - r): -1, 0, +1; exact.
inline int root_vs_rational(IsolatingInterval iv, const Rational& r) {
    if (iv.is_point()) return iv.lo == r ? 0 : (iv.lo < r ? -1 : 1);
    int var = univariate_variable(iv.defining);
    if (sign_of(eval_dense(to_dense(iv.defining, var), r)) == 0 && iv.lo < r && r < iv.hi) return 0;
    while (true) {
        if (iv.hi <= r) return -1;
        if (iv.lo >= r) return 1;
        iv = refine_once(iv);
        if (iv.is_point()) return iv.lo == r ? 0 : (iv.lo < r ? -1 : 1);
    }
}

}  // namespace detail

enum class Location { Inside, Boundary, Outside };

struct ContainsResult {
    Location loc = Location::Inside;
    int exit_level = 0;       // least level where the point leaves the cell
    Side exit_side = Side::Lower;  // Lower: below the lower bound; Upper: above the upper
};

// Per-query cache of specializations: all cells of one containment walk share
// the query point, so isolations repeat across cells.
struct IsolationCache {
    std::map<std::string, std::vector<IsolatingInterval>> roots;
};

// Membership test, checking levels in increasing order and reporting the
// first exit. Root indices transport from the sample prefix to the query
// prefix by real-root-count invariance over the cell's base.
inline ContainsResult cell_contains_ex(const OpenCell& c, std::span<const Rational> beta,
                                       IsolationCache* cache = nullptr) {
    assert(static_cast<int>(beta.size()) == c.n);
    for (int i = 1; i <= c.n; ++i) {
        for (Side side : {Side::Lower, Side::Upper}) {
            const SectionDescriptor& sd =
                side == Side::Lower ? c.bounds[i - 1].lower : c.bounds[i - 1].upper;
            if (!sd.is_section()) continue;
            std::vector<IsolatingInterval> roots;
            const std::vector<IsolatingInterval>* roots_ptr = nullptr;
            if (cache) {
                std::string key = std::to_string(i) + "|" + sd.poly.to_string();
                auto it = cache->roots.find(key);
                if (it == cache->roots.end()) {
                    Polynomial u = sd.poly.eval_partial(beta.subspan(0, i - 1));
                    if (u.is_zero()) throw std::logic_error("bound polynomial nullified at query prefix");
                    it = cache->roots.emplace(key, isolate_real_roots(u)).first;
                }
                roots_ptr = &it->second;
            } else {
                Polynomial u = sd.poly.eval_partial(beta.subspan(0, i - 1));
                if (u.is_zero()) throw std::logic_error("bound polynomial nullified at query prefix");
                roots = isolate_real_roots(u);
                roots_ptr = &roots;
            }
            if (sd.index < 1 || static_cast<size_t>(sd.index) > roots_ptr->size())
                throw std::out_of_range("root index out of range");
            int pos = detail::root_vs_rational((*roots_ptr)[sd.index - 1], beta[i - 1]);
            if (pos == 0) return ContainsResult{Location::Boundary, i, side};
            if (side == Side::Lower && pos > 0) return ContainsResult{Location::Outside, i, Side::Lower};
            if (side == Side::Upper && pos < 0) return ContainsResult{Location::Outside, i, Side::Upper};
        }
    }
    return ContainsResult{Location::Inside, 0, Side::Lower};
}

inline Location cell_contains(const OpenCell& c, std::span<const Rational> beta,
                              IsolationCache* cache = nullptr) {
    return cell_contains_ex(c, beta, cache).loc;
}

// Either a refined cell or a failure carrying a polynomial that is nullified
// at some sample prefix of the input cell.
struct MergeOutcome {
    std::optional<Polynomial> failed;
    OpenCell cell;
    bool ok() const { return !failed.has_value(); }
};

namespace detail {

// Moves sample[k] off the variety of u (the level-k specialization being
// merged), downward into the gap between the nearest lower root and the old
// coordinate, then re-places the coordinates above level k between their
// realized bounds over the new prefix.
inline void pre_perturb_at_level(OpenCell& c, int k, const Polynomial& u) {
    const Rational alpha_k = c.sample[k - 1];
    std::optional<Rational> cut;
    bool cut_closed = false;
    auto consider = [&](const Rational& v, bool closed) {
        if (!cut || *cut < v || (*cut == v && cut_closed && !closed)) {
            cut = v;
            cut_closed = closed;
        }
    };
    auto scan_roots = [&](const Polynomial& w) {
        for (IsolatingInterval iv : isolate_real_roots(w)) {
            if (root_vs_rational(iv, alpha_k) >= 0) continue;  // not strictly below
            while (!iv.is_point() && !(iv.hi < alpha_k)) iv = refine_once(iv);
            if (iv.is_point())
                consider(iv.lo, false);  // must stay strictly above an exact root
            else
                consider(iv.hi, true);
        }
    };
    scan_roots(u);
    for (const auto& b : level_bound_polys(c, k)) {
        Polynomial w = b.eval_partial(c.prefix(k - 1));
        if (!w.is_zero()) scan_roots(w);
    }
    c.sample[k - 1] = simplest_rational_in(cut, cut_closed, alpha_k, false);
    for (int j = k + 1; j <= c.n; ++j)
        c.sample[j - 1] =
            rational_between_bounds(realize_bound(c, j, Side::Lower), realize_bound(c, j, Side::Upper));
}

// Refines the cell to make the basis factor f sign-invariant around its
// sample point. Returns the nullified polynomial on failure.
inline std::optional<Polynomial> merge_piece(OpenCell& c, const Polynomial& f) {
    if (set_contains(c.pset, f)) return std::nullopt;
    int k = f.level();
    assert(k >= 1);
    {
        Polynomial u = f.eval_partial(c.prefix(k - 1));
        if (u.is_zero()) return f;
    }
    // Lower-level projection factors first.
    PolySet proj = proj_open_mc(f, level_bound_polys(c, k));
    std::vector<Polynomial> order(proj.begin(), proj.end());
    std::sort(order.begin(), order.end(), merge_order_less);
    for (const auto& g : order)
        if (auto fail = merge_piece(c, g)) return fail;
    // Recursive merges may have moved lower coordinates; re-specialize.
    Polynomial u = f.eval_partial(c.prefix(k - 1));
    if (u.is_zero()) return f;
    if (sign_of(eval_dense(to_dense(u, 1), c.sample[k - 1])) == 0) pre_perturb_at_level(c, k, u);
    const Rational alpha_k = c.sample[k - 1];
    auto roots = isolate_real_roots(u);
    int below = -1, above = -1;
    for (size_t i = 0; i < roots.size(); ++i) {
        int pos = root_vs_rational(roots[i], alpha_k);
        assert(pos != 0);
        if (pos < 0) below = static_cast<int>(i);
        if (pos > 0) {
            above = static_cast<int>(i);
            break;
        }
    }
    BoundPair& bp = c.bounds[k - 1];
    if (below >= 0) {
        bool tighter = true;
        if (bp.lower.is_section()) {
            RealizedBound cur = realize_bound(c, k, Side::Lower);
            tighter = algebraic_compare(roots[below], cur.iv) > 0;
        }
        if (tighter) bp.lower = SectionDescriptor::section(f, below + 1);
    }
    if (above >= 0) {
        bool tighter = true;
        if (bp.upper.is_section()) {
            RealizedBound cur = realize_bound(c, k, Side::Upper);
            tighter = algebraic_compare(roots[above], cur.iv) < 0;
        }
        if (tighter) bp.upper = SectionDescriptor::section(f, above + 1);
    }
    set_insert(c.pset, f);
    return std::nullopt;
}

}  // namespace detail

// Merges one polynomial into the cell: basis-refines it, merges each factor
// together with its projection closure, and tightens the level bounds around
// the sample. Fails when p, or any generated polynomial, is nullified at the
// relevant sample prefix.
inline MergeOutcome merge_poly(OpenCell c, const Polynomial& p) {
    assert(!p.is_constant());
    int k = p.level();
    Polynomial u = p.eval_partial(c.prefix(k - 1));
    if (u.is_zero()) return MergeOutcome{p, std::move(c)};
    PolySet pieces = detail::ProjectionCache::instance().factors_of(p);
    std::vector<Polynomial> order(pieces.begin(), pieces.end());
    std::sort(order.begin(), order.end(), merge_order_less);
    for (const auto& f : order)
        if (auto fail = detail::merge_piece(c, f)) return MergeOutcome{*fail, std::move(c)};
    return MergeOutcome{std::nullopt, std::move(c)};
}

// Iterated merge in deterministic order (ascending level, then total degree,
// then canonical order); the first failure propagates.
inline MergeOutcome merge_set(OpenCell c, const PolySet& q) {
    std::vector<Polynomial> order(q.begin(), q.end());
    std::sort(order.begin(), order.end(), merge_order_less);
    for (const auto& p : order) {
        if (p.is_constant() || set_contains(c.pset, p)) continue;
        MergeOutcome r = merge_poly(std::move(c), p);
        if (!r.ok()) return r;
        c = std::move(r.cell);
    }
    return MergeOutcome{std::nullopt, std::move(c)};
}

// Count of real roots of the bound polynomial's specialization at the cell's
// sample prefix.
inline int real_root_count_at_prefix(const OpenCell& c, const Polynomial& p, int level) {
    Polynomial u = p.eval_partial(c.prefix(level - 1));
    if (u.is_zero()) return -1;
    return static_cast<int>(isolate_real_roots(u).size());
}

}  // namespace nucad
