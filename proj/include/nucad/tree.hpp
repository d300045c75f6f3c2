#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "nucad/formula.hpp"
#include "nucad/onecell.hpp"

namespace nucad {

// ---------------------------------------------------------------------------
// Labels: sequences of (level digits, letter) components, letter in {L,U,X}.
// The root carries the empty label.
// ---------------------------------------------------------------------------

struct LabelComponent {
    int level;
    char kind;  // 'L', 'U', or 'X'
    friend bool operator==(const LabelComponent& a, const LabelComponent& b) {
        return a.level == b.level && a.kind == b.kind;
    }
};

inline std::vector<LabelComponent> parse_label(const std::string& s) {
    std::vector<LabelComponent> out;
    size_t i = 0;
    while (i < s.size()) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("malformed label: " + s);
        int v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            ++i;
        }
        if (i >= s.size() || (s[i] != 'L' && s[i] != 'U' && s[i] != 'X'))
            throw std::invalid_argument("malformed label: " + s);
        out.push_back(LabelComponent{v, s[i]});
        ++i;
    }
    return out;
}

inline bool label_well_formed(const std::string& s, int n) {
    try {
        for (const auto& c : parse_label(s)) {
            if (c.level < 1 || c.level > n) return false;
            if (c.kind == 'X' && c.level != n) return false;
        }
    } catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

inline std::string parent_label(const std::string& s) {
    auto comps = parse_label(s);
    if (comps.empty()) throw std::invalid_argument("root has no parent");
    size_t cut = s.size() - 1;  // strip the letter
    while (cut > 0 && std::isdigit(static_cast<unsigned char>(s[cut - 1]))) --cut;
    return s.substr(0, cut);
}

// Canonical label order: componentwise (level, letter), prefixes first.
// Used for deterministic tree serialization.
struct LabelLess {
    bool operator()(const std::string& a, const std::string& b) const {
        auto ca = parse_label(a), cb = parse_label(b);
        size_t k = std::min(ca.size(), cb.size());
        for (size_t i = 0; i < k; ++i) {
            if (ca[i].level != cb[i].level) return ca[i].level < cb[i].level;
            if (ca[i].kind != cb[i].kind) return ca[i].kind < cb[i].kind;
        }
        return ca.size() < cb.size();
    }
};

// ---------------------------------------------------------------------------
// Sample perturbation for failed merges.
// ---------------------------------------------------------------------------

// Moves the sample of D off the variety responsible for a merge failure:
// walks leading-coefficient factor sets down to the lowest nullified level i,
// drops coordinate i below the nearest offending root (staying inside D), and
// re-places all higher coordinates between their realized bounds. The result
// lies in D. Precondition: f is nullified at some prefix of D's sample.
inline std::vector<Rational> perturb_sample(const OpenCell& D, const Polynomial& f) {
    int i = f.level();
    PolySet L;
    set_insert(L, f.normalized());
    auto nullified_at = [&](const Polynomial& g, int prefix_len) {
        return g.eval_partial(D.prefix(prefix_len)).is_zero();
    };
    while (true) {
        bool any = false;
        for (const auto& g : L)
            if (nullified_at(g, i - 1)) {
                any = true;
                break;
            }
        if (!any) break;
        PolySet next;
        for (const auto& g : L) {
            Polynomial lc = g.leading_coeff_in(i);
            if (lc.is_constant()) continue;
            for (const auto& h : detail::ProjectionCache::instance().factors_of(lc)) set_insert(next, h);
        }
        L = std::move(next);
        --i;
        if (i < 1) throw std::logic_error("perturbation descended below level 1");
    }
    const Rational alpha_i = D.sample[i - 1];
    std::optional<Rational> cut;
    bool cut_closed = false;
    auto consider = [&](const Rational& v, bool closed) {
        if (!cut || *cut < v || (*cut == v && cut_closed && !closed)) {
            cut = v;
            cut_closed = closed;
        }
    };
    auto scan = [&](const Polynomial& w) {
        if (w.is_zero() || w.is_constant()) return;
        for (IsolatingInterval iv : isolate_real_roots(w)) {
            if (detail::root_vs_rational(iv, alpha_i) >= 0) continue;
            while (!iv.is_point() && !(iv.hi < alpha_i)) iv = refine_once(iv);
            if (iv.is_point())
                consider(iv.lo, false);
            else
                consider(iv.hi, true);
        }
    };
    for (const auto& g : L) scan(g.eval_partial(D.prefix(i - 1)));
    RealizedBound lb = realize_bound(D, i, Side::Lower);
    if (lb.kind == RealizedBound::Root) {
        IsolatingInterval iv = lb.iv;
        while (!iv.is_point() && !(iv.hi < alpha_i)) iv = refine_once(iv);
        if (iv.is_point())
            consider(iv.lo, false);
        else
            consider(iv.hi, true);
    }
    OpenCell work = D;
    work.sample[i - 1] = simplest_rational_in(cut, cut_closed, alpha_i, false);
    for (int j = i + 1; j <= D.n; ++j)
        work.sample[j - 1] = rational_between_bounds(realize_bound(work, j, Side::Lower),
                                                     realize_bound(work, j, Side::Upper));
    return work.sample;
}

// ---------------------------------------------------------------------------
// Splitting a cell.
// ---------------------------------------------------------------------------

namespace detail {

inline OpenCell make_sibling(const OpenCell& D, const OpenCell& X, int i, Side side) {
    OpenCell s;
    s.n = D.n;
    s.bounds.assign(D.n, BoundPair{});
    for (int j = 1; j < i; ++j) s.bounds[j - 1] = X.bounds[j - 1];
    const SectionDescriptor& nb =
        side == Side::Lower ? X.bounds[i - 1].lower : X.bounds[i - 1].upper;
    assert(nb.is_section());
    if (side == Side::Lower) {
        s.bounds[i - 1].lower = D.bounds[i - 1].lower;
        s.bounds[i - 1].upper = nb;
    } else {
        s.bounds[i - 1].lower = nb;
        s.bounds[i - 1].upper = D.bounds[i - 1].upper;
    }
    for (int j = i + 1; j <= D.n; ++j) s.bounds[j - 1] = D.bounds[j - 1];
    s.label = D.label + std::to_string(i) + (side == Side::Lower ? "L" : "U");
    // Sample: the shared prefix, then coordinates between realized bounds.
    s.sample.assign(D.n, Rational(0));
    for (int j = 1; j < i; ++j) s.sample[j - 1] = X.sample[j - 1];
    for (int j = i; j <= D.n; ++j)
        s.sample[j - 1] = rational_between_bounds(realize_bound(s, j, Side::Lower),
                                                  realize_bound(s, j, Side::Upper));
    // Known sign-invariant set: P(D) plus the below-level part of P(X).
    s.pset = D.pset;
    for (const auto& q : X.pset)
        if (q.level() < i) set_insert(s.pset, q);
    // The fresh bound polynomial is sign-invariant on the sibling exactly when
    // its designated root is extremal (nothing of it beyond the strip) or the
    // strip sits between consecutive roots of the replaced bound.
    bool safe = false;
    if (side == Side::Lower) {
        const SectionDescriptor& old = D.bounds[i - 1].lower;
        if (nb.index == 1)
            safe = true;
        else if (old.is_section() && old.poly == nb.poly && old.index == nb.index - 1)
            safe = true;
    } else {
        const SectionDescriptor& old = D.bounds[i - 1].upper;
        int count = real_root_count_at_prefix(s, nb.poly, i);
        if (nb.index == count)
            safe = true;
        else if (old.is_section() && old.poly == nb.poly && old.index == nb.index + 1)
            safe = true;
    }
    if (safe) set_insert(s.pset, nb.poly);
    return s;
}

}  // namespace detail

// Splits D against F: an empty result means F is truth-invariant on D.
// Otherwise the first cell is the refined sub-cell containing the (possibly
// perturbed) sample, labelled lab+"nX", followed by the lower/upper leftover
// cells per level where a bound changed.
inline std::vector<OpenCell> split_cell(const OpenCell& D, const Formula& F, QPolicy policy) {
    PolySet q = choose_q(F, D.sample, D.pset, policy);
    if (q.empty()) return {};
    OpenCell cur = D;
    int guard = 0;
    while (true) {
        MergeOutcome out = merge_set(cur, q);
        if (!out.ok()) {
            if (++guard > 100000) throw std::logic_error("perturbation loop exceeded bound");
            // Retry against the same bounds with the sample moved off the
            // nullifying variety. The nullification held at the sample as it
            // stood when the merge failed, which may already have drifted.
            OpenCell at_failure = cur;
            at_failure.sample = out.cell.sample;
            cur.sample = perturb_sample(at_failure, *out.failed);
            continue;
        }
        cur = std::move(out.cell);
        if (eval_three_valued(F, cur.sample, cur.pset) != Tri::Unknown) break;
        // The merged factors may decide F differently at the refined sample
        // (a vanishing atom moved off its variety); extend the merge set.
        q = choose_q(F, cur.sample, cur.pset, policy);
        if (q.empty()) throw std::logic_error("undetermined formula with empty merge set");
    }
    OpenCell x = cur;
    x.label = D.label + std::to_string(D.n) + "X";
    std::vector<OpenCell> out{x};
    for (int i = 1; i <= D.n; ++i) {
        if (x.bounds[i - 1].lower != D.bounds[i - 1].lower)
            out.push_back(detail::make_sibling(D, x, i, Side::Lower));
        if (x.bounds[i - 1].upper != D.bounds[i - 1].upper)
            out.push_back(detail::make_sibling(D, x, i, Side::Upper));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The decomposition tree.
// ---------------------------------------------------------------------------

struct CellNode {
    OpenCell cell;
    std::string parent;  // parent label; root points at itself ("")
    bool leaf = false;
    bool truth = false;  // cached truth of the formula at the sample (leaves)
};

struct NuCADTree {
    int n = 0;
    Formula formula;
    std::map<std::string, CellNode, LabelLess> cells;
};

struct SplitPolicy {
    QPolicy q_policy = QPolicy::Greedy;
    int workers = 1;
    size_t max_cells = 100000;
};

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(size_t cap)
        : std::runtime_error("cell safety cap exceeded (" + std::to_string(cap) + " cells)") {}
};

using LeafCallback = std::function<void(const std::string&, const CellNode&)>;

// Builds a truth-invariant decomposition of R^n for F. The initial sample is
// the origin. Cells are processed FIFO by a pool of workers; the result is
// independent of the worker count and dequeue schedule, since splitting reads
// only the cell and the formula. Leaves stream through on_leaf as found.
inline NuCADTree build_tree(const Formula& F, const SplitPolicy& policy = {},
                            const LeafCallback& on_leaf = nullptr) {
    if (F.nvars() < 1) throw std::invalid_argument("formula must declare at least one variable");
    NuCADTree tree;
    tree.n = F.nvars();
    tree.formula = F;
    OpenCell root = universe_cell(tree.n, std::vector<Rational>(tree.n, Rational(0)));
    tree.cells.emplace("", CellNode{root, "", false, false});

    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::string> queue;
    queue.push_back("");
    size_t active = 0;
    std::exception_ptr error;

    auto worker = [&]() {
        std::unique_lock<std::mutex> lock(mu);
        while (true) {
            cv.wait(lock, [&] { return error || !queue.empty() || active == 0; });
            if (error) return;
            if (queue.empty()) {
                if (active == 0) return;
                continue;
            }
            std::string label = queue.front();
            queue.pop_front();
            ++active;
            OpenCell cell = tree.cells.at(label).cell;
            lock.unlock();
            std::vector<OpenCell> children;
            std::exception_ptr local_err;
            try {
                children = split_cell(cell, F, policy.q_policy);
            } catch (...) {
                local_err = std::current_exception();
            }
            lock.lock();
            if (local_err) {
                if (!error) error = local_err;
                --active;
                cv.notify_all();
                return;
            }
            if (children.empty()) {
                CellNode& node = tree.cells.at(label);
                node.leaf = true;
                node.truth = evaluate(F, node.cell.sample);
                if (on_leaf) on_leaf(label, node);
            } else {
                for (auto& ch : children) {
                    if (tree.cells.size() >= policy.max_cells) {
                        if (!error) error = std::make_exception_ptr(CapExceeded(policy.max_cells));
                        break;
                    }
                    bool is_x = !ch.label.empty() && ch.label.back() == 'X';
                    CellNode cn{std::move(ch), label, is_x, false};
                    if (is_x) cn.truth = evaluate(F, cn.cell.sample);
                    std::string child_label = cn.cell.label;
                    auto [it, inserted] = tree.cells.emplace(std::move(child_label), std::move(cn));
                    if (!inserted) {
                        if (!error)
                            error = std::make_exception_ptr(
                                std::logic_error("duplicate cell label " + it->first));
                        break;
                    }
                    if (is_x) {
                        if (on_leaf) on_leaf(it->first, it->second);
                    } else {
                        queue.push_back(it->first);
                    }
                }
            }
            --active;
            cv.notify_all();
            if (error) return;
        }
    };

    int workers = std::max(1, policy.workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return tree;
}

struct LocateResult {
    bool boundary = false;
    std::string label;
    bool truth = false;
};

// Descends from the root: into the refined sub-cell when the point lies in
// it, otherwise into the sibling at the first exit level/side. Cost is
// proportional to tree depth times per-cell membership tests.
inline LocateResult locate(const NuCADTree& tree, std::span<const Rational> beta,
                           IsolationCache* cache = nullptr) {
    assert(static_cast<int>(beta.size()) == tree.n);
    IsolationCache local;
    if (!cache) cache = &local;
    std::string cur = "";
    while (true) {
        const CellNode& node = tree.cells.at(cur);
        if (node.leaf) return LocateResult{false, cur, node.truth};
        std::string xlab = cur + std::to_string(tree.n) + "X";
        auto xit = tree.cells.find(xlab);
        if (xit == tree.cells.end()) throw std::logic_error("non-leaf cell lacks refined child: " + cur);
        ContainsResult r = cell_contains_ex(xit->second.cell, beta, cache);
        if (r.loc == Location::Boundary) return LocateResult{true, cur, false};
        if (r.loc == Location::Inside) {
            cur = std::move(xlab);
            continue;
        }
        cur += std::to_string(r.exit_level);
        cur += r.exit_side == Side::Lower ? 'L' : 'U';
        if (!tree.cells.count(cur)) throw std::logic_error("tree missing sibling cell " + cur);
    }
}

struct TreeStats {
    size_t cells = 0;
    size_t leaves = 0;
    size_t x_cells = 0;
    size_t distinct_factors = 0;
    size_t max_depth = 0;
};

inline TreeStats stats(const NuCADTree& tree) {
    TreeStats s;
    s.cells = tree.cells.size();
    PolySet all;
    for (const auto& [label, node] : tree.cells) {
        if (node.leaf) ++s.leaves;
        if (!label.empty() && label.back() == 'X') ++s.x_cells;
        for (const auto& p : node.cell.pset) set_insert(all, p);
        s.max_depth = std::max(s.max_depth, parse_label(label).size());
    }
    s.distinct_factors = all.size();
    return s;
}

}  // namespace nucad
