#pragma once

#include <cctype>
#include <memory>
#include <mutex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nucad/factor.hpp"
#include "nucad/polynomial.hpp"

namespace nucad {

enum class Rel { Lt, Le, Gt, Ge, Eq, Ne };

inline Rel flip_rel(Rel r) {
    switch (r) {
        case Rel::Lt: return Rel::Gt;
        case Rel::Le: return Rel::Ge;
        case Rel::Gt: return Rel::Lt;
        case Rel::Ge: return Rel::Le;
        default: return r;
    }
}

inline Rel negate_rel(Rel r) {
    switch (r) {
        case Rel::Lt: return Rel::Ge;
        case Rel::Le: return Rel::Gt;
        case Rel::Gt: return Rel::Le;
        case Rel::Ge: return Rel::Lt;
        case Rel::Eq: return Rel::Ne;
        case Rel::Ne: return Rel::Eq;
    }
    return r;
}

inline bool rel_holds(Rel r, int sign) {
    switch (r) {
        case Rel::Lt: return sign < 0;
        case Rel::Le: return sign <= 0;
        case Rel::Gt: return sign > 0;
        case Rel::Ge: return sign >= 0;
        case Rel::Eq: return sign == 0;
        case Rel::Ne: return sign != 0;
    }
    return false;
}

inline const char* rel_text(Rel r) {
    switch (r) {
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Gt: return ">";
        case Rel::Ge: return ">=";
        case Rel::Eq: return "=";
        case Rel::Ne: return "/=";
    }
    return "?";
}

// Normalized sign atom "p rel 0": p is primitive with positive leading
// coefficient under the canonical order and nonconstant.
struct Atom {
    Polynomial poly;
    Rel rel;
    friend bool operator==(const Atom& a, const Atom& b) { return a.rel == b.rel && a.poly == b.poly; }
};

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l),
          col(c) {}
};

// Quantifier-free Tarski formula in negation-free normal form: constants,
// atoms, and flattened n-ary conjunctions/disjunctions. Variable declaration
// order fixes levels; the last declared variable is the main variable.
class Formula {
  public:
    enum class Kind { True, False, Atom, And, Or };

    struct Node {
        Kind kind;
        int atom = -1;                // index into atoms() when kind == Atom
        std::vector<Node> children;   // for And / Or (>= 2 entries)
        friend bool operator==(const Node& a, const Node& b) {
            return a.kind == b.kind && a.atom == b.atom && a.children == b.children;
        }
    };

    Formula() = default;
    Formula(std::vector<std::string> vars, Node root, std::vector<Atom> atoms)
        : vars_(std::move(vars)), root_(std::move(root)), atoms_(std::move(atoms)) {}

    int nvars() const { return static_cast<int>(vars_.size()); }
    const std::vector<std::string>& vars() const { return vars_; }
    const Node& root() const { return root_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    friend bool operator==(const Formula& a, const Formula& b) {
        return a.vars_ == b.vars_ && a.atoms_ == b.atoms_ && a.root_ == b.root_;
    }

  private:
    std::vector<std::string> vars_;
    Node root_;
    std::vector<Atom> atoms_;
};

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
    enum Kind { Ident, Int, Plus, Minus, Star, Caret, LParen, RParen, Comma, Semi,
                And, Or, Not, Lt, Le, Gt, Ge, Eq, Ne, End } kind;
    std::string text;
    int line, col;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) bump();
        int l = line_, c = col_;
        if (pos_ >= text_.size()) {
            tok_ = Token{Token::End, "", l, c};
            return;
        }
        char ch = text_[pos_];
        auto make = [&](Token::Kind k, std::string s) {
            for (size_t i = 0; i < s.size(); ++i) bump();
            tok_ = Token{k, std::move(s), l, c};
        };
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t e = pos_;
            while (e < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[e])) || text_[e] == '_'))
                ++e;
            make(Token::Ident, std::string(text_.substr(pos_, e - pos_)));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t e = pos_;
            while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
            if (e < text_.size() && text_[e] == '.')
                throw ParseError(l, c, "non-integer coefficient");
            make(Token::Int, std::string(text_.substr(pos_, e - pos_)));
            return;
        }
        auto two = [&](char second) { return pos_ + 1 < text_.size() && text_[pos_ + 1] == second; };
        switch (ch) {
            case '+': make(Token::Plus, "+"); return;
            case '-': make(Token::Minus, "-"); return;
            case '*': make(Token::Star, "*"); return;
            case '^': make(Token::Caret, "^"); return;
            case '(': make(Token::LParen, "("); return;
            case ')': make(Token::RParen, ")"); return;
            case ',': make(Token::Comma, ","); return;
            case ';': make(Token::Semi, ";"); return;
            case '~': make(Token::Not, "~"); return;
            case '<': two('=') ? make(Token::Le, "<=") : make(Token::Lt, "<"); return;
            case '>': two('=') ? make(Token::Ge, ">=") : make(Token::Gt, ">"); return;
            case '=': make(Token::Eq, "="); return;
            case '/':
                if (two('\\')) { make(Token::And, "/\\"); return; }
                if (two('=')) { make(Token::Ne, "/="); return; }
                throw ParseError(l, c, "expected '/\\' or '/='");
            case '\\':
                if (two('/')) { make(Token::Or, "\\/"); return; }
                throw ParseError(l, c, "expected '\\/'");
            default: throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_{Token::End, "", 1, 1};
};

// Raw parse tree before normalization.
struct RawNode {
    enum Kind { Atom, Not, And, Or } kind;
    Polynomial poly;  // atoms: normalized-to-left polynomial (lhs - rhs)
    Rel rel = Rel::Lt;
    std::vector<RawNode> children;
};

class Parser {
  public:
    Parser(Lexer& lex, const std::map<std::string, int>& vars, int nvars)
        : lex_(lex), vars_(vars), nvars_(nvars) {}

    RawNode parse_formula() {
        RawNode n = parse_conj();
        while (lex_.peek().kind == Token::Or) {
            lex_.take();
            RawNode rhs = parse_conj();
            if (n.kind != RawNode::Or) {
                RawNode d{RawNode::Or, {}, Rel::Lt, {}};
                d.children.push_back(std::move(n));
                n = std::move(d);
            }
            n.children.push_back(std::move(rhs));
        }
        return n;
    }

  private:
    RawNode parse_conj() {
        RawNode n = parse_unit();
        while (lex_.peek().kind == Token::And) {
            lex_.take();
            RawNode rhs = parse_unit();
            if (n.kind != RawNode::And) {
                RawNode d{RawNode::And, {}, Rel::Lt, {}};
                d.children.push_back(std::move(n));
                n = std::move(d);
            }
            n.children.push_back(std::move(rhs));
        }
        return n;
    }

    RawNode parse_unit() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Not) {
            lex_.take();
            RawNode inner = parse_unit();
            RawNode n{RawNode::Not, {}, Rel::Lt, {}};
            n.children.push_back(std::move(inner));
            return n;
        }
        if (t.kind == Token::LParen) {
            lex_.take();
            RawNode inner = parse_formula();
            if (lex_.peek().kind != Token::RParen)
                throw ParseError(lex_.peek().line, lex_.peek().col, "expected ')'");
            lex_.take();
            return inner;
        }
        return parse_atom();
    }

    RawNode parse_atom() {
        Polynomial lhs = parse_poly();
        Rel rel;
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Lt: rel = Rel::Lt; break;
            case Token::Le: rel = Rel::Le; break;
            case Token::Gt: rel = Rel::Gt; break;
            case Token::Ge: rel = Rel::Ge; break;
            case Token::Eq: rel = Rel::Eq; break;
            case Token::Ne: rel = Rel::Ne; break;
            default: throw ParseError(t.line, t.col, "expected a relation");
        }
        lex_.take();
        Polynomial rhs = parse_poly();
        RawNode n{RawNode::Atom, lhs - rhs, rel, {}};
        return n;
    }

    Polynomial parse_poly() {
        Polynomial acc = parse_term(true);
        while (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus) {
            bool neg = lex_.take().kind == Token::Minus;
            Polynomial t = parse_term(false);
            acc = neg ? acc - t : acc + t;
        }
        return acc;
    }

    Polynomial parse_term(bool allow_sign) {
        int sgn = 1;
        while (allow_sign &&
               (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus)) {
            if (lex_.take().kind == Token::Minus) sgn = -sgn;
        }
        Polynomial acc = Polynomial::constant(nvars_, 1);
        bool any = false;
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Int) {
                acc = acc * Integer(lex_.take().text);
                any = true;
            } else if (t.kind == Token::Ident) {
                Token id = lex_.take();
                auto it = vars_.find(id.text);
                if (it == vars_.end())
                    throw ParseError(id.line, id.col, "undeclared variable '" + id.text + "'");
                unsigned e = 1;
                if (lex_.peek().kind == Token::Caret) {
                    lex_.take();
                    const Token& p = lex_.peek();
                    if (p.kind != Token::Int) throw ParseError(p.line, p.col, "expected integer exponent");
                    e = static_cast<unsigned>(std::stoul(lex_.take().text));
                    if (e == 0) throw ParseError(p.line, p.col, "exponent must be positive");
                }
                acc = acc * Polynomial::variable(nvars_, it->second).pow(e);
                any = true;
            } else if (t.kind == Token::Star) {
                lex_.take();
            } else {
                break;
            }
        }
        if (!any) throw ParseError(lex_.peek().line, lex_.peek().col, "expected a term");
        return sgn < 0 ? -acc : acc;
    }

    Lexer& lex_;
    const std::map<std::string, int>& vars_;
    int nvars_;
};

// Negation-normal, constant-folded, flattened form.
inline Formula::Node normalize(const RawNode& raw, bool negated, std::vector<Atom>& atoms) {
    using Node = Formula::Node;
    switch (raw.kind) {
        case RawNode::Not:
            return normalize(raw.children.front(), !negated, atoms);
        case RawNode::Atom: {
            Polynomial p = raw.poly;
            Rel rel = negated ? negate_rel(raw.rel) : raw.rel;
            if (p.is_constant()) {
                bool v = rel_holds(rel, sign_of(p.constant_value()));
                return Node{v ? Formula::Kind::True : Formula::Kind::False, -1, {}};
            }
            Polynomial q = p.normalized();
            // p = c*q for a rational c whose sign matches the leading
            // coefficients; a negative c flips the relation.
            if (sign_of(p.lead_coeff()) != sign_of(q.lead_coeff())) rel = flip_rel(rel);
            Atom a{q, rel};
            int idx = -1;
            for (size_t i = 0; i < atoms.size(); ++i)
                if (atoms[i] == a) {
                    idx = static_cast<int>(i);
                    break;
                }
            if (idx < 0) {
                atoms.push_back(a);
                idx = static_cast<int>(atoms.size()) - 1;
            }
            return Node{Formula::Kind::Atom, idx, {}};
        }
        case RawNode::And:
        case RawNode::Or: {
            bool is_and = (raw.kind == RawNode::And) != negated;
            Formula::Kind kind = is_and ? Formula::Kind::And : Formula::Kind::Or;
            Formula::Kind absorb = is_and ? Formula::Kind::False : Formula::Kind::True;
            Formula::Kind neutral = is_and ? Formula::Kind::True : Formula::Kind::False;
            std::vector<Node> kids;
            for (const auto& c : raw.children) {
                Node k = normalize(c, negated, atoms);
                if (k.kind == absorb) return Node{absorb, -1, {}};
                if (k.kind == neutral) continue;
                if (k.kind == kind) {
                    for (auto& g : k.children) kids.push_back(std::move(g));
                } else {
                    kids.push_back(std::move(k));
                }
            }
            if (kids.empty()) return Node{neutral, -1, {}};
            if (kids.size() == 1) return std::move(kids.front());
            return Node{kind, -1, std::move(kids)};
        }
    }
    return Node{Formula::Kind::False, -1, {}};
}

}  // namespace detail

// Parses "vars x, y; <formula>". Throws ParseError with line/column info.
inline Formula parse_formula(std::string_view text) {
    detail::Lexer lex(text);
    auto expect_ident = [&](const char* what) {
        const detail::Token& t = lex.peek();
        if (t.kind != detail::Token::Ident) throw ParseError(t.line, t.col, std::string("expected ") + what);
        return lex.take().text;
    };
    std::string kw = expect_ident("'vars'");
    if (kw != "vars") throw ParseError(1, 1, "input must start with 'vars'");
    std::vector<std::string> names;
    std::map<std::string, int> vars;
    while (true) {
        std::string v = expect_ident("variable name");
        if (vars.count(v)) throw ParseError(lex.peek().line, lex.peek().col, "duplicate variable '" + v + "'");
        vars[v] = static_cast<int>(names.size()) + 1;
        names.push_back(v);
        if (lex.peek().kind == detail::Token::Comma) {
            lex.take();
            continue;
        }
        break;
    }
    if (lex.peek().kind != detail::Token::Semi)
        throw ParseError(lex.peek().line, lex.peek().col, "expected ';' after variable list");
    lex.take();
    detail::Parser parser(lex, vars, static_cast<int>(names.size()));
    detail::RawNode raw = parser.parse_formula();
    if (lex.peek().kind != detail::Token::End)
        throw ParseError(lex.peek().line, lex.peek().col, "trailing input");
    std::vector<Atom> atoms;
    Formula::Node root = detail::normalize(raw, false, atoms);
    return Formula(std::move(names), std::move(root), std::move(atoms));
}

// Parses a bare polynomial in the given variables (used by the tree format).
// Implemented by parsing the atom "<text>=0" and taking its left side.
inline Polynomial parse_poly_text(std::string_view text, std::span<const std::string> names) {
    std::map<std::string, int> vars;
    for (size_t i = 0; i < names.size(); ++i) vars[names[i]] = static_cast<int>(i) + 1;
    std::string padded = std::string(text) + "=0";
    detail::Lexer lex(padded);
    detail::Parser parser(lex, vars, static_cast<int>(names.size()));
    detail::RawNode raw = parser.parse_formula();
    if (lex.peek().kind != detail::Token::End)
        throw ParseError(lex.peek().line, lex.peek().col, "trailing input in polynomial");
    if (raw.kind != detail::RawNode::Atom) throw std::invalid_argument("not a polynomial");
    return raw.poly;
}

// ---------------------------------------------------------------------------
// Printing. parse(print(F)) == F on the normalized form.
// ---------------------------------------------------------------------------

namespace detail {

inline void print_node(const Formula& f, const Formula::Node& n, std::string& out, bool parent_and) {
    switch (n.kind) {
        case Formula::Kind::True: out += "0<1"; break;
        case Formula::Kind::False: out += "0<0"; break;
        case Formula::Kind::Atom: {
            const Atom& a = f.atoms()[n.atom];
            out += a.poly.to_string(f.vars());
            out += rel_text(a.rel);
            out += '0';
            break;
        }
        case Formula::Kind::And: {
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (i) out += "/\\";
                bool paren = n.children[i].kind == Formula::Kind::Or;
                if (paren) out += '(';
                print_node(f, n.children[i], out, true);
                if (paren) out += ')';
            }
            break;
        }
        case Formula::Kind::Or: {
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (i) out += "\\/";
                print_node(f, n.children[i], out, false);
            }
            break;
        }
    }
    (void)parent_and;
}

}  // namespace detail

// Formula text without the variable declaration.
inline std::string formula_body_text(const Formula& f) {
    std::string out;
    detail::print_node(f, f.root(), out, false);
    return out;
}

inline std::string to_string(const Formula& f) {
    std::string out = "vars ";
    for (size_t i = 0; i < f.vars().size(); ++i) {
        if (i) out += ", ";
        out += f.vars()[i];
    }
    out += "; ";
    out += formula_body_text(f);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

namespace detail {

inline bool eval_node(const Formula& f, const Formula::Node& n, std::span<const Rational> pt) {
    switch (n.kind) {
        case Formula::Kind::True: return true;
        case Formula::Kind::False: return false;
        case Formula::Kind::Atom: {
            const Atom& a = f.atoms()[n.atom];
            return rel_holds(a.rel, sign_of(a.poly.evaluate(pt)));
        }
        case Formula::Kind::And:
            for (const auto& c : n.children)
                if (!eval_node(f, c, pt)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : n.children)
                if (eval_node(f, c, pt)) return true;
            return false;
    }
    return false;
}

}  // namespace detail

// Exact truth value of F at a rational point.
inline bool evaluate(const Formula& f, std::span<const Rational> point) {
    assert(static_cast<int>(point.size()) == f.nvars());
    return detail::eval_node(f, f.root(), point);
}

// ---------------------------------------------------------------------------
// Factor extraction and the merge-set choice.
// ---------------------------------------------------------------------------

struct FormulaFactors {
    PolySet all;                              // joint basis refinement
    std::vector<std::vector<Polynomial>> per_atom;  // factor lists per atom
};

// Joint squarefree-basis/irreducible refinement of all atom polynomials,
// with the per-atom factor decomposition. Errors on a zero atom polynomial.
inline FormulaFactors factors_of_formula_full(const Formula& f) {
    FormulaFactors out;
    std::vector<Polynomial> polys;
    for (const auto& a : f.atoms()) {
        if (a.poly.is_zero()) throw std::invalid_argument("degenerate atom");
        polys.push_back(a.poly);
    }
    if (!polys.empty()) out.all = squarefree_basis(polys);
    for (const auto& a : f.atoms()) {
        std::vector<Polynomial> fs;
        Polynomial rest = a.poly;
        for (const auto& b : out.all) {
            while (true) {
                auto q = try_divide_exact(rest, b);
                if (!q) break;
                rest = *q;
                if (fs.empty() || !(fs.back() == b)) fs.push_back(b);
            }
        }
        out.per_atom.push_back(std::move(fs));
    }
    return out;
}

inline PolySet factors_of_formula(const Formula& f) { return factors_of_formula_full(f).all; }

namespace detail {

// Formulas are immutable values, so the joint factor refinement can be shared
// process-wide keyed by the printed form.
inline const FormulaFactors& formula_factors_cached(const Formula& f) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<FormulaFactors>> cache;
    std::string key = to_string(f);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto ff = std::make_unique<FormulaFactors>(factors_of_formula_full(f));
        it = cache.emplace(key, std::move(ff)).first;
    }
    return *it->second;
}

}  // namespace detail

enum class Tri { False, True, Unknown };

namespace detail {

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::True && b == Tri::True) return Tri::True;
    return Tri::Unknown;
}

inline Tri tri_or(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::False && b == Tri::False) return Tri::False;
    return Tri::Unknown;
}

inline Tri tri_node(const Formula& f, const Formula::Node& n, const std::vector<Tri>& atom_vals) {
    switch (n.kind) {
        case Formula::Kind::True: return Tri::True;
        case Formula::Kind::False: return Tri::False;
        case Formula::Kind::Atom: return atom_vals[n.atom];
        case Formula::Kind::And: {
            Tri acc = Tri::True;
            for (const auto& c : n.children) acc = tri_and(acc, tri_node(f, c, atom_vals));
            return acc;
        }
        case Formula::Kind::Or: {
            Tri acc = Tri::False;
            for (const auto& c : n.children) acc = tri_or(acc, tri_node(f, c, atom_vals));
            return acc;
        }
    }
    return Tri::Unknown;
}

inline std::vector<Tri> pinned_atom_values(const Formula& f, const FormulaFactors& ff,
                                           std::span<const Rational> alpha,
                                           const std::vector<bool>& pinned) {
    std::vector<Tri> vals(f.atoms().size(), Tri::Unknown);
    for (size_t i = 0; i < f.atoms().size(); ++i) {
        if (!pinned[i]) continue;
        int s = sign_of(f.atoms()[i].poly.evaluate(alpha));
        vals[i] = rel_holds(f.atoms()[i].rel, s) ? Tri::True : Tri::False;
    }
    (void)ff;
    return vals;
}

inline std::vector<bool> atoms_pinned_by(const Formula& f, const FormulaFactors& ff, const PolySet& known) {
    std::vector<bool> pinned(f.atoms().size(), false);
    for (size_t i = 0; i < f.atoms().size(); ++i) {
        bool all = true;
        for (const auto& g : ff.per_atom[i])
            if (!set_contains(known, g)) {
                all = false;
                break;
            }
        pinned[i] = all;
    }
    return pinned;
}

}  // namespace detail

// Three-valued evaluation of F at alpha where exactly the atoms whose factors
// all lie in `known` are pinned to their alpha-signs.
inline Tri eval_three_valued(const Formula& f, std::span<const Rational> alpha, const PolySet& known) {
    const FormulaFactors& ff = detail::formula_factors_cached(f);
    auto pinned = detail::atoms_pinned_by(f, ff, known);
    auto vals = detail::pinned_atom_values(f, ff, alpha, pinned);
    return detail::tri_node(f, f.root(), vals);
}

enum class QPolicy { Full, Greedy };

// Chooses the merge set Q: polynomials whose sign-invariance, together with
// that of P, forces F to one truth value on any connected region containing
// alpha. Returns the empty set exactly when P alone suffices.
inline PolySet choose_q(const Formula& f, std::span<const Rational> alpha, const PolySet& p_known,
                        QPolicy policy) {
    const FormulaFactors& ff = detail::formula_factors_cached(f);
    if (policy == QPolicy::Full) {
        // Everything not yet known, unless F is already determined by P.
        auto pinned = detail::atoms_pinned_by(f, ff, p_known);
        auto vals = detail::pinned_atom_values(f, ff, alpha, pinned);
        if (detail::tri_node(f, f.root(), vals) != Tri::Unknown) return {};
        PolySet q;
        for (const auto& g : ff.all)
            if (!set_contains(p_known, g)) set_insert(q, g);
        return q;
    }
    auto pinned = detail::atoms_pinned_by(f, ff, p_known);
    auto vals = detail::pinned_atom_values(f, ff, alpha, pinned);
    if (detail::tri_node(f, f.root(), vals) != Tri::Unknown) return {};
    // Candidate atoms in preference order: lowest level, lowest total degree,
    // then input order.
    std::vector<int> cand;
    for (size_t i = 0; i < f.atoms().size(); ++i)
        if (!pinned[i]) cand.push_back(static_cast<int>(i));
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
        const Polynomial& pa = f.atoms()[a].poly;
        const Polynomial& pb = f.atoms()[b].poly;
        if (pa.level() != pb.level()) return pa.level() < pb.level();
        return pa.total_degree() < pb.total_degree();
    });
    std::vector<int> chosen;
    auto determined_with = [&](const std::vector<int>& extra) {
        std::vector<bool> pin2 = pinned;
        for (int i : extra) pin2[i] = true;
        auto vals2 = detail::pinned_atom_values(f, ff, alpha, pin2);
        return detail::tri_node(f, f.root(), vals2) != Tri::Unknown;
    };
    for (int i : cand) {
        chosen.push_back(i);
        if (determined_with(chosen)) break;
    }
    assert(determined_with(chosen));
    // Backward prune to a minimal sufficient set.
    for (size_t k = chosen.size(); k-- > 0;) {
        std::vector<int> trial = chosen;
        trial.erase(trial.begin() + k);
        if (determined_with(trial)) chosen = std::move(trial);
    }
    PolySet q;
    for (int i : chosen)
        for (const auto& g : ff.per_atom[i])
            if (!set_contains(p_known, g)) set_insert(q, g);
    return q;
}

}  // namespace nucad
