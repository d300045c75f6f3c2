#pragma once

#include <istream>
#include <ostream>
#include <sstream>

#include "nucad/tree.hpp"

namespace nucad {

// Tree file format (structured text, one document per tree):
//
//   nucadtree 1
//   vars x y
//   formula 16x^2-16y+8x+1<0/\y^2+x^2-1>0
//   cells 13
//   cell @ - inner sample 0 0 bounds -inf +inf -inf 16x^2-16y+8x+1@1 pset 0
//   cell 2X @ leaf 0 sample 0 0 bounds ... pset 1 16x^2-16y+8x+1
//   ...
//
// One line per cell, fields space-separated. "@" stands for the empty (root)
// label, "-" for "no parent". A bound is "-inf", "+inf", or "<poly>@<index>".
// Cells are written in canonical label order, so read-then-write reproduces a
// written file byte-for-byte.

namespace detail {

inline std::string label_token(const std::string& label) { return label.empty() ? "@" : label; }

inline std::string untoken_label(const std::string& tok) { return tok == "@" ? "" : tok; }

inline std::string bound_token(const SectionDescriptor& sd, std::span<const std::string> names) {
    if (sd.kind == SectionDescriptor::NegInf) return "-inf";
    if (sd.kind == SectionDescriptor::PosInf) return "+inf";
    return sd.poly.to_string(names) + "@" + std::to_string(sd.index);
}

inline SectionDescriptor parse_bound_token(const std::string& tok, std::span<const std::string> names) {
    if (tok == "-inf") return SectionDescriptor::neg_inf();
    if (tok == "+inf") return SectionDescriptor::pos_inf();
    auto at = tok.rfind('@');
    if (at == std::string::npos) throw std::invalid_argument("malformed bound token: " + tok);
    Polynomial p = parse_poly_text(tok.substr(0, at), names);
    int idx = std::stoi(tok.substr(at + 1));
    return SectionDescriptor::section(p, idx);
}

}  // namespace detail

inline void write_tree(std::ostream& os, const NuCADTree& tree) {
    const auto& names = tree.formula.vars();
    os << "nucadtree 1\n";
    os << "vars";
    for (const auto& v : names) os << ' ' << v;
    os << '\n';
    os << "formula " << formula_body_text(tree.formula) << '\n';
    os << "cells " << tree.cells.size() << '\n';
    for (const auto& [label, node] : tree.cells) {
        os << "cell " << detail::label_token(label) << ' '
           << (label.empty() ? "-" : detail::label_token(node.parent)) << ' ';
        if (node.leaf)
            os << "leaf " << (node.truth ? 1 : 0);
        else
            os << "inner";
        os << " sample";
        for (const auto& r : node.cell.sample) os << ' ' << to_string(r);
        os << " bounds";
        for (const auto& bp : node.cell.bounds)
            os << ' ' << detail::bound_token(bp.lower, names) << ' '
               << detail::bound_token(bp.upper, names);
        os << " pset " << node.cell.pset.size();
        for (const auto& p : node.cell.pset) os << ' ' << p.to_string(names);
        os << '\n';
    }
}

inline std::string write_tree_text(const NuCADTree& tree) {
    std::ostringstream os;
    write_tree(os, tree);
    return os.str();
}

inline NuCADTree read_tree(std::istream& is) {
    NuCADTree tree;
    std::string word;
    auto expect = [&](const char* w) {
        if (!(is >> word) || word != w)
            throw std::invalid_argument(std::string("tree file: expected '") + w + "'");
    };
    expect("nucadtree");
    int version;
    if (!(is >> version) || version != 1) throw std::invalid_argument("tree file: unsupported version");
    expect("vars");
    std::string rest;
    std::getline(is, rest);
    std::vector<std::string> names;
    {
        std::istringstream vs(rest);
        std::string v;
        while (vs >> v) names.push_back(v);
    }
    if (names.empty()) throw std::invalid_argument("tree file: no variables");
    expect("formula");
    std::getline(is, rest);
    while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
    {
        std::string decl = "vars ";
        for (size_t i = 0; i < names.size(); ++i) {
            if (i) decl += ", ";
            decl += names[i];
        }
        decl += "; " + rest;
        tree.formula = parse_formula(decl);
    }
    tree.n = static_cast<int>(names.size());
    expect("cells");
    size_t count;
    if (!(is >> count)) throw std::invalid_argument("tree file: missing cell count");
    for (size_t ci = 0; ci < count; ++ci) {
        expect("cell");
        std::string labtok, partok, kind;
        if (!(is >> labtok >> partok >> kind)) throw std::invalid_argument("tree file: truncated cell");
        CellNode node;
        std::string label = detail::untoken_label(labtok);
        node.parent = partok == "-" ? "" : detail::untoken_label(partok);
        if (kind == "leaf") {
            int tv;
            if (!(is >> tv)) throw std::invalid_argument("tree file: missing truth value");
            node.leaf = true;
            node.truth = tv != 0;
        } else if (kind == "inner") {
            node.leaf = false;
        } else {
            throw std::invalid_argument("tree file: bad cell kind '" + kind + "'");
        }
        expect("sample");
        node.cell.n = tree.n;
        node.cell.label = label;
        for (int i = 0; i < tree.n; ++i) {
            if (!(is >> word)) throw std::invalid_argument("tree file: truncated sample");
            node.cell.sample.push_back(parse_rational(word));
        }
        expect("bounds");
        node.cell.bounds.assign(tree.n, BoundPair{});
        for (int i = 0; i < tree.n; ++i) {
            std::string lo, hi;
            if (!(is >> lo >> hi)) throw std::invalid_argument("tree file: truncated bounds");
            node.cell.bounds[i].lower = detail::parse_bound_token(lo, names);
            node.cell.bounds[i].upper = detail::parse_bound_token(hi, names);
        }
        expect("pset");
        size_t k;
        if (!(is >> k)) throw std::invalid_argument("tree file: truncated pset");
        for (size_t i = 0; i < k; ++i) {
            if (!(is >> word)) throw std::invalid_argument("tree file: truncated pset entry");
            set_insert(node.cell.pset, parse_poly_text(word, names));
        }
        if (!label_well_formed(label, tree.n))
            throw std::invalid_argument("tree file: malformed label '" + labtok + "'");
        tree.cells.emplace(std::move(label), std::move(node));
    }
    if (tree.cells.size() != count) throw std::invalid_argument("tree file: duplicate labels");
    if (!tree.cells.count("")) throw std::invalid_argument("tree file: missing root cell");
    return tree;
}

inline NuCADTree read_tree_text(const std::string& text) {
    std::istringstream is(text);
    return read_tree(is);
}

}  // namespace nucad
