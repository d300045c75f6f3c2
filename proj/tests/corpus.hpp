#pragma once

// The shared verification corpus: fixed formulas plus seeded random
// conjunctions of at most 3 atoms, degree <= 3, at most 3 variables.

#include <random>
#include <string>
#include <vector>

namespace corpus {

inline std::string example_2d() {
    return "vars x, y; 16y - 16x^2 - 8x - 1 > 0 /\\ x^2 + y^2 - 1 > 0";
}

inline std::string random_conjunction(uint64_t seed) {
    std::mt19937_64 rng(seed);
    int n = 1 + static_cast<int>(rng() % 3);
    const char* names[] = {"x", "y", "z"};
    std::string text = "vars ";
    for (int i = 0; i < n; ++i) {
        if (i) text += ", ";
        text += names[i];
    }
    text += "; ";
    int atoms = 1 + static_cast<int>(rng() % 3);
    const char* rels[] = {"<", ">", "<", ">", "<=", ">=", "=", "/="};
    for (int a = 0; a < atoms; ++a) {
        if (a) text += " /\\ ";
        int terms = 1 + static_cast<int>(rng() % 3);
        std::string poly;
        bool any_var = false;
        for (int t = 0; t < terms; ++t) {
            long c = static_cast<long>(rng() % 9) - 4;
            if (c == 0) c = 1;
            int deg = static_cast<int>(rng() % 4);
            std::string term = (c < 0 ? "-" : (t ? "+" : "")) + std::to_string(c < 0 ? -c : c);
            for (int d = 0; d < deg; ++d) {
                term += std::string("*") + names[rng() % n];
                any_var = true;
            }
            poly += term;
        }
        if (!any_var) poly += std::string("+") + names[rng() % n];
        text += poly + " " + rels[rng() % 8] + " 0";
    }
    return text;
}

// Formulas exercised by the acceptance suite.
inline std::vector<std::string> formulas() {
    std::vector<std::string> out = {
        example_2d(),
        "vars x; x > 0",
        "vars x, y; x^2 + y^2 - 1 < 0",
        "vars x, y, z; x^2+y^2+z^2-1 > 0 /\\ z - x^2 - y^2 > 0",
    };
    for (uint64_t seed = 1; seed <= 10; ++seed) out.push_back(random_conjunction(seed));
    return out;
}

}  // namespace corpus
