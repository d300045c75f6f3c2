#pragma once

#include <mutex>
#include <unordered_map>

#include "nucad/factor.hpp"
#include "nucad/polynomial.hpp"
#include "nucad/subresultant.hpp"

namespace nucad {

namespace detail {

// Process-wide cache for projection-grade computations. Behaves as a pure
// cache: values depend only on the keys, inserts are idempotent, lookups are
// safe from concurrent workers.
class ProjectionCache {
  public:
    static ProjectionCache& instance() {
        static ProjectionCache c;
        return c;
    }

    Polynomial resultant_of(const Polynomial& p, const Polynomial& q, int var) {
        std::string key = "r|" + std::to_string(p.nvars()) + "|" + std::to_string(var) + "|" + p.to_string() + "|" + q.to_string();
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = polys_.find(key);
            if (it != polys_.end()) return it->second;
        }
        Polynomial r = resultant(p, q, var);
        std::lock_guard<std::mutex> lock(mu_);
        polys_.emplace(key, r);
        return r;
    }

    Polynomial discriminant_of(const Polynomial& p, int var) {
        std::string key = "d|" + std::to_string(p.nvars()) + "|" + std::to_string(var) + "|" + p.to_string();
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = polys_.find(key);
            if (it != polys_.end()) return it->second;
        }
        Polynomial r = discriminant(p, var);
        std::lock_guard<std::mutex> lock(mu_);
        polys_.emplace(key, r);
        return r;
    }

    PolySet factors_of(const Polynomial& p) {
        std::string key = "f|" + std::to_string(p.nvars()) + "|" + p.to_string();
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = sets_.find(key);
            if (it != sets_.end()) return it->second;
        }
        PolySet r = basis_factors(p);
        std::lock_guard<std::mutex> lock(mu_);
        sets_.emplace(key, r);
        return r;
    }

  private:
    std::mutex mu_;
    std::unordered_map<std::string, Polynomial> polys_;
    std::unordered_map<std::string, PolySet> sets_;
};

}  // namespace detail

// Open McCallum projection of p at its level k against same-level neighbors:
// the basis factors of ldcf(p, x_k), disc(p, x_k), and res(p, b, x_k) for each
// neighbor b. All outputs have level < k; constants are discarded.
inline PolySet proj_open_mc(const Polynomial& p, const PolySet& neighbors) {
    int k = p.level();
    assert(k >= 1);
    auto& cache = detail::ProjectionCache::instance();
    PolySet out;
    Polynomial lc = p.leading_coeff_in(k);
    if (!lc.is_constant())
        for (const auto& f : cache.factors_of(lc)) set_insert(out, f);
    if (p.degree(k) >= 2) {
        Polynomial d = cache.discriminant_of(p, k);
        if (!d.is_constant() && !d.is_zero())
            for (const auto& f : cache.factors_of(d)) set_insert(out, f);
    }
    for (const auto& b : neighbors) {
        assert(b.level() == k);
        if (b == p) continue;
        Polynomial r = cache.resultant_of(p, b, k);
        if (!r.is_constant() && !r.is_zero())
            for (const auto& f : cache.factors_of(r)) set_insert(out, f);
    }
    return out;
}

}  // namespace nucad
