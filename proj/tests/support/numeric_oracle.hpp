#pragma once

// Brute-force numeric rewriter used as an independent oracle: rules carry
// exact Gaussian-rational coefficients obtained by specializing a
// RelationSet, and reduction applies them at randomly chosen redexes until
// no rule matches.  Deliberately separate from derham::normal_form.

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "derham/freealg.hpp"

namespace derham::testing {

using NumTerm = std::pair<Word, GaussianRational>;
using NumElement = std::map<Word, GaussianRational, WordOrder>;

struct NumericRewriter {
    std::map<std::pair<int, int>, std::vector<NumTerm>> rules;

    static NumericRewriter from(const RelationSet& rs,
                                const std::map<std::string, GaussianRational>& at) {
        NumericRewriter out;
        for (const auto& [lhs, rhs] : rs.rules()) {
            std::vector<NumTerm> image;
            for (const auto& [w, c] : rhs.terms()) image.emplace_back(w, c.specialize(at));
            out.rules.emplace(std::make_pair(lhs[0], lhs[1]), std::move(image));
        }
        return out;
    }

    NumElement reduce(const NumElement& in, std::mt19937& rng) const {
        std::vector<NumTerm> work(in.begin(), in.end());
        NumElement done;
        auto settle = [&](const Word& w, const GaussianRational& c) {
            auto it = done.find(w);
            if (it == done.end()) {
                if (!c.is_zero()) done.emplace(w, c);
            } else {
                it->second += c;
                if (it->second.is_zero()) done.erase(it);
            }
        };
        while (!work.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, work.size() - 1);
            std::size_t at_idx = pick(rng);
            std::swap(work[at_idx], work.back());
            auto [w, c] = work.back();
            work.pop_back();
            if (c.is_zero()) continue;
            std::vector<std::size_t> redexes;
            for (std::size_t i = 0; i + 1 < w.size(); ++i)
                if (rules.count({w[i], w[i + 1]})) redexes.push_back(i);
            if (redexes.empty()) {
                settle(w, c);
                continue;
            }
            std::uniform_int_distribution<std::size_t> rpick(0, redexes.size() - 1);
            std::size_t pos = redexes[rpick(rng)];
            const auto& image = rules.at({w[pos], w[pos + 1]});
            for (const auto& [rw, rc] : image) {
                Word nw(w.begin(), w.begin() + static_cast<long>(pos));
                nw.insert(nw.end(), rw.begin(), rw.end());
                nw.insert(nw.end(), w.begin() + static_cast<long>(pos) + 2, w.end());
                work.emplace_back(std::move(nw), c * rc);
            }
        }
        return done;
    }
};

inline NumElement specialize_element(const Element& e,
                                     const std::map<std::string, GaussianRational>& at) {
    NumElement out;
    for (const auto& [w, c] : e.terms()) {
        GaussianRational v = c.specialize(at);
        if (!v.is_zero()) out.emplace(w, v);
    }
    return out;
}

} // namespace derham::testing
