#pragma once

// Brute-force reference implementations. Everything here enumerates paths
// explicitly and shares no code with the library beyond the data types.

#include "classdeg/triple.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using classdeg::FactorTriple;
using classdeg::Symbol;
using classdeg::Word;

inline std::vector<Word> preimages(const FactorTriple &t, const Word &w) {
    std::vector<Word> out;
    Word u;
    auto rec = [&](auto &self) -> void {
        if (u.size() == w.size()) {
            out.push_back(u);
            return;
        }
        for (Symbol s = 0; s < t.x_size(); ++s) {
            if (t.label(s) != w[u.size()])
                continue;
            if (!u.empty() && !t.x().allows(u.back(), s))
                continue;
            u.push_back(s);
            self(self);
            u.pop_back();
        }
    };
    rec(rec);
    return out;
}

inline std::set<Symbol> profile(const FactorTriple &t, const Word &w, int i) {
    std::set<Symbol> out;
    for (const auto &u : preimages(t, w))
        out.insert(u[i]);
    return out;
}

// Words of the given length over the Y alphabet that have a preimage.
inline std::vector<Word> image_blocks(const FactorTriple &t, int length) {
    std::set<Word> out;
    Word u;
    auto rec = [&](auto &self) -> void {
        if (static_cast<int>(u.size()) == length) {
            Word w;
            for (Symbol s : u)
                w.push_back(t.label(s));
            out.insert(w);
            return;
        }
        for (Symbol s = 0; s < t.x_size(); ++s) {
            if (!u.empty() && !t.x().allows(u.back(), s))
                continue;
            u.push_back(s);
            self(self);
            u.pop_back();
        }
    };
    rec(rec);
    return {out.begin(), out.end()};
}

inline int min_d(const FactorTriple &t, int max_length) {
    int best = t.x_size();
    for (int n = 1; n <= max_length; ++n)
        for (const auto &w : image_blocks(t, n))
            for (int i = 0; i < n; ++i)
                best = std::min(best, static_cast<int>(profile(t, w, i).size()));
    return best;
}

inline std::set<Symbol> routable(const FactorTriple &t, const Word &w, int n, const Word &u) {
    std::set<Symbol> out;
    for (const auto &v : preimages(t, w))
        if (v.front() == u.front() && v.back() == u.back())
            out.insert(v[n]);
    return out;
}

// Exhaustive minimal depth of a block over all n and all subsets M.
inline int min_depth(const FactorTriple &t, const Word &w) {
    auto pre = preimages(t, w);
    int best = t.x_size() + 1;
    for (int n = 1; n + 1 < static_cast<int>(w.size()); ++n) {
        std::vector<std::set<Symbol>> family;
        for (const auto &u : pre)
            family.push_back(routable(t, w, n, u));
        const int universe = t.x_size();
        for (std::uint32_t mask = 1; mask < (1u << universe); ++mask) {
            bool ok = true;
            for (Symbol s = 0; s < universe && ok; ++s)
                if ((mask >> s) & 1u)
                    ok = t.label(s) == w[n];
            if (!ok)
                continue;
            for (const auto &f : family) {
                bool hit = false;
                for (Symbol s : f)
                    hit = hit || ((mask >> s) & 1u);
                ok = ok && hit;
            }
            if (ok)
                best = std::min(best, __builtin_popcount(mask));
        }
    }
    return best;
}

// Periodic preimages of the periodic point y whose period divides q.
inline std::vector<Word> periodic_preimages(const FactorTriple &t, const Word &y, int q) {
    Word yy;
    for (int k = 0; k < q; ++k)
        yy.push_back(y[k % y.size()]);
    std::vector<Word> out;
    for (const auto &u : preimages(t, yy))
        if (t.x().allows(u.back(), u.front()))
            out.push_back(u);
    return out;
}

// x -> x' for periodic preimages: from every coordinate n of x there is a
// path of the fibre that starts at x_n and lands on x' at a later time.
inline bool transition(const FactorTriple &t, const Word &y, const Word &x, const Word &x2, int horizon) {
    const auto at = [](const Word &w, std::int64_t k) { return w[static_cast<std::size_t>(k % static_cast<std::int64_t>(w.size()))]; };
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(x.size()); ++n) {
        std::set<Symbol> frontier{at(x, n)};
        bool found = false;
        for (std::int64_t m = n + 1; m <= n + horizon && !found && !frontier.empty(); ++m) {
            std::set<Symbol> next;
            for (Symbol a : frontier)
                for (Symbol b : t.x().successors(a))
                    if (t.label(b) == at(y, m))
                        next.insert(b);
            frontier = std::move(next);
            found = frontier.count(at(x2, m)) > 0;
        }
        if (!found)
            return false;
    }
    return true;
}

// Classes of mutual transition among periodic preimages of period dividing q.
inline int class_count(const FactorTriple &t, const Word &y, int q, int horizon) {
    auto xs = periodic_preimages(t, y, q);
    const auto n = xs.size();
    std::vector<int> cls(n, -1);
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] != -1)
            continue;
        cls[i] = count;
        for (std::size_t j = i + 1; j < n; ++j)
            if (cls[j] == -1 && transition(t, y, xs[i], xs[j], horizon) && transition(t, y, xs[j], xs[i], horizon))
                cls[j] = count;
        ++count;
    }
    return count;
}

inline std::uint64_t count_preimages(const FactorTriple &t, const Word &w) {
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(t.x_size()), 0);
    for (Symbol s = 0; s < t.x_size(); ++s)
        ways[s] = t.label(s) == w[0] ? 1 : 0;
    for (std::size_t k = 1; k < w.size(); ++k) {
        std::vector<std::uint64_t> next(ways.size(), 0);
        for (Symbol a = 0; a < t.x_size(); ++a)
            for (Symbol b : t.x().successors(a))
                if (t.label(b) == w[k])
                    next[b] += ways[a];
        ways = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto v : ways)
        total += v;
    return total;
}

// Class count using the longest affordable window 12p, 6p, 4p, 2p or p.
inline int class_count_auto(const FactorTriple &t, const Word &y) {
    for (int m : {12, 6, 4, 2, 1}) {
        const int q = m * static_cast<int>(y.size());
        Word yy;
        for (int k = 0; k < q; ++k)
            yy.push_back(y[k % y.size()]);
        if (m > 1 && count_preimages(t, yy) > 4096)
            continue;
        return class_count(t, y, q, 4 * q * t.x_size() + 8);
    }
    return -1;
}

// y^inf lies in the image iff the phase-layered preimage graph has a cycle.
inline bool periodic_in_image(const FactorTriple &t, const Word &y) {
    const int p = static_cast<int>(y.size());
    const int n = t.x_size();
    // 0 unvisited, 1 on stack, 2 done
    std::vector<int> state(static_cast<std::size_t>(n * p), 0);
    auto dfs = [&](auto &self, int s, int k) -> bool {
        state[static_cast<std::size_t>(k * n + s)] = 1;
        const int k2 = (k + 1) % p;
        for (Symbol b = 0; b < n; ++b) {
            if (t.label(b) != y[static_cast<std::size_t>(k2)] || !t.x().allows(s, b))
                continue;
            int &st = state[static_cast<std::size_t>(k2 * n + b)];
            if (st == 1 || (st == 0 && self(self, b, k2)))
                return true;
        }
        state[static_cast<std::size_t>(k * n + s)] = 2;
        return false;
    };
    for (Symbol s = 0; s < n; ++s)
        if (t.label(s) == y[0] && state[static_cast<std::size_t>(s)] == 0 && dfs(dfs, s, 0))
            return true;
    return false;
}

// Primitive Y-words of length 1..max_period, least in their rotation class,
// whose periodic point lies in the image.
inline std::vector<Word> image_cycles(const FactorTriple &t, int max_period) {
    std::vector<Word> out;
    for (int p = 1; p <= max_period; ++p) {
        Word w(static_cast<std::size_t>(p), 0);
        for (;;) {
            bool canonical = true;
            for (int r = 1; canonical && r < p; ++r) {
                Word rot(w.begin() + r, w.end());
                rot.insert(rot.end(), w.begin(), w.begin() + r);
                // Equal rotation means w is a proper power.
                if (rot <= w)
                    canonical = false;
            }
            if (canonical && periodic_in_image(t, w))
                out.push_back(w);
            int k = p - 1;
            while (k >= 0 && w[static_cast<std::size_t>(k)] == t.y_size() - 1)
                w[static_cast<std::size_t>(k--)] = 0;
            if (k < 0)
                break;
            ++w[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

// Essential random triple with at most max_x X-symbols.
inline FactorTriple random_triple(std::mt19937 &rng, int max_x, int max_y, double density) {
    std::uniform_int_distribution<int> nx(1, max_x), ny(1, max_y);
    std::bernoulli_distribution edge(density);
    while (true) {
        int n = nx(rng), m = ny(rng);
        std::vector<std::string> xs, ys;
        for (int i = 0; i < n; ++i)
            xs.push_back(std::string(1, static_cast<char>('a' + i)));
        for (int i = 0; i < m; ++i)
            ys.push_back(std::to_string(i));
        std::vector<std::pair<Symbol, Symbol>> edges;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (edge(rng))
                    edges.emplace_back(a, b);
        std::vector<Symbol> label;
        std::uniform_int_distribution<int> pick(0, m - 1);
        for (int i = 0; i < n; ++i)
            label.push_back(pick(rng));
        try {
            return FactorTriple(classdeg::Sft(xs, edges), label, ys);
        } catch (const std::exception &) {
            continue;
        }
    }
}

}  // namespace oracle
