#include "classdeg/class_degree.hpp"

#include "classdeg/errors.hpp"
#include "classdeg/factor_code.hpp"
#include "classdeg/fiber.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_map>

namespace classdeg {

BlockSupport BlockSupport::everything(int y_size) {
    auto n = static_cast<std::size_t>(y_size);
    return BlockSupport{std::vector<bool>(n, true), std::vector<std::vector<bool>>(n, std::vector<bool>(n, true))};
}

bool BlockSupport::admits(const Word &w) const {
    for (Symbol c : w)
        if (!start[c])
            return false;
    for (std::size_t k = 1; k < w.size(); ++k)
        if (!step[w[k - 1]][w[k]])
            return false;
    return true;
}

namespace {

void check_interior(const Word &w, int n) {
    if (w.size() < 3)
        throw InputError("transition blocks need length at least 3");
    if (n <= 0 || n >= static_cast<int>(w.size()) - 1)
        throw InputError("index not interior");
}

// R-sets depend only on the endpoints (U_0, U_p) of a preimage U.
std::vector<SymbolSet> endpoint_routing_sets(const FactorTriple &t, const Word &w, int n) {
    std::vector<SymbolSet> family;
    const Word left(w.begin(), w.begin() + n + 1);
    const Word right(w.begin() + n, w.end());
    std::vector<std::vector<SymbolSet>> back_from;
    for (Symbol s : members(t.preimage(w.front()))) {
        auto f = forward_sets(t, w, s);
        if (f.back().none())
            continue;
        SymbolSet at_n = forward_sets(t, left, s).back();
        for (Symbol e : members(f.back())) {
            SymbolSet r = at_n & backward_sets(t, right, e).front();
            if (std::find(family.begin(), family.end(), r) == family.end())
                family.push_back(r);
        }
    }
    std::sort(family.begin(), family.end(), lex_less);
    return family;
}

bool hits_all(const SymbolSet &candidate, const std::vector<SymbolSet> &family) {
    for (const auto &f : family)
        if (!candidate.intersects(f))
            return false;
    return true;
}

// Smallest hitting set of size < limit, if any.
std::optional<SymbolSet> bounded_hitting_set(const SymbolSet &universe, const std::vector<SymbolSet> &family,
                                             std::size_t limit) {
    SymbolSet useful(universe.size());
    for (const auto &f : family) {
        if (!f.intersects(universe))
            return std::nullopt;
        useful |= f;
    }
    useful &= universe;
    if (family.empty())
        return std::nullopt;
    auto pool = members(useful);
    const std::size_t m = pool.size();
    for (std::size_t k = 1; k <= m && k < limit; ++k) {
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i)
            pick[i] = i;
        while (true) {
            SymbolSet candidate(universe.size());
            for (auto i : pick)
                candidate.set(static_cast<std::size_t>(pool[i]));
            if (hits_all(candidate, family))
                return candidate;
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == m - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j)
                pick[j] = pick[j - 1] + 1;
        }
    }
    return std::nullopt;
}

}  // namespace

SymbolSet routable_symbols(const FactorTriple &t, const Word &w, int n, const Word &u) {
    check_interior(w, n);
    if (u.size() != w.size() || !t.x().is_valid(u) || apply_code(t, u) != w)
        throw InputError("u is not a preimage of w");
    const Word left(w.begin(), w.begin() + n + 1);
    const Word right(w.begin() + n, w.end());
    return forward_sets(t, left, u.front()).back() & backward_sets(t, right, u.back()).front();
}

std::vector<SymbolSet> routing_family(const FactorTriple &t, const Word &w, int n) {
    check_interior(w, n);
    return endpoint_routing_sets(t, w, n);
}

std::optional<SymbolSet> min_hitting_set(const SymbolSet &universe, const std::vector<SymbolSet> &family) {
    return bounded_hitting_set(universe, family, std::numeric_limits<std::size_t>::max());
}

bool TransitionBlock::is_transition_block(const FactorTriple &t, const Word &w, int n, const SymbolSet &m) {
    if (w.size() < 3 || n <= 0 || n >= static_cast<int>(w.size()) - 1)
        return false;
    if (m.size() != static_cast<std::size_t>(t.x_size()) || m.none() || !m.is_subset_of(t.preimage(w[n])))
        return false;
    auto family = endpoint_routing_sets(t, w, n);
    return !family.empty() && hits_all(m, family);
}

TransitionBlock TransitionBlock::make(const FactorTriple &t, Word w, int n, SymbolSet m) {
    if (!is_transition_block(t, w, n, m))
        throw InputError("not a transition block");
    return TransitionBlock(std::move(w), n, std::move(m));
}

DepthAt minimal_depth_at(const FactorTriple &t, const Word &w) {
    if (w.size() < 3)
        throw InputError("transition blocks need length at least 3");
    if (!in_image_language(t, w))
        throw InputError("block has no preimage");
    std::optional<DepthAt> best;
    for (int n = 1; n + 1 < static_cast<int>(w.size()); ++n) {
        std::size_t limit = best ? best->m.count() : std::numeric_limits<std::size_t>::max();
        auto m = bounded_hitting_set(t.preimage(w[n]), endpoint_routing_sets(t, w, n), limit);
        if (m)
            best = DepthAt{n, *m};
    }
    return *best;
}

namespace {

// Path relations of Y-words as n×n bit matrices packed row-major.
struct RelationSemigroup {
    int n = 0;
    std::vector<SymbolSet> relations;
    std::vector<int> parent;
    std::vector<Symbol> via;
    std::vector<Symbol> first, last;

    Word word(int r) const {
        Word w;
        int k = r;
        for (; k >= 0; k = parent[k])
            w.push_back(via[k]);
        std::reverse(w.begin(), w.end());
        return w;
    }
};

SymbolSet row_of(const SymbolSet &rel, int n, int s) {
    SymbolSet out(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e)
        if (rel[static_cast<std::size_t>(s * n + e)])
            out.set(static_cast<std::size_t>(e));
    return out;
}

SymbolSet column_of(const SymbolSet &rel, int n, int e) {
    SymbolSet out(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
        if (rel[static_cast<std::size_t>(s * n + e)])
            out.set(static_cast<std::size_t>(s));
    return out;
}

}  // namespace

ExactDepth exact_minimal_depth(const FactorTriple &t, const BlockSupport &support, std::size_t relation_cap) {
    const int n = t.x_size();
    const auto nn = static_cast<std::size_t>(n * n);
    RelationSemigroup sg;
    sg.n = n;

    // Single-letter words only seed the search; the semigroup starts at length 2.
    std::vector<SymbolSet> seeds;
    std::vector<Symbol> seed_symbol;
    for (Symbol c = 0; c < t.y_size(); ++c) {
        if (!support.start[c])
            continue;
        SymbolSet rel(nn);
        for (Symbol s : members(t.preimage(c)))
            rel.set(static_cast<std::size_t>(s * n + s));
        seeds.push_back(rel);
        seed_symbol.push_back(c);
    }

    std::unordered_map<SymbolSet, int> index;
    ExactDepth out;
    // Right-multiplies rel by the adjacency restricted to each admissible next symbol.
    auto extend = [&](const SymbolSet &rel, Symbol from_last, Symbol first, int parent_id) {
        for (Symbol c = 0; c < t.y_size(); ++c) {
            if (!support.start[c] || !support.step[from_last][c])
                continue;
            SymbolSet next(nn);
            for (int s = 0; s < n; ++s) {
                SymbolSet row = row_of(rel, n, s);
                if (row.none())
                    continue;
                SymbolSet to = forward_step(t, row, c);
                for (auto e = to.find_first(); e != SymbolSet::npos; e = to.find_next(e))
                    next.set(static_cast<std::size_t>(s * n) + e);
            }
            if (next.none() || index.count(next))
                continue;
            if (sg.relations.size() >= relation_cap) {
                out.capped = true;
                return false;
            }
            index.emplace(next, static_cast<int>(sg.relations.size()));
            sg.relations.push_back(next);
            sg.first.push_back(first);
            sg.last.push_back(c);
            sg.parent.push_back(parent_id);
            sg.via.push_back(c);
        }
        return true;
    };

    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (!extend(seeds[i], seed_symbol[i], seed_symbol[i], -1))
            break;
    for (std::size_t head = 0; head < sg.relations.size() && !out.capped; ++head) {
        SymbolSet rel = sg.relations[head];
        if (!extend(rel, sg.last[head], sg.first[head], static_cast<int>(head)))
            break;
    }
    out.relations = sg.relations.size();
    if (out.capped)
        return out;

    // Stored chains hold every letter but the first.
    auto word_of = [&](int r) {
        Word w = sg.word(r);
        w.insert(w.begin(), sg.first[static_cast<std::size_t>(r)]);
        return w;
    };

    // Distinct nonempty rows of each P and columns of each Q.
    const auto count = sg.relations.size();
    std::vector<std::vector<SymbolSet>> rows(count), cols(count);
    for (std::size_t r = 0; r < count; ++r) {
        for (int s = 0; s < n; ++s) {
            auto row = row_of(sg.relations[r], n, s);
            if (row.any() && std::find(rows[r].begin(), rows[r].end(), row) == rows[r].end())
                rows[r].push_back(row);
            auto col = column_of(sg.relations[r], n, s);
            if (col.any() && std::find(cols[r].begin(), cols[r].end(), col) == cols[r].end())
                cols[r].push_back(col);
        }
    }

    std::size_t best = static_cast<std::size_t>(n) + 1;
    int best_p = -1, best_q = -1;
    SymbolSet best_m;
    for (std::size_t p = 0; p < count && best > 1; ++p) {
        for (std::size_t q = 0; q < count && best > 1; ++q) {
            if (sg.last[p] != sg.first[q])
                continue;
            std::vector<SymbolSet> family;
            for (const auto &row : rows[p]) {
                for (const auto &col : cols[q]) {
                    SymbolSet meet = row & col;
                    if (meet.any() && std::find(family.begin(), family.end(), meet) == family.end())
                        family.push_back(meet);
                }
            }
            if (family.empty())
                continue;
            auto m = bounded_hitting_set(t.preimage(sg.last[p]), family, best);
            if (m) {
                best = m->count();
                best_p = static_cast<int>(p);
                best_q = static_cast<int>(q);
                best_m = *m;
            }
        }
    }
    if (best_p < 0)
        return out;
    Word left = word_of(best_p);
    Word right = word_of(best_q);
    Word w = left;
    w.insert(w.end(), right.begin() + 1, right.end());
    int n_at = static_cast<int>(left.size()) - 1;
    // The block is rebuilt from its word, so re-run the exact search at this n.
    auto m = min_hitting_set(t.preimage(w[n_at]), routing_family(t, w, n_at));
    out.value = static_cast<int>(m->count());
    out.witness = TransitionBlock::make(t, w, n_at, *m);
    return out;
}

namespace {

void words_of_length(const FactorTriple &t, const BlockSupport &support, int length,
                     const std::function<bool(const Word &)> &visit) {
    Word w;
    std::vector<SymbolSet> fwd;
    bool stop = false;
    auto rec = [&](auto &self) -> void {
        if (stop)
            return;
        if (static_cast<int>(w.size()) == length) {
            stop = !visit(w);
            return;
        }
        for (Symbol c = 0; c < t.y_size() && !stop; ++c) {
            if (!support.start[c] || (!w.empty() && !support.step[w.back()][c]))
                continue;
            SymbolSet next = w.empty() ? t.preimage(c) : forward_step(t, fwd.back(), c);
            if (next.none())
                continue;
            w.push_back(c);
            fwd.push_back(next);
            self(self);
            w.pop_back();
            fwd.pop_back();
        }
    };
    rec(rec);
}

}  // namespace

std::optional<Word> close_into_periodic_point(const FactorTriple &t, const Word &w, const BlockSupport &support) {
    if (!support.admits(w))
        return std::nullopt;
    const int n = t.x_size();
    auto edge_ok = [&](Symbol a, Symbol b) {
        Symbol la = t.label(a), lb = t.label(b);
        return support.start[lb] && support.step[la][lb];
    };
    std::optional<Word> best;
    for (Symbol s0 : members(t.preimage(w.front()))) {
        auto ends = forward_sets(t, w, s0).back();
        if (ends.none())
            continue;
        // dist[v]: fewest edges from v to s0.
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        std::deque<Symbol> queue;
        for (Symbol u : t.x().predecessors(s0)) {
            if (edge_ok(u, s0) && dist[u] == -1) {
                dist[u] = 1;
                queue.push_back(u);
            }
        }
        while (!queue.empty()) {
            Symbol v = queue.front();
            queue.pop_front();
            for (Symbol u : t.x().predecessors(v)) {
                if (dist[u] == -1 && edge_ok(u, v)) {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for (Symbol e : members(ends)) {
            if (dist[e] == -1)
                continue;
            Word tail;
            std::vector<Symbol> frontier{e};
            for (int step = 1; step < dist[e]; ++step) {
                Symbol best_label = t.y_size();
                std::vector<Symbol> next;
                for (Symbol u : frontier) {
                    for (Symbol v : t.x().successors(u)) {
                        if (dist[v] != dist[e] - step || !edge_ok(u, v))
                            continue;
                        if (t.label(v) < best_label) {
                            best_label = t.label(v);
                            next.clear();
                        }
                        if (t.label(v) == best_label && std::find(next.begin(), next.end(), v) == next.end())
                            next.push_back(v);
                    }
                }
                tail.push_back(best_label);
                frontier = std::move(next);
            }
            Word y = w;
            y.insert(y.end(), tail.begin(), tail.end());
            if (!best || y.size() < best->size() || (y.size() == best->size() && y < *best))
                best = y;
        }
    }
    return best;
}

std::optional<DepthAt> min_depth_over_point(const FactorTriple &t, const Word &y, int horizon, Word *best_window) {
    PeriodicPoint point(y);
    std::optional<DepthAt> best;
    for (int length = 3; length <= horizon; ++length) {
        for (std::size_t j = 0; j < point.period(); ++j) {
            Word window = point.window(static_cast<std::int64_t>(j), static_cast<std::int64_t>(j) + length - 1);
            auto d = minimal_depth_at(t, window);
            if (!best || d.depth() < best->depth()) {
                best = d;
                if (best_window)
                    *best_window = window;
            }
        }
    }
    return best;
}

DepthSearchResult find_minimal_transition_block(const FactorTriple &t, int horizon) {
    return find_minimal_transition_block(t, horizon, BlockSupport::everything(t.y_size()));
}

DepthSearchResult find_minimal_transition_block(const FactorTriple &t, int horizon, const BlockSupport &support) {
    if (horizon < 3)
        throw InputError("horizon must be at least 3");
    if (!is_image_irreducible(t))
        throw PreconditionError("class degree search needs an irreducible image");

    auto exact = exact_minimal_depth(t, support);

    std::optional<Word> best_w;
    DepthAt best;
    int searched = 0;
    for (int length = 3; length <= horizon; ++length) {
        searched = length;
        bool done = false;
        words_of_length(t, support, length, [&](const Word &w) {
            auto d = minimal_depth_at(t, w);
            if (!best_w || d.depth() < best.depth()) {
                best = d;
                best_w = w;
            }
            done = best.depth() == 1 || (exact.value && best.depth() == *exact.value);
            return !done;
        });
        if (done)
            break;
    }
    if (!best_w && !exact.witness)
        throw InputError("no block of positive measure");

    std::string source = "search";
    std::optional<TransitionBlock> witness;
    if (best_w)
        witness = TransitionBlock::make(t, *best_w, best.n, best.m);
    if (exact.witness && (!witness || exact.witness->depth() < witness->depth())) {
        witness = exact.witness;
        source = "semigroup";
    }

    DepthSearchResult result{witness->depth(), *witness, searched, false, exact.value, std::nullopt, {}, source};
    if (auto y = close_into_periodic_point(t, witness->w(), support)) {
        result.periodic_point = PeriodicPoint(*y).primitive().word();
        result.periodic_class_count = static_cast<int>(transition_classes(t, PeriodicPoint(*y)).classes.size());
    }
    result.certified = result.exact && *result.exact == result.value && result.periodic_class_count &&
                       *result.periodic_class_count == result.value;
    return result;
}

}  // namespace classdeg
