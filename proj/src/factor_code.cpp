#include "classdeg/factor_code.hpp"

#include "classdeg/errors.hpp"
#include "classdeg/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace classdeg {

Word apply_code(const FactorTriple &t, const Word &x_block) {
    if (!t.x().is_valid(x_block))
        throw InputError("block is not valid in X");
    Word out;
    out.reserve(x_block.size());
    for (Symbol s : x_block)
        out.push_back(t.label(s));
    return out;
}

Block apply_code(const FactorTriple &t, const Block &x_block) {
    return Block{apply_code(t, x_block.symbols), x_block.start_index};
}

SymbolSet forward_step(const FactorTriple &t, const SymbolSet &from, Symbol c) {
    return t.x().successor_set(from) & t.preimage(c);
}

SymbolSet backward_step(const FactorTriple &t, const SymbolSet &from, Symbol c) {
    return t.x().predecessor_set(from) & t.preimage(c);
}

namespace {

void check_y_word(const FactorTriple &t, const Word &w) {
    if (w.empty())
        throw InputError("empty Y-block");
    for (Symbol c : w)
        if (c < 0 || c >= t.y_size())
            throw InputError("symbol outside the Y alphabet");
}

}  // namespace

std::vector<SymbolSet> forward_sets(const FactorTriple &t, const Word &w, std::optional<Symbol> start) {
    check_y_word(t, w);
    std::vector<SymbolSet> out;
    SymbolSet current = t.preimage(w.front());
    if (start) {
        SymbolSet only(current.size());
        if (t.label(*start) == w.front())
            only.set(static_cast<std::size_t>(*start));
        current = only;
    }
    out.push_back(current);
    for (std::size_t k = 1; k < w.size(); ++k)
        out.push_back(forward_step(t, out.back(), w[k]));
    return out;
}

std::vector<SymbolSet> backward_sets(const FactorTriple &t, const Word &w, std::optional<Symbol> end) {
    check_y_word(t, w);
    std::vector<SymbolSet> out(w.size());
    SymbolSet current = t.preimage(w.back());
    if (end) {
        SymbolSet only(current.size());
        if (t.label(*end) == w.back())
            only.set(static_cast<std::size_t>(*end));
        current = only;
    }
    out.back() = current;
    for (std::size_t k = w.size() - 1; k-- > 0;)
        out[k] = backward_step(t, out[k + 1], w[k]);
    return out;
}

bool in_image_language(const FactorTriple &t, const Word &w) {
    return forward_sets(t, w).back().any();
}

PreimageProfile preimage_profile(const FactorTriple &t, const Word &w, int index) {
    if (index < 0 || index >= static_cast<int>(w.size()))
        throw InputError("index out of range");
    auto f = forward_sets(t, w);
    auto b = backward_sets(t, w);
    return PreimageProfile{w, index, f[index] & b[index]};
}

namespace {

// Reachable subset states of the forward (or backward) automaton with
// breadth-first parents, so every state comes with a shortest Y-word.
struct SubsetExploration {
    std::vector<SymbolSet> states;
    std::vector<int> parent;
    std::vector<Symbol> via;
};

SubsetExploration explore_subsets(const FactorTriple &t, bool forward) {
    SubsetExploration out;
    std::unordered_map<SymbolSet, int> index;
    auto add = [&](const SymbolSet &s, int parent, Symbol via) {
        if (s.none() || index.count(s))
            return;
        index.emplace(s, static_cast<int>(out.states.size()));
        out.states.push_back(s);
        out.parent.push_back(parent);
        out.via.push_back(via);
    };
    for (Symbol c = 0; c < t.y_size(); ++c)
        add(t.preimage(c), -1, c);
    for (std::size_t head = 0; head < out.states.size(); ++head) {
        for (Symbol c = 0; c < t.y_size(); ++c) {
            SymbolSet next = forward ? forward_step(t, out.states[head], c)
                                     : backward_step(t, out.states[head], c);
            add(next, static_cast<int>(head), c);
        }
    }
    return out;
}

// Word that drives the automaton from a start state to `state`, in reading order.
Word path_word(const SubsetExploration &e, int state) {
    Word w;
    for (int s = state; s != -1; s = e.parent[s])
        w.push_back(e.via[s]);
    std::reverse(w.begin(), w.end());
    return w;
}

Symbol label_of(const FactorTriple &t, const SymbolSet &s) {
    return t.label(static_cast<Symbol>(s.find_first()));
}

}  // namespace

MagicWitness d_star(const FactorTriple &t) {
    auto fwd = explore_subsets(t, true);
    auto bwd = explore_subsets(t, false);
    MagicWitness best;
    best.value = t.x_size() + 1;
    std::size_t best_length = 0;
    for (std::size_t i = 0; i < fwd.states.size(); ++i) {
        Symbol c = label_of(t, fwd.states[i]);
        for (std::size_t j = 0; j < bwd.states.size(); ++j) {
            if (label_of(t, bwd.states[j]) != c)
                continue;
            auto meet = fwd.states[i] & bwd.states[j];
            int d = static_cast<int>(meet.count());
            if (d == 0 || d > best.value)
                continue;
            Word left = path_word(fwd, static_cast<int>(i));
            Word right = path_word(bwd, static_cast<int>(j));
            std::reverse(right.begin(), right.end());
            std::size_t length = left.size() + right.size() - 1;
            if (d == best.value && length >= best_length)
                continue;
            best.value = d;
            best.index = static_cast<int>(left.size()) - 1;
            best.w = left;
            best.w.insert(best.w.end(), right.begin() + 1, right.end());
            best_length = length;
        }
    }
    return best;
}

std::optional<std::pair<Word, Word>> find_diamond(const FactorTriple &t) {
    const int n = t.x_size();
    auto id = [n](Symbol a, Symbol b) { return a * n + b; };
    std::vector<int> parent(static_cast<std::size_t>(n * n), -2);
    std::deque<int> queue;
    for (Symbol a = 0; a < n; ++a) {
        parent[id(a, a)] = -1;
        queue.push_back(id(a, a));
    }
    // Forward search from the diagonal, stepping only into off-diagonal pairs.
    std::vector<int> order;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        Symbol a = v / n, b = v % n;
        for (Symbol a2 : t.x().successors(a)) {
            for (Symbol b2 : t.x().successors(b)) {
                if (a2 == b2 || t.label(a2) != t.label(b2))
                    continue;
                int w = id(a2, b2);
                if (parent[w] != -2)
                    continue;
                parent[w] = v;
                queue.push_back(w);
                order.push_back(w);
            }
        }
    }
    for (int v : order) {
        // Continue from v until the pair closes up on the diagonal.
        std::vector<int> next_parent(static_cast<std::size_t>(n * n), -2);
        std::deque<int> q{v};
        next_parent[v] = -1;
        int closing = -1;
        while (!q.empty() && closing == -1) {
            int u = q.front();
            q.pop_front();
            Symbol a = u / n, b = u % n;
            for (Symbol a2 : t.x().successors(a)) {
                for (Symbol b2 : t.x().successors(b)) {
                    if (t.label(a2) != t.label(b2))
                        continue;
                    int w = id(a2, b2);
                    if (a2 == b2) {
                        closing = w;
                        next_parent[w] = u;
                        break;
                    }
                    if (next_parent[w] != -2)
                        continue;
                    next_parent[w] = u;
                    q.push_back(w);
                }
                if (closing != -1)
                    break;
            }
        }
        if (closing == -1)
            continue;
        std::vector<int> pairs;
        for (int u = closing; u != v; u = next_parent[u])
            pairs.push_back(u);
        for (int u = v; u != -1; u = parent[u])
            pairs.push_back(u);
        std::reverse(pairs.begin(), pairs.end());
        Word first, second;
        for (int u : pairs) {
            first.push_back(u / n);
            second.push_back(u % n);
        }
        return std::pair{first, second};
    }
    return std::nullopt;
}

bool is_finite_to_one(const FactorTriple &t) {
    return !find_diamond(t).has_value();
}

ImageIrreducibility image_irreducibility(const FactorTriple &t) {
    const int n = t.x_size();
    Adjacency adj(static_cast<std::size_t>(n));
    for (Symbol s = 0; s < n; ++s)
        adj[s] = t.x().successors(s);
    auto comps = strongly_connected_components(adj);

    for (int comp = comps.count() - 1; comp >= 0; --comp) {
        if (!comps.nontrivial[comp])
            continue;
        SymbolSet inside(static_cast<std::size_t>(n));
        for (int v : comps.members[comp])
            inside.set(static_cast<std::size_t>(v));
        // Look for a word read in X but not inside the component.
        std::map<std::pair<SymbolSet, SymbolSet>, bool> seen;
        std::vector<std::pair<SymbolSet, SymbolSet>> stack;
        bool escapes = false;
        auto push = [&](SymbolSet all, SymbolSet sub) {
            if (all.none())
                return;
            if (sub.none())
                escapes = true;
            auto key = std::pair{std::move(all), std::move(sub)};
            if (seen.emplace(key, true).second)
                stack.push_back(std::move(key));
        };
        for (Symbol c = 0; c < t.y_size() && !escapes; ++c)
            push(t.preimage(c), t.preimage(c) & inside);
        while (!stack.empty() && !escapes) {
            auto [all, sub] = stack.back();
            stack.pop_back();
            for (Symbol c = 0; c < t.y_size() && !escapes; ++c)
                push(forward_step(t, all, c), forward_step(t, sub, c) & inside);
        }
        if (!escapes)
            return ImageIrreducibility{true, comps.members[comp]};
    }
    return ImageIrreducibility{};
}

bool is_image_irreducible(const FactorTriple &t) {
    return image_irreducibility(t).irreducible;
}

DegreeResult degree(const FactorTriple &t, bool strict) {
    if (!is_finite_to_one(t))
        throw PreconditionError("degree undefined (infinite-to-one)");
    if (!is_image_irreducible(t))
        throw PreconditionError("degree undefined (reducible image)");
    if (strict && !is_irreducible(t.x()))
        throw PreconditionError("degree undefined in strict mode (reducible X)");
    auto witness = d_star(t);
    return DegreeResult{witness.value, witness};
}

SoficImage sofic_image(const FactorTriple &t) {
    auto fwd = explore_subsets(t, true);
    std::unordered_map<SymbolSet, int> index;
    for (std::size_t i = 0; i < fwd.states.size(); ++i)
        index.emplace(fwd.states[i], static_cast<int>(i));

    std::vector<std::string> names;
    std::vector<Symbol> labels;
    std::vector<std::pair<Symbol, Symbol>> edges;
    for (std::size_t i = 0; i < fwd.states.size(); ++i) {
        std::string name = "{";
        bool first = true;
        for (Symbol s : members(fwd.states[i])) {
            name += (first ? "" : ",") + t.x().name(s);
            first = false;
        }
        names.push_back(name + "}");
        labels.push_back(label_of(t, fwd.states[i]));
        for (Symbol c = 0; c < t.y_size(); ++c) {
            auto next = forward_step(t, fwd.states[i], c);
            if (next.any())
                edges.emplace_back(static_cast<Symbol>(i), index.at(next));
        }
    }
    std::map<std::string, int> by_name;
    for (std::size_t i = 0; i < names.size(); ++i)
        by_name.emplace(names[i], static_cast<int>(i));
    FactorTriple presentation(Sft(names, std::move(edges)), std::move(labels), t.y_alphabet());
    std::vector<SymbolSet> states;
    for (const auto &name : presentation.x().alphabet())
        states.push_back(fwd.states[static_cast<std::size_t>(by_name.at(name))]);
    return SoficImage{std::move(presentation), std::move(states), is_image_irreducible(t)};
}

}  // namespace classdeg
