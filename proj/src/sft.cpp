#include "classdeg/sft.hpp"

#include "classdeg/errors.hpp"
#include "classdeg/graph.hpp"

#include <algorithm>

namespace classdeg {

Sft::Sft(std::vector<std::string> alphabet, std::vector<std::pair<Symbol, Symbol>> transitions)
    : alphabet_(std::move(alphabet)), succ_(alphabet_.size()), pred_(alphabet_.size()) {
    if (alphabet_.empty())
        throw InputError("empty alphabet");
    const int n = size();
    for (auto [a, b] : transitions) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw InputError("transition outside the alphabet");
        succ_[a].push_back(b);
        pred_[b].push_back(a);
    }
    for (auto *lists : {&succ_, &pred_}) {
        for (auto &l : *lists) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
        }
    }
}

std::optional<Symbol> Sft::find(std::string_view name) const {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        if (alphabet_[i] == name)
            return static_cast<Symbol>(i);
    return std::nullopt;
}

bool Sft::allows(Symbol from, Symbol to) const {
    const auto &s = successors(from);
    return std::binary_search(s.begin(), s.end(), to);
}

std::vector<std::pair<Symbol, Symbol>> Sft::transitions() const {
    std::vector<std::pair<Symbol, Symbol>> out;
    for (Symbol a = 0; a < size(); ++a)
        for (Symbol b : successors(a))
            out.emplace_back(a, b);
    return out;
}

std::size_t Sft::transition_count() const {
    std::size_t total = 0;
    for (const auto &s : succ_)
        total += s.size();
    return total;
}

bool Sft::is_valid(const Word &word) const {
    for (Symbol s : word)
        if (s < 0 || s >= size())
            return false;
    for (std::size_t k = 1; k < word.size(); ++k)
        if (!allows(word[k - 1], word[k]))
            return false;
    return true;
}

bool Sft::is_essential() const {
    for (Symbol s = 0; s < size(); ++s)
        if (successors(s).empty() || predecessors(s).empty())
            return false;
    return true;
}

Sft Sft::restrict_to(const std::vector<bool> &keep) const {
    std::vector<int> renumber(alphabet_.size(), -1);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        if (keep[i]) {
            renumber[i] = static_cast<int>(names.size());
            names.push_back(alphabet_[i]);
        }
    }
    if (names.empty())
        throw InputError("empty shift");
    std::vector<std::pair<Symbol, Symbol>> edges;
    for (auto [a, b] : transitions())
        if (keep[a] && keep[b])
            edges.emplace_back(renumber[a], renumber[b]);
    return Sft(std::move(names), std::move(edges));
}

SymbolSet Sft::successor_set(const SymbolSet &from) const {
    SymbolSet out(alphabet_.size());
    for (auto i = from.find_first(); i != SymbolSet::npos; i = from.find_next(i))
        for (Symbol b : succ_[i])
            out.set(static_cast<std::size_t>(b));
    return out;
}

SymbolSet Sft::predecessor_set(const SymbolSet &from) const {
    SymbolSet out(alphabet_.size());
    for (auto i = from.find_first(); i != SymbolSet::npos; i = from.find_next(i))
        for (Symbol a : pred_[i])
            out.set(static_cast<std::size_t>(a));
    return out;
}

PeriodicPoint::PeriodicPoint(Word word) : word_(std::move(word)) {
    if (word_.empty())
        throw InputError("periodic word must be nonempty");
}

Symbol PeriodicPoint::at(std::int64_t k) const {
    auto p = static_cast<std::int64_t>(word_.size());
    return word_[static_cast<std::size_t>(((k % p) + p) % p)];
}

Word PeriodicPoint::window(std::int64_t first, std::int64_t last) const {
    Word out;
    for (auto k = first; k <= last; ++k)
        out.push_back(at(k));
    return out;
}

PeriodicPoint PeriodicPoint::primitive() const {
    const std::size_t p = word_.size();
    for (std::size_t d = 1; d < p; ++d) {
        if (p % d != 0)
            continue;
        bool repeats = true;
        for (std::size_t k = d; k < p && repeats; ++k)
            repeats = word_[k] == word_[k - d];
        if (repeats)
            return PeriodicPoint(Word(word_.begin(), word_.begin() + static_cast<std::ptrdiff_t>(d)));
    }
    return *this;
}

PeriodicPoint PeriodicPoint::repeated(std::size_t times) const {
    Word out;
    for (std::size_t t = 0; t < times; ++t)
        out.insert(out.end(), word_.begin(), word_.end());
    return PeriodicPoint(std::move(out));
}

bool PeriodicPoint::closes_in(const Sft &x) const {
    return x.is_valid(word_) && x.allows(word_.back(), word_.front());
}

std::vector<bool> essential_symbols(const Sft &x) {
    const int n = x.size();
    std::vector<bool> keep(static_cast<std::size_t>(n), true);
    std::vector<int> out_deg(static_cast<std::size_t>(n)), in_deg(static_cast<std::size_t>(n));
    std::vector<int> queue;
    for (Symbol s = 0; s < n; ++s) {
        out_deg[s] = static_cast<int>(x.successors(s).size());
        in_deg[s] = static_cast<int>(x.predecessors(s).size());
        if (out_deg[s] == 0 || in_deg[s] == 0) {
            keep[s] = false;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        Symbol s = queue.back();
        queue.pop_back();
        for (Symbol b : x.successors(s)) {
            if (keep[b] && --in_deg[b] == 0) {
                keep[b] = false;
                queue.push_back(b);
            }
        }
        for (Symbol a : x.predecessors(s)) {
            if (keep[a] && --out_deg[a] == 0) {
                keep[a] = false;
                queue.push_back(a);
            }
        }
    }
    return keep;
}

Sft essentialize(const Sft &x) {
    auto keep = essential_symbols(x);
    if (std::none_of(keep.begin(), keep.end(), [](bool k) { return k; }))
        throw InputError("empty shift");
    if (std::all_of(keep.begin(), keep.end(), [](bool k) { return k; }))
        return x;
    return x.restrict_to(keep);
}

bool is_irreducible(const Sft &x) {
    Adjacency adj(static_cast<std::size_t>(x.size()));
    for (Symbol s = 0; s < x.size(); ++s)
        adj[s] = x.successors(s);
    return strongly_connected_components(adj).count() == 1;
}

std::vector<Block> enumerate_blocks(const Sft &x, int length) {
    if (length < 1)
        throw InputError("block length must be positive");
    std::vector<Block> out;
    Word current;
    auto extend = [&](auto &self) -> void {
        if (static_cast<int>(current.size()) == length) {
            out.push_back(Block{current, 0});
            return;
        }
        const std::vector<Symbol> *next = nullptr;
        std::vector<Symbol> all;
        if (current.empty()) {
            for (Symbol s = 0; s < x.size(); ++s)
                all.push_back(s);
            next = &all;
        } else {
            next = &x.successors(current.back());
        }
        for (Symbol s : *next) {
            current.push_back(s);
            self(self);
            current.pop_back();
        }
    };
    extend(extend);
    return out;
}

std::string format_word(const Sft &x, const Word &word, std::string_view separator) {
    std::string out;
    for (std::size_t k = 0; k < word.size(); ++k) {
        if (k > 0)
            out += separator;
        out += x.name(word[k]);
    }
    return out;
}

}  // namespace classdeg
