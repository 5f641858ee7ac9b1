#pragma once

#include "classdeg/triple.hpp"

#include <optional>
#include <vector>

namespace classdeg {

// Which Y-blocks count: all of ℒ(Y), or those of positive ν-measure for a
// 1-step Markov ν on the Y alphabet.
struct BlockSupport {
    std::vector<bool> start;
    std::vector<std::vector<bool>> step;

    static BlockSupport everything(int y_size);
    bool admits(const Word &w) const;
};

// R(u, n): symbols a such that some preimage of w keeps u's endpoints and
// passes through a at time n.
SymbolSet routable_symbols(const FactorTriple &t, const Word &w, int n, const Word &u);

// The distinct routing sets R(u, n) as u ranges over all preimages of w.
std::vector<SymbolSet> routing_family(const FactorTriple &t, const Word &w, int n);

// Smallest set inside `universe` meeting every member of `family`; ties go to
// the lexicographically least member list. Empty optional if no hitting set.
std::optional<SymbolSet> min_hitting_set(const SymbolSet &universe, const std::vector<SymbolSet> &family);

class TransitionBlock {
public:
    // Throws InputError unless (w, n, m) is a transition block of t.
    static TransitionBlock make(const FactorTriple &t, Word w, int n, SymbolSet m);
    static bool is_transition_block(const FactorTriple &t, const Word &w, int n, const SymbolSet &m);

    const Word &w() const { return w_; }
    int n() const { return n_; }
    const SymbolSet &m() const { return m_; }
    int depth() const { return static_cast<int>(m_.count()); }

private:
    TransitionBlock(Word w, int n, SymbolSet m) : w_(std::move(w)), n_(n), m_(std::move(m)) {}

    Word w_;
    int n_;
    SymbolSet m_;
};

struct DepthAt {
    int n = 0;
    SymbolSet m;
    int depth() const { return static_cast<int>(m.count()); }
};

// Best (n, M) over the interior of w; smallest n, then lexicographic M.
DepthAt minimal_depth_at(const FactorTriple &t, const Word &w);

// Exact minimal depth via the semigroup of path relations of Y-words.
struct ExactDepth {
    std::optional<int> value;
    std::optional<TransitionBlock> witness;
    std::size_t relations = 0;
    bool capped = false;
};

ExactDepth exact_minimal_depth(const FactorTriple &t, const BlockSupport &support,
                               std::size_t relation_cap = 200000);

struct DepthSearchResult {
    int value = 0;
    TransitionBlock witness;
    int horizon = 0;
    bool certified = false;
    // Exact minimal depth when the relation semigroup was fully explored.
    std::optional<int> exact;
    // Class count over the periodic point closing the witness.
    std::optional<int> periodic_class_count;
    Word periodic_point;
    // "search" when the witness came from the block search, "semigroup" otherwise.
    std::string source;
};

DepthSearchResult find_minimal_transition_block(const FactorTriple &t, int horizon);
DepthSearchResult find_minimal_transition_block(const FactorTriple &t, int horizon,
                                                const BlockSupport &support);

// Shortest Y-word v with (w v)^∞ a point of Y read by a cycle of X through a
// preimage of w; ties broken lexicographically.
std::optional<Word> close_into_periodic_point(const FactorTriple &t, const Word &w,
                                              const BlockSupport &support);

// Minimal depth over the windows of length 3..horizon of the periodic point y.
std::optional<DepthAt> min_depth_over_point(const FactorTriple &t, const Word &y, int horizon,
                                            Word *best_window = nullptr);

}  // namespace classdeg
