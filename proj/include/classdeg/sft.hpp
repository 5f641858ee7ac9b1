#pragma once

#include "classdeg/symbol_set.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace classdeg {

// A one-step shift of finite type: bi-infinite walks on a symbol graph.
// The alphabet order is significant; it fixes every lexicographic choice.
class Sft {
public:
    Sft(std::vector<std::string> alphabet, std::vector<std::pair<Symbol, Symbol>> transitions);

    int size() const { return static_cast<int>(alphabet_.size()); }
    const std::vector<std::string> &alphabet() const { return alphabet_; }
    const std::string &name(Symbol s) const { return alphabet_.at(static_cast<std::size_t>(s)); }
    std::optional<Symbol> find(std::string_view name) const;

    bool allows(Symbol from, Symbol to) const;
    const std::vector<Symbol> &successors(Symbol s) const { return succ_[static_cast<std::size_t>(s)]; }
    const std::vector<Symbol> &predecessors(Symbol s) const { return pred_[static_cast<std::size_t>(s)]; }
    // Sorted by (from, to).
    std::vector<std::pair<Symbol, Symbol>> transitions() const;
    std::size_t transition_count() const;

    bool is_valid(const Word &word) const;
    bool is_essential() const;

    // Sub-SFT on the kept symbols, in their original order.
    Sft restrict_to(const std::vector<bool> &keep) const;

    SymbolSet successor_set(const SymbolSet &from) const;
    SymbolSet predecessor_set(const SymbolSet &from) const;

    friend bool operator==(const Sft &, const Sft &) = default;

private:
    std::vector<std::string> alphabet_;
    std::vector<std::vector<Symbol>> succ_;
    std::vector<std::vector<Symbol>> pred_;
};

struct Block {
    Word symbols;
    std::int64_t start_index = 0;

    std::size_t size() const { return symbols.size(); }
    friend bool operator==(const Block &, const Block &) = default;
};

// Coordinate k carries word[k mod p].
class PeriodicPoint {
public:
    explicit PeriodicPoint(Word word);

    std::size_t period() const { return word_.size(); }
    const Word &word() const { return word_; }
    Symbol at(std::int64_t k) const;
    // Symbols at coordinates [first, last], inclusive.
    Word window(std::int64_t first, std::int64_t last) const;
    // Same point described by its shortest repeating word.
    PeriodicPoint primitive() const;
    PeriodicPoint repeated(std::size_t times) const;
    bool closes_in(const Sft &x) const;

    friend bool operator==(const PeriodicPoint &, const PeriodicPoint &) = default;

private:
    Word word_;
};

std::vector<bool> essential_symbols(const Sft &x);
// Throws InputError("empty shift") when no bi-infinite walk exists.
Sft essentialize(const Sft &x);
bool is_irreducible(const Sft &x);
std::vector<Block> enumerate_blocks(const Sft &x, int length);

std::string format_word(const Sft &x, const Word &word, std::string_view separator = "");

}  // namespace classdeg
