#pragma once

#include "classdeg/sft.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace classdeg {

// A 1-step SFT X with a 1-block labeling onto Y-symbols.
// Construction essentializes X and drops Y-symbols that no X-symbol maps to.
class FactorTriple {
public:
    FactorTriple(Sft x, std::vector<Symbol> label, std::vector<std::string> y_alphabet);

    const Sft &x() const { return x_; }
    Symbol label(Symbol s) const { return label_[static_cast<std::size_t>(s)]; }
    const std::vector<Symbol> &labels() const { return label_; }
    const std::vector<std::string> &y_alphabet() const { return y_alphabet_; }
    int y_size() const { return static_cast<int>(y_alphabet_.size()); }
    const std::string &y_name(Symbol c) const { return y_alphabet_.at(static_cast<std::size_t>(c)); }
    std::optional<Symbol> find_y(std::string_view name) const;

    // π_b⁻¹(c) as a set of X-symbols.
    const SymbolSet &preimage(Symbol c) const { return preimage_[static_cast<std::size_t>(c)]; }
    int x_size() const { return x_.size(); }

    std::string format_x(const Word &word) const { return format_word(x_, word); }
    std::string format_y(const Word &word) const;
    // Parses whitespace-separated Y-symbol names.
    Word parse_y_word(std::string_view text) const;
    Word parse_x_word(std::string_view text) const;

    friend bool operator==(const FactorTriple &, const FactorTriple &) = default;

private:
    Sft x_;
    std::vector<Symbol> label_;
    std::vector<std::string> y_alphabet_;
    std::vector<SymbolSet> preimage_;
};

FactorTriple parse_triple(std::string_view text);
FactorTriple read_triple_file(const std::string &path);
std::string write_triple(const FactorTriple &t);

// N-block presentation of a triple together with the conjugacy maps.
struct HigherBlockRecoding {
    FactorTriple triple;
    int window = 1;
    // blocks[s] is the original N-block carried by new symbol s.
    std::vector<Word> blocks;

    // Original block of length L ≥ N to the new block of length L − N + 1.
    Word to_blocks(const Word &original) const;
    // Inverse of to_blocks.
    Word from_blocks(const Word &recoded) const;
    PeriodicPoint lift(const PeriodicPoint &x) const;
    PeriodicPoint project(const PeriodicPoint &x) const;
};

HigherBlockRecoding higher_block(const FactorTriple &t, int window);

}  // namespace classdeg
