#pragma once

#include "classdeg/triple.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace classdeg {

Word apply_code(const FactorTriple &t, const Word &x_block);
Block apply_code(const FactorTriple &t, const Block &x_block);

// One subset-automaton step: symbols over c that follow some member of `from`.
SymbolSet forward_step(const FactorTriple &t, const SymbolSet &from, Symbol c);
SymbolSet backward_step(const FactorTriple &t, const SymbolSet &from, Symbol c);

// forward_sets(t, w, start)[k]: symbols at k reachable from `start` at 0 along w[0..k].
// An empty start means "every preimage of w[0]".
std::vector<SymbolSet> forward_sets(const FactorTriple &t, const Word &w,
                                    std::optional<Symbol> start = std::nullopt);
std::vector<SymbolSet> backward_sets(const FactorTriple &t, const Word &w,
                                     std::optional<Symbol> end = std::nullopt);

bool in_image_language(const FactorTriple &t, const Word &w);

struct PreimageProfile {
    Word w;
    int index = 0;
    SymbolSet symbols;

    int d() const { return static_cast<int>(symbols.count()); }
};

PreimageProfile preimage_profile(const FactorTriple &t, const Word &w, int index);

struct MagicWitness {
    Word w;
    int index = 0;
    int value = 0;
};

MagicWitness d_star(const FactorTriple &t);

// Two distinct equal-label X-paths with common endpoints, if any.
std::optional<std::pair<Word, Word>> find_diamond(const FactorTriple &t);
bool is_finite_to_one(const FactorTriple &t);

struct ImageIrreducibility {
    bool irreducible = false;
    // X-symbols of a component whose image language is the whole image language.
    std::vector<Symbol> full_component;
};

ImageIrreducibility image_irreducibility(const FactorTriple &t);
bool is_image_irreducible(const FactorTriple &t);

struct DegreeResult {
    int value = 0;
    MagicWitness witness;
};

// Throws PreconditionError when the code is infinite-to-one or the image is
// reducible; strict mode also demands an irreducible X.
DegreeResult degree(const FactorTriple &t, bool strict = false);

struct SoficImage {
    // Deterministic vertex-labeled presentation: X-symbols are subset states.
    FactorTriple presentation;
    std::vector<SymbolSet> states;
    bool irreducible = false;
};

SoficImage sofic_image(const FactorTriple &t);

}  // namespace classdeg
