#pragma once

#include <boost/dynamic_bitset.hpp>

#include <string>
#include <vector>

namespace classdeg {

using Symbol = int;
using Word = std::vector<Symbol>;
using SymbolSet = boost::dynamic_bitset<>;

inline std::vector<Symbol> members(const SymbolSet &set) {
    std::vector<Symbol> out;
    out.reserve(set.count());
    for (auto i = set.find_first(); i != SymbolSet::npos; i = set.find_next(i))
        out.push_back(static_cast<Symbol>(i));
    return out;
}

inline SymbolSet make_set(std::size_t universe, const std::vector<Symbol> &symbols) {
    SymbolSet set(universe);
    for (Symbol s : symbols)
        set.set(static_cast<std::size_t>(s));
    return set;
}

// Lexicographic comparison on sorted member lists ({a} < {a,b} < {b}).
inline bool lex_less(const SymbolSet &lhs, const SymbolSet &rhs) {
    auto l = members(lhs);
    auto r = members(rhs);
    return l < r;
}

}  // namespace classdeg
