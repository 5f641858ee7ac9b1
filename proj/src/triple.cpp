#include "classdeg/triple.hpp"

#include "classdeg/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace classdeg {

namespace {

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

}  // namespace

FactorTriple::FactorTriple(Sft x, std::vector<Symbol> label, std::vector<std::string> y_alphabet)
    : x_(essentialize(x)) {
    if (static_cast<int>(label.size()) != x.size())
        throw InputError("label map must cover every X-symbol");
    for (Symbol c : label)
        if (c < 0 || c >= static_cast<int>(y_alphabet.size()))
            throw InputError("label outside the Y alphabet");

    // Carry labels over to the surviving symbols.
    std::vector<Symbol> kept;
    for (Symbol s = 0; s < x_.size(); ++s)
        kept.push_back(label[static_cast<std::size_t>(*x.find(x_.name(s)))]);

    std::vector<int> renumber(y_alphabet.size(), -1);
    for (Symbol c : kept)
        renumber[c] = 0;
    for (std::size_t c = 0; c < y_alphabet.size(); ++c) {
        if (renumber[c] == 0) {
            renumber[c] = static_cast<int>(y_alphabet_.size());
            y_alphabet_.push_back(y_alphabet[c]);
        }
    }
    for (Symbol c : kept)
        label_.push_back(renumber[c]);

    preimage_.assign(y_alphabet_.size(), SymbolSet(static_cast<std::size_t>(x_.size())));
    for (Symbol s = 0; s < x_.size(); ++s)
        preimage_[label_[s]].set(static_cast<std::size_t>(s));
}

std::optional<Symbol> FactorTriple::find_y(std::string_view name) const {
    for (std::size_t c = 0; c < y_alphabet_.size(); ++c)
        if (y_alphabet_[c] == name)
            return static_cast<Symbol>(c);
    return std::nullopt;
}

std::string FactorTriple::format_y(const Word &word) const {
    std::string out;
    for (Symbol c : word)
        out += y_name(c);
    return out;
}

Word FactorTriple::parse_y_word(std::string_view text) const {
    Word out;
    for (const auto &tok : split_tokens(text)) {
        auto c = find_y(tok);
        if (!c)
            throw InputError("unknown Y-symbol '" + tok + "'");
        out.push_back(*c);
    }
    if (out.empty())
        throw InputError("empty Y-word");
    return out;
}

Word FactorTriple::parse_x_word(std::string_view text) const {
    Word out;
    for (const auto &tok : split_tokens(text)) {
        auto s = x_.find(tok);
        if (!s)
            throw InputError("unknown X-symbol '" + tok + "'");
        out.push_back(*s);
    }
    return out;
}

FactorTriple parse_triple(std::string_view text) {
    std::map<std::string, std::vector<std::pair<int, std::string>>> sections;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(line_no, "expected 'section: tokens'");
        auto key_tokens = split_tokens(std::string_view(line).substr(0, colon));
        if (key_tokens.size() != 1)
            throw ParseError(line_no, "malformed section name");
        const auto &key = key_tokens.front();
        if (key != "xsymbols" && key != "ysymbols" && key != "map" && key != "edges")
            throw ParseError(line_no, "unknown section '" + key + "'");
        for (auto &tok : split_tokens(std::string_view(line).substr(colon + 1)))
            sections[key].emplace_back(line_no, std::move(tok));
    }

    std::vector<std::string> xs, ys;
    auto declare = [](std::vector<std::string> &names, int at, const std::string &tok) {
        if (tok.find('>') != std::string::npos)
            throw ParseError(at, "symbol names may not contain '>'");
        if (std::find(names.begin(), names.end(), tok) != names.end())
            throw ParseError(at, "duplicate symbol '" + tok + "'");
        names.push_back(tok);
    };
    for (const auto &[at, tok] : sections["xsymbols"])
        declare(xs, at, tok);
    for (const auto &[at, tok] : sections["ysymbols"])
        declare(ys, at, tok);
    if (xs.empty())
        throw InputError("empty alphabet");

    auto index_in = [](const std::vector<std::string> &names, const std::string &tok) {
        return static_cast<int>(std::find(names.begin(), names.end(), tok) - names.begin());
    };
    auto split_pair = [](int at, const std::string &tok) {
        auto gt = tok.find('>');
        if (gt == std::string::npos || gt == 0 || gt + 1 == tok.size() ||
            tok.find('>', gt + 1) != std::string::npos)
            throw ParseError(at, "expected 'a>b', got '" + tok + "'");
        return std::pair{tok.substr(0, gt), tok.substr(gt + 1)};
    };

    const bool y_declared = !ys.empty();
    std::vector<Symbol> label(xs.size(), -1);
    for (const auto &[at, tok] : sections["map"]) {
        auto [from, to] = split_pair(at, tok);
        int s = index_in(xs, from);
        if (s == static_cast<int>(xs.size()))
            throw ParseError(at, "unknown symbol '" + from + "'");
        int c = index_in(ys, to);
        if (c == static_cast<int>(ys.size())) {
            if (y_declared)
                throw ParseError(at, "unknown symbol '" + to + "'");
            ys.push_back(to);
        }
        if (label[s] != -1 && label[s] != c)
            throw ParseError(at, "symbol '" + from + "' mapped twice");
        label[s] = c;
    }
    for (std::size_t s = 0; s < xs.size(); ++s)
        if (label[s] == -1)
            throw InputError("symbol '" + xs[s] + "' has no label");

    std::vector<std::pair<Symbol, Symbol>> edges;
    for (const auto &[at, tok] : sections["edges"]) {
        auto [from, to] = split_pair(at, tok);
        int a = index_in(xs, from), b = index_in(xs, to);
        if (a == static_cast<int>(xs.size()))
            throw ParseError(at, "unknown symbol '" + from + "'");
        if (b == static_cast<int>(xs.size()))
            throw ParseError(at, "unknown symbol '" + to + "'");
        edges.emplace_back(a, b);
    }
    return FactorTriple(Sft(std::move(xs), std::move(edges)), std::move(label), std::move(ys));
}

FactorTriple read_triple_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_triple(buf.str());
}

std::string write_triple(const FactorTriple &t) {
    std::ostringstream out;
    out << "xsymbols:";
    for (const auto &name : t.x().alphabet())
        out << ' ' << name;
    out << "\nysymbols:";
    for (const auto &name : t.y_alphabet())
        out << ' ' << name;
    out << "\nmap:";
    for (Symbol s = 0; s < t.x_size(); ++s)
        out << ' ' << t.x().name(s) << '>' << t.y_name(t.label(s));
    out << "\nedges:";
    for (auto [a, b] : t.x().transitions())
        out << ' ' << t.x().name(a) << '>' << t.x().name(b);
    out << '\n';
    return out.str();
}

Word HigherBlockRecoding::to_blocks(const Word &original) const {
    if (static_cast<int>(original.size()) < window)
        throw InputError("block shorter than the recoding window");
    Word out;
    for (std::size_t k = 0; k + static_cast<std::size_t>(window) <= original.size(); ++k) {
        Word piece(original.begin() + static_cast<std::ptrdiff_t>(k),
                   original.begin() + static_cast<std::ptrdiff_t>(k) + window);
        auto it = std::find(blocks.begin(), blocks.end(), piece);
        if (it == blocks.end())
            throw InputError("block not in the language");
        out.push_back(static_cast<Symbol>(it - blocks.begin()));
    }
    return out;
}

Word HigherBlockRecoding::from_blocks(const Word &recoded) const {
    if (recoded.empty())
        return {};
    Word out = blocks[recoded.front()];
    for (std::size_t k = 1; k < recoded.size(); ++k)
        out.push_back(blocks[recoded[k]].back());
    return out;
}

PeriodicPoint HigherBlockRecoding::lift(const PeriodicPoint &x) const {
    Word out;
    for (std::size_t k = 0; k < x.period(); ++k) {
        auto piece = x.window(static_cast<std::int64_t>(k), static_cast<std::int64_t>(k) + window - 1);
        auto it = std::find(blocks.begin(), blocks.end(), piece);
        if (it == blocks.end())
            throw InputError("point not in the shift");
        out.push_back(static_cast<Symbol>(it - blocks.begin()));
    }
    return PeriodicPoint(std::move(out));
}

PeriodicPoint HigherBlockRecoding::project(const PeriodicPoint &x) const {
    Word out;
    for (Symbol s : x.word())
        out.push_back(blocks[s].front());
    return PeriodicPoint(std::move(out));
}

HigherBlockRecoding higher_block(const FactorTriple &t, int window) {
    if (window < 1)
        throw InputError("window must be positive");
    std::vector<Word> blocks;
    for (auto &b : enumerate_blocks(t.x(), window))
        blocks.push_back(std::move(b.symbols));

    bool single_char = std::all_of(t.x().alphabet().begin(), t.x().alphabet().end(),
                                   [](const std::string &n) { return n.size() == 1; });
    std::vector<std::string> names;
    std::vector<Symbol> label;
    for (const auto &b : blocks) {
        names.push_back(format_word(t.x(), b, single_char ? "" : "."));
        label.push_back(t.label(b.front()));
    }
    std::vector<std::pair<Symbol, Symbol>> edges;
    for (std::size_t u = 0; u < blocks.size(); ++u) {
        for (std::size_t v = 0; v < blocks.size(); ++v) {
            if (std::equal(blocks[u].begin() + 1, blocks[u].end(), blocks[v].begin()) &&
                t.x().allows(blocks[u].back(), blocks[v].back()))
                edges.emplace_back(static_cast<Symbol>(u), static_cast<Symbol>(v));
        }
    }
    FactorTriple recoded(Sft(std::move(names), std::move(edges)), std::move(label), t.y_alphabet());
    return HigherBlockRecoding{std::move(recoded), window, std::move(blocks)};
}

}  // namespace classdeg
