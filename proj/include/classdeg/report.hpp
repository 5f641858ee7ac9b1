#pragma once

#include "classdeg/class_degree.hpp"
#include "classdeg/factor_code.hpp"
#include "classdeg/fiber.hpp"
#include "classdeg/measures.hpp"

#include "json.hpp"

#include <string>
#include <string_view>

namespace classdeg {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchema = "classdeg-report/1";

// FNV-1a, 64 bit, as 16 lowercase hex digits.
std::string digest_hex(std::string_view bytes);

Json symbols_json(const FactorTriple &t, const SymbolSet &set);
Json block_json(const FactorTriple &t, const TransitionBlock &block);
Json magic_json(const FactorTriple &t, const MagicWitness &w);
Json depth_search_json(const FactorTriple &t, const DepthSearchResult &r);
Json class_report_json(const FactorTriple &t, const TransitionClassReport &r);
Json sync_json(const FactorTriple &t, const SynchronizingExtension &s);
Json extraction_json(const FactorTriple &t, const Extraction &e);

// One "path<TAB>value" line per leaf, in document order.
std::string render_plain(const Json &doc);

}  // namespace classdeg
