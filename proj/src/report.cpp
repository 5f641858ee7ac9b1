#include "classdeg/report.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

namespace classdeg {

std::string digest_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json symbols_json(const FactorTriple &t, const SymbolSet &set) {
    Json out = Json::array();
    for (Symbol s : members(set))
        out.push_back(t.x().name(s));
    return out;
}

Json block_json(const FactorTriple &t, const TransitionBlock &block) {
    return Json{{"w", t.format_y(block.w())}, {"n", block.n()}, {"m", symbols_json(t, block.m())},
                {"depth", block.depth()}};
}

Json magic_json(const FactorTriple &t, const MagicWitness &w) {
    return Json{{"value", w.value}, {"w", t.format_y(w.w)}, {"index", w.index}};
}

Json depth_search_json(const FactorTriple &t, const DepthSearchResult &r) {
    Json out{{"value", r.value}, {"witness", block_json(t, r.witness)}, {"horizon", r.horizon},
             {"certified", r.certified}, {"source", r.source}};
    out["exact"] = r.exact ? Json(*r.exact) : Json(nullptr);
    out["periodic_point"] = r.periodic_point.empty() ? Json(nullptr) : Json(t.format_y(r.periodic_point));
    out["periodic_class_count"] = r.periodic_class_count ? Json(*r.periodic_class_count) : Json(nullptr);
    return out;
}

Json class_report_json(const FactorTriple &t, const TransitionClassReport &r) {
    Json classes = Json::array();
    for (std::size_t c = 0; c < r.classes.size(); ++c) {
        const auto &tc = r.classes[c];
        classes.push_back(Json{{"id", c},
                               {"representative", t.format_x(tc.representative)},
                               {"vertices", tc.vertices.size()},
                               {"reaches", tc.reaches}});
    }
    Json dag = Json::array();
    for (auto [a, b] : r.dag)
        dag.push_back(Json::array({a, b}));
    Json phases = Json::array();
    for (int k = 0; k < r.graph.phases; ++k) {
        Json sets = Json::array();
        for (const auto &s : r.s_sets[k])
            sets.push_back(symbols_json(t, s));
        phases.push_back(Json{{"n", k},
                              {"y", t.y_name(r.graph.y.at(k))},
                              {"s_sets", sets},
                              {"transient", symbols_json(t, r.transient[k])}});
    }
    return Json{{"y", t.format_y(r.graph.y.word())},
                {"phases", r.graph.phases},
                {"vertices", r.graph.vertices.size()},
                {"edges", r.graph.edge_count()},
                {"class_count", r.count()},
                {"classes", classes},
                {"dag", dag},
                {"coordinates", phases},
                {"stable", r.stable},
                {"doubled_count", r.doubled_count}};
}

Json sync_json(const FactorTriple &t, const SynchronizingExtension &s) {
    Json sets = Json::array();
    for (const auto &set : s.s_set)
        sets.push_back(symbols_json(t, set));
    return Json{{"interval", Json::array({s.m, s.n})}, {"l", s.l},         {"s_set", sets},
                {"sizes", s.sizes},                    {"stabilized", s.stabilized}};
}

Json extraction_json(const FactorTriple &t, const Extraction &e) {
    return Json{{"block", block_json(t, e.block)},
                {"class_count", e.class_count},
                {"stages", Json{{"n0", e.n0}, {"n1", e.n1}, {"n2", e.n2}, {"n3", e.n3}, {"n4", e.n4}, {"n5", e.n5}}},
                {"l", e.l}};
}

namespace {

void flatten(const Json &node, const std::string &path, std::string &out) {
    if (node.is_object() && !node.empty()) {
        for (const auto &[key, value] : node.items())
            flatten(value, path.empty() ? key : path + "." + key, out);
        return;
    }
    if (node.is_array() && !node.empty() && !std::all_of(node.begin(), node.end(), [](const Json &j) {
            return j.is_primitive();
        })) {
        for (std::size_t i = 0; i < node.size(); ++i)
            flatten(node[i], path + "[" + std::to_string(i) + "]", out);
        return;
    }
    std::string value;
    if (node.is_string()) {
        value = node.get<std::string>();
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            if (i > 0)
                value += ' ';
            value += node[i].is_string() ? node[i].get<std::string>() : node[i].dump();
        }
    } else {
        value = node.dump();
    }
    out += path + "\t" + value + "\n";
}

}  // namespace

std::string render_plain(const Json &doc) {
    std::string out;
    flatten(doc, "", out);
    return out;
}

}  // namespace classdeg
