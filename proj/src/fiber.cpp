#include "classdeg/fiber.hpp"

#include "classdeg/errors.hpp"
#include "classdeg/factor_code.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace classdeg {

int FiberGraph::vertex(Symbol s, std::int64_t phase) const {
    auto k = ((phase % phases) + phases) % phases;
    return vertex_index[static_cast<std::size_t>(k * triple->x_size() + s)];
}

std::size_t FiberGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto &out : adj)
        total += out.size();
    return total;
}

FiberGraph build_fiber_graph(const FactorTriple &t, const PeriodicPoint &y, int unroll) {
    for (Symbol c : y.word())
        if (c < 0 || c >= t.y_size())
            throw InputError("periodic word uses a symbol outside the Y alphabet");
    const int phases = static_cast<int>(y.period()) * unroll;
    const int n = t.x_size();

    // Full layered graph first, then keep what lies on bi-infinite paths.
    std::vector<int> raw_index(static_cast<std::size_t>(phases * n), -1);
    std::vector<FiberVertex> raw;
    for (int k = 0; k < phases; ++k) {
        for (Symbol s : members(t.preimage(y.at(k)))) {
            raw_index[static_cast<std::size_t>(k * n + s)] = static_cast<int>(raw.size());
            raw.push_back(FiberVertex{s, k});
        }
    }
    Adjacency raw_adj(raw.size());
    for (std::size_t v = 0; v < raw.size(); ++v) {
        int next_phase = (raw[v].phase + 1) % phases;
        for (Symbol b : t.x().successors(raw[v].symbol)) {
            int w = raw_index[static_cast<std::size_t>(next_phase * n + b)];
            if (w != -1)
                raw_adj[v].push_back(w);
        }
    }
    auto keep = bi_infinite_vertices(raw_adj);

    FiberGraph g{std::make_shared<const FactorTriple>(t), y, phases, {}, {}, {}};
    g.vertex_index.assign(raw_index.size(), -1);
    std::vector<int> renumber(raw.size(), -1);
    for (std::size_t v = 0; v < raw.size(); ++v) {
        if (!keep[v])
            continue;
        renumber[v] = static_cast<int>(g.vertices.size());
        g.vertex_index[static_cast<std::size_t>(raw[v].phase * n + raw[v].symbol)] = renumber[v];
        g.vertices.push_back(raw[v]);
    }
    if (g.vertices.empty())
        throw InputError("periodic point is not in the image");
    g.adj.resize(g.vertices.size());
    for (std::size_t v = 0; v < raw.size(); ++v)
        if (keep[v])
            for (int w : raw_adj[v])
                if (keep[w])
                    g.adj[renumber[v]].push_back(renumber[w]);
    return g;
}

namespace {

struct ClassStructure {
    Components comps;
    std::vector<int> class_of_component;  // -1 for trivial components
    std::vector<int> component_of_class;
    // Classes reachable from each vertex.
    std::vector<SymbolSet> vertex_reach;
};

ClassStructure class_structure(const FiberGraph &g) {
    ClassStructure cs;
    cs.comps = strongly_connected_components(g.adj);
    cs.class_of_component.assign(static_cast<std::size_t>(cs.comps.count()), -1);
    for (int c = 0; c < cs.comps.count(); ++c) {
        if (cs.comps.nontrivial[c]) {
            cs.class_of_component[c] = static_cast<int>(cs.component_of_class.size());
            cs.component_of_class.push_back(c);
        }
    }
    const auto h = cs.component_of_class.size();
    std::vector<SymbolSet> comp_reach(static_cast<std::size_t>(cs.comps.count()), SymbolSet(h));
    // Components arrive sinks first, so successors are final when visited.
    for (int c = 0; c < cs.comps.count(); ++c) {
        if (cs.class_of_component[c] >= 0)
            comp_reach[c].set(static_cast<std::size_t>(cs.class_of_component[c]));
        for (int v : cs.comps.members[c])
            for (int w : g.adj[v])
                if (cs.comps.component_of[w] != c)
                    comp_reach[c] |= comp_reach[cs.comps.component_of[w]];
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        cs.vertex_reach.push_back(comp_reach[cs.comps.component_of[v]]);
    return cs;
}

// Lexicographically least shortest cycle through a phase-0 vertex of the component.
Word phase_zero_cycle(const FiberGraph &g, const Components &comps, int comp) {
    const auto &mem = comps.members[comp];
    std::optional<Word> best;
    for (int start : mem) {
        if (g.vertices[start].phase != 0)
            continue;
        // dist[v]: edges from v back to start inside the component.
        std::vector<int> dist(g.vertices.size(), -1);
        std::deque<int> queue;
        Adjacency rev(g.vertices.size());
        for (int v : mem)
            for (int w : g.adj[v])
                if (comps.component_of[w] == comp)
                    rev[w].push_back(v);
        for (int v : rev[start]) {
            if (dist[v] == -1) {
                dist[v] = 1;
                queue.push_back(v);
            }
        }
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int u : rev[v]) {
                if (dist[u] == -1) {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        int length = dist[start];
        if (best && static_cast<int>(best->size()) < length)
            continue;
        Word w{g.vertices[start].symbol};
        int current = start;
        for (int step = 1; step < length; ++step) {
            int pick = -1;
            for (int v : g.adj[current]) {
                if (comps.component_of[v] != comp || dist[v] != length - step)
                    continue;
                if (pick == -1 || g.vertices[v].symbol < g.vertices[pick].symbol)
                    pick = v;
            }
            w.push_back(g.vertices[pick].symbol);
            current = pick;
        }
        if (!best || w.size() < best->size() || (w.size() == best->size() && w < *best))
            best = w;
    }
    return PeriodicPoint(*best).primitive().word();
}

int lcm_of_periods(const FiberGraph &g) {
    auto comps = strongly_connected_components(g.adj);
    int l = g.phases;
    for (int c = 0; c < comps.count(); ++c)
        if (comps.nontrivial[c])
            l = std::lcm(l, component_period(g.adj, comps, c));
    return l;
}

int raw_class_count(const FiberGraph &g) {
    auto comps = strongly_connected_components(g.adj);
    return static_cast<int>(std::count(comps.nontrivial.begin(), comps.nontrivial.end(), true));
}

}  // namespace

TransitionClassReport transition_classes(const FiberGraph &base) {
    if (base.vertices.empty())
        throw InputError("empty fiber graph");
    const auto &t = *base.triple;
    const int period = static_cast<int>(base.y.period());
    const int unroll = lcm_of_periods(base) / period;
    FiberGraph g = unroll * period == base.phases ? base : build_fiber_graph(t, base.y, unroll);
    auto cs = class_structure(g);
    const int h = static_cast<int>(cs.component_of_class.size());

    std::vector<TransitionClass> classes(static_cast<std::size_t>(h));
    for (int c = 0; c < h; ++c) {
        int comp = cs.component_of_class[c];
        classes[c].vertices = cs.comps.members[comp];
        classes[c].representative = phase_zero_cycle(g, cs.comps, comp);
    }
    auto reach_of = [&](int c) { return cs.vertex_reach[cs.comps.members[cs.component_of_class[c]].front()]; };

    // Order: classes reaching more come first, then by representative.
    std::vector<int> order(static_cast<std::size_t>(h));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        auto ra = reach_of(a).count(), rb = reach_of(b).count();
        if (ra != rb)
            return ra > rb;
        return classes[a].representative < classes[b].representative;
    });
    std::vector<int> position(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i)
        position[order[i]] = i;

    TransitionClassReport report{g, {}, {}, {}, {}, 0, false};
    for (int i = 0; i < h; ++i) {
        TransitionClass tc = classes[order[i]];
        auto reach = reach_of(order[i]);
        for (auto d = reach.find_first(); d != SymbolSet::npos; d = reach.find_next(d))
            tc.reaches.push_back(position[d]);
        std::sort(tc.reaches.begin(), tc.reaches.end());
        for (int d : tc.reaches)
            if (d != i)
                report.dag.emplace_back(i, d);
        report.classes.push_back(std::move(tc));
    }
    std::sort(report.dag.begin(), report.dag.end());

    const auto nx = static_cast<std::size_t>(t.x_size());
    report.s_sets.assign(static_cast<std::size_t>(g.phases), std::vector<SymbolSet>(static_cast<std::size_t>(h), SymbolSet(nx)));
    report.transient.assign(static_cast<std::size_t>(g.phases), SymbolSet(nx));
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        for (int c = 0; c < h; ++c)
            if (cs.vertex_reach[v] == reach_of(c))
                report.s_sets[g.vertices[v].phase][position[c]].set(static_cast<std::size_t>(g.vertices[v].symbol));
    }
    for (int k = 0; k < g.phases; ++k) {
        SymbolSet covered(nx);
        for (const auto &s : report.s_sets[k])
            covered |= s;
        report.transient[k] = t.preimage(g.y.at(k)) - covered;
    }

    report.doubled_count = raw_class_count(build_fiber_graph(t, g.y, 2 * unroll));
    report.stable = report.doubled_count == h;
    return report;
}

TransitionClassReport transition_classes(const FactorTriple &t, const PeriodicPoint &y) {
    return transition_classes(build_fiber_graph(t, y));
}

std::vector<PeriodicPoint> enumerate_periodic_preimages(const FiberGraph &g, int max_period) {
    const int p = static_cast<int>(g.y.period());
    if (max_period < p)
        throw InputError("max_period is shorter than the period of y");
    std::set<Word> found;
    Word path;
    // Closed walks from phase-0 vertices in the p-phase graph.
    FiberGraph base = g.phases == p ? g : build_fiber_graph(*g.triple, g.y, 1);
    for (int q = p; q <= max_period; q += p) {
        for (std::size_t start = 0; start < base.vertices.size(); ++start) {
            if (base.vertices[start].phase != 0)
                continue;
            auto rec = [&](auto &self, int v, int depth) -> void {
                if (depth == q) {
                    if (v == static_cast<int>(start)) {
                        PeriodicPoint x(path);
                        if (static_cast<int>(x.primitive().period()) == q)
                            found.insert(path);
                    }
                    return;
                }
                for (int w : base.adj[v]) {
                    if (depth + 1 < q)
                        path.push_back(base.vertices[w].symbol);
                    self(self, w, depth + 1);
                    if (depth + 1 < q)
                        path.pop_back();
                }
            };
            path.assign(1, base.vertices[start].symbol);
            rec(rec, static_cast<int>(start), 0);
        }
    }
    std::vector<PeriodicPoint> out;
    for (const auto &w : found)
        out.emplace_back(w);
    return out;
}

namespace {

// Endpoint pairs (U_0, U_end) of label-V blocks allowed by the given end sets.
std::set<std::pair<Symbol, Symbol>> endpoint_pairs(const FactorTriple &t, const Word &v, const SymbolSet &starts,
                                                   const SymbolSet &ends) {
    std::set<std::pair<Symbol, Symbol>> out;
    for (Symbol s : members(starts)) {
        auto reach = forward_sets(t, v, s).back() & ends;
        for (Symbol e : members(reach))
            out.emplace(s, e);
    }
    return out;
}

std::uint64_t count_blocks(const FactorTriple &t, const Word &v, const std::set<std::pair<Symbol, Symbol>> &pairs) {
    std::uint64_t total = 0;
    const auto nx = static_cast<std::size_t>(t.x_size());
    for (auto [s, e] : pairs) {
        std::vector<std::uint64_t> ways(nx, 0);
        ways[s] = 1;
        for (std::size_t k = 1; k < v.size(); ++k) {
            std::vector<std::uint64_t> next(nx, 0);
            for (std::size_t a = 0; a < nx; ++a)
                if (ways[a])
                    for (Symbol b : t.x().successors(static_cast<Symbol>(a)))
                        if (t.label(b) == v[k])
                            next[b] += ways[a];
            ways = std::move(next);
        }
        total += ways[e];
    }
    return total;
}

}  // namespace

SynchronizingExtension synchronizing_extension(const FactorTriple &t, const PeriodicPoint &y, std::int64_t m,
                                               std::int64_t n) {
    if (n < m)
        throw InputError("interval must be nonempty");
    auto g = build_fiber_graph(t, y);
    const auto nx = static_cast<std::size_t>(t.x_size());
    const Word v = y.window(m, n);

    SymbolSet pruned_m(nx), pruned_n(nx);
    for (Symbol s = 0; s < t.x_size(); ++s) {
        if (g.vertex(s, m) != -1)
            pruned_m.set(static_cast<std::size_t>(s));
        if (g.vertex(s, n) != -1)
            pruned_n.set(static_cast<std::size_t>(s));
    }
    const auto truth = endpoint_pairs(t, v, pruned_m, pruned_n);

    auto family_at = [&](int l) {
        auto left = forward_sets(t, y.window(m - l, m)).back();
        auto right = backward_sets(t, y.window(n, n + l)).front();
        return endpoint_pairs(t, v, left, right);
    };

    SynchronizingExtension out;
    out.m = m;
    out.n = n;
    // The family shrinks to the truth within the number of subset states.
    const int cap = 4 * static_cast<int>(g.y.period()) * (t.x_size() + 1) * (t.x_size() + 1) + 16;
    for (int l = 0; l <= cap; ++l) {
        auto current = family_at(l);
        out.sizes.push_back(count_blocks(t, v, current));
        if (current != truth)
            continue;
        auto next = family_at(l + 1);
        out.sizes.push_back(count_blocks(t, v, next));
        out.l = l;
        out.stabilized = next == current;
        for (std::size_t k = 0; k < v.size(); ++k) {
            SymbolSet at(nx);
            for (auto [s, e] : current) {
                const Word left(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k) + 1);
                const Word right(v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
                at |= forward_sets(t, left, s).back() & backward_sets(t, right, e).front();
            }
            out.s_set.push_back(at);
        }
        return out;
    }
    throw Error("synchronizing extension did not stabilize");
}

namespace {

using VertexSet = SymbolSet;

VertexSet step(const FiberGraph &g, const VertexSet &from) {
    VertexSet out(g.vertices.size());
    for (auto v = from.find_first(); v != VertexSet::npos; v = from.find_next(v))
        for (int w : g.adj[v])
            out.set(static_cast<std::size_t>(w));
    return out;
}

VertexSet single(const FiberGraph &g, int v) {
    VertexSet out(g.vertices.size());
    out.set(static_cast<std::size_t>(v));
    return out;
}

}  // namespace

Extraction extract_transition_block(const FactorTriple &t, const PeriodicPoint &y) {
    auto report = transition_classes(t, y);
    const FiberGraph &g = report.graph;
    const int h = report.count();
    const auto nv = g.vertices.size();
    const std::int64_t budget = static_cast<std::int64_t>(nv) * nv * g.phases + 64;

    auto at_phase = [&](std::int64_t time) {
        VertexSet out(nv);
        for (std::size_t v = 0; v < nv; ++v)
            if (g.vertices[v].phase == ((time % g.phases) + g.phases) % g.phases)
                out.set(v);
        return out;
    };
    auto transient_at = [&](std::int64_t time) {
        VertexSet out(nv);
        const auto &tr = report.transient[static_cast<std::size_t>(((time % g.phases) + g.phases) % g.phases)];
        for (Symbol s : members(tr)) {
            int v = g.vertex(s, time);
            if (v != -1)
                out.set(static_cast<std::size_t>(v));
        }
        return out;
    };

    // Stage 1: every path from n1 leaves the transient vertices by n2.
    const std::int64_t n1 = 0;
    std::int64_t n2 = n1;
    VertexSet live = transient_at(n1);
    while (live.any()) {
        if (n2 - n1 > budget)
            throw Error("stage 1 did not terminate");
        live = step(g, live) & transient_at(++n2);
    }

    // Stage 2: one target per class, reached from all of S_{n2}(C) at the same time.
    std::vector<std::vector<VertexSet>> from_s(static_cast<std::size_t>(h));
    for (int c = 0; c < h; ++c) {
        const auto &s = report.s_sets[static_cast<std::size_t>(n2 % g.phases)][c];
        for (Symbol i : members(s))
            from_s[c].push_back(single(g, g.vertex(i, n2)));
    }
    std::vector<VertexSet> class_vertices;
    for (const auto &tc : report.classes) {
        VertexSet in(nv);
        for (int v : tc.vertices)
            in.set(static_cast<std::size_t>(v));
        class_vertices.push_back(in);
    }
    std::int64_t n3 = n2;
    std::vector<int> targets;
    for (;; ++n3) {
        if (n3 - n2 > budget)
            throw Error("stage 2 did not terminate");
        if (n3 > n2)
            for (auto &sets : from_s)
                for (auto &s : sets)
                    s = step(g, s);
        if (n3 < std::max(n2, n1 + 1))
            continue;
        targets.clear();
        for (int c = 0; c < h; ++c) {
            VertexSet common = class_vertices[c] & at_phase(n3);
            for (const auto &s : from_s[c])
                common &= s;
            if (common.none())
                break;
            int pick = -1;
            for (auto v = common.find_first(); v != VertexSet::npos; v = common.find_next(v))
                if (pick == -1 || g.vertices[v].symbol < g.vertices[pick].symbol)
                    pick = static_cast<int>(v);
            targets.push_back(pick);
        }
        if (static_cast<int>(targets.size()) == h)
            break;
    }

    // Stage 3: every path from n1 can be rerouted through a target and rejoin by n4.
    const VertexSet starts = at_phase(n1);
    std::vector<int> start_list;
    std::vector<VertexSet> reach_u;
    for (auto u = starts.find_first(); u != VertexSet::npos; u = starts.find_next(u)) {
        start_list.push_back(static_cast<int>(u));
        reach_u.push_back(single(g, static_cast<int>(u)));
    }
    std::vector<std::vector<int>> usable(start_list.size());
    for (std::int64_t time = n1; time < n3; ++time)
        for (auto &r : reach_u)
            r = step(g, r);
    for (std::size_t i = 0; i < start_list.size(); ++i)
        for (int c = 0; c < h; ++c)
            if (reach_u[i][static_cast<std::size_t>(targets[c])])
                usable[i].push_back(c);
    std::vector<VertexSet> reach_a;
    for (int a : targets)
        reach_a.push_back(single(g, a));
    std::int64_t n4 = n3;
    while (true) {
        ++n4;
        if (n4 - n3 > budget)
            throw Error("stage 3 did not terminate");
        for (auto &r : reach_u)
            r = step(g, r);
        for (auto &r : reach_a)
            r = step(g, r);
        bool merged = true;
        for (std::size_t i = 0; i < start_list.size() && merged; ++i) {
            VertexSet cover(nv);
            for (int c : usable[i])
                cover |= reach_a[c];
            merged = reach_u[i].is_subset_of(cover);
        }
        if (merged)
            break;
    }

    // Stage 4: pad by a synchronizing extension of y[n1, n4].
    auto sync = synchronizing_extension(t, y, n1, n4);
    const std::int64_t n0 = n1 - sync.l, n5 = n4 + sync.l;
    SymbolSet m(static_cast<std::size_t>(t.x_size()));
    for (int a : targets)
        m.set(static_cast<std::size_t>(g.vertices[a].symbol));
    Word w = y.window(n0, n5);
    if (!TransitionBlock::is_transition_block(t, w, static_cast<int>(n3 - n0), m))
        throw Error("extracted block failed verification");
    return Extraction{TransitionBlock::make(t, w, static_cast<int>(n3 - n0), m), n0, n1, n2, n3, n4, n5, sync.l, h};
}

}  // namespace classdeg
