#pragma once

#include "classdeg/class_degree.hpp"
#include "classdeg/graph.hpp"
#include "classdeg/triple.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace classdeg {

struct FiberVertex {
    Symbol symbol;
    int phase;
};

// Preimage graph of a periodic point y, resolved over `phases` coordinates
// (a multiple of the period of y). Only vertices on bi-infinite paths are kept.
struct FiberGraph {
    std::shared_ptr<const FactorTriple> triple;
    PeriodicPoint y;
    int phases = 0;
    std::vector<FiberVertex> vertices;
    Adjacency adj;

    // vertex_index[phase * |A(X)| + s], or -1.
    std::vector<int> vertex_index;

    // -1 when (s, phase mod phases) is not a vertex.
    int vertex(Symbol s, std::int64_t phase) const;
    std::size_t edge_count() const;
};

// Throws InputError when y has no preimage (or is not a Y-cycle).
FiberGraph build_fiber_graph(const FactorTriple &t, const PeriodicPoint &y, int unroll = 1);

struct TransitionClass {
    // Vertices of the class's component in the unrolled graph.
    std::vector<int> vertices;
    // Periodic preimage read from phase 0 of the component.
    Word representative;
    // Indices of classes reachable from this one, including itself.
    std::vector<int> reaches;
};

struct TransitionClassReport {
    FiberGraph graph;
    std::vector<TransitionClass> classes;
    // Pairs (C, D), C ≠ D, with a transition from C to D.
    std::vector<std::pair<int, int>> dag;
    // s_sets[n][c] = S_n(C_c) for n in [0, graph.phases).
    std::vector<std::vector<SymbolSet>> s_sets;
    std::vector<SymbolSet> transient;
    // Class count after doubling the unrolling, and whether it matches.
    int doubled_count = 0;
    bool stable = false;

    int count() const { return static_cast<int>(classes.size()); }
};

TransitionClassReport transition_classes(const FiberGraph &g);
TransitionClassReport transition_classes(const FactorTriple &t, const PeriodicPoint &y);

// Distinct periodic preimages of minimal period at most max_period.
std::vector<PeriodicPoint> enumerate_periodic_preimages(const FiberGraph &g, int max_period);

struct SynchronizingExtension {
    std::int64_t m = 0;
    std::int64_t n = 0;
    int l = 0;
    // Symbols occurring at each coordinate of [m, n] in the stabilized family.
    std::vector<SymbolSet> s_set;
    // Sizes of S^0, S^1, ..., S^l, S^{l+1} as counts of blocks.
    std::vector<std::uint64_t> sizes;
    bool stabilized = false;
};

SynchronizingExtension synchronizing_extension(const FactorTriple &t, const PeriodicPoint &y,
                                               std::int64_t m, std::int64_t n);

struct Extraction {
    TransitionBlock block;
    // n0 ≤ n1 < n3 < n4 ≤ n5 with n1 ≤ n2 ≤ n3; l = n1 − n0 = n5 − n4.
    std::int64_t n0, n1, n2, n3, n4, n5;
    int l;
    int class_count;
};

Extraction extract_transition_block(const FactorTriple &t, const PeriodicPoint &y);

}  // namespace classdeg
