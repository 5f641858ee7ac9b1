#pragma once

#include <vector>

namespace classdeg {

using Adjacency = std::vector<std::vector<int>>;

struct Components {
    std::vector<int> component_of;
    // Members of each component; components come in reverse topological order
    // (a component only reaches components with smaller or equal index).
    std::vector<std::vector<int>> members;
    // True when the component carries a cycle (size > 1 or a self-loop).
    std::vector<bool> nontrivial;

    int count() const { return static_cast<int>(members.size()); }
};

Components strongly_connected_components(const Adjacency &adj);

// gcd of cycle lengths inside one nontrivial component.
int component_period(const Adjacency &adj, const Components &comps, int component);

std::vector<bool> reachable_from(const Adjacency &adj, const std::vector<int> &sources);

Adjacency reversed(const Adjacency &adj);

// Vertices lying on a bi-infinite path: reachable from a cycle and reaching one.
std::vector<bool> bi_infinite_vertices(const Adjacency &adj);

}  // namespace classdeg
