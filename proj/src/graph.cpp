#include "classdeg/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <utility>

namespace classdeg {

Components strongly_connected_components(const Adjacency &adj) {
    const int n = static_cast<int>(adj.size());
    Components out;
    out.component_of.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::pair<int, std::size_t>> call;
    int counter = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1)
            continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto &[v, next] = call.back();
            if (next < adj[v].size()) {
                int w = adj[v][next++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            int done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] != index[done])
                continue;
            std::vector<int> comp;
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                out.component_of[w] = out.count();
                comp.push_back(w);
            } while (w != done);
            std::sort(comp.begin(), comp.end());
            bool cyclic = comp.size() > 1 ||
                          std::find(adj[done].begin(), adj[done].end(), done) != adj[done].end();
            out.members.push_back(std::move(comp));
            out.nontrivial.push_back(cyclic);
        }
    }
    return out;
}

int component_period(const Adjacency &adj, const Components &comps, int component) {
    const auto &members = comps.members[static_cast<std::size_t>(component)];
    std::vector<int> level(adj.size(), -1);
    std::vector<int> queue{members.front()};
    level[members.front()] = 0;
    int g = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        for (int w : adj[v]) {
            if (comps.component_of[w] != component)
                continue;
            if (level[w] == -1) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                g = std::gcd(g, std::abs(level[v] + 1 - level[w]));
            }
        }
    }
    return g;
}

std::vector<bool> reachable_from(const Adjacency &adj, const std::vector<int> &sources) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<int> stack;
    for (int s : sources) {
        if (!seen[s]) {
            seen[s] = true;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

Adjacency reversed(const Adjacency &adj) {
    Adjacency rev(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v)
        for (int w : adj[v])
            rev[w].push_back(static_cast<int>(v));
    return rev;
}

std::vector<bool> bi_infinite_vertices(const Adjacency &adj) {
    auto comps = strongly_connected_components(adj);
    std::vector<int> cyclic;
    for (int c = 0; c < comps.count(); ++c)
        if (comps.nontrivial[c])
            for (int v : comps.members[c])
                cyclic.push_back(v);
    auto forward = reachable_from(adj, cyclic);
    auto backward = reachable_from(reversed(adj), cyclic);
    std::vector<bool> keep(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v)
        keep[v] = forward[v] && backward[v];
    return keep;
}

}  // namespace classdeg
