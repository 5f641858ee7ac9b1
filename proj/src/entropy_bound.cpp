#include "classdeg/errors.hpp"
#include "classdeg/graph.hpp"
#include "classdeg/measures.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

namespace classdeg {

namespace {

// The k-block graph of X: vertices are k-blocks, edges are (k+1)-blocks whose
// image has positive ν-measure.
struct BlockGraph {
    int k = 0;
    std::vector<Word> edges;
    std::vector<int> from, to, image;
    std::vector<Word> y_blocks;
    std::vector<double> nu;
    int vertex_count = 0;
    // Nontrivial components as (vertices, edges) lists.
    std::vector<std::vector<int>> comp_vertices, comp_edges;
};

void positive_words(const MarkovMeasure &nu, int length, Word &w, std::map<Word, double> &out) {
    if (static_cast<int>(w.size()) == length) {
        out.emplace(w, nu.block_probability(w));
        return;
    }
    for (Symbol c = 0; c < nu.size(); ++c) {
        bool ok = w.empty() ? nu.stationary[c] > 0.0 : nu.kernel[w.back()][c] > 0.0;
        if (!ok)
            continue;
        w.push_back(c);
        positive_words(nu, length, w, out);
        w.pop_back();
    }
}

BlockGraph build_block_graph(const FactorTriple &t, const MarkovMeasure &nu, int k) {
    BlockGraph g;
    g.k = k;
    std::map<Word, double> words;
    Word scratch;
    positive_words(nu, k + 1, scratch, words);
    std::map<Word, int> y_index;
    for (const auto &[w, p] : words) {
        y_index.emplace(w, static_cast<int>(g.y_blocks.size()));
        g.y_blocks.push_back(w);
        g.nu.push_back(p);
    }
    std::map<Word, int> v_index;
    for (auto &b : enumerate_blocks(t.x(), k))
        v_index.emplace(b.symbols, static_cast<int>(v_index.size()));
    g.vertex_count = static_cast<int>(v_index.size());
    for (auto &b : enumerate_blocks(t.x(), k + 1)) {
        Word img;
        for (Symbol s : b.symbols)
            img.push_back(t.label(s));
        auto it = y_index.find(img);
        if (it == y_index.end())
            continue;
        g.from.push_back(v_index.at(Word(b.symbols.begin(), b.symbols.end() - 1)));
        g.to.push_back(v_index.at(Word(b.symbols.begin() + 1, b.symbols.end())));
        g.image.push_back(it->second);
        g.edges.push_back(std::move(b.symbols));
    }

    Adjacency adj(static_cast<std::size_t>(g.vertex_count));
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        adj[g.from[e]].push_back(g.to[e]);
    auto comps = strongly_connected_components(adj);
    std::vector<int> slot(static_cast<std::size_t>(comps.count()), -1);
    for (int c = 0; c < comps.count(); ++c) {
        if (!comps.nontrivial[c])
            continue;
        slot[c] = static_cast<int>(g.comp_vertices.size());
        g.comp_vertices.push_back(comps.members[c]);
        g.comp_edges.emplace_back();
    }
    std::vector<bool> covered(g.y_blocks.size(), false);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int c = comps.component_of[g.from[e]];
        if (c == comps.component_of[g.to[e]] && slot[c] >= 0) {
            g.comp_edges[slot[c]].push_back(static_cast<int>(e));
            covered[g.image[e]] = true;
        }
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end())
        throw InputError("ν is not the image of any stationary block measure");
    return g;
}


struct ComponentPerron {
    int component = 0;
    double rho = 0.0;
    std::vector<double> flow;
    // Right eigenvector indexed like comp_vertices[component].
    Eigen::VectorXd right;
};

struct Evaluation {
    double dual = 0.0;
    double log_rho = 0.0;
    std::vector<double> flow;  // per edge
    std::vector<double> mass;  // per Y-block
    std::vector<double> weight;
    std::vector<ComponentPerron> top;
};

ComponentPerron component_perron(const BlockGraph &g, int c, const std::vector<double> &weight) {
    const auto &verts = g.comp_vertices[c];
    std::map<int, int> local;
    for (int v : verts)
        local.emplace(v, static_cast<int>(local.size()));
    const auto m = static_cast<Eigen::Index>(verts.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int e : g.comp_edges[c])
        a(local.at(g.from[e]), local.at(g.to[e])) += weight[e];

    auto perron_vector = [](const Eigen::MatrixXd &mat, double &rho) {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(mat);
        const auto &values = solver.eigenvalues();
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < values.size(); ++i)
            if (values(i).real() > values(best).real())
                best = i;
        rho = values(best).real();
        Eigen::VectorXd v = solver.eigenvectors().col(best).real();
        if (v.sum() < 0)
            v = -v;
        v = v.cwiseMax(0.0);
        return Eigen::VectorXd(v / v.sum());
    };
    double rho = 0.0, rho_left = 0.0;
    Eigen::VectorXd right = perron_vector(a, rho);
    Eigen::VectorXd left = perron_vector(a.transpose(), rho_left);
    const double norm = left.dot(right);

    ComponentPerron out;
    out.component = c;
    out.rho = rho;
    out.right = right;
    out.flow.assign(g.edges.size(), 0.0);
    for (int e : g.comp_edges[c])
        out.flow[e] = left(local.at(g.from[e])) * weight[e] * right(local.at(g.to[e])) / (rho * norm);
    return out;
}

Evaluation evaluate(const BlockGraph &g, const std::vector<double> &theta) {
    std::vector<double> weight(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        weight[e] = std::exp(theta[g.image[e]]);
    std::vector<ComponentPerron> parts;
    double rho = 0.0;
    for (std::size_t c = 0; c < g.comp_vertices.size(); ++c) {
        parts.push_back(component_perron(g, static_cast<int>(c), weight));
        rho = std::max(rho, parts.back().rho);
    }
    Evaluation out;
    out.log_rho = std::log(rho);
    out.dual = out.log_rho;
    for (std::size_t w = 0; w < theta.size(); ++w)
        out.dual -= theta[w] * g.nu[w];
    // Components tied for the top eigenvalue share the flow equally.
    out.flow.assign(g.edges.size(), 0.0);
    int ties = 0;
    for (const auto &part : parts)
        if (part.rho >= rho * (1.0 - 1e-12))
            ++ties;
    for (auto &part : parts) {
        if (part.rho < rho * (1.0 - 1e-12))
            continue;
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            out.flow[e] += part.flow[e] / ties;
        out.top.push_back(std::move(part));
    }
    out.weight = std::move(weight);
    out.mass.assign(g.y_blocks.size(), 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        out.mass[g.image[e]] += out.flow[e];
    return out;
}

double residual_of(const BlockGraph &g, const Evaluation &ev) {
    double r = 0.0;
    for (std::size_t w = 0; w < g.nu.size(); ++w)
        r = std::max(r, std::abs(ev.mass[w] - g.nu[w]));
    return r;
}

double conditional_entropy(const BlockGraph &g, const std::vector<double> &flow) {
    std::vector<double> out_mass(static_cast<std::size_t>(g.vertex_count), 0.0);
    for (std::size_t e = 0; e < flow.size(); ++e)
        out_mass[g.from[e]] += flow[e];
    double h = 0.0;
    for (std::size_t e = 0; e < flow.size(); ++e)
        if (flow[e] > 0.0)
            h -= flow[e] * std::log(flow[e] / out_mass[g.from[e]]);
    return h;
}

// Hessian of log ρ in θ: the asymptotic covariance of the Y-block counts
// under the edge chain of each top component, averaged over ties.
Eigen::MatrixXd dual_hessian(const BlockGraph &g, const Evaluation &ev) {
    const auto m = static_cast<Eigen::Index>(g.y_blocks.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (const auto &part : ev.top) {
        const auto &edges = g.comp_edges[part.component];
        std::map<int, int> local;
        for (int v : g.comp_vertices[part.component])
            local.emplace(v, static_cast<int>(local.size()));
        const auto n = static_cast<Eigen::Index>(edges.size());
        Eigen::VectorXd mu(n);
        for (Eigen::Index i = 0; i < n; ++i)
            mu(i) = part.flow[edges[i]];
        mu /= mu.sum();
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (g.to[edges[i]] == g.from[edges[j]]) {
                    const int f = edges[j];
                    p(i, j) = ev.weight[f] * part.right(local.at(g.to[f])) /
                              (part.rho * part.right(local.at(g.from[f])));
                }
        Eigen::MatrixXd pi = Eigen::VectorXd::Ones(n) * mu.transpose();
        Eigen::MatrixXd z = (Eigen::MatrixXd::Identity(n, n) - p + pi).partialPivLu().inverse();
        Eigen::MatrixXd dz = mu.asDiagonal() * (z - Eigen::MatrixXd::Identity(n, n));
        Eigen::MatrixXd sigma = Eigen::MatrixXd(mu.asDiagonal()) - mu * mu.transpose() + dz + dz.transpose();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, m);
        for (Eigen::Index i = 0; i < n; ++i)
            a(i, g.image[edges[i]]) = 1.0;
        h += a.transpose() * sigma * a / static_cast<double>(ev.top.size());
    }
    return h;
}

constexpr double kTolerance = 1e-10;
constexpr int kMaxIterations = 100000;

// Damped Newton on the dual with a Levenberg-Marquardt ridge and Armijo
// backtracking. Directions along which the minimum sits at infinity are
// followed with growing steps.
int minimize_dual(const BlockGraph &g, std::vector<double> &theta, Evaluation &ev) {
    ev = evaluate(g, theta);
    const auto m = static_cast<Eigen::Index>(theta.size());
    double ridge = 1e-8;
    int it = 0;
    for (; it < kMaxIterations; ++it) {
        if (residual_of(g, ev) < kTolerance)
            break;
        Eigen::VectorXd grad(m);
        for (Eigen::Index w = 0; w < m; ++w)
            grad(w) = ev.mass[w] - g.nu[w];
        Eigen::MatrixXd h = dual_hessian(g, ev);
        h.diagonal().array() += ridge;
        Eigen::VectorXd dir = -h.ldlt().solve(grad);
        double slope = grad.dot(dir);
        if (!dir.allFinite() || slope >= 0.0) {
            dir = -grad;
            slope = -grad.squaredNorm();
        }
        bool accepted = false;
        for (double eta = 1.0; eta > 1e-12; eta *= 0.5) {
            std::vector<double> trial(theta);
            for (Eigen::Index w = 0; w < m; ++w)
                trial[w] += eta * dir(w);
            auto next = evaluate(g, trial);
            if (std::isfinite(next.dual) && next.dual <= ev.dual + 1e-4 * eta * slope) {
                theta = std::move(trial);
                ev = std::move(next);
                accepted = true;
                ridge = eta == 1.0 ? std::max(ridge * 0.1, 1e-12) : ridge * 4.0;
                break;
            }
        }
        if (!accepted) {
            if (ridge > 1e6)
                break;
            ridge *= 100.0;
        }
    }
    return it;
}

}  // namespace

RelativeEntropyBound relative_entropy_upper_bound(const FactorTriple &t, const MarkovMeasure &nu, int k) {
    if (k < 1)
        throw InputError("order must be at least 1");
    if (nu.size() != t.y_size())
        throw InputError("measure is not on the image alphabet");

    RelativeEntropyBound out;
    std::vector<double> theta;
    std::vector<Word> previous_blocks;
    int total_iterations = 0;
    for (int order = 1; order <= k; ++order) {
        auto g = build_block_graph(t, nu, order);
        // Lift the previous multipliers to the prefix block.
        std::vector<double> start(g.y_blocks.size(), 0.0);
        if (!previous_blocks.empty()) {
            std::map<Word, double> lookup;
            for (std::size_t w = 0; w < previous_blocks.size(); ++w)
                lookup.emplace(previous_blocks[w], theta[w]);
            for (std::size_t w = 0; w < g.y_blocks.size(); ++w)
                start[w] = lookup.at(Word(g.y_blocks[w].begin(), g.y_blocks[w].end() - 1));
        }
        theta = std::move(start);
        Evaluation ev;
        int iterations = minimize_dual(g, theta, ev);
        total_iterations += iterations;
        if (ev.dual < -1e-9)
            throw InputError("ν is not the image of any stationary block measure");
        // Rounding can leave the dual a few ulps below zero.
        const double value = std::max(ev.dual, 0.0);
        out.sequence.push_back(value);
        previous_blocks = g.y_blocks;
        if (order == k) {
            out.k = k;
            out.value = value;
            out.primal_value = conditional_entropy(g, ev.flow);
            out.residual = residual_of(g, ev);
            out.iterations = total_iterations;
            out.blocks = g.edges;
            out.optimizer = ev.flow;
        }
    }
    return out;
}

double uniform_conditional_diagnostic(const FactorTriple &t, const RelativeEntropyBound &bound) {
    const int k = bound.k;
    std::map<Word, double> joint, marginal;
    for (std::size_t e = 0; e < bound.blocks.size(); ++e) {
        if (bound.optimizer[e] <= 0.0)
            continue;
        joint[bound.blocks[e]] += bound.optimizer[e];
        marginal[Word(bound.blocks[e].begin(), bound.blocks[e].end() - 1)] += bound.optimizer[e];
    }

    // Order-k Markov law on windows of length 2k+1, grouped by context and y_0.
    std::map<std::pair<Word, Symbol>, std::map<Symbol, double>> groups;
    Word window;
    auto extend = [&](auto &self, double p) -> void {
        if (static_cast<int>(window.size()) == 2 * k + 1) {
            Word context(window);
            Symbol centre = context[k];
            context.erase(context.begin() + k);
            groups[{context, t.label(centre)}][centre] += p;
            return;
        }
        Word tail(window.end() - k, window.end());
        double base = marginal.at(tail);
        for (Symbol b : t.x().successors(window.back())) {
            tail.push_back(b);
            auto it = joint.find(tail);
            tail.pop_back();
            if (it == joint.end())
                continue;
            window.push_back(b);
            self(self, p * it->second / base);
            window.pop_back();
        }
    };
    for (const auto &[block, p] : joint) {
        window = block;
        extend(extend, p);
    }

    double worst = 0.0;
    for (const auto &[key, law] : groups) {
        const auto &[context, y0] = key;
        Symbol before = context[static_cast<std::size_t>(k - 1)];
        Symbol after = context[static_cast<std::size_t>(k)];
        std::vector<Symbol> admissible;
        for (Symbol a : members(t.preimage(y0)))
            if (t.x().allows(before, a) && t.x().allows(a, after))
                admissible.push_back(a);
        double total = 0.0;
        for (const auto &[a, p] : law)
            total += p;
        if (total <= 0.0)
            continue;
        const double uniform = 1.0 / static_cast<double>(admissible.size());
        double tv = 0.0;
        for (Symbol a : admissible) {
            auto it = law.find(a);
            double q = it == law.end() ? 0.0 : it->second / total;
            tv += std::abs(q - uniform);
        }
        worst = std::max(worst, 0.5 * tv);
    }
    return worst;
}

}  // namespace classdeg
