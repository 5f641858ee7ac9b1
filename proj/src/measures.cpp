#include "classdeg/measures.hpp"

#include "classdeg/errors.hpp"
#include "classdeg/factor_code.hpp"
#include "classdeg/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace classdeg {

MeasureTable parse_measure(std::string_view text) {
    MeasureTable table;
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::vector<int> row_lines;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool have_states = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(line_no, "expected ':'");
        std::istringstream head(line.substr(0, colon));
        std::string key, state, extra;
        head >> key;
        std::istringstream body(line.substr(colon + 1));
        if (key == "states") {
            if (have_states)
                throw ParseError(line_no, "duplicate states line");
            if (head >> extra)
                throw ParseError(line_no, "malformed states line");
            std::string tok;
            while (body >> tok) {
                if (std::find(table.states.begin(), table.states.end(), tok) != table.states.end())
                    throw ParseError(line_no, "duplicate state '" + tok + "'");
                table.states.push_back(tok);
            }
            if (table.states.empty())
                throw ParseError(line_no, "no states");
            have_states = true;
        } else if (key == "row") {
            if (!(head >> state) || (head >> extra))
                throw ParseError(line_no, "expected 'row <state>:'");
            std::vector<double> values;
            std::string tok;
            while (body >> tok) {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(tok, &used);
                } catch (const std::exception &) {
                    used = 0;
                }
                if (used != tok.size() || !std::isfinite(v))
                    throw ParseError(line_no, "bad probability '" + tok + "'");
                if (v < 0.0)
                    throw ParseError(line_no, "negative probability");
                values.push_back(v);
            }
            rows.emplace_back(state, std::move(values));
            row_lines.push_back(line_no);
        } else {
            throw ParseError(line_no, "unknown line '" + key + "'");
        }
    }
    if (!have_states)
        throw InputError("missing states line");
    table.rows.assign(table.states.size(), {});
    std::vector<bool> seen(table.states.size(), false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto it = std::find(table.states.begin(), table.states.end(), rows[r].first);
        if (it == table.states.end())
            throw ParseError(row_lines[r], "unknown state '" + rows[r].first + "'");
        auto i = static_cast<std::size_t>(it - table.states.begin());
        if (seen[i])
            throw ParseError(row_lines[r], "duplicate row for '" + rows[r].first + "'");
        if (rows[r].second.size() != table.states.size())
            throw ParseError(row_lines[r], "row has the wrong number of entries");
        double sum = 0.0;
        for (double v : rows[r].second)
            sum += v;
        if (std::abs(sum - 1.0) > 1e-9)
            throw ParseError(row_lines[r], "row does not sum to 1");
        for (double &v : rows[r].second)
            v /= sum;
        table.rows[i] = std::move(rows[r].second);
        seen[i] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw InputError("missing row for state '" + table.states[i] + "'");
    return table;
}

MeasureTable read_measure_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_measure(buf.str());
}

double MarkovMeasure::block_probability(const Word &w) const {
    if (w.empty())
        return 1.0;
    double p = stationary[w.front()];
    for (std::size_t k = 1; k < w.size() && p > 0.0; ++k)
        p *= kernel[w[k - 1]][w[k]];
    return p;
}

BlockSupport MarkovMeasure::support() const {
    BlockSupport s;
    const auto n = static_cast<std::size_t>(size());
    s.start.assign(n, false);
    s.step.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        s.start[i] = stationary[i] > 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s.step[i][j] = kernel[i][j] > 0.0;
    }
    return s;
}

MarkovMeasure make_markov_measure(const Sft &base, Matrix kernel) {
    const auto n = static_cast<std::size_t>(base.size());
    if (kernel.size() != n)
        throw InputError("kernel size does not match the alphabet");
    Adjacency adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (kernel[i].size() != n)
            throw InputError("kernel is not square");
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (kernel[i][j] < 0.0)
                throw InputError("negative transition probability");
            if (kernel[i][j] > 0.0) {
                if (!base.allows(static_cast<Symbol>(i), static_cast<Symbol>(j)))
                    throw InputError("positive probability on a forbidden transition " + base.name(static_cast<Symbol>(i)) +
                                     ">" + base.name(static_cast<Symbol>(j)));
                adj[i].push_back(static_cast<int>(j));
            }
            sum += kernel[i][j];
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw InputError("kernel row does not sum to 1");
    }

    auto comps = strongly_connected_components(adj);
    std::vector<int> closed;
    for (int c = 0; c < comps.count(); ++c) {
        bool leaves = false;
        for (int v : comps.members[c])
            for (int w : adj[v])
                leaves = leaves || comps.component_of[w] != c;
        if (!leaves)
            closed.push_back(c);
    }
    if (closed.size() != 1)
        throw InputError("measure is not ergodic (" + std::to_string(closed.size()) + " closed classes)");

    const auto &cls = comps.members[closed.front()];
    const auto m = static_cast<Eigen::Index>(cls.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c)
            a(r, c) = kernel[cls[c]][cls[r]] - (r == c ? 1.0 : 0.0);
    a.row(m - 1).setOnes();
    b(m - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(b);

    MarkovMeasure out{base, std::move(kernel), std::vector<double>(n, 0.0)};
    for (Eigen::Index r = 0; r < m; ++r)
        out.stationary[cls[r]] = std::max(pi(r), 0.0);
    double total = 0.0;
    for (double v : out.stationary)
        total += v;
    for (double &v : out.stationary)
        v /= total;
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += out.stationary[i] * out.kernel[i][j];
        if (std::abs(acc - out.stationary[j]) > 1e-10)
            throw Error("stationary vector failed to converge");
    }
    return out;
}

namespace {

// Reorders table rows into the order of `names`.
Matrix aligned_kernel(const std::vector<std::string> &names, const MeasureTable &table) {
    std::set<std::string> want(names.begin(), names.end()), have(table.states.begin(), table.states.end());
    if (want != have)
        throw InputError("measure states do not match the alphabet");
    std::vector<std::size_t> pos;
    for (const auto &name : names)
        pos.push_back(static_cast<std::size_t>(std::find(table.states.begin(), table.states.end(), name) - table.states.begin()));
    Matrix kernel(names.size(), std::vector<double>(names.size()));
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            kernel[i][j] = table.rows[pos[i]][pos[j]];
    return kernel;
}

}  // namespace

MarkovMeasure measure_on_x(const Sft &x, const MeasureTable &table) {
    return make_markov_measure(x, aligned_kernel(x.alphabet(), table));
}

MarkovMeasure measure_on_image(const FactorTriple &t, const MeasureTable &table) {
    Matrix kernel = aligned_kernel(t.y_alphabet(), table);
    std::vector<std::pair<Symbol, Symbol>> edges;
    for (std::size_t i = 0; i < kernel.size(); ++i)
        for (std::size_t j = 0; j < kernel.size(); ++j)
            if (kernel[i][j] > 0.0)
                edges.emplace_back(static_cast<Symbol>(i), static_cast<Symbol>(j));
    auto nu = make_markov_measure(Sft(t.y_alphabet(), edges), std::move(kernel));

    // Every word of positive measure must be read by some path of X.
    std::set<std::pair<Symbol, SymbolSet>> seen;
    std::vector<std::pair<Symbol, SymbolSet>> stack;
    for (Symbol c = 0; c < t.y_size(); ++c)
        if (nu.stationary[c] > 0.0 && seen.emplace(c, t.preimage(c)).second)
            stack.emplace_back(c, t.preimage(c));
    while (!stack.empty()) {
        auto [c, f] = stack.back();
        stack.pop_back();
        for (Symbol d = 0; d < t.y_size(); ++d) {
            if (nu.kernel[c][d] <= 0.0)
                continue;
            auto next = forward_step(t, f, d);
            if (next.none())
                throw InputError("ν inconsistent with image");
            if (seen.emplace(d, next).second)
                stack.emplace_back(d, next);
        }
    }
    return nu;
}

double entropy_rate(const MarkovMeasure &m) {
    double h = 0.0;
    for (int i = 0; i < m.size(); ++i)
        for (double p : m.kernel[i])
            if (p > 0.0)
                h -= m.stationary[i] * p * std::log(p);
    return h;
}

namespace {

Matrix adjacency_matrix(const Sft &x) {
    const auto n = static_cast<std::size_t>(x.size());
    Matrix a(n, std::vector<double>(n, 0.0));
    for (auto [s, e] : x.transitions())
        a[s][e] = 1.0;
    return a;
}

}  // namespace

MarkovMeasure parry_measure(const Sft &x) {
    if (!is_irreducible(x))
        throw PreconditionError("parry measure needs an irreducible shift");
    auto pd = perron(adjacency_matrix(x));
    const auto n = static_cast<std::size_t>(x.size());
    Matrix kernel(n, std::vector<double>(n, 0.0));
    for (auto [i, j] : x.transitions())
        kernel[i][j] = pd.right[j] / (pd.value * pd.right[i]);
    for (auto &row : kernel) {
        double sum = 0.0;
        for (double v : row)
            sum += v;
        for (double &v : row)
            v /= sum;
    }
    return make_markov_measure(x, std::move(kernel));
}

double topological_entropy(const Sft &x) {
    Adjacency adj(static_cast<std::size_t>(x.size()));
    for (Symbol s = 0; s < x.size(); ++s)
        adj[s] = x.successors(s);
    auto comps = strongly_connected_components(adj);
    double best = 0.0;
    for (int c = 0; c < comps.count(); ++c) {
        if (!comps.nontrivial[c])
            continue;
        const auto &mem = comps.members[c];
        Matrix a(mem.size(), std::vector<double>(mem.size(), 0.0));
        for (std::size_t i = 0; i < mem.size(); ++i)
            for (std::size_t j = 0; j < mem.size(); ++j)
                a[i][j] = x.allows(mem[i], mem[j]) ? 1.0 : 0.0;
        best = std::max(best, std::log(perron(a).value));
    }
    return best;
}

int pqs_bound(const FactorTriple &t, const MarkovMeasure &nu) {
    if (nu.size() != t.y_size())
        throw InputError("measure is not on the image alphabet");
    int best = t.x_size();
    for (Symbol c = 0; c < t.y_size(); ++c)
        if (nu.stationary[c] > 0.0)
            best = std::min(best, static_cast<int>(t.preimage(c).count()));
    return best;
}

DepthSearchResult class_count_for_measure(const FactorTriple &t, const MarkovMeasure &nu, int horizon) {
    if (nu.size() != t.y_size())
        throw InputError("measure is not on the image alphabet");
    return find_minimal_transition_block(t, horizon, nu.support());
}

}  // namespace classdeg
