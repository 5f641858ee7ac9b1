#pragma once

#include "classdeg/class_degree.hpp"
#include "classdeg/perron.hpp"
#include "classdeg/triple.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace classdeg {

// Contents of a measure file before it is attached to a shift.
struct MeasureTable {
    std::vector<std::string> states;
    Matrix rows;
};

MeasureTable parse_measure(std::string_view text);
MeasureTable read_measure_file(const std::string &path);

struct MarkovMeasure {
    Sft base;
    Matrix kernel;
    std::vector<double> stationary;

    double block_probability(const Word &w) const;
    BlockSupport support() const;
    int size() const { return base.size(); }
};

// Validates the kernel against `base` and solves for the stationary vector.
// Requires exactly one closed class.
MarkovMeasure make_markov_measure(const Sft &base, Matrix kernel);

// ν on X itself; every positive entry must be an allowed transition.
MarkovMeasure measure_on_x(const Sft &x, const MeasureTable &table);
// ν on the Y alphabet of t; every block of positive measure must lie in ℒ(Y).
MarkovMeasure measure_on_image(const FactorTriple &t, const MeasureTable &table);

double entropy_rate(const MarkovMeasure &m);
MarkovMeasure parry_measure(const Sft &x);
double topological_entropy(const Sft &x);

int pqs_bound(const FactorTriple &t, const MarkovMeasure &nu);

// Class degree search over blocks of positive ν-measure.
DepthSearchResult class_count_for_measure(const FactorTriple &t, const MarkovMeasure &nu, int horizon);

struct RelativeEntropyBound {
    int k = 0;
    // Dual value: an upper bound on the relaxation and hence on the fibre entropy.
    double value = 0.0;
    // Conditional entropy of the recovered optimizer.
    double primal_value = 0.0;
    // Largest violation of the image constraints by the optimizer.
    double residual = 0.0;
    int iterations = 0;
    // optimizer[i] is the mass of blocks[i], a (k+1)-block of X.
    std::vector<Word> blocks;
    std::vector<double> optimizer;
    // value at orders 1..k, in order.
    std::vector<double> sequence;
};

// Throws InputError when ν cannot be the image of any stationary block measure.
RelativeEntropyBound relative_entropy_upper_bound(const FactorTriple &t, const MarkovMeasure &nu, int k);

// Largest total-variation distance from uniform of the law of x_0 given its
// order-k context and y_0, over contexts of positive probability.
double uniform_conditional_diagnostic(const FactorTriple &t, const RelativeEntropyBound &optimizer);

}  // namespace classdeg
