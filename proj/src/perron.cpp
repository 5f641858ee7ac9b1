#include "classdeg/perron.hpp"

#include "classdeg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace classdeg {

namespace {

std::vector<double> iterate(const Matrix &a, bool transpose, double tolerance, int max_iterations, double &value,
                            int &iterations) {
    const std::size_t n = a.size();
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
    double estimate = 1.0;
    for (iterations = 0; iterations < max_iterations; ++iterations) {
        // (A + estimate·I) keeps the iteration aperiodic.
        for (std::size_t i = 0; i < n; ++i) {
            double acc = estimate * x[i];
            for (std::size_t j = 0; j < n; ++j)
                acc += (transpose ? a[j][i] : a[i][j]) * x[j];
            y[i] = acc;
        }
        double total = 0.0;
        for (double v : y)
            total += v;
        double next_estimate = total - estimate;
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= total;
            change = std::max(change, std::abs(y[i] - x[i]));
        }
        x.swap(y);
        bool settled = change < tolerance && std::abs(next_estimate - estimate) <= tolerance * std::max(1.0, next_estimate);
        estimate = std::max(next_estimate, 1e-300);
        if (settled)
            break;
    }
    value = estimate;
    return x;
}

}  // namespace

PerronData perron(const Matrix &a, double tolerance, int max_iterations) {
    if (a.empty())
        throw InputError("empty matrix");
    PerronData out;
    int left_iterations = 0;
    double left_value = 0.0;
    out.right = iterate(a, false, tolerance, max_iterations, out.value, out.iterations);
    out.left = iterate(a, true, tolerance, max_iterations, left_value, left_iterations);
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        dot += out.left[i] * out.right[i];
    for (double &v : out.left)
        v /= dot;
    out.iterations = std::max(out.iterations, left_iterations);
    return out;
}

}  // namespace classdeg
