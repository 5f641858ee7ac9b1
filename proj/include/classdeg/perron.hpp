#pragma once

#include <vector>

namespace classdeg {

using Matrix = std::vector<std::vector<double>>;

struct PerronData {
    double value = 0.0;
    std::vector<double> right;  // sums to 1
    std::vector<double> left;   // normalized so left · right = 1
    int iterations = 0;
};

// Perron root and eigenvectors of an irreducible nonnegative matrix, by
// shifted power iteration.
PerronData perron(const Matrix &a, double tolerance = 1e-13, int max_iterations = 1000000);

}  // namespace classdeg
