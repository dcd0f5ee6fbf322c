#pragma once

#include <vector>

namespace zdlab::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GlRule {
    std::vector<double> node;
    std::vector<double> weight;
    std::vector<double> log_weight;
};

/// Returns the cached n-point rule (2 <= n <= 64). Thread safe.
const GlRule& gl_rule(int n);

}  // namespace zdlab::quad
