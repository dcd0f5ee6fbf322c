#include "zdlab/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace zdlab::quad {

namespace {

GlRule build_rule(int n) {
    GlRule r;
    r.node.resize(n);
    r.weight.resize(n);
    // Newton iteration on P_n with the Chebyshev-angle initial guess; the
    // recurrence also yields P_n' for the weight formula.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = w;
        r.weight[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.node[n / 2] = 0.0;
    r.log_weight.resize(n);
    for (int i = 0; i < n; ++i) r.log_weight[i] = std::log(r.weight[i]);
    return r;
}

}  // namespace

const GlRule& gl_rule(int n) {
    if (n < 2 || n > 64) throw std::invalid_argument("gl_rule: order must be in [2, 64]");
    static std::mutex mu;
    static std::map<int, GlRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

}  // namespace zdlab::quad
