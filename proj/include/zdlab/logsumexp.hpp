#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace zdlab::num {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

namespace detail {

// Pairwise (fixed binary tree) summation: the reduction order depends only on
// the element count, never on thread scheduling, so repeated runs reduce in
// exactly the same order.
template <typename Access>
double pairwise(const Access& value, std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += value(i);
        return s;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise(value, begin, mid) + pairwise(value, mid, end);
}

}  // namespace detail

inline double pairwise_sum(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return detail::pairwise([&](std::size_t i) { return v[i]; }, 0, v.size());
}

/// log(sum(exp(v_i))) with -inf as the neutral element, accumulated in a
/// fixed tree order.
inline double logsumexp(std::span<const double> v) {
    if (v.empty()) return neg_inf;
    double m = neg_inf;
    for (double x : v) {
        if (std::isnan(x)) return x;
        if (x > m) m = x;
    }
    if (std::isinf(m)) return m;  // all -inf, or a +inf dominates
    const double s =
        detail::pairwise([&](std::size_t i) { return std::exp(v[i] - m); }, 0, v.size());
    return m + std::log(s);
}

inline double logaddexp(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace zdlab::num
