#include "zdlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zdlab/errors.hpp"
#include "zdlab/logsumexp.hpp"

namespace zdlab::quad {

using num::logaddexp;
using num::logsumexp;
using num::neg_inf;

double panel_log_integral(const LogFn& log_f, double a, double b, const GlRule& rule) {
    const int n = static_cast<int>(rule.node.size());
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    if (!(half > 0.0)) return neg_inf;
    const double log_half = std::log(half);
    double terms[64];
    for (int k = 0; k < n; ++k) {
        double t = mid + half * rule.node[k];
        // At ulp-scale panel widths the node can round onto an endpoint;
        // integrable endpoint singularities must never be evaluated exactly.
        if (t <= a) t = std::nextafter(a, b);
        if (t >= b) t = std::nextafter(b, a);
        const double lf = log_f(t);
        terms[k] = (lf == neg_inf) ? neg_inf : lf + rule.log_weight[k] + log_half;
    }
    return logsumexp(std::span<const double>(terms, static_cast<std::size_t>(n)));
}

void eval_panels(const LogFn& log_f, std::span<const double> edges, const GlRule& rule,
                 std::span<double> out, exec::Policy policy) {
    const std::size_t n = edges.size() - 1;
    exec::for_index(n, policy,
                    [&](std::size_t i) { out[i] = panel_log_integral(log_f, edges[i], edges[i + 1], rule); });
}

namespace {

struct Segment {
    double a, b;
    double log_fine;  // bisected estimate, used as the running value
    double log_err;   // log |fine - coarse|
    int depth;
};

// log|e^x - e^y| computed without leaving log space.
double log_abs_diff(double x, double y) {
    if (x == neg_inf && y == neg_inf) return neg_inf;
    if (x == neg_inf || y == neg_inf) return std::max(x, y);
    const double d = std::fabs(x - y);
    if (d == 0.0) return neg_inf;
    return std::max(x, y) + std::log(-std::expm1(-d));
}

// Evaluates coarse/fine estimates for a batch of segments (the data-parallel
// kernel of the integrator).
void evaluate_batch(const LogFn& log_f, std::vector<Segment>& segs, std::size_t first,
                    const GlRule& rule, exec::Policy policy) {
    const std::size_t n = segs.size() - first;
    exec::for_index(n, policy, [&](std::size_t i) {
        Segment& s = segs[first + i];
        const double coarse = panel_log_integral(log_f, s.a, s.b, rule);
        const double m = 0.5 * (s.a + s.b);
        const double fine =
            logaddexp(panel_log_integral(log_f, s.a, m, rule), panel_log_integral(log_f, m, s.b, rule));
        s.log_fine = fine;
        s.log_err = log_abs_diff(fine, coarse);
    });
}

std::vector<double> build_edges(double a, double b, std::span<const double> seeds,
                                const Options& opt) {
    const double span = b - a;
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(opt.init_uniform) + seeds.size() * (2 * opt.seed_levels + 1) + 2);
    edges.push_back(a);
    edges.push_back(b);
    for (int k = 1; k < opt.init_uniform; ++k)
        edges.push_back(a + span * (static_cast<double>(k) / opt.init_uniform));
    for (double s : seeds) {
        if (!(s >= a && s <= b)) continue;
        if (s > a && s < b) edges.push_back(s);
        double off = 0.5 * span;
        for (int k = 0; k < opt.seed_levels; ++k, off *= 0.5) {
            const double lo = s - off;
            const double hi = s + off;
            if (lo > a && lo < b) edges.push_back(lo);
            if (hi > a && hi < b) edges.push_back(hi);
        }
    }
    std::sort(edges.begin(), edges.end());
    // Drop edges closer than the splitting resolution limit.
    std::vector<double> dedup;
    dedup.reserve(edges.size());
    dedup.push_back(edges.front());
    const double min_gap = span * 0x1p-60;
    for (double e : edges)
        if (e - dedup.back() > min_gap) dedup.push_back(e);
    if (dedup.back() != b) dedup.back() = b;
    return dedup;
}

bool splittable(const Segment& s, int max_depth) {
    if (s.depth >= max_depth) return false;
    const double m = 0.5 * (s.a + s.b);
    return m > s.a && m < s.b;
}

}  // namespace

double log_integrate(const LogFn& log_f, double a, double b, std::span<const double> seeds,
                     const Options& opt, exec::Policy policy) {
    if (!(b > a)) return neg_inf;
    const GlRule& rule = gl_rule(opt.gl_points);

    const std::vector<double> edges = build_edges(a, b, seeds, opt);
    std::vector<Segment> segs;
    segs.reserve(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        segs.push_back({edges[i], edges[i + 1], 0.0, 0.0, 0});
    evaluate_batch(log_f, segs, 0, rule, policy);

    const double log_tol = std::log(opt.rel_tol);
    std::vector<double> scratch;
    for (int round = 0; round < 400; ++round) {
        scratch.clear();
        for (const Segment& s : segs) scratch.push_back(s.log_fine);
        const double total = logsumexp(scratch);
        if (total == neg_inf) return neg_inf;

        scratch.clear();
        for (const Segment& s : segs) scratch.push_back(s.log_err);
        const double total_err = logsumexp(scratch);
        if (total_err <= total + log_tol) break;

        // Split every segment whose error exceeds its equidistributed share.
        const double threshold = total + log_tol - std::log(static_cast<double>(segs.size()));
        std::vector<std::size_t> pick;
        for (std::size_t i = 0; i < segs.size(); ++i)
            if (segs[i].log_err > threshold && splittable(segs[i], opt.max_depth)) pick.push_back(i);
        if (pick.empty()) break;
        if (segs.size() + pick.size() > opt.max_panels) {
            std::sort(pick.begin(), pick.end(), [&](std::size_t x, std::size_t y) {
                if (segs[x].log_err != segs[y].log_err) return segs[x].log_err > segs[y].log_err;
                return segs[x].a < segs[y].a;
            });
            const std::size_t room = opt.max_panels > segs.size() ? opt.max_panels - segs.size() : 0;
            if (room == 0) break;
            pick.resize(std::min(pick.size(), room));
            std::sort(pick.begin(), pick.end());
        }

        const std::size_t first_child = segs.size();
        for (std::size_t idx : pick) {
            const Segment parent = segs[idx];
            const double m = 0.5 * (parent.a + parent.b);
            segs.push_back({parent.a, m, 0.0, 0.0, parent.depth + 1});
            segs.push_back({m, parent.b, 0.0, 0.0, parent.depth + 1});
        }
        evaluate_batch(log_f, segs, first_child, rule, policy);
        // Remove parents (descending index order keeps the others stable).
        for (auto it = pick.rbegin(); it != pick.rend(); ++it)
            segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(*it));
    }

    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    scratch.clear();
    for (const Segment& s : segs) scratch.push_back(s.log_fine);
    return logsumexp(scratch);
}

double log_integrate_upper(const LogFn& log_f, double a, const Options& opt, exec::Policy policy) {
    const double head_seeds[] = {a};
    const double head = log_integrate(log_f, a, a + 1.0, head_seeds, opt, policy);

    // Tail through t = a + e^v; the transformed log integrand gains +v from
    // the Jacobian.
    const auto tail_fn = [&](double v) {
        const double t = a + std::exp(v);
        if (!std::isfinite(t)) return neg_inf;
        const double lf = log_f(t);
        return lf == neg_inf ? neg_inf : lf + v;
    };
    // Scan for the cutoff: stop once the integrand has dropped 80 nats below
    // the largest value seen.
    const double v_cap = 690.0;  // a + e^690 stays finite in double range
    double peak = neg_inf;
    double v_max = -1.0;
    for (double v = 0.0; v <= v_cap; v += 1.0) {
        const double g = tail_fn(v);
        if (g > peak) peak = g;
        if (peak != neg_inf && (g == neg_inf || g < peak - 80.0)) {
            v_max = v;
            break;
        }
    }
    if (v_max < 0.0) {
        if (peak == neg_inf) return head;  // no tail mass at all
        throw NonFinite("upper integral: tail integrand never decayed within double range");
    }
    const double tail_seeds[] = {0.0};
    const double tail = log_integrate(tail_fn, 0.0, v_max, tail_seeds, opt, policy);
    return logaddexp(head, tail);
}

}  // namespace zdlab::quad
