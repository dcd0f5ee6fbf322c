#pragma once

#include <functional>
#include <span>
#include <vector>

#include "zdlab/gauss_legendre.hpp"
#include "zdlab/parallel.hpp"

namespace zdlab::quad {

/// Integrand supplied as t -> log f(t); -inf marks points of zero mass.
using LogFn = std::function<double(double)>;

struct Options {
    double rel_tol = 1e-12;       // target relative error of the integral
    int gl_points = 8;            // nodes per panel
    int max_depth = 80;           // dyadic split depth per initial panel
    std::size_t max_panels = 60000;
    int init_uniform = 64;        // uniform edges laid over [a, b] up front
    int seed_levels = 48;         // dyadic cluster depth around each seed
};

/// log of the Gauss-Legendre approximation of int_a^b exp(log_f) on a single
/// panel, accumulated as a log-sum-exp.
double panel_log_integral(const LogFn& log_f, double a, double b, const GlRule& rule);

/// Kernel: evaluates the single-panel rule for every [edges[i], edges[i+1]]
/// and writes the log contribution to out[i]. out must have edges.size()-1
/// slots. Both policies produce bit-identical results.
void eval_panels(const LogFn& log_f, std::span<const double> edges, const GlRule& rule,
                 std::span<double> out, exec::Policy policy);

/// log of int_a^b exp(log_f), computed by adaptive composite Gauss-Legendre
/// panels with log-sum-exp accumulation in a fixed tree order. The initial
/// paneling clusters dyadically around each seed point so that features at
/// relative scale 2^-seed_levels near a seed are resolved before refinement
/// starts. Returns -inf when the integrand carries no mass.
double log_integrate(const LogFn& log_f, double a, double b, std::span<const double> seeds,
                     const Options& opt = {}, exec::Policy policy = exec::Policy::Parallel);

/// log of int_a^inf exp(log_f). The head [a, a+1] is integrated directly; the
/// tail is mapped through t = a + e^v and cut off once its log integrand has
/// dropped 80 nats below its peak. Throws NonFinite when no finite cutoff
/// exists within double range (tail too heavy or divergent).
double log_integrate_upper(const LogFn& log_f, double a, const Options& opt = {},
                           exec::Policy policy = exec::Policy::Parallel);

}  // namespace zdlab::quad
