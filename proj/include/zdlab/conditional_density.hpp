#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "zdlab/density_models.hpp"
#include "zdlab/parallel.hpp"
#include "zdlab/quadrature.hpp"

namespace zdlab {

/// Quadrature configuration for conditional-density evaluations.
struct QuadConfig {
    double rel_tol = 1e-12;
    int gl_points = 8;
    int init_panels = 512;  // initial edges laid over the integration window
    int max_depth = 80;
    std::size_t max_panels = 60000;

    quad::Options to_options() const {
        quad::Options o;
        o.rel_tol = rel_tol;
        o.gl_points = gl_points;
        o.init_uniform = init_panels;
        o.max_depth = max_depth;
        o.max_panels = max_panels;
        return o;
    }
};

/// Tabulated law of Z_d on a mirror-symmetric grid that always contains 1/2.
struct ConditionalDensityTable {
    double d = 0.0;
    std::string model_spec;
    std::vector<double> x;
    std::vector<double> log_pdf;
    std::vector<double> pdf;
    double log_partition = 0.0;

    /// CSV with a `#` comment header carrying d, model and log_partition,
    /// then rows `x,log_pdf,pdf`.
    void write_csv(std::ostream& os) const;
};

/// The law of Z_d = X1/d | {X1 + X2 = d} for one (model, d), evaluated in log
/// space end to end. The log partition (without the model's normalizing
/// constant, which cancels) is computed once at construction.
///
/// Throws EmptySupport when d <= 2 * support_low.
class ConditionalDensity {
  public:
    ConditionalDensity(DensityModel model, double d, QuadConfig qc = {},
                       exec::Policy policy = exec::Policy::Parallel);

    const DensityModel& model() const { return model_; }
    double d() const { return d_; }
    /// Clipped support window [support_low/d, 1 - support_low/d].
    double window_low() const { return lo_; }
    double window_high() const { return hi_; }

    /// log of the denominator of the conditional density, including the
    /// model's normalizing constant (i.e. with f normalized).
    double log_partition() const;

    /// log f_{Z_d}(x); -inf outside the clipped window. Stable for d up to at
    /// least 1e6 (all arithmetic in log space).
    double log_pdf(double x) const;
    double pdf(double x) const { return std::exp(log_pdf(x)); }

    /// f_{Z_d}'(x) = d f_{Z_d}(x) (rho(dx) - rho(d(1-x))). Throws
    /// OutsideWindow unless x is in (0,1) with dx and d(1-x) above the
    /// support. Exactly zero at x = 1/2.
    double pdf_derivative(double x) const;

    /// P(Z_d <= x); 0 below the window, 1 above it.
    double cdf(double x) const;

    /// Symmetric table with points clustered near 0, 1/2 and 1; grid points
    /// are dyadic rationals so mirrored pairs evaluate bit-identically.
    ConditionalDensityTable grid(int n_points, double refine_power = 3.0) const;

  private:
    double log_ratio_unnorm(double x) const;  // log f(dx) + log f(d(1-x)) - logZ, all unnormalized

    DensityModel model_;
    double d_;
    double lo_, hi_;
    double log_partition_unnorm_;
    QuadConfig qc_;
    exec::Policy policy_;
};

/// Builds the symmetric dyadic grid on [0,1] used by ConditionalDensity::grid;
/// exposed for reuse by diagnostics. Contains 0, 1/2, 1 and exact mirror
/// pairs; points cluster near 0, 1/2 and 1 with the given power.
std::vector<double> symmetric_grid(int n_points, double refine_power = 3.0);

// Free-function forms.
double log_partition(const DensityModel& m, double d, const QuadConfig& qc = {});
double log_pdf_zd(const DensityModel& m, double d, double x, const QuadConfig& qc = {});
double pdf_zd_derivative(const DensityModel& m, double d, double x, const QuadConfig& qc = {});
double cdf_zd(const DensityModel& m, double d, double x, const QuadConfig& qc = {});
ConditionalDensityTable pdf_zd_grid(const DensityModel& m, double d, int n_points,
                                    double refine_power = 3.0, const QuadConfig& qc = {});

}  // namespace zdlab
