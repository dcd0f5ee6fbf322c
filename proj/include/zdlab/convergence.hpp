#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "zdlab/classifier.hpp"
#include "zdlab/conditional_density.hpp"
#include "zdlab/density_models.hpp"

#include "json.hpp"

namespace zdlab {

enum class LadderVerdict { TendsToTypeI, TendsToTypeII, Stationary, Inconclusive };
const char* to_string(LadderVerdict v);

/// Thresholds for ladder verdicts; configuration with documented defaults.
struct LadderConfig {
    double mass_threshold = 0.95;          // final window mass for a Type verdict
    double stationary_variation = 0.01;    // all masses move less than this: Stationary
    double vanish_ratio = 1e-3;            // pointwise: final below this fraction of initial
    QuadConfig quad;
};

/// Window-mass and pointwise-density profile of the law of Z_d along a
/// geometric d ladder.
struct ConvergenceLadder {
    std::vector<double> d_values;
    double epsilon = 0.0;
    std::vector<double> endpoint_mass;  // P(Z_d in [0,eps) U (1-eps,1])
    std::vector<double> midpoint_mass;  // P(|Z_d - 1/2| < eps)
    std::vector<double> x_probes;
    std::vector<std::vector<double>> pointwise;  // [d index][x probe index] = f_{Z_d}(x)
    LadderVerdict verdict = LadderVerdict::Inconclusive;
    std::string model_spec;

    /// CSV: `d,endpoint_mass,midpoint_mass,fzd_at_<x>...`.
    void write_csv(std::ostream& os) const;
    nlohmann::json summary_json() const;
};

/// Endpoint and midpoint window masses at one d.
std::pair<double, double> mass_profile(const DensityModel& m, double d, double eps,
                                       const QuadConfig& qc = {});

ConvergenceLadder convergence_ladder(const DensityModel& m, std::vector<double> d_values,
                                     double eps, std::vector<double> x_probes,
                                     const LadderConfig& cfg = {});

/// Checks f_{Z_d}(x) -> 0 along the ladder at every probe; the certificate
/// feeds classify's direct route.
PointwiseCertificate pointwise_vanishing(const DensityModel& m, std::vector<double> x_probes,
                                         std::vector<double> d_values,
                                         const LadderConfig& cfg = {});

/// Sup distance between f_{Z_d} and the Beta(a,a) density over an interior
/// grid; Gamma models only (throws WrongFamily otherwise).
double beta_distance(const DensityModel& gamma_model, double d, int grid_n,
                     const QuadConfig& qc = {});

/// P(X1 + X2 > x) / P(X1 > x), both sides in log space. When the tail is too
/// small for exp() the linear ratio is +inf/0-free only in log form.
struct SubexpRatio {
    double x = 0.0;
    double log_num = 0.0;
    double log_den = 0.0;
    bool tail_too_small = false;  // log_den < -700: use log_ratio, not ratio

    double log_ratio() const { return log_num - log_den; }
    double ratio() const { return std::exp(log_ratio()); }
};

SubexpRatio subexp_ratio(const DensityModel& m, double x, const QuadConfig& qc = {});

struct TailRatio {
    double x;
    double log_ratio;
    double ratio;
};

/// sf_num(x) / sf_den(x) along increasing x values.
std::vector<TailRatio> tail_domination_ratio(const DensityModel& num, const DensityModel& den,
                                             const std::vector<double>& x_values);

}  // namespace zdlab
