#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zdlab/density_models.hpp"

#include "json.hpp"

namespace zdlab {

/// Probe layout for the "eventual" regime: a geometric tail grid in t, a
/// geometric d ladder, and a fixed set of x probes in (0, 1/2). Thresholds
/// that turn finite probes into verdicts are configuration, not constants.
struct ProbeConfig {
    double t_start = 4.0;
    double t_factor = 2.0;
    int n_probes = 12;
    double zero_tol = 1e-12;  // |curvature| below this counts as sign 0

    std::vector<double> d_ladder;          // default 10 * 4^k, k = 0..10
    std::vector<double> x_probes = {0.1, 0.25, 0.4};

    double growth_ratio = 10.0;       // divergent: |gap| last/first must exceed this
    double bounded_variation = 0.10;  // bounded: relative spread on the top half below this
    double gap_zero_tol = 1e-9;       // |gap| below this everywhere counts as identically zero
    double hazard_rel_tol = 1e-8;     // hazard ratio band treated as constant

    std::vector<double> mgf_s;  // default 2^-k, k = 0..6
    double slope_tol = 1e-6;    // slope of log f(t) + s t counted as decisively negative

    static ProbeConfig defaults();
    /// Throws ParamOutOfRange when the layout is inconsistent.
    void validate() const;

    std::vector<double> tail_grid() const;  // t_start * t_factor^k
};

enum class LSign { Plus, Minus, Zero, Undetermined };
enum class DivergenceVerdict { ToPlusInf, ToMinusInf, Bounded, Inconclusive };
enum class HazardTrend { Increasing, Decreasing, Constant, Mixed };
enum class TailClass { Heavy, Light, Undetermined };
enum class Behaviour { TypeI, TypeII, UniformLimit, TheoremInapplicable };

/// Verdict of convergence_diagnostics::pointwise_vanishing, consumable by
/// classify.
enum class PointwiseCertificate { Vanishing, NonVanishing, Inconclusive };

const char* to_string(LSign v);
const char* to_string(DivergenceVerdict v);
const char* to_string(HazardTrend v);
const char* to_string(TailClass v);
const char* to_string(Behaviour v);
const char* to_string(PointwiseCertificate v);

/// Divergence diagnostics at one x probe: the signed gap along the d ladder
/// (entries whose arguments fall outside the support are dropped).
struct DivergenceProbe {
    double x;
    std::vector<double> d_used;
    std::vector<double> gap;
    DivergenceVerdict verdict;
};

struct DivergenceResult {
    std::vector<DivergenceProbe> probes;
    DivergenceVerdict aggregate;
    bool gap_identically_zero;
};

struct ClassificationReport {
    LSign L = LSign::Undetermined;
    DivergenceVerdict divergence = DivergenceVerdict::Inconclusive;
    std::vector<DivergenceProbe> divergence_detail;
    HazardTrend hazard_trend = HazardTrend::Mixed;
    TailClass tail_class = TailClass::Undetermined;
    Behaviour behaviour = Behaviour::TheoremInapplicable;
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
};

/// Empirical sign of (log f)'' on the geometric tail grid.
LSign estimate_L(const DensityModel& m, const ProbeConfig& probe);

/// Signed gap d (rho(dx) - rho(d(1-x))). Throws OutsideSupport when either
/// argument is at or below support_low.
double divergence_gap(const DensityModel& m, double d, double x);

/// Fits |gap| against the d ladder at every x probe.
DivergenceResult check_divergence(const DensityModel& m, const ProbeConfig& probe);

/// Monotonicity of the failure rate f/sf on the tail grid.
HazardTrend hazard_trend(const DensityModel& m, const ProbeConfig& probe);

/// Slope probing of log f(t) + s t over s in probe.mgf_s.
TailClass tail_class(const DensityModel& m, const ProbeConfig& probe = ProbeConfig::defaults());

/// Combines the sub-verdicts. A behaviour verdict requires the divergence
/// condition, except that a supplied Vanishing certificate applies the
/// limit-classification route directly (the power-tail escape hatch).
ClassificationReport classify(const DensityModel& m, const ProbeConfig& probe,
                              std::optional<PointwiseCertificate> certificate = std::nullopt);

}  // namespace zdlab
