#pragma once

#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "zdlab/parallel.hpp"
#include "zdlab/quadrature.hpp"

namespace zdlab {

struct ModelParams;

enum class Family {
    Gamma,          // f(t) = C t^{a-1} e^{-t},            t > 0, a > 0
    WeibullType,    // f(t) = C e^{-t^alpha},              t > 0, alpha > 0
    LognormalType,  // f(t) = C t^{-1} e^{-(log t)^2},     t > t0 > 0
    ParetoTail,     // f(t) = (alpha-1) t0^{alpha-1} t^{-alpha}, t >= t0, alpha > 1
    ExpSqrtPlus,    // f(t) = C e^{-t + sqrt t},           t > 0
    ExpSqrtMinus,   // f(t) = C e^{-t - sqrt t},           t > 0
    Exponential,    // f(t) = e^{-t},                      t > 0
};

/// One point evaluation of a model: abscissa, log density, score f'/f and
/// log-curvature (log f)''.
struct LogDensityEval {
    double t;
    double log_f;
    double rho;
    double curvature;
};

/// A parametric density with closed-form log density, score and curvature.
/// The log normalizing constant is computed by quadrature on first use and
/// cached (at most once; copies share the cache). Immutable after
/// construction and safe for concurrent reads.
class DensityModel {
  public:
    static DensityModel gamma(double a);
    static DensityModel weibull_type(double alpha);
    static DensityModel lognormal_type(double t0 = 0.01);
    static DensityModel pareto_tail(double alpha, double t0);
    static DensityModel exp_sqrt_plus();
    static DensityModel exp_sqrt_minus();
    static DensityModel exponential();

    Family family() const { return family_; }
    double support_low() const { return support_low_; }

    /// Shape/exponent parameter where the family has one (Gamma a,
    /// WeibullType/ParetoTail alpha); NaN otherwise.
    double shape() const { return shape_; }
    /// Support threshold t0 for ParetoTail/LognormalType; NaN otherwise.
    double threshold() const { return t0_; }

    /// Closed-form log density without the normalizing constant; -inf below
    /// the support.
    double log_density_unnorm(double t) const;
    /// log C + unnormalized log density; -inf below the support.
    double log_density(double t) const;
    /// rho(t) = f'(t)/f(t). Throws OutsideSupport for t <= support_low.
    double score(double t) const;
    /// (log f)''(t). Throws OutsideSupport for t <= support_low.
    double curvature(double t) const;
    /// All three closed forms at once.
    LogDensityEval eval(double t) const;

    /// log of the normalizing constant C (lazy, cached).
    double log_norm() const;
    /// log of the upper tail integral log int_x^inf f. Throws OutsideSupport
    /// for x < support_low.
    double log_sf(double x) const;
    /// Failure rate f(x)/sf(x). Throws OutsideSupport for x < support_low.
    double hazard(double x) const;

    std::string family_name() const;
    /// Canonical single-token spec, e.g. "gamma:a=2".
    std::string spec_string() const;

    quad::Options quad_options() const { return quad_; }

  private:
    DensityModel(Family f, double shape, double t0, double support_low);
    friend DensityModel make_model(Family family, const ModelParams& params);

    struct NormCache {
        std::once_flag flag;
        double value = 0.0;
    };

    Family family_;
    double shape_;
    double t0_;
    double support_low_;
    quad::Options quad_{};
    std::shared_ptr<NormCache> norm_ = std::make_shared<NormCache>();
};

/// Parameter bag for make_model; fields not used by the family are ignored.
/// NaN marks a parameter as not supplied.
struct ModelParams {
    double a = std::numeric_limits<double>::quiet_NaN();      // Gamma shape
    double alpha = std::numeric_limits<double>::quiet_NaN();  // WeibullType / ParetoTail exponent
    double t0 = std::numeric_limits<double>::quiet_NaN();     // ParetoTail / LognormalType threshold
};

/// Validates parameters and constructs the model. Throws ParamOutOfRange
/// naming the offending parameter.
DensityModel make_model(Family family, const ModelParams& params = {});

/// Parses a single-token spec such as "gamma:a=2", "weibull:alpha=0.5",
/// "lognormal:t0=0.01", "pareto:alpha=2,t0=1", "expsqrt:+", "expsqrt:-",
/// "exp". Throws ParseError.
DensityModel parse_model_spec(const std::string& spec);

/// Static description of one family for the CLI listing.
struct FamilyInfo {
    std::string name;
    std::string params;
    std::string support;
    std::string density;
};

std::vector<FamilyInfo> list_families();

}  // namespace zdlab
