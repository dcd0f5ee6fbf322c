#include "zdlab/density_models.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "zdlab/errors.hpp"
#include "zdlab/logsumexp.hpp"

namespace zdlab {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
using num::neg_inf;

std::string fmt_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

DensityModel::DensityModel(Family f, double shape, double t0, double support_low)
    : family_(f), shape_(shape), t0_(t0), support_low_(support_low) {}

DensityModel DensityModel::gamma(double a) {
    return make_model(Family::Gamma, {.a = a});
}
DensityModel DensityModel::weibull_type(double alpha) {
    return make_model(Family::WeibullType, {.alpha = alpha});
}
DensityModel DensityModel::lognormal_type(double t0) {
    return make_model(Family::LognormalType, {.t0 = t0});
}
DensityModel DensityModel::pareto_tail(double alpha, double t0) {
    return make_model(Family::ParetoTail, {.alpha = alpha, .t0 = t0});
}
DensityModel DensityModel::exp_sqrt_plus() {
    return make_model(Family::ExpSqrtPlus);
}
DensityModel DensityModel::exp_sqrt_minus() {
    return make_model(Family::ExpSqrtMinus);
}
DensityModel DensityModel::exponential() {
    return make_model(Family::Exponential);
}

double DensityModel::log_density_unnorm(double t) const {
    switch (family_) {
        case Family::Gamma:
            if (t < 0.0) return neg_inf;
            if (t == 0.0) {
                if (shape_ == 1.0) return 0.0;
                return shape_ > 1.0 ? neg_inf : std::numeric_limits<double>::infinity();
            }
            return (shape_ - 1.0) * std::log(t) - t;
        case Family::WeibullType:
            if (t < 0.0) return neg_inf;
            return -std::pow(t, shape_);
        case Family::LognormalType: {
            if (t < t0_) return neg_inf;
            const double lt = std::log(t);
            return -lt - lt * lt;
        }
        case Family::ParetoTail:
            if (t < t0_) return neg_inf;
            return -shape_ * std::log(t);
        case Family::ExpSqrtPlus:
            if (t < 0.0) return neg_inf;
            return -t + std::sqrt(t);
        case Family::ExpSqrtMinus:
            if (t < 0.0) return neg_inf;
            return -t - std::sqrt(t);
        case Family::Exponential:
            if (t < 0.0) return neg_inf;
            return -t;
    }
    return neg_inf;
}

double DensityModel::log_density(double t) const {
    const double u = log_density_unnorm(t);
    return u == neg_inf ? neg_inf : u + log_norm();
}

double DensityModel::score(double t) const {
    if (!(t > support_low_))
        throw OutsideSupport("score: t = " + fmt_param(t) + " is not above support_low = " +
                             fmt_param(support_low_));
    switch (family_) {
        case Family::Gamma:
            return (shape_ - 1.0) / t - 1.0;
        case Family::WeibullType:
            return -shape_ * std::pow(t, shape_ - 1.0);
        case Family::LognormalType:
            return (-1.0 - 2.0 * std::log(t)) / t;
        case Family::ParetoTail:
            return -shape_ / t;
        case Family::ExpSqrtPlus:
            return -1.0 + 0.5 / std::sqrt(t);
        case Family::ExpSqrtMinus:
            return -1.0 - 0.5 / std::sqrt(t);
        case Family::Exponential:
            return -1.0;
    }
    return nan_v;
}

double DensityModel::curvature(double t) const {
    if (!(t > support_low_))
        throw OutsideSupport("curvature: t = " + fmt_param(t) + " is not above support_low = " +
                             fmt_param(support_low_));
    switch (family_) {
        case Family::Gamma:
            return -(shape_ - 1.0) / (t * t);
        case Family::WeibullType:
            return -shape_ * (shape_ - 1.0) * std::pow(t, shape_ - 2.0);
        case Family::LognormalType:
            return (2.0 * std::log(t) - 1.0) / (t * t);
        case Family::ParetoTail:
            return shape_ / (t * t);
        case Family::ExpSqrtPlus:
            return -0.25 * std::pow(t, -1.5);
        case Family::ExpSqrtMinus:
            return 0.25 * std::pow(t, -1.5);
        case Family::Exponential:
            return 0.0;
    }
    return nan_v;
}

LogDensityEval DensityModel::eval(double t) const {
    return {t, log_density(t), score(t), curvature(t)};
}

double DensityModel::log_norm() const {
    std::call_once(norm_->flag, [this] {
        if (family_ == Family::Exponential) {
            norm_->value = 0.0;  // e^{-t} is already normalized
            return;
        }
        const double log_total = quad::log_integrate_upper(
            [this](double t) { return log_density_unnorm(t); }, support_low_, quad_);
        if (!std::isfinite(log_total))
            throw NonFinite("log_norm: normalization integral is not finite for " + spec_string());
        norm_->value = -log_total;
    });
    return norm_->value;
}

double DensityModel::log_sf(double x) const {
    if (!(x >= support_low_))
        throw OutsideSupport("log_sf: x = " + fmt_param(x) + " is below support_low = " +
                             fmt_param(support_low_));
    const double log_tail = quad::log_integrate_upper(
        [this](double t) { return log_density_unnorm(t); }, x, quad_);
    return log_tail + log_norm();
}

double DensityModel::hazard(double x) const {
    return std::exp(log_density(x) - log_sf(x));
}

std::string DensityModel::family_name() const {
    switch (family_) {
        case Family::Gamma: return "gamma";
        case Family::WeibullType: return "weibull";
        case Family::LognormalType: return "lognormal";
        case Family::ParetoTail: return "pareto";
        case Family::ExpSqrtPlus: return "expsqrt:+";
        case Family::ExpSqrtMinus: return "expsqrt:-";
        case Family::Exponential: return "exp";
    }
    return "?";
}

std::string DensityModel::spec_string() const {
    switch (family_) {
        case Family::Gamma: return "gamma:a=" + fmt_param(shape_);
        case Family::WeibullType: return "weibull:alpha=" + fmt_param(shape_);
        case Family::LognormalType: return "lognormal:t0=" + fmt_param(t0_);
        case Family::ParetoTail:
            return "pareto:alpha=" + fmt_param(shape_) + ",t0=" + fmt_param(t0_);
        default: return family_name();
    }
}

DensityModel make_model(Family family, const ModelParams& params) {
    switch (family) {
        case Family::Gamma:
            if (!(params.a > 0.0) || !std::isfinite(params.a))
                throw ParamOutOfRange("gamma: parameter a must be > 0 (got " + fmt_param(params.a) + ")");
            return DensityModel(family, params.a, nan_v, 0.0);
        case Family::WeibullType:
            if (!(params.alpha > 0.0) || !std::isfinite(params.alpha))
                throw ParamOutOfRange("weibull: parameter alpha must be > 0 (got " +
                                      fmt_param(params.alpha) + ")");
            return DensityModel(family, params.alpha, nan_v, 0.0);
        case Family::LognormalType: {
            const double t0 = std::isnan(params.t0) ? 0.01 : params.t0;
            if (!(t0 > 0.0) || !std::isfinite(t0))
                throw ParamOutOfRange("lognormal: parameter t0 must be > 0 (got " +
                                      fmt_param(t0) + ")");
            return DensityModel(family, nan_v, t0, t0);
        }
        case Family::ParetoTail:
            if (!(params.alpha > 1.0) || !std::isfinite(params.alpha))
                throw ParamOutOfRange("pareto: parameter alpha must be > 1 (got " +
                                      fmt_param(params.alpha) + ")");
            if (!(params.t0 > 0.0) || !std::isfinite(params.t0))
                throw ParamOutOfRange("pareto: parameter t0 must be > 0 (got " +
                                      fmt_param(params.t0) + ")");
            return DensityModel(family, params.alpha, params.t0, params.t0);
        case Family::ExpSqrtPlus:
        case Family::ExpSqrtMinus:
        case Family::Exponential:
            return DensityModel(family, nan_v, nan_v, 0.0);
    }
    throw ParamOutOfRange("unknown family");
}

namespace {

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("model spec: cannot parse number '" + s + "' in " + where);
    }
}

}  // namespace

DensityModel parse_model_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string fam = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    ModelParams p;
    bool saw_t0 = false;
    if (fam != "expsqrt") {
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            const std::string kv = rest.substr(pos, comma - pos);
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ParseError("model spec: expected key=value, got '" + kv + "' in '" + spec + "'");
            const std::string key = kv.substr(0, eq);
            const double val = parse_double(kv.substr(eq + 1), spec);
            if (key == "a")
                p.a = val;
            else if (key == "alpha")
                p.alpha = val;
            else if (key == "t0") {
                p.t0 = val;
                saw_t0 = true;
            } else
                throw ParseError("model spec: unknown parameter '" + key + "' in '" + spec + "'");
            pos = comma + 1;
        }
    }

    if (fam == "gamma") {
        if (std::isnan(p.a)) throw ParseError("model spec: gamma requires a=<value>");
        return make_model(Family::Gamma, p);
    }
    if (fam == "weibull") {
        if (std::isnan(p.alpha)) throw ParseError("model spec: weibull requires alpha=<value>");
        return make_model(Family::WeibullType, p);
    }
    if (fam == "lognormal") return make_model(Family::LognormalType, p);
    if (fam == "pareto") {
        if (std::isnan(p.alpha) || !saw_t0)
            throw ParseError("model spec: pareto requires alpha=<value>,t0=<value>");
        return make_model(Family::ParetoTail, p);
    }
    if (fam == "expsqrt") {
        if (rest == "+") return make_model(Family::ExpSqrtPlus);
        if (rest == "-") return make_model(Family::ExpSqrtMinus);
        throw ParseError("model spec: expsqrt takes '+' or '-', got '" + rest + "'");
    }
    if (fam == "exp") {
        if (!rest.empty()) throw ParseError("model spec: exp takes no parameters");
        return make_model(Family::Exponential);
    }
    throw ParseError("model spec: unknown family '" + fam + "'");
}

std::vector<FamilyInfo> list_families() {
    return {
        {"gamma", "a>0", "(0,inf)", "C t^(a-1) exp(-t)"},
        {"weibull", "alpha>0", "(0,inf)", "C exp(-t^alpha)"},
        {"lognormal", "t0>0 (default 0.01)", "(t0,inf)", "C t^-1 exp(-(log t)^2)"},
        {"pareto", "alpha>1, t0>0", "[t0,inf)", "(alpha-1) t0^(alpha-1) t^-alpha"},
        {"expsqrt", "+ or -", "(0,inf)", "C exp(-t +- sqrt(t))"},
        {"exp", "none", "(0,inf)", "exp(-t)"},
    };
}

}  // namespace zdlab
