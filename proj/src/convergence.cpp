#include "zdlab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "zdlab/errors.hpp"
#include "zdlab/logsumexp.hpp"

namespace zdlab {

using num::logaddexp;
using num::neg_inf;

const char* to_string(LadderVerdict v) {
    switch (v) {
        case LadderVerdict::TendsToTypeI: return "TendsToTypeI";
        case LadderVerdict::TendsToTypeII: return "TendsToTypeII";
        case LadderVerdict::Stationary: return "Stationary";
        case LadderVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::pair<double, double> mass_profile(const DensityModel& m, double d, double eps,
                                       const QuadConfig& qc) {
    if (!(eps > 0.0 && eps < 0.25)) throw ParamOutOfRange("mass_profile: eps must be in (0, 1/4)");
    ConditionalDensity cd(m, d, qc);
    const double endpoint = cd.cdf(eps) + (1.0 - cd.cdf(1.0 - eps));
    const double midpoint = cd.cdf(0.5 + eps) - cd.cdf(0.5 - eps);
    return {endpoint, midpoint};
}

namespace {

// Nondecreasing on the top half of the ladder (the "eventual" window).
bool eventually_increasing(const std::vector<double>& v, double tol = 1e-9) {
    if (v.size() < 2) return false;
    for (std::size_t i = std::max<std::size_t>(v.size() / 2, 1); i < v.size(); ++i)
        if (v[i] < v[i - 1] - tol) return false;
    return true;
}

double relative_variation(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double scale = std::max(*hi, 1e-12);
    return (*hi - *lo) / scale;
}

}  // namespace

ConvergenceLadder convergence_ladder(const DensityModel& m, std::vector<double> d_values,
                                     double eps, std::vector<double> x_probes,
                                     const LadderConfig& cfg) {
    for (std::size_t i = 1; i < d_values.size(); ++i)
        if (!(d_values[i] > d_values[i - 1]))
            throw ParamOutOfRange("convergence_ladder: d_values must be strictly increasing");
    for (double x : x_probes)
        if (!(x > 0.0 && x < 0.5))
            throw ParamOutOfRange("convergence_ladder: x probes must lie in (0, 1/2)");

    ConvergenceLadder lad;
    lad.d_values = std::move(d_values);
    lad.epsilon = eps;
    lad.x_probes = std::move(x_probes);
    lad.model_spec = m.spec_string();
    for (double d : lad.d_values) {
        ConditionalDensity cd(m, d, cfg.quad);
        lad.endpoint_mass.push_back(cd.cdf(eps) + (1.0 - cd.cdf(1.0 - eps)));
        lad.midpoint_mass.push_back(cd.cdf(0.5 + eps) - cd.cdf(0.5 - eps));
        std::vector<double> row;
        row.reserve(lad.x_probes.size());
        for (double x : lad.x_probes) row.push_back(cd.pdf(x));
        lad.pointwise.push_back(std::move(row));
    }

    const bool type1 = eventually_increasing(lad.endpoint_mass) &&
                       lad.endpoint_mass.back() > cfg.mass_threshold;
    const bool type2 = eventually_increasing(lad.midpoint_mass) &&
                       lad.midpoint_mass.back() > cfg.mass_threshold;
    if (type1)
        lad.verdict = LadderVerdict::TendsToTypeI;
    else if (type2)
        lad.verdict = LadderVerdict::TendsToTypeII;
    else if (relative_variation(lad.endpoint_mass) < cfg.stationary_variation &&
             relative_variation(lad.midpoint_mass) < cfg.stationary_variation)
        lad.verdict = LadderVerdict::Stationary;
    else
        lad.verdict = LadderVerdict::Inconclusive;
    return lad;
}

PointwiseCertificate pointwise_vanishing(const DensityModel& m, std::vector<double> x_probes,
                                         std::vector<double> d_values, const LadderConfig& cfg) {
    for (std::size_t i = 1; i < d_values.size(); ++i)
        if (!(d_values[i] > d_values[i - 1]))
            throw ParamOutOfRange("pointwise_vanishing: d_values must be strictly increasing");
    for (double x : x_probes)
        if (!(x > 0.0 && x < 0.5))
            throw ParamOutOfRange("pointwise_vanishing: x probes must lie in (0, 1/2)");
    if (x_probes.empty() || d_values.size() < 4)
        return PointwiseCertificate::Inconclusive;
    std::vector<std::vector<double>> columns(x_probes.size());
    for (double d : d_values) {
        ConditionalDensity cd(m, d, cfg.quad);
        for (std::size_t j = 0; j < x_probes.size(); ++j) columns[j].push_back(cd.pdf(x_probes[j]));
    }
    std::size_t vanishing = 0;
    for (const auto& col : columns) {
        bool decreasing = true;
        for (std::size_t i = std::max<std::size_t>(col.size() / 2, 1); i < col.size(); ++i)
            if (!(col[i] < col[i - 1] * (1.0 + 1e-12))) decreasing = false;
        if (decreasing && col.back() < cfg.vanish_ratio * col.front()) ++vanishing;
    }
    if (vanishing == columns.size()) return PointwiseCertificate::Vanishing;
    if (vanishing == 0) return PointwiseCertificate::NonVanishing;
    return PointwiseCertificate::Inconclusive;
}

double beta_distance(const DensityModel& gamma_model, double d, int grid_n, const QuadConfig& qc) {
    if (gamma_model.family() != Family::Gamma)
        throw WrongFamily("beta_distance: model must be in the gamma family");
    const double a = gamma_model.shape();
    const double log_beta = 2.0 * std::lgamma(a) - std::lgamma(2.0 * a);
    ConditionalDensity cd(gamma_model, d, qc);
    double sup = 0.0;
    for (int j = 1; j <= grid_n; ++j) {
        const double x = static_cast<double>(j) / (grid_n + 1);
        const double beta_log_pdf = (a - 1.0) * (std::log(x) + std::log1p(-x)) - log_beta;
        sup = std::max(sup, std::fabs(cd.pdf(x) - std::exp(beta_log_pdf)));
    }
    return sup;
}

namespace {

// Cubic-Hermite table of log sf(z) on [z_lo, z_hi]; knot values come from
// backward log-sum-exp accumulation of per-segment Gauss-Legendre integrals
// and knot slopes are the exact -f(z)/sf(z).
class LogSfTable {
  public:
    LogSfTable(const DensityModel& m, double z_lo, double z_hi, int n_knots,
               const QuadConfig& qc) {
        z_.resize(n_knots + 1);
        const double h = (z_hi - z_lo) / n_knots;
        for (int k = 0; k <= n_knots; ++k) z_[k] = z_lo + h * k;
        z_.back() = z_hi;

        const auto lf = [&m](double t) { return m.log_density_unnorm(t); };
        const auto& rule = quad::gl_rule(16);
        std::vector<double> seg(n_knots);
        for (int k = 0; k < n_knots; ++k)
            seg[k] = quad::panel_log_integral(lf, z_[k], z_[k + 1], rule);

        val_.assign(n_knots + 1, 0.0);
        quad::Options opt = qc.to_options();
        opt.init_uniform = 64;
        val_[n_knots] = quad::log_integrate_upper(lf, z_hi, opt) + m.log_norm();
        for (int k = n_knots - 1; k >= 0; --k)
            val_[k] = logaddexp(seg[k] + m.log_norm(), val_[k + 1]);

        slope_.resize(n_knots + 1);
        for (int k = 0; k <= n_knots; ++k)
            slope_[k] = -std::exp(m.log_density(z_[k]) - val_[k]);
    }

    double operator()(double z) const {
        if (z <= z_.front()) return val_.front();
        if (z >= z_.back()) return val_.back();
        const auto it = std::upper_bound(z_.begin(), z_.end(), z);
        const std::size_t k = static_cast<std::size_t>(it - z_.begin()) - 1;
        const double h = z_[k + 1] - z_[k];
        const double u = (z - z_[k]) / h;
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * val_[k] + (u3 - 2 * u2 + u) * h * slope_[k] +
               (-2 * u3 + 3 * u2) * val_[k + 1] + (u3 - u2) * h * slope_[k + 1];
    }

    double at_front() const { return val_.front(); }

  private:
    std::vector<double> z_, val_, slope_;
};

}  // namespace

SubexpRatio subexp_ratio(const DensityModel& m, double x, const QuadConfig& qc) {
    const double sl = m.support_low();
    if (!(x >= sl)) throw OutsideSupport("subexp_ratio: x must be at or above support_low");
    SubexpRatio r;
    r.x = x;
    r.log_den = m.log_sf(x);
    r.tail_too_small = r.log_den < -700.0;

    if (x <= 2.0 * sl) {
        // The sum exceeds x almost surely.
        r.log_num = 0.0;
        return r;
    }

    // P(S > x) = 2 int_sl^{x/2} f(y) sf(x-y) dy + sf(x/2)^2; the split at x/2
    // halves the work and keeps both factors in their accurate range.
    LogSfTable sf_table(m, 0.5 * x, x - sl, 512, qc);
    const auto integrand = [&](double y) {
        const double lf = m.log_density(y);
        return lf == neg_inf ? neg_inf : lf + sf_table(x - y);
    };
    const double seeds[] = {sl, 0.5 * x};
    const double log_cross =
        std::log(2.0) + quad::log_integrate(integrand, sl, 0.5 * x, seeds, qc.to_options());
    const double log_corner = 2.0 * sf_table.at_front();
    r.log_num = logaddexp(log_cross, log_corner);
    return r;
}

std::vector<TailRatio> tail_domination_ratio(const DensityModel& num, const DensityModel& den,
                                             const std::vector<double>& x_values) {
    for (std::size_t i = 1; i < x_values.size(); ++i)
        if (!(x_values[i] > x_values[i - 1]))
            throw ParamOutOfRange("tail_domination_ratio: x_values must be strictly increasing");
    std::vector<TailRatio> out;
    out.reserve(x_values.size());
    for (double x : x_values) {
        if (!(x >= num.support_low()) || !(x >= den.support_low()))
            throw OutsideSupport("tail_domination_ratio: x below a support threshold");
        const double lr = num.log_sf(x) - den.log_sf(x);
        out.push_back({x, lr, std::exp(lr)});
    }
    return out;
}

void ConvergenceLadder::write_csv(std::ostream& os) const {
    char buf[160];
    os << "# model=" << model_spec;
    std::snprintf(buf, sizeof(buf), "%.17g", epsilon);
    os << " eps=" << buf << " verdict=" << to_string(verdict) << "\n";
    os << "d,endpoint_mass,midpoint_mass";
    for (double x : x_probes) {
        std::snprintf(buf, sizeof(buf), "%g", x);
        os << ",fzd_at_" << buf;
    }
    os << "\n";
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", d_values[i], endpoint_mass[i],
                      midpoint_mass[i]);
        os << buf;
        for (double v : pointwise[i]) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            os << buf;
        }
        os << "\n";
    }
}

nlohmann::json ConvergenceLadder::summary_json() const {
    return nlohmann::json{{"model", model_spec},
                          {"eps", epsilon},
                          {"d", d_values},
                          {"endpoint_mass", endpoint_mass},
                          {"midpoint_mass", midpoint_mass},
                          {"x_probes", x_probes},
                          {"verdict", to_string(verdict)}};
}

}  // namespace zdlab
