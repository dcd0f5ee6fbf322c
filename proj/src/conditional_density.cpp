#include "zdlab/conditional_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "zdlab/errors.hpp"
#include "zdlab/logsumexp.hpp"

namespace zdlab {

using num::neg_inf;

ConditionalDensity::ConditionalDensity(DensityModel model, double d, QuadConfig qc,
                                       exec::Policy policy)
    : model_(std::move(model)), d_(d), qc_(qc), policy_(policy) {
    const double sl = model_.support_low();
    if (!(d > 2.0 * sl))
        throw EmptySupport("conditional density: d = " + std::to_string(d) +
                           " must exceed 2 * support_low = " + std::to_string(2.0 * sl));
    lo_ = sl / d_;
    hi_ = 1.0 - lo_;

    const auto integrand = [this](double y) {
        const double a = model_.log_density_unnorm(d_ * y);
        if (a == neg_inf) return neg_inf;
        const double b = model_.log_density_unnorm(d_ * (1.0 - y));
        return b == neg_inf ? neg_inf : a + b;
    };
    const double seeds[] = {lo_, 0.5, hi_};
    log_partition_unnorm_ = quad::log_integrate(integrand, lo_, hi_, seeds, qc_.to_options(), policy_);
    if (!std::isfinite(log_partition_unnorm_))
        throw NonFinite("log_partition: no finite panel found (model " + model_.spec_string() +
                        ", d = " + std::to_string(d_) + ")");
}

double ConditionalDensity::log_partition() const {
    return log_partition_unnorm_ + 2.0 * model_.log_norm();
}

double ConditionalDensity::log_ratio_unnorm(double x) const {
    const double a = model_.log_density_unnorm(d_ * x);
    if (a == neg_inf) return neg_inf;
    const double b = model_.log_density_unnorm(d_ * (1.0 - x));
    if (b == neg_inf) return neg_inf;
    return a + b - log_partition_unnorm_;
}

double ConditionalDensity::log_pdf(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) return neg_inf;
    if (x < lo_ || x > hi_) return neg_inf;
    return log_ratio_unnorm(x);
}

double ConditionalDensity::pdf_derivative(double x) const {
    if (!(x > 0.0 && x < 1.0) || !(d_ * x > model_.support_low()) ||
        !(d_ * (1.0 - x) > model_.support_low()))
        throw OutsideWindow("pdf_derivative: x = " + std::to_string(x) +
                            " leaves the open conditioning window");
    // The bracket cancels algebraically at x = 1/2: both score arguments are
    // the same double, so the difference is exactly zero.
    const double gap = model_.score(d_ * x) - model_.score(d_ * (1.0 - x));
    return d_ * pdf(x) * gap;
}

double ConditionalDensity::cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const auto integrand = [this](double y) { return log_ratio_unnorm(y); };
    // Clustering at the moving endpoint matters when the mass sits beyond x
    // and only a steep tail reaches into [lo, x].
    const double seeds[] = {lo_, 0.5, x};
    const double log_mass = quad::log_integrate(integrand, lo_, x, seeds, qc_.to_options(), policy_);
    return std::exp(log_mass);
}

std::vector<double> symmetric_grid(int n_points, double refine_power) {
    if (n_points < 16) throw ParamOutOfRange("symmetric_grid: n_points must be >= 16");
    const int half = n_points / 2;
    const double p = refine_power;
    std::vector<double> left;
    left.reserve(static_cast<std::size_t>(half) + 1);
    for (int j = 0; j <= half; ++j) {
        const double u = static_cast<double>(j) / half;
        const double up = std::pow(u, p);
        const double vp = std::pow(1.0 - u, p);
        double y = 0.5 * (up / (up + vp));  // clusters at both 0 and 1/2
        // Snap to a dyadic rational so that 1-y is exact and mirror pairs
        // evaluate on bit-identical arguments.
        y = std::round(y * 0x1p44) * 0x1p-44;
        left.push_back(std::min(0.5, std::max(0.0, y)));
    }
    std::sort(left.begin(), left.end());
    left.erase(std::unique(left.begin(), left.end()), left.end());
    std::vector<double> grid(left);
    for (auto it = left.rbegin(); it != left.rend(); ++it)
        if (*it < 0.5) grid.push_back(1.0 - *it);
    return grid;
}

ConditionalDensityTable ConditionalDensity::grid(int n_points, double refine_power) const {
    ConditionalDensityTable t;
    t.d = d_;
    t.model_spec = model_.spec_string();
    t.x = symmetric_grid(n_points, refine_power);
    t.log_partition = log_partition();
    const std::size_t n = t.x.size();
    t.log_pdf.assign(n, 0.0);
    t.pdf.assign(n, 0.0);
    exec::for_index(n, policy_, [&](std::size_t i) {
        const double lp = log_pdf(t.x[i]);
        t.log_pdf[i] = lp;
        t.pdf[i] = std::exp(lp);
    });
    return t;
}

void ConditionalDensityTable::write_csv(std::ostream& os) const {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    os << "# d=" << buf << " model=" << model_spec;
    std::snprintf(buf, sizeof(buf), "%.17g", log_partition);
    os << " log_partition=" << buf << "\n";
    os << "x,log_pdf,pdf\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", x[i], log_pdf[i], pdf[i]);
        os << buf << "\n";
    }
}

double log_partition(const DensityModel& m, double d, const QuadConfig& qc) {
    return ConditionalDensity(m, d, qc).log_partition();
}
double log_pdf_zd(const DensityModel& m, double d, double x, const QuadConfig& qc) {
    return ConditionalDensity(m, d, qc).log_pdf(x);
}
double pdf_zd_derivative(const DensityModel& m, double d, double x, const QuadConfig& qc) {
    return ConditionalDensity(m, d, qc).pdf_derivative(x);
}
double cdf_zd(const DensityModel& m, double d, double x, const QuadConfig& qc) {
    return ConditionalDensity(m, d, qc).cdf(x);
}
ConditionalDensityTable pdf_zd_grid(const DensityModel& m, double d, int n_points,
                                    double refine_power, const QuadConfig& qc) {
    return ConditionalDensity(m, d, qc).grid(n_points, refine_power);
}

}  // namespace zdlab
