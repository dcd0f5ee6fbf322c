// Acceptance suite: one binary, one pass/fail line per criterion, nonzero
// exit when anything fails. Each criterion pins its tolerances in code and
// checks against independent oracles (closed forms wherever they exist).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

#include "zdlab/classifier.hpp"
#include "zdlab/conditional_density.hpp"
#include "zdlab/convergence.hpp"
#include "zdlab/density_models.hpp"
#include "zdlab/mc.hpp"

using namespace zdlab;

namespace {

std::string g_cli_path = ZDLAB_CLI_PATH;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<double> ladder(double start, double factor, int count) {
    std::vector<double> v;
    double d = start;
    for (int k = 0; k < count; ++k, d *= factor) v.push_back(d);
    return v;
}

double beta_log_pdf(double a, double x) {
    return (a - 1.0) * (std::log(x) + std::log1p(-x)) -
           (2.0 * std::lgamma(a) - std::lgamma(2.0 * a));
}

// --- 1. Gamma -> Beta exactness -------------------------------------------
Outcome criterion_gamma_beta() {
    Outcome o;
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        for (double d : {1.0, 10.0, 100.0, 1000.0}) {
            const ConditionalDensity cd(DensityModel::gamma(a), d);
            double sup_interior = 0.0, sup_edge = 0.0;
            for (int j = 1; j <= 256; ++j) {
                const double x = static_cast<double>(j) / 257.0;
                const double diff = std::fabs(cd.pdf(x) - std::exp(beta_log_pdf(a, x)));
                if (x < 0.05 || x > 0.95)
                    sup_edge = std::max(sup_edge, diff);
                else
                    sup_interior = std::max(sup_interior, diff);
            }
            const double edge_tol = (a == 0.5) ? 1e-4 : 1e-6;
            o.require(sup_interior < 1e-6, "a=" + fmt(a) + " d=" + fmt(d) +
                                               " interior sup=" + fmt(sup_interior));
            o.require(sup_edge < edge_tol,
                      "a=" + fmt(a) + " d=" + fmt(d) + " edge sup=" + fmt(sup_edge));
        }
    }
    if (o.pass) o.detail = "sup distance below 1e-6 interior (1e-4 edges at a=0.5), 16 cases";
    return o;
}

// --- 2. Uniform limit -------------------------------------------------------
Outcome criterion_uniform_limit() {
    Outcome o;
    for (double d : {1.0, 10.0, 100.0}) {
        const auto table = pdf_zd_grid(DensityModel::exponential(), d, 256);
        double worst = 0.0;
        for (double v : table.pdf) worst = std::max(worst, std::fabs(v - 1.0));
        o.require(worst < 1e-9, "d=" + fmt(d) + " max |pdf-1|=" + fmt(worst));
    }
    if (o.pass) o.detail = "f_Zd = 1 within 1e-9 on all grids";
    return o;
}

// --- 3. Corollary reproduction via the CLI ----------------------------------
Outcome criterion_corollary() {
    Outcome o;
    namespace fs = std::filesystem;
    fs::create_directories("acc3_out");
    const std::string cmd = g_cli_path + " corollary-demo --out-dir acc3_out > acc3_out/stdout.json 2>&1";
    const int raw = std::system(cmd.c_str());
    const int code = WEXITSTATUS(raw);
    o.require(code == 0, "corollary-demo exit code " + std::to_string(code));
    std::ifstream is("acc3_out/summary.json");
    if (!is) {
        o.require(false, "summary.json missing");
        return o;
    }
    nlohmann::json j;
    is >> j;
    o.require(j["Y"]["behaviour"] == "TypeI", "Y behaviour");
    o.require(j["Y"]["tail"] == "Light", "Y tail");
    o.require(j["X"]["behaviour"] == "TypeII", "X behaviour");
    o.require(j["domination_trend"] == "decreasing", "domination trend");
    o.require(j["domination_final_over_initial"].get<double>() < 0.1, "final/initial ratio");
    if (o.pass)
        o.detail = "exit 0; Y TypeI+Light, X TypeII, domination strictly decreasing, "
                   "final/initial=" + fmt(j["domination_final_over_initial"].get<double>());
    return o;
}

// --- 4. Example 2 divergence directions -------------------------------------
Outcome criterion_divergence_directions() {
    Outcome o;
    const ProbeConfig probe = ProbeConfig::defaults();
    const auto agg = [&](const DensityModel& m) { return check_divergence(m, probe).aggregate; };
    o.require(agg(DensityModel::weibull_type(2.0)) == DivergenceVerdict::ToPlusInf,
              "weibull alpha=2");
    o.require(agg(DensityModel::weibull_type(0.5)) == DivergenceVerdict::ToMinusInf,
              "weibull alpha=0.5");
    const DivergenceResult exp_res = check_divergence(DensityModel::exponential(), probe);
    o.require(exp_res.aggregate == DivergenceVerdict::Bounded, "exponential");
    o.require(exp_res.gap_identically_zero, "exponential gap not identically zero");
    o.require(agg(DensityModel::lognormal_type()) == DivergenceVerdict::ToMinusInf, "lognormal");
    o.require(agg(DensityModel::gamma(0.5)) == DivergenceVerdict::Bounded, "gamma a=0.5");
    o.require(agg(DensityModel::gamma(2.0)) == DivergenceVerdict::Bounded, "gamma a=2");
    o.require(agg(DensityModel::gamma(3.0)) == DivergenceVerdict::Bounded, "gamma a=3");
    o.require(agg(DensityModel::pareto_tail(2.0, 1.0)) == DivergenceVerdict::Bounded, "pareto");
    if (o.pass) o.detail = "all aggregate verdicts match the forced directions";
    return o;
}

// --- 5. Pareto route ---------------------------------------------------------
Outcome criterion_pareto_route() {
    Outcome o;
    const std::vector<double> probes = {0.1, 0.25, 0.4};
    const std::vector<double> d_values = ladder(10.0, 4.0, 7);  // 10 * 4^k up to 40960 <= 1e5
    const PointwiseCertificate cert =
        pointwise_vanishing(DensityModel::pareto_tail(2.0, 1.0), probes, d_values);
    o.require(cert == PointwiseCertificate::Vanishing,
              std::string("certificate = ") + to_string(cert));
    const ClassificationReport rep =
        classify(DensityModel::pareto_tail(2.0, 1.0), ProbeConfig::defaults(), cert);
    o.require(rep.behaviour == Behaviour::TypeI,
              std::string("behaviour = ") + to_string(rep.behaviour));
    if (o.pass) o.detail = "pointwise_vanishing certificate feeds classify -> TypeI";
    return o;
}

// --- 6. Type II concentration ------------------------------------------------
Outcome criterion_type2_concentration() {
    Outcome o;
    const std::vector<double> d_values = ladder(10.0, 4.0, 7);  // up to 40960
    const auto lad =
        convergence_ladder(DensityModel::weibull_type(2.0), d_values, 0.05, {0.25});
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        if (d_values[i] >= 1e4)
            o.require(lad.midpoint_mass[i] >= 0.99,
                      "d=" + fmt(d_values[i]) + " mass=" + fmt(lad.midpoint_mass[i]));
        if (i > 0)
            o.require(lad.midpoint_mass[i] > lad.midpoint_mass[i - 1] - 1e-9,
                      "not monotone at d=" + fmt(d_values[i]));
    }
    if (o.pass)
        o.detail = "midpoint mass " + fmt(lad.midpoint_mass.front()) + " -> " +
                   fmt(lad.midpoint_mass.back()) + ", monotone, >=0.99 beyond 1e4";
    return o;
}

// --- 7. Type I concentration ---------------------------------------------------
Outcome criterion_type1_concentration() {
    Outcome o;
    const std::vector<double> d_values = ladder(10.0, 4.0, 10);  // up to 2621440 > 1e6
    const auto lad =
        convergence_ladder(DensityModel::weibull_type(0.5), d_values, 0.05, {0.25});
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        o.require(std::isfinite(lad.endpoint_mass[i]), "mass not finite at d=" + fmt(d_values[i]));
        if (d_values[i] >= 1e6)
            o.require(lad.endpoint_mass[i] >= 0.99,
                      "d=" + fmt(d_values[i]) + " mass=" + fmt(lad.endpoint_mass[i]));
        if (i > 0)
            o.require(lad.endpoint_mass[i] > lad.endpoint_mass[i - 1] - 1e-9,
                      "not monotone at d=" + fmt(d_values[i]));
    }
    // log-space evaluation at the top of the ladder must stay finite
    const ConditionalDensity cd(DensityModel::weibull_type(0.5), d_values.back());
    o.require(std::isfinite(cd.log_pdf(0.5)), "log_pdf underflowed at the ladder top");
    if (o.pass)
        o.detail = "endpoint mass " + fmt(lad.endpoint_mass.front()) + " -> " +
                   fmt(lad.endpoint_mass.back()) + ", monotone, >=0.99 beyond 1e6";
    return o;
}

// --- 8. Monte Carlo agreement ---------------------------------------------------
Outcome criterion_mc_agreement() {
    Outcome o;
    {
        McRun run = conditional_sample_zd(DensityModel::exponential(), 10.0, 0.1, 50000, 3,
                                          1ull << 33);
        auto s = run.samples;
        const double ks = ks_statistic(std::move(s), [](double x) { return x; });
        o.require(ks < 0.012, "exponential ks=" + fmt(ks));
        if (o.pass) o.detail = "exp ks=" + fmt(ks);
    }
    {
        McRun run = conditional_sample_zd(DensityModel::gamma(2.0), 8.0, 0.1, 50000, 9, 1ull << 33);
        auto s = run.samples;
        const double ks = ks_statistic(
            std::move(s), [](double x) { return 3.0 * x * x - 2.0 * x * x * x; });
        o.require(ks < 0.012, "gamma ks=" + fmt(ks));
        if (o.pass) o.detail += ", gamma ks=" + fmt(ks);
    }
    return o;
}

// --- 9. Derivative identity -------------------------------------------------------
Outcome criterion_derivative_identity() {
    Outcome o;
    const std::vector<DensityModel> models = {
        DensityModel::gamma(2.0), DensityModel::weibull_type(2.0),
        DensityModel::weibull_type(0.5), DensityModel::exp_sqrt_minus(),
        DensityModel::lognormal_type()};
    const std::vector<double> xs = {0.125, 0.1875, 0.25, 0.3125, 0.375, 0.4375,
                                    0.5625, 0.625, 0.6875, 0.75, 0.8125};
    double worst = 0.0;
    for (const auto& m : models) {
        for (double d : {5.0, 10.0, 20.0}) {
            const ConditionalDensity cd(m, d);
            o.require(cd.pdf_derivative(0.5) == 0.0, m.spec_string() + " derivative(1/2) != 0");
            for (double x : xs) {
                const double h = 1e-6;
                const double fd = (cd.pdf(x + h) - cd.pdf(x - h)) / (2.0 * h);
                const double an = cd.pdf_derivative(x);
                if (an == 0.0) continue;
                const double rel = std::fabs(fd - an) / std::fabs(an);
                worst = std::max(worst, rel);
                o.require(rel < 1e-4, m.spec_string() + " d=" + fmt(d) + " x=" + fmt(x) +
                                          " rel=" + fmt(rel));
            }
        }
    }
    if (o.pass)
        o.detail = "5 models x 3 d x 11 x: worst relative error " + fmt(worst) +
                   "; derivative at 1/2 exactly 0";
    return o;
}

// --- 10. Failure-rate linkage ------------------------------------------------------
Outcome criterion_failure_rate_linkage() {
    Outcome o;
    const ProbeConfig probe = ProbeConfig::defaults();
    const std::vector<DensityModel> models = {
        DensityModel::gamma(0.5),         DensityModel::gamma(1.0),
        DensityModel::gamma(2.0),         DensityModel::gamma(3.0),
        DensityModel::weibull_type(0.5),  DensityModel::weibull_type(1.0),
        DensityModel::weibull_type(2.0),  DensityModel::lognormal_type(),
        DensityModel::pareto_tail(2.0, 1.0), DensityModel::exp_sqrt_plus(),
        DensityModel::exp_sqrt_minus(),   DensityModel::exponential()};
    for (const auto& m : models) {
        const LSign L = estimate_L(m, probe);
        const HazardTrend trend = hazard_trend(m, probe);
        HazardTrend expected = HazardTrend::Mixed;
        if (L == LSign::Plus) expected = HazardTrend::Decreasing;
        if (L == LSign::Minus) expected = HazardTrend::Increasing;
        if (L == LSign::Zero) expected = HazardTrend::Constant;
        o.require(trend == expected, m.spec_string() + ": L=" + to_string(L) + " but hazard " +
                                         to_string(trend));
    }
    if (o.pass) o.detail = "12 model instances: hazard trend equals the L prediction";
    return o;
}

// --- 11. Subexponential ratio sanity -------------------------------------------------
Outcome criterion_subexp_ratio() {
    Outcome o;
    const DensityModel p = DensityModel::pareto_tail(2.0, 1.0);
    const double r3 = subexp_ratio(p, 1e3).ratio();
    const double r4 = subexp_ratio(p, 1e4).ratio();
    o.require(r3 > 1.9 && r3 < 2.1, "pareto ratio at 1e3 = " + fmt(r3));
    o.require(std::fabs(r4 - 2.0) < std::fabs(r3 - 2.0), "no drift toward 2 at 1e4");
    const DensityModel e = DensityModel::exponential();
    for (double x : {5.0, 10.0, 20.0}) {
        const double r = subexp_ratio(e, x).ratio();
        o.require(std::fabs(r - (1.0 + x)) < 0.01 * (1.0 + x),
                  "exp ratio at x=" + fmt(x) + " = " + fmt(r));
    }
    if (o.pass)
        o.detail = "pareto " + fmt(r3) + " -> " + fmt(r4) + "; exponential matches 1+x within 1%";
    return o;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
        if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
    }

    const std::vector<Criterion> criteria = {
        {1, "gamma-to-beta exactness", criterion_gamma_beta},
        {2, "uniform limit for exponential", criterion_uniform_limit},
        {3, "corollary reproduction (CLI)", criterion_corollary},
        {4, "divergence directions", criterion_divergence_directions},
        {5, "pareto pointwise-vanishing route", criterion_pareto_route},
        {6, "type II midpoint concentration", criterion_type2_concentration},
        {7, "type I endpoint concentration", criterion_type1_concentration},
        {8, "monte carlo agreement", criterion_mc_agreement},
        {9, "derivative identity", criterion_derivative_identity},
        {10, "failure-rate linkage", criterion_failure_rate_linkage},
        {11, "subexponential ratio sanity", criterion_subexp_ratio},
    };

    bool all_pass = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const Outcome o = c.fn();
        std::printf("%s criterion-%d: %s%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.empty() ? "" : " — ", o.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
