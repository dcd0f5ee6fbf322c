#include <cmath>

#include "doctest.h"
#include "zdlab/classifier.hpp"
#include "zdlab/conditional_density.hpp"
#include "zdlab/density_models.hpp"
#include "zdlab/errors.hpp"

using namespace zdlab;

namespace {
const ProbeConfig kProbe = ProbeConfig::defaults();
}

TEST_CASE("probe validation") {
    ProbeConfig p = ProbeConfig::defaults();
    p.x_probes = {0.6};
    CHECK_THROWS_AS(p.validate(), ParamOutOfRange);
    p = ProbeConfig::defaults();
    p.d_ladder = {10.0, 5.0};
    CHECK_THROWS_AS(p.validate(), ParamOutOfRange);
    p = ProbeConfig::defaults();
    p.n_probes = 4;
    CHECK_THROWS_AS(p.validate(), ParamOutOfRange);
}

TEST_CASE("L estimates: the analytically forced signs") {
    // Closed-form curvature signs per family; the estimate must reproduce
    // this hand-built table.
    CHECK(estimate_L(DensityModel::weibull_type(2.0), kProbe) == LSign::Minus);
    CHECK(estimate_L(DensityModel::weibull_type(0.5), kProbe) == LSign::Plus);
    CHECK(estimate_L(DensityModel::weibull_type(1.0), kProbe) == LSign::Zero);
    CHECK(estimate_L(DensityModel::gamma(2.0), kProbe) == LSign::Minus);
    CHECK(estimate_L(DensityModel::gamma(0.5), kProbe) == LSign::Plus);
    CHECK(estimate_L(DensityModel::gamma(1.0), kProbe) == LSign::Zero);
    CHECK(estimate_L(DensityModel::lognormal_type(), kProbe) == LSign::Plus);
    CHECK(estimate_L(DensityModel::pareto_tail(2.0, 1.0), kProbe) == LSign::Plus);
    CHECK(estimate_L(DensityModel::exp_sqrt_plus(), kProbe) == LSign::Minus);
    CHECK(estimate_L(DensityModel::exp_sqrt_minus(), kProbe) == LSign::Plus);
    CHECK(estimate_L(DensityModel::exponential(), kProbe) == LSign::Zero);
}

TEST_CASE("divergence gap closed forms") {
    // Weibull alpha d^alpha ((1-x)^{alpha-1} - x^{alpha-1}) at alpha=2, d=10,
    // x=1/4: 2*100*(0.75-0.25) = 100.
    CHECK(divergence_gap(DensityModel::weibull_type(2.0), 10.0, 0.25) ==
          doctest::Approx(100.0).epsilon(1e-13));
    // Gamma: (a-1)(1/x - 1/(1-x)), constant in d.
    CHECK(divergence_gap(DensityModel::gamma(2.0), 10.0, 0.25) ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(divergence_gap(DensityModel::gamma(2.0), 1e5, 0.25) ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    // Pareto: alpha (1/(1-x) - 1/x), signed.
    CHECK(divergence_gap(DensityModel::pareto_tail(2.0, 1.0), 1000.0, 0.25) ==
          doctest::Approx(-16.0 / 3.0).epsilon(1e-13));
    // Exp-sqrt: +- sqrt(d)/2 (x^{-1/2} - (1-x)^{-1/2}).
    const double expect = 0.5 * std::sqrt(100.0) * (1.0 / std::sqrt(0.25) - 1.0 / std::sqrt(0.75));
    CHECK(divergence_gap(DensityModel::exp_sqrt_plus(), 100.0, 0.25) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(divergence_gap(DensityModel::exp_sqrt_minus(), 100.0, 0.25) ==
          doctest::Approx(-expect).epsilon(1e-12));
}

TEST_CASE("divergence gap antisymmetry under x -> 1-x") {
    for (const auto& m : {DensityModel::weibull_type(2.0), DensityModel::gamma(3.0),
                          DensityModel::lognormal_type()}) {
        for (double x : {0.125, 0.25, 0.375}) {  // dyadic: 1-x is exact
            CHECK(divergence_gap(m, 40.0, x) == -divergence_gap(m, 40.0, 1.0 - x));
        }
    }
}

TEST_CASE("divergence verdicts per family") {
    CHECK(check_divergence(DensityModel::weibull_type(2.0), kProbe).aggregate ==
          DivergenceVerdict::ToPlusInf);
    CHECK(check_divergence(DensityModel::weibull_type(0.5), kProbe).aggregate ==
          DivergenceVerdict::ToMinusInf);
    CHECK(check_divergence(DensityModel::lognormal_type(), kProbe).aggregate ==
          DivergenceVerdict::ToMinusInf);

    const DivergenceResult exp_res = check_divergence(DensityModel::exponential(), kProbe);
    CHECK(exp_res.aggregate == DivergenceVerdict::Bounded);
    CHECK(exp_res.gap_identically_zero);

    CHECK(check_divergence(DensityModel::gamma(2.0), kProbe).aggregate ==
          DivergenceVerdict::Bounded);
    CHECK(check_divergence(DensityModel::gamma(0.5), kProbe).aggregate ==
          DivergenceVerdict::Bounded);
    CHECK(check_divergence(DensityModel::pareto_tail(2.0, 1.0), kProbe).aggregate ==
          DivergenceVerdict::Bounded);
}

TEST_CASE("small-d ladder entries outside the support are dropped") {
    const DivergenceResult res = check_divergence(DensityModel::pareto_tail(2.0, 1.0), kProbe);
    for (const auto& p : res.probes) {
        CHECK(p.d_used.size() >= 4);
        for (double d : p.d_used) {
            CHECK(d * p.x > 1.0);
        }
    }
}

TEST_CASE("hazard trends") {
    CHECK(hazard_trend(DensityModel::weibull_type(2.0), kProbe) == HazardTrend::Increasing);
    CHECK(hazard_trend(DensityModel::pareto_tail(2.0, 1.0), kProbe) == HazardTrend::Decreasing);
    CHECK(hazard_trend(DensityModel::exponential(), kProbe) == HazardTrend::Constant);
    CHECK(hazard_trend(DensityModel::lognormal_type(), kProbe) == HazardTrend::Decreasing);
    CHECK(hazard_trend(DensityModel::gamma(2.0), kProbe) == HazardTrend::Increasing);
}

TEST_CASE("tail classes") {
    CHECK(tail_class(DensityModel::exp_sqrt_minus()) == TailClass::Light);
    CHECK(tail_class(DensityModel::exp_sqrt_plus()) == TailClass::Light);
    CHECK(tail_class(DensityModel::exponential()) == TailClass::Light);
    CHECK(tail_class(DensityModel::gamma(2.0)) == TailClass::Light);
    CHECK(tail_class(DensityModel::weibull_type(2.0)) == TailClass::Light);
    CHECK(tail_class(DensityModel::pareto_tail(2.0, 1.0)) == TailClass::Heavy);
    CHECK(tail_class(DensityModel::lognormal_type()) == TailClass::Heavy);
    CHECK(tail_class(DensityModel::weibull_type(0.5)) == TailClass::Heavy);
}

TEST_CASE("classification routes") {
    SUBCASE("weibull directions") {
        CHECK(classify(DensityModel::weibull_type(0.5), kProbe).behaviour == Behaviour::TypeI);
        CHECK(classify(DensityModel::weibull_type(2.0), kProbe).behaviour == Behaviour::TypeII);
    }
    SUBCASE("light-tailed type I alongside a dominating type II") {
        const ClassificationReport y = classify(DensityModel::exp_sqrt_minus(), kProbe);
        CHECK(y.behaviour == Behaviour::TypeI);
        CHECK(y.tail_class == TailClass::Light);
        const ClassificationReport x = classify(DensityModel::exp_sqrt_plus(), kProbe);
        CHECK(x.behaviour == Behaviour::TypeII);
    }
    SUBCASE("gamma is out of the theorem's reach") {
        const ClassificationReport r = classify(DensityModel::gamma(2.0), kProbe);
        CHECK(r.behaviour == Behaviour::TheoremInapplicable);
        CHECK(r.divergence == DivergenceVerdict::Bounded);
        bool mentions_beta = false;
        for (const auto& n : r.notes) mentions_beta |= n.find("Beta(a,a)") != std::string::npos;
        CHECK(mentions_beta);
    }
    SUBCASE("pareto needs the certificate") {
        const ClassificationReport without = classify(DensityModel::pareto_tail(2.0, 1.0), kProbe);
        CHECK(without.behaviour == Behaviour::TheoremInapplicable);
        const ClassificationReport with = classify(DensityModel::pareto_tail(2.0, 1.0), kProbe,
                                                   PointwiseCertificate::Vanishing);
        CHECK(with.behaviour == Behaviour::TypeI);
    }
    SUBCASE("a non-vanishing certificate never upgrades the verdict") {
        const ClassificationReport r =
            classify(DensityModel::gamma(2.0), kProbe, PointwiseCertificate::NonVanishing);
        CHECK(r.behaviour == Behaviour::TheoremInapplicable);
    }
    SUBCASE("uniform limit only for exactly exponential tails") {
        CHECK(classify(DensityModel::exponential(), kProbe).behaviour == Behaviour::UniformLimit);
        CHECK(classify(DensityModel::gamma(1.0), kProbe).behaviour == Behaviour::UniformLimit);
        CHECK(classify(DensityModel::weibull_type(1.0), kProbe).behaviour ==
              Behaviour::UniformLimit);
    }
    SUBCASE("lognormal: heavy tail, type I") {
        const ClassificationReport r = classify(DensityModel::lognormal_type(), kProbe);
        CHECK(r.behaviour == Behaviour::TypeI);
        CHECK(r.tail_class == TailClass::Heavy);
    }
}

TEST_CASE("hazard linkage is never silently inconsistent") {
    for (const auto& m : {DensityModel::gamma(0.5), DensityModel::gamma(2.0),
                          DensityModel::weibull_type(0.5), DensityModel::weibull_type(2.0),
                          DensityModel::lognormal_type(), DensityModel::pareto_tail(2.0, 1.0),
                          DensityModel::exp_sqrt_plus(), DensityModel::exp_sqrt_minus(),
                          DensityModel::exponential()}) {
        const ClassificationReport r = classify(m, kProbe);
        for (const auto& n : r.notes) {
            CHECK(n.find("internal inconsistency") == std::string::npos);
        }
    }
}

TEST_CASE("classification is deterministic") {
    const auto a = classify(DensityModel::lognormal_type(), kProbe).to_json().dump();
    const auto b = classify(DensityModel::lognormal_type(), kProbe).to_json().dump();
    CHECK(a == b);
}

TEST_CASE("probe scaling never flips a settled sign verdict") {
    for (const auto& m : {DensityModel::weibull_type(2.0), DensityModel::weibull_type(0.5),
                          DensityModel::gamma(2.0), DensityModel::pareto_tail(2.0, 1.0),
                          DensityModel::lognormal_type(), DensityModel::exp_sqrt_minus()}) {
        const LSign base = estimate_L(m, kProbe);
        ProbeConfig denser = kProbe;
        denser.n_probes *= 2;
        ProbeConfig wider = kProbe;
        wider.t_start *= kProbe.t_factor;
        const LSign s1 = estimate_L(m, denser);
        const LSign s2 = estimate_L(m, wider);
        if (base == LSign::Plus) {
            CHECK(s1 != LSign::Minus);
            CHECK(s2 != LSign::Minus);
        }
        if (base == LSign::Minus) {
            CHECK(s1 != LSign::Plus);
            CHECK(s2 != LSign::Plus);
        }
    }
}

TEST_CASE("type verdicts agree with the midpoint second difference at large d") {
    // Lemma linkage: Type II implies a concave midpoint, Type I a convex one,
    // at the top of the default ladder scaled down to a computable d.
    struct Case {
        DensityModel m;
        double d;
        double h;
    };
    for (const auto& c : {Case{DensityModel::weibull_type(2.0), 200.0, 1e-3},
                          Case{DensityModel::weibull_type(0.5), 200.0, 1e-2},
                          Case{DensityModel::exp_sqrt_plus(), 500.0, 1e-2},
                          Case{DensityModel::exp_sqrt_minus(), 500.0, 1e-2}}) {
        const Behaviour b = classify(c.m, kProbe).behaviour;
        const ConditionalDensity cd(c.m, c.d);
        const double second =
            (cd.pdf(0.5 + c.h) - 2.0 * cd.pdf(0.5) + cd.pdf(0.5 - c.h)) / (c.h * c.h);
        if (b == Behaviour::TypeII) CHECK(second < 0.0);
        if (b == Behaviour::TypeI) CHECK(second > 0.0);
    }
}

TEST_CASE("report serializes with stable field names") {
    const nlohmann::json j = classify(DensityModel::weibull_type(2.0), kProbe).to_json();
    CHECK(j.contains("L"));
    CHECK(j.contains("divergence"));
    CHECK(j.contains("hazard_trend"));
    CHECK(j.contains("tail_class"));
    CHECK(j.contains("behaviour"));
    CHECK(j.contains("notes"));
    CHECK(j.contains("divergence_probes"));
    CHECK(j["behaviour"] == "TypeII");
}
