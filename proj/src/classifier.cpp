#include "zdlab/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "zdlab/errors.hpp"

namespace zdlab {

ProbeConfig ProbeConfig::defaults() {
    ProbeConfig p;
    p.d_ladder.reserve(11);
    double d = 10.0;
    for (int k = 0; k <= 10; ++k, d *= 4.0) p.d_ladder.push_back(d);
    p.mgf_s.reserve(7);
    double s = 1.0;
    for (int k = 0; k <= 6; ++k, s *= 0.5) p.mgf_s.push_back(s);
    return p;
}

void ProbeConfig::validate() const {
    if (!(t_start > 0.0)) throw ParamOutOfRange("probe: t_start must be > 0");
    if (!(t_factor > 1.0)) throw ParamOutOfRange("probe: t_factor must be > 1");
    if (n_probes < 8) throw ParamOutOfRange("probe: n_probes must be >= 8");
    if (!(zero_tol > 0.0)) throw ParamOutOfRange("probe: zero_tol must be > 0");
    for (std::size_t i = 1; i < d_ladder.size(); ++i)
        if (!(d_ladder[i] > d_ladder[i - 1]))
            throw ParamOutOfRange("probe: d_ladder must be strictly increasing");
    for (double x : x_probes)
        if (!(x > 0.0 && x < 0.5))
            throw ParamOutOfRange("probe: x_probes must lie strictly inside (0, 1/2)");
}

std::vector<double> ProbeConfig::tail_grid() const {
    std::vector<double> t(static_cast<std::size_t>(n_probes));
    double v = t_start;
    for (int k = 0; k < n_probes; ++k, v *= t_factor) t[static_cast<std::size_t>(k)] = v;
    return t;
}

const char* to_string(LSign v) {
    switch (v) {
        case LSign::Plus: return "Plus";
        case LSign::Minus: return "Minus";
        case LSign::Zero: return "Zero";
        case LSign::Undetermined: return "Undetermined";
    }
    return "?";
}
const char* to_string(DivergenceVerdict v) {
    switch (v) {
        case DivergenceVerdict::ToPlusInf: return "ToPlusInf";
        case DivergenceVerdict::ToMinusInf: return "ToMinusInf";
        case DivergenceVerdict::Bounded: return "Bounded";
        case DivergenceVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}
const char* to_string(HazardTrend v) {
    switch (v) {
        case HazardTrend::Increasing: return "Increasing";
        case HazardTrend::Decreasing: return "Decreasing";
        case HazardTrend::Constant: return "Constant";
        case HazardTrend::Mixed: return "Mixed";
    }
    return "?";
}
const char* to_string(TailClass v) {
    switch (v) {
        case TailClass::Heavy: return "Heavy";
        case TailClass::Light: return "Light";
        case TailClass::Undetermined: return "Undetermined";
    }
    return "?";
}
const char* to_string(Behaviour v) {
    switch (v) {
        case Behaviour::TypeI: return "TypeI";
        case Behaviour::TypeII: return "TypeII";
        case Behaviour::UniformLimit: return "UniformLimit";
        case Behaviour::TheoremInapplicable: return "TheoremInapplicable";
    }
    return "?";
}
const char* to_string(PointwiseCertificate v) {
    switch (v) {
        case PointwiseCertificate::Vanishing: return "vanishing";
        case PointwiseCertificate::NonVanishing: return "non_vanishing";
        case PointwiseCertificate::Inconclusive: return "inconclusive";
    }
    return "?";
}

LSign estimate_L(const DensityModel& m, const ProbeConfig& probe) {
    probe.validate();
    bool all_pos = true, all_neg = true, all_zero = true;
    for (double t : probe.tail_grid()) {
        if (!(t > m.support_low())) { all_pos = all_neg = all_zero = false; break; }
        const double c = m.curvature(t);
        if (std::fabs(c) < probe.zero_tol) {
            all_pos = all_neg = false;
        } else if (c > 0.0) {
            all_neg = all_zero = false;
        } else {
            all_pos = all_zero = false;
        }
    }
    if (all_zero) return LSign::Zero;
    if (all_pos) return LSign::Plus;
    if (all_neg) return LSign::Minus;
    return LSign::Undetermined;
}

double divergence_gap(const DensityModel& m, double d, double x) {
    return d * (m.score(d * x) - m.score(d * (1.0 - x)));
}

namespace {

DivergenceVerdict probe_verdict(const std::vector<double>& gaps, const ProbeConfig& probe) {
    if (gaps.size() < 4) return DivergenceVerdict::Inconclusive;
    const std::size_t n = gaps.size();

    bool all_zero = true;
    for (double g : gaps)
        if (std::fabs(g) > probe.gap_zero_tol) { all_zero = false; break; }
    if (all_zero) return DivergenceVerdict::Bounded;

    // Divergent: one sign throughout, |gap| strictly increasing, and the
    // overall growth beats the configured ratio.
    bool one_sign = true, growing = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (gaps[i] == 0.0 || (gaps[i] > 0.0) != (gaps[0] > 0.0)) one_sign = false;
        if (i > 0 && !(std::fabs(gaps[i]) > std::fabs(gaps[i - 1]))) growing = false;
    }
    if (one_sign && growing && std::fabs(gaps[n - 1]) > probe.growth_ratio * std::fabs(gaps[0]))
        return gaps[0] > 0.0 ? DivergenceVerdict::ToPlusInf : DivergenceVerdict::ToMinusInf;

    // Bounded: the top half of the ladder has settled.
    const std::size_t from = n / 2;
    double lo = std::fabs(gaps[from]), hi = lo;
    for (std::size_t i = from; i < n; ++i) {
        lo = std::min(lo, std::fabs(gaps[i]));
        hi = std::max(hi, std::fabs(gaps[i]));
    }
    if (hi <= probe.gap_zero_tol || (hi - lo) <= probe.bounded_variation * hi)
        return DivergenceVerdict::Bounded;

    return DivergenceVerdict::Inconclusive;
}

}  // namespace

DivergenceResult check_divergence(const DensityModel& m, const ProbeConfig& probe) {
    probe.validate();
    DivergenceResult res;
    res.gap_identically_zero = true;
    const double sl = m.support_low();
    for (double x : probe.x_probes) {
        DivergenceProbe dp;
        dp.x = x;
        for (double d : probe.d_ladder) {
            // Drop ladder entries whose mirrored arguments are not strictly
            // inside the support (small d for positive support_low).
            if (!(d * x > sl * (1.0 + 1e-12)) || !(d * (1.0 - x) > sl * (1.0 + 1e-12))) continue;
            dp.d_used.push_back(d);
            dp.gap.push_back(divergence_gap(m, d, x));
        }
        for (double g : dp.gap)
            if (std::fabs(g) > probe.gap_zero_tol) res.gap_identically_zero = false;
        dp.verdict = probe_verdict(dp.gap, probe);
        res.probes.push_back(std::move(dp));
    }
    res.aggregate = DivergenceVerdict::Inconclusive;
    if (!res.probes.empty()) {
        const DivergenceVerdict first = res.probes.front().verdict;
        bool agree = true;
        for (const auto& p : res.probes)
            if (p.verdict != first) agree = false;
        if (agree) res.aggregate = first;
    }
    return res;
}

HazardTrend hazard_trend(const DensityModel& m, const ProbeConfig& probe) {
    probe.validate();
    std::vector<double> h;
    for (double t : probe.tail_grid()) {
        if (!(t >= m.support_low())) continue;
        h.push_back(m.hazard(t));
    }
    if (h.size() < 3) return HazardTrend::Mixed;
    bool inc = true, dec = true, flat = true;
    for (std::size_t i = 1; i < h.size(); ++i) {
        const double r = h[i] / h[i - 1];
        if (!(r > 1.0 + probe.hazard_rel_tol)) inc = false;
        if (!(r < 1.0 - probe.hazard_rel_tol)) dec = false;
        if (std::fabs(r - 1.0) > probe.hazard_rel_tol) flat = false;
    }
    if (flat) return HazardTrend::Constant;
    if (inc) return HazardTrend::Increasing;
    if (dec) return HazardTrend::Decreasing;
    return HazardTrend::Mixed;
}

TailClass tail_class(const DensityModel& m, const ProbeConfig& probe) {
    probe.validate();
    std::vector<double> s_probes = probe.mgf_s;
    if (s_probes.empty()) s_probes = ProbeConfig::defaults().mgf_s;
    const std::vector<double> grid = probe.tail_grid();
    // Top third of the tail grid is the "eventual" window.
    const std::size_t from = grid.size() - std::max<std::size_t>(grid.size() / 3, 2);

    bool some_light = false;
    bool all_heavy = true;
    for (double s : s_probes) {
        bool eventually_negative = true;
        bool eventually_positive = true;
        for (std::size_t i = from; i < grid.size(); ++i) {
            if (!(grid[i] > m.support_low())) { eventually_negative = eventually_positive = false; break; }
            const double slope = m.score(grid[i]) + s;  // d/dt [log f(t) + s t]
            if (!(slope <= -probe.slope_tol)) eventually_negative = false;
            if (!(slope > 0.0)) eventually_positive = false;
        }
        if (eventually_negative) some_light = true;
        if (!eventually_positive) all_heavy = false;
    }
    if (some_light) return TailClass::Light;
    if (all_heavy) return TailClass::Heavy;
    return TailClass::Undetermined;
}

ClassificationReport classify(const DensityModel& m, const ProbeConfig& probe,
                              std::optional<PointwiseCertificate> certificate) {
    probe.validate();
    ClassificationReport r;
    r.L = estimate_L(m, probe);
    DivergenceResult div = check_divergence(m, probe);
    r.divergence = div.aggregate;
    r.divergence_detail = std::move(div.probes);
    r.hazard_trend = hazard_trend(m, probe);
    r.tail_class = tail_class(m, probe);

    // Failure-rate cross-check: log-convex tails must have a decreasing
    // failure rate, log-concave tails an increasing one. A mismatch is
    // reported, never silently passed.
    if (r.L == LSign::Plus && r.hazard_trend != HazardTrend::Decreasing)
        r.notes.push_back("internal inconsistency: L=Plus but hazard trend is " +
                          std::string(to_string(r.hazard_trend)));
    if (r.L == LSign::Minus && r.hazard_trend != HazardTrend::Increasing)
        r.notes.push_back("internal inconsistency: L=Minus but hazard trend is " +
                          std::string(to_string(r.hazard_trend)));
    if (r.L == LSign::Zero && r.hazard_trend != HazardTrend::Constant)
        r.notes.push_back("internal inconsistency: L=Zero but hazard trend is " +
                          std::string(to_string(r.hazard_trend)));

    const bool diverges_abs = r.divergence == DivergenceVerdict::ToPlusInf ||
                              r.divergence == DivergenceVerdict::ToMinusInf;

    if (r.L == LSign::Zero) {
        r.behaviour = Behaviour::UniformLimit;
        r.notes.push_back("exactly exponential tail: Z_d is uniform on [0,1] for large d");
        if (div.gap_identically_zero) r.notes.push_back("score gap identically zero on the ladder");
    } else if (r.L == LSign::Undetermined) {
        r.behaviour = Behaviour::TheoremInapplicable;
        r.notes.push_back("curvature sign did not settle on the probe grid; no verdict");
    } else if (diverges_abs) {
        r.behaviour = r.L == LSign::Plus ? Behaviour::TypeI : Behaviour::TypeII;
        r.notes.push_back("divergence condition holds at all x probes");
    } else if (certificate && *certificate == PointwiseCertificate::Vanishing &&
               r.L == LSign::Plus) {
        r.behaviour = Behaviour::TypeI;
        r.notes.push_back(
            "divergence condition not established; pointwise-vanishing certificate supplied, "
            "limit classification applied directly (power-tail route)");
    } else {
        r.behaviour = Behaviour::TheoremInapplicable;
        if (r.divergence == DivergenceVerdict::Bounded)
            r.notes.push_back("divergence condition bounded: scaled score gap does not grow with d");
        else
            r.notes.push_back("divergence condition inconclusive on the configured ladder");
        if (certificate && *certificate != PointwiseCertificate::Vanishing)
            r.notes.push_back("certificate supplied but reports '" +
                              std::string(to_string(*certificate)) + "'; not usable");
        if (certificate && *certificate == PointwiseCertificate::Vanishing)
            r.notes.push_back(
                "vanishing certificate supplied but the direct route applies only to "
                "log-convex tails (L=Plus); no verdict");
        if (m.family() == Family::Gamma)
            r.notes.push_back("law of Z_d is Beta(a,a), independent of d");
    }
    return r;
}

nlohmann::json ClassificationReport::to_json() const {
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& p : divergence_detail) {
        probes.push_back({{"x", p.x},
                          {"d", p.d_used},
                          {"gap", p.gap},
                          {"verdict", to_string(p.verdict)}});
    }
    return nlohmann::json{{"L", to_string(L)},
                          {"divergence", to_string(divergence)},
                          {"divergence_probes", probes},
                          {"hazard_trend", to_string(hazard_trend)},
                          {"tail_class", to_string(tail_class)},
                          {"behaviour", to_string(behaviour)},
                          {"notes", notes}};
}

}  // namespace zdlab
