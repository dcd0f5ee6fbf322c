#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zdlab/conditional_density.hpp"
#include "zdlab/density_models.hpp"

#include "json.hpp"

namespace zdlab {

/// Tuning for conditional rejection sampling.
struct McConfig {
    double accept_floor = 1e-7;          // pilot acceptance rate below this aborts
    std::uint64_t pilot_pairs = 100000;  // pairs drawn before the floor check
    std::uint64_t chunk_pairs = 16384;   // substream granularity
    std::uint64_t wave_chunks = 64;      // chunks evaluated per scheduling wave
    QuadConfig quad;
};

/// Result of one seeded conditional-sampling run. Identical inputs reproduce
/// identical samples bit for bit, independent of thread count.
struct McRun {
    std::uint64_t seed = 0;
    std::uint64_t n_target = 0;
    std::uint64_t n_attempted = 0;
    double delta = 0.0;
    double d = 0.0;
    std::vector<double> samples;  // X1/(X1+X2), in canonical substream order
    double acceptance_rate = 0.0;
    double ks_stat = -1.0;  // set by compare_mc_analytic; -1 until then
    bool hit_max_attempts = false;
    std::string generator_id;
    std::string model_spec;

    void write_samples_csv(std::ostream& os) const;
    nlohmann::json sidecar_json() const;
};

/// Inverse-CDF sampler for one model: closed form for Exponential and
/// ParetoTail, numeric inversion of the quadrature CDF elsewhere (bracketed
/// safeguarded Newton to 1e-10 absolute tolerance on the abscissa).
class Sampler {
  public:
    explicit Sampler(DensityModel m, const QuadConfig& qc = {});

    /// Maps one uniform u in (0,1) to a sample; pure.
    double draw_from_uniform(double u) const;

    bool closed_form() const { return closed_; }
    const DensityModel& model() const { return model_; }

  private:
    double invert_cdf(double u) const;
    double invert_sf(double w) const;

    DensityModel model_;
    bool closed_ = false;
    std::vector<double> knot_;
    std::vector<double> cdf_;     // F at knots (linear space)
    std::vector<double> log_sf_;  // log sf at knots
};

/// The documented PRNG identifier recorded in every run.
extern const char* const kGeneratorId;

/// n i.i.d. draws from the model (substream 0 of the seed).
std::vector<double> sample_iid(const DensityModel& m, std::uint64_t n, std::uint64_t seed);

/// Rejection sampling of Z: draws i.i.d. pairs, keeps X1/(X1+X2) whenever
/// X1+X2 lands in (d, d+delta]. Work is split into fixed-size chunks, one
/// derived substream each, merged in chunk order, so the result does not
/// depend on scheduling. Throws AcceptanceTooLow when the pilot rate falls
/// below the configured floor.
McRun conditional_sample_zd(const DensityModel& m, double d, double delta,
                            std::uint64_t n_target, std::uint64_t seed,
                            std::uint64_t max_attempts, const McConfig& cfg = {},
                            exec::Policy policy = exec::Policy::Parallel);

/// Kolmogorov-Smirnov distance between the run's empirical law and the
/// analytic law of Z_d at the same d (exact conditioning; the window bias
/// O(delta/d) is part of the reported statistic). Stores the value in
/// run.ks_stat and returns it.
double compare_mc_analytic(McRun& run, const DensityModel& m, const QuadConfig& qc = {});

/// KS distance between sorted-able samples and an arbitrary CDF; helper for
/// oracles and tests.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace zdlab
