// Timing comparison of the serial reference kernels against the OpenMP path.
// The outputs must agree bit for bit (each index owns its slot and the
// log-sum-exp reduction runs in a fixed tree order); the max |diff| column
// proves it per run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "zdlab/conditional_density.hpp"
#include "zdlab/density_models.hpp"
#include "zdlab/logsumexp.hpp"
#include "zdlab/mc.hpp"
#include "zdlab/parallel.hpp"
#include "zdlab/quadrature.hpp"

using namespace zdlab;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename Fn>
double time_ms(Fn&& fn, int reps) {
    const double t0 = now_ms();
    for (int r = 0; r < reps; ++r) fn();
    return (now_ms() - t0) / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   max|diff| %.3g\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, max_diff);
}

void bench_panel_eval() {
    const DensityModel m = DensityModel::weibull_type(2.0);
    const double d = 1000.0;
    const quad::LogFn integrand = [&](double y) {
        return m.log_density_unnorm(d * y) + m.log_density_unnorm(d * (1.0 - y));
    };
    const std::size_t n_panels = 200000;
    std::vector<double> edges(n_panels + 1);
    for (std::size_t i = 0; i <= n_panels; ++i)
        edges[i] = static_cast<double>(i) / static_cast<double>(n_panels);
    const auto& rule = quad::gl_rule(8);

    std::vector<double> out_serial(n_panels), out_parallel(n_panels);
    const double ts = time_ms(
        [&] { quad::eval_panels(integrand, edges, rule, out_serial, exec::Policy::Serial); }, 3);
    const double tp = time_ms(
        [&] { quad::eval_panels(integrand, edges, rule, out_parallel, exec::Policy::Parallel); }, 3);
    double diff = 0.0;
    for (std::size_t i = 0; i < n_panels; ++i)
        diff = std::max(diff, std::fabs(out_serial[i] - out_parallel[i]));
    diff = std::max(diff, std::fabs(num::logsumexp(out_serial) - num::logsumexp(out_parallel)));
    report("panel batch (200k panels)", ts, tp, diff);
}

void bench_grid() {
    const DensityModel m = DensityModel::gamma(2.0);
    const ConditionalDensity cd_serial(m, 100.0, {}, exec::Policy::Serial);
    const ConditionalDensity cd_parallel(m, 100.0, {}, exec::Policy::Parallel);
    ConditionalDensityTable a, b;
    const double ts = time_ms([&] { a = cd_serial.grid(16385); }, 3);
    const double tp = time_ms([&] { b = cd_parallel.grid(16385); }, 3);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.log_pdf.size(); ++i)
        diff = std::max(diff, std::fabs(a.log_pdf[i] - b.log_pdf[i]));
    report("density grid (16k points)", ts, tp, diff);
}

void bench_mc() {
    const DensityModel m = DensityModel::exponential();
    McRun a, b;
    const double ts = time_ms(
        [&] { a = conditional_sample_zd(m, 6.0, 0.1, 20000, 42, 1ull << 26, {}, exec::Policy::Serial); },
        1);
    const double tp = time_ms(
        [&] { b = conditional_sample_zd(m, 6.0, 0.1, 20000, 42, 1ull << 26, {}, exec::Policy::Parallel); },
        1);
    double diff = a.samples.size() == b.samples.size() ? 0.0 : 1.0;
    if (diff == 0.0)
        for (std::size_t i = 0; i < a.samples.size(); ++i)
            diff = std::max(diff, std::fabs(a.samples[i] - b.samples[i]));
    report("mc pairs (rejection)", ts, tp, diff);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", exec::max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");
    bench_panel_eval();
    bench_grid();
    bench_mc();
    return 0;
}
