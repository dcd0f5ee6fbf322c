// Command-line front end: every operation as a reproducible batch command
// with CSV/JSON outputs and a manifest alongside every file written.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zdlab/classifier.hpp"
#include "zdlab/conditional_density.hpp"
#include "zdlab/convergence.hpp"
#include "zdlab/density_models.hpp"
#include "zdlab/errors.hpp"
#include "zdlab/io.hpp"
#include "zdlab/mc.hpp"

namespace {

using namespace zdlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitAcceptance = 4;
constexpr int kExitContradiction = 5;

std::vector<double> parse_list(const std::string& csv, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError(what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw ParseError(what + ": empty list");
    return out;
}

std::vector<double> default_d_ladder() {
    return ProbeConfig::defaults().d_ladder;
}

void show_defaults() {
    std::cout << "zdlab defaults (" << kToolVersion << ")\n"
              << "  quadrature        rel_tol=1e-12  gl_points=8  init_panels=512  max_depth=80\n"
              << "  density grid      grid-n=257  refine-power=3 (clusters near 0, 1/2, 1)\n"
              << "  probe tail grid   t_start=4  t_factor=2  n_probes=12  zero_tol=1e-12\n"
              << "  probe d ladder    10*4^k, k=0..10\n"
              << "  probe x values    0.1, 0.25, 0.4\n"
              << "  divergence        growth_ratio=10  bounded_variation=0.10  gap_zero_tol=1e-9\n"
              << "  hazard trend      rel_tol=1e-8\n"
              << "  tail class        s probes 2^-k, k=0..6  slope_tol=1e-6\n"
              << "  ladder            eps=0.05  mass_threshold=0.95  stationary_variation=0.01\n"
              << "  pointwise         vanish_ratio=1e-3\n"
              << "  simulate          delta=0.01*d  n=50000  seed=1  max_attempts=2^32\n"
              << "                    accept_floor=1e-7  pilot_pairs=100000  chunk=16384\n"
              << "  environment       ZDLAB_THREADS=<n> caps worker threads\n";
}

nlohmann::json quad_json(const QuadConfig& qc) {
    return {{"rel_tol", qc.rel_tol},
            {"gl_points", qc.gl_points},
            {"init_panels", qc.init_panels},
            {"max_depth", qc.max_depth}};
}

int cmd_list_models(const std::string& format) {
    const auto families = list_families();
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : families)
            arr.push_back({{"name", f.name},
                           {"params", f.params},
                           {"support", f.support},
                           {"density", f.density}});
        std::cout << arr.dump(2) << "\n";
        return kExitOk;
    }
    std::printf("%-10s %-22s %-10s %s\n", "family", "params", "support", "density");
    for (const auto& f : families)
        std::printf("%-10s %-22s %-10s %s\n", f.name.c_str(), f.params.c_str(), f.support.c_str(),
                    f.density.c_str());
    return kExitOk;
}

int cmd_density(const std::string& model_spec, double d, int grid_n, double refine,
                const std::string& out, const std::string& format) {
    const DensityModel m = parse_model_spec(model_spec);
    const QuadConfig qc;
    const ConditionalDensityTable table = pdf_zd_grid(m, d, grid_n, refine, qc);

    std::string payload;
    if (format == "json") {
        nlohmann::json j{{"d", table.d},
                         {"model", table.model_spec},
                         {"log_partition", table.log_partition},
                         {"x", table.x},
                         {"log_pdf", table.log_pdf},
                         {"pdf", table.pdf}};
        payload = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        table.write_csv(os);
        payload = os.str();
    }
    if (out.empty()) {
        std::cout << payload;
        return kExitOk;
    }
    write_file(out, payload);
    RunManifest man;
    man.command = "density";
    man.model_spec = model_spec;
    man.numeric_config = {{"d", d}, {"grid_n", grid_n}, {"refine", refine},
                          {"format", format}, {"quad", quad_json(qc)}};
    man.output_paths = {out};
    man.write(out + ".manifest.json");
    return kExitOk;
}

ProbeConfig probe_from_flags(const std::string& d_ladder_csv, const std::string& x_probes_csv,
                             double t_start, double t_factor, int n_probes) {
    ProbeConfig probe = ProbeConfig::defaults();
    probe.t_start = t_start;
    probe.t_factor = t_factor;
    probe.n_probes = n_probes;
    if (!d_ladder_csv.empty()) probe.d_ladder = parse_list(d_ladder_csv, "--d-ladder");
    if (!x_probes_csv.empty()) probe.x_probes = parse_list(x_probes_csv, "--x-probes");
    probe.validate();
    return probe;
}

int cmd_analyze(const std::string& model_spec, const ProbeConfig& probe, bool certify,
                const std::string& out) {
    const DensityModel m = parse_model_spec(model_spec);
    std::optional<PointwiseCertificate> cert;
    if (certify) {
        LadderConfig lc;
        cert = pointwise_vanishing(m, probe.x_probes, probe.d_ladder, lc);
    }
    const ClassificationReport report = classify(m, probe, cert);
    nlohmann::json j = report.to_json();
    j["model"] = model_spec;
    if (cert) j["pointwise_certificate"] = to_string(*cert);
    const std::string payload = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << payload;
        return kExitOk;
    }
    write_file(out, payload);
    RunManifest man;
    man.command = "analyze";
    man.model_spec = model_spec;
    man.numeric_config = {{"t_start", probe.t_start},
                          {"t_factor", probe.t_factor},
                          {"n_probes", probe.n_probes},
                          {"d_ladder", probe.d_ladder},
                          {"x_probes", probe.x_probes},
                          {"certify_pointwise", certify}};
    man.output_paths = {out};
    man.write(out + ".manifest.json");
    return kExitOk;
}

int cmd_ladder(const std::string& model_spec, const std::string& d_ladder_csv, double eps,
               const std::string& x_probes_csv, const std::string& out) {
    const DensityModel m = parse_model_spec(model_spec);
    std::vector<double> d_values =
        d_ladder_csv.empty() ? default_d_ladder() : parse_list(d_ladder_csv, "--d-ladder");
    std::vector<double> x_probes = x_probes_csv.empty()
                                       ? std::vector<double>{0.1, 0.25, 0.4}
                                       : parse_list(x_probes_csv, "--x-probes");
    LadderConfig cfg;
    const ConvergenceLadder lad = convergence_ladder(m, d_values, eps, x_probes, cfg);

    std::ostringstream csv;
    lad.write_csv(csv);
    const std::string summary = lad.summary_json().dump(2) + "\n";
    if (out.empty()) {
        std::cout << csv.str() << summary;
        return kExitOk;
    }
    write_file(out + ".csv", csv.str());
    write_file(out + ".summary.json", summary);
    RunManifest man;
    man.command = "ladder";
    man.model_spec = model_spec;
    man.numeric_config = {{"d_ladder", d_values}, {"eps", eps}, {"x_probes", x_probes},
                          {"quad", quad_json(cfg.quad)}};
    man.output_paths = {out + ".csv", out + ".summary.json"};
    man.write(out + ".manifest.json");
    return kExitOk;
}

int cmd_simulate(const std::string& model_spec, double d, double delta, std::uint64_t n,
                 std::uint64_t seed, std::uint64_t max_attempts, const std::string& out) {
    const DensityModel m = parse_model_spec(model_spec);
    if (delta <= 0.0) delta = 0.01 * d;
    McConfig cfg;
    McRun run = conditional_sample_zd(m, d, delta, n, seed, max_attempts, cfg);
    compare_mc_analytic(run, m, cfg.quad);

    const std::string sidecar = run.sidecar_json().dump(2) + "\n";
    if (out.empty()) {
        std::cout << sidecar;
        return kExitOk;
    }
    std::ostringstream csv;
    run.write_samples_csv(csv);
    write_file(out + ".samples.csv", csv.str());
    write_file(out + ".json", sidecar);
    RunManifest man;
    man.command = "simulate";
    man.model_spec = model_spec;
    man.numeric_config = {{"d", d},
                          {"delta", delta},
                          {"n", n},
                          {"seed", seed},
                          {"max_attempts", max_attempts},
                          {"accept_floor", cfg.accept_floor},
                          {"pilot_pairs", cfg.pilot_pairs},
                          {"generator", kGeneratorId}};
    man.output_paths = {out + ".samples.csv", out + ".json"};
    man.write(out + ".manifest.json");
    std::cout << sidecar;
    return kExitOk;
}

int cmd_corollary_demo(const std::string& out_dir) {
    const DensityModel y = DensityModel::exp_sqrt_minus();
    const DensityModel x = DensityModel::exp_sqrt_plus();
    const ProbeConfig probe = ProbeConfig::defaults();

    const ClassificationReport rep_y = classify(y, probe);
    const ClassificationReport rep_x = classify(x, probe);

    LadderConfig lc;
    const std::vector<double> d_values = default_d_ladder();
    const std::vector<double> x_probes = {0.1, 0.25, 0.4};
    const ConvergenceLadder lad_y = convergence_ladder(y, d_values, 0.05, x_probes, lc);
    const ConvergenceLadder lad_x = convergence_ladder(x, d_values, 0.05, x_probes, lc);

    const std::vector<double> xs = {10.0, 50.0, 100.0, 200.0, 400.0};
    const std::vector<TailRatio> dom = tail_domination_ratio(y, x, xs);
    bool decreasing = true;
    for (std::size_t i = 1; i < dom.size(); ++i)
        if (!(dom[i].log_ratio < dom[i - 1].log_ratio)) decreasing = false;
    const bool dom_small = dom.back().log_ratio - dom.front().log_ratio < std::log(0.1);

    const bool ok = rep_y.behaviour == Behaviour::TypeI && rep_y.tail_class == TailClass::Light &&
                    rep_x.behaviour == Behaviour::TypeII &&
                    lad_y.verdict == LadderVerdict::TendsToTypeI &&
                    lad_x.verdict == LadderVerdict::TendsToTypeII && decreasing && dom_small;

    nlohmann::json dom_json = nlohmann::json::array();
    for (const auto& r : dom)
        dom_json.push_back({{"x", r.x}, {"ratio", r.ratio}, {"log_ratio", r.log_ratio}});
    nlohmann::json summary{
        {"domination_trend", decreasing ? "decreasing" : "not_decreasing"},
        {"domination_final_over_initial", std::exp(dom.back().log_ratio - dom.front().log_ratio)},
        {"domination", dom_json},
        {"Y", {{"model", y.spec_string()},
               {"behaviour", to_string(rep_y.behaviour)},
               {"tail", to_string(rep_y.tail_class)},
               {"ladder", to_string(lad_y.verdict)}}},
        {"X", {{"model", x.spec_string()},
               {"behaviour", to_string(rep_x.behaviour)},
               {"tail", to_string(rep_x.tail_class)},
               {"ladder", to_string(lad_x.verdict)}}},
        {"ok", ok}};
    const std::string payload = summary.dump(2) + "\n";
    std::cout << payload;

    if (!out_dir.empty()) {
        const std::string base = out_dir + "/";
        nlohmann::json jy = rep_y.to_json();
        jy["model"] = y.spec_string();
        nlohmann::json jx = rep_x.to_json();
        jx["model"] = x.spec_string();
        write_file(base + "analyze_Y.json", jy.dump(2) + "\n");
        write_file(base + "analyze_X.json", jx.dump(2) + "\n");
        std::ostringstream cy, cx, cdom;
        lad_y.write_csv(cy);
        lad_x.write_csv(cx);
        write_file(base + "ladder_Y.csv", cy.str());
        write_file(base + "ladder_X.csv", cx.str());
        cdom << "x,ratio,log_ratio\n";
        for (const auto& r : dom) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r.x, r.ratio, r.log_ratio);
            cdom << buf;
        }
        write_file(base + "domination.csv", cdom.str());
        write_file(base + "summary.json", payload);
        RunManifest man;
        man.command = "corollary-demo";
        man.model_spec = y.spec_string() + " vs " + x.spec_string();
        man.numeric_config = {{"d_ladder", d_values}, {"eps", 0.05}, {"x_values", xs}};
        man.output_paths = {base + "analyze_Y.json", base + "analyze_X.json",
                            base + "ladder_Y.csv",  base + "ladder_X.csv",
                            base + "domination.csv", base + "summary.json"};
        man.write(base + "manifest.json");
    }
    return ok ? kExitOk : kExitContradiction;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the conditional fraction Z_d = X1/d | {X1+X2=d}"};
    app.require_subcommand(0, 1);
    bool defaults_flag = false;
    app.add_flag("--show-defaults", defaults_flag, "print the defaults table and exit");

    // list-models
    auto* list_cmd = app.add_subcommand("list-models", "families, parameter schemas, supports");
    std::string list_format = "text";
    list_cmd->add_option("--format", list_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // density
    auto* density_cmd = app.add_subcommand("density", "tabulate the law of Z_d on a grid");
    std::string den_model, den_out, den_format = "csv";
    double den_d = 0.0, den_refine = 3.0;
    int den_grid = 257;
    density_cmd->add_option("--model", den_model, "model spec, e.g. gamma:a=2")->required();
    density_cmd->add_option("--d", den_d, "conditioning sum")->required();
    density_cmd->add_option("--grid-n", den_grid, "grid size (>= 16)");
    density_cmd->add_option("--refine", den_refine, "grid clustering power");
    density_cmd->add_option("--out", den_out, "output path (stdout when omitted)");
    density_cmd->add_option("--format", den_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "classification report for a model");
    std::string an_model, an_ladder, an_xprobes, an_out;
    double an_tstart = 4.0, an_tfactor = 2.0;
    int an_nprobes = 12;
    bool an_certify = false;
    analyze_cmd->add_option("--model", an_model, "model spec")->required();
    analyze_cmd->add_option("--t-start", an_tstart, "tail probe start");
    analyze_cmd->add_option("--t-factor", an_tfactor, "tail probe factor");
    analyze_cmd->add_option("--n-probes", an_nprobes, "tail probe count");
    analyze_cmd->add_option("--d-ladder", an_ladder, "comma list overriding the d ladder");
    analyze_cmd->add_option("--x-probes", an_xprobes, "comma list of x probes in (0,1/2)");
    analyze_cmd->add_flag("--certify-pointwise", an_certify,
                          "run the pointwise-vanishing diagnostic first and feed the certificate");
    analyze_cmd->add_option("--out", an_out, "output path (stdout when omitted)");

    // ladder
    auto* ladder_cmd = app.add_subcommand("ladder", "window-mass convergence ladder");
    std::string lad_model, lad_dladder, lad_xprobes, lad_out;
    double lad_eps = 0.05;
    ladder_cmd->add_option("--model", lad_model, "model spec")->required();
    ladder_cmd->add_option("--d-ladder", lad_dladder, "comma list of d values");
    ladder_cmd->add_option("--eps", lad_eps, "window half-width in (0, 1/4)");
    ladder_cmd->add_option("--x-probes", lad_xprobes, "comma list of x probes");
    ladder_cmd->add_option("--out", lad_out, "output stem (stdout when omitted)");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "seeded conditional Monte Carlo run");
    std::string sim_model, sim_out;
    double sim_d = 0.0, sim_delta = 0.0;
    std::uint64_t sim_n = 50000, sim_seed = 1, sim_max = (1ull << 32);
    sim_cmd->add_option("--model", sim_model, "model spec")->required();
    sim_cmd->add_option("--d", sim_d, "conditioning sum")->required();
    sim_cmd->add_option("--delta", sim_delta, "window width (default 0.01*d)");
    sim_cmd->add_option("--n", sim_n, "accepted samples requested");
    sim_cmd->add_option("--seed", sim_seed, "PRNG seed");
    sim_cmd->add_option("--max-attempts", sim_max, "total pair budget");
    sim_cmd->add_option("--out", sim_out, "output stem (stdout when omitted)");

    // corollary-demo
    auto* demo_cmd = app.add_subcommand(
        "corollary-demo", "headline reproduction: dominated tail with opposite behaviour types");
    std::string demo_dir;
    demo_cmd->add_option("--out-dir", demo_dir, "directory for the CSV/JSON bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (defaults_flag) {
            show_defaults();
            return kExitOk;
        }
        if (list_cmd->parsed()) return cmd_list_models(list_format);
        if (density_cmd->parsed())
            return cmd_density(den_model, den_d, den_grid, den_refine, den_out, den_format);
        if (analyze_cmd->parsed()) {
            const ProbeConfig probe =
                probe_from_flags(an_ladder, an_xprobes, an_tstart, an_tfactor, an_nprobes);
            return cmd_analyze(an_model, probe, an_certify, an_out);
        }
        if (ladder_cmd->parsed())
            return cmd_ladder(lad_model, lad_dladder, lad_eps, lad_xprobes, lad_out);
        if (sim_cmd->parsed())
            return cmd_simulate(sim_model, sim_d, sim_delta, sim_n, sim_seed, sim_max, sim_out);
        if (demo_cmd->parsed()) return cmd_corollary_demo(demo_dir);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParamOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const AcceptanceTooLow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAcceptance;
    } catch (const EmptySupport& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const OutsideSupport& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const OutsideWindow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const WrongFamily& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const NonFinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
