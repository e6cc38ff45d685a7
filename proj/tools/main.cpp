// SPDX-License-Identifier: Apache-2.0
// Command-line front end: forward spectra, Born reconstruction,
// singularity reports, inversion and the locality/stability experiments.
#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "radialborn/io.hpp"
#include "radialborn/inverse.hpp"
#include "radialborn/selftest.hpp"
#include "radialborn/spectral.hpp"

namespace {

using namespace rb;
using nlohmann::json;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int threads_flag = 0;

void add_threads_flag(CLI::App* cmd) {
    cmd->add_option("--threads", threads_flag,
                    "worker count (default: RADIAL_BORN_THREADS or hardware)");
}

// forward --spec spec.json --kmax 100 --route both --out spectrum.csv
int cmd_forward(const std::string& spec_path, int kmax, const std::string& route,
                const std::string& out, double rtol) {
    Timer timer;
    auto spec = io::read_spec_json(spec_path);
    std::string payload;
    if (route == "both" || route == "conductivity") {
        auto s = spectrum(spec, kmax, Route::conductivity_ode, rtol, threads_flag);
        payload += io::spectrum_csv(s);
    }
    if (route == "both" || route == "schrodinger") {
        auto s = spectrum(spec, kmax, Route::schrodinger_halfline, rtol, threads_flag);
        std::string block = io::spectrum_csv(s);
        if (!payload.empty()) block = block.substr(block.find('\n') + 1); // single header
        payload += block;
    }
    if (payload.empty()) throw SchemaError("unknown route '" + route + "'");
    io::write_text(out, payload);
    io::RunManifest manifest;
    manifest.command = "forward";
    manifest.add_input(spec_path);
    manifest.tolerances = {{"rtol", rtol}, {"kmax", double(kmax)}};
    manifest.wall_clock_s = timer.elapsed();
    io::write_manifest(out, manifest);
    return 0;
}

// born --spectrum spectrum.csv --out born.csv [--route fourier|moments]
int cmd_born(const std::string& spectrum_path, const std::string& out, const std::string& route,
             int d, double P, const std::string& hints_path) {
    Timer timer;
    auto s = io::read_spectrum_csv(spectrum_path, d);
    BornOptions opt;
    opt.method = route;
    opt.P = P;
    if (!hints_path.empty()) {
        std::ifstream in(hints_path);
        if (!in) throw SchemaError("cannot open hints file: " + hints_path);
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded()) throw SchemaError("malformed JSON in " + hints_path);
        if (j.contains("resonance")) opt.resonance = j["resonance"].get<bool>();
        if (j.contains("kappas")) opt.kappas = j["kappas"].get<std::vector<double>>();
    }
    auto born = born_profile(s, opt);
    io::write_text(out, io::born_csv(born, default_grid(1024)));
    // reconstruction report: both indexings of the moment problem are
    // recorded side by side
    json report;
    report["a"] = born.a;
    report["b"] = born.b;
    report["method"] = born.method;
    report["K"] = born.K;
    report["moment_fit_residual"] = born.moment_fit_residual;
    report["cutoff_P"] = born.cutoff_P;
    report["accuracy_warning"] = born.accuracy_warning;
    report["sigma_gammaB_proof_indexing"] = born_moments(s);
    report["sigma_gammaB_display_indexing"] = born_moments_display_indexing(s);
    io::write_text(out + ".report.json", report.dump(2) + "\n");
    io::RunManifest manifest;
    manifest.command = "born";
    manifest.add_input(spectrum_path);
    manifest.tolerances = {{"P", P}, {"d", double(d)}};
    manifest.wall_clock_s = timer.elapsed();
    io::write_manifest(out, manifest);
    return 0;
}

// singularities --spec spec.json --out report.json
int cmd_singularities(const std::string& spec_path, const std::string& out, int kmax) {
    Timer timer;
    auto spec = io::read_spec_json(spec_path);
    auto Q = halfline_from_conductivity(spec);
    auto rep = spectral_report(Q, spec.d);
    auto sp = spectrum(spec, kmax, Route::conductivity_ode, 1e-12, threads_flag);
    BornOptions opt;
    opt.resonance = rep.resonance;
    opt.kappas = rep.kappas;
    auto born = born_profile(sp, opt);
    auto dec = fit_singular_decomposition(born.gammaB, rep);
    json j;
    j["jost_at_zero"] = rep.jost_at_zero;
    j["resonance"] = rep.resonance;
    j["kappas"] = rep.kappas;
    j["c0"] = dec.c0;
    json terms = json::array();
    for (auto& [kappa, c] : dec.terms) terms.push_back({{"kappa", kappa}, {"c", c}});
    j["terms"] = terms;
    j["fit_residual"] = dec.fit_residual;
    j["conditioning_warning"] = dec.conditioning_warning;
    io::write_text(out, j.dump(2) + "\n");
    io::RunManifest manifest;
    manifest.command = "singularities";
    manifest.add_input(spec_path);
    manifest.tolerances = {{"kmax", double(kmax)}};
    manifest.wall_clock_s = timer.elapsed();
    io::write_manifest(out, manifest);
    return 0;
}

// invert --born born.csv --space family:example --out fit.json
int cmd_invert(const std::string& born_path, const std::string& space, const std::string& out,
               int d, double mu_fixed, double nu_fixed, int budget) {
    Timer timer;
    auto data_csv = io::read_born_csv(born_path);
    FitProblem prob;
    prob.d = d;
    prob.budget = budget;
    for (std::size_t i = 0; i < data_csv.r.size(); ++i) {
        if (data_csv.r[i] < 0.02) continue; // low-confidence core
        prob.data.r.push_back(data_csv.r[i]);
        prob.data.value.push_back(data_csv.gammaB[i]);
        prob.data.weight.push_back(data_csv.confidence[i]);
    }
    if (space == "family:example") {
        FamilySpace fs;
        if (mu_fixed > 0) fs.mu_fixed = mu_fixed;
        if (nu_fixed >= 0) fs.nu_fixed = nu_fixed;
        prob.space = fs;
    } else if (space.rfind("logbasis", 0) == 0) {
        LogBasisSpace ls;
        auto colon = space.find(':');
        if (colon != std::string::npos) ls.n_coeffs = std::stoi(space.substr(colon + 1));
        prob.space = ls;
    } else {
        throw SchemaError("unknown search space '" + space + "'");
    }
    auto fit = fit_conductivity(prob);
    json j;
    if (fit.params) {
        j["family"] = {{"mu", fit.params->mu}, {"nu", fit.params->nu}};
    }
    j["spec"] = io::spec_to_json(fit.spec);
    j["misfit"] = fit.report.misfit;
    j["evaluations"] = fit.report.evaluations;
    j["converged"] = fit.report.converged;
    j["projections"] = fit.report.projections;
    if (!fit.report.warning.empty()) j["warning"] = fit.report.warning;
    io::write_text(out, j.dump(2) + "\n");
    io::RunManifest manifest;
    manifest.command = "invert";
    manifest.add_input(born_path);
    manifest.tolerances = {{"budget", double(budget)}};
    manifest.wall_clock_s = timer.elapsed();
    io::write_manifest(out, manifest);
    return 0;
}

// stability --base spec.json --sweep sweep.json --out table.csv
int cmd_stability(const std::string& base_path, const std::string& sweep_path,
                  const std::string& out) {
    Timer timer;
    auto base = io::read_spec_json(base_path);
    std::ifstream in(sweep_path);
    if (!in) throw SchemaError("cannot open sweep file: " + sweep_path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw SchemaError("malformed JSON in " + sweep_path);
    if (!j.contains("epsilons")) throw SchemaError("sweep JSON needs an 'epsilons' array");
    auto eps = j["epsilons"].get<std::vector<double>>();
    const int contact = j.value("contact", 2);
    const double center = j.value("center", 0.0), width = j.value("width", 1.0);
    const int k_modes = j.value("k_modes", 48);
    const double region_lo = j.value("region_lo", 0.0);
    std::vector<RadialProfile> perturbations;
    for (double e : eps)
        perturbations.push_back(
            RadialProfile::closed_form(base.d, fn::poly_bump(e, center, width, contact)));
    auto rec = stability_sweep(base, perturbations, region_lo, k_modes, threads_flag);
    std::ostringstream table;
    table << "epsilon,born_diff_w21,gamma_diff_w21\n";
    for (std::size_t i = 0; i < eps.size(); ++i)
        table << io::format_double(eps[i]) << ',' << io::format_double(rec.born_diff[i]) << ','
              << io::format_double(rec.gamma_diff[i]) << "\n";
    io::write_text(out, table.str());
    json summary;
    summary["fitted_exponent"] = rec.fitted_exponent;
    summary["rank_correlation"] = rec.rank_correlation;
    summary["region_lo"] = rec.region_lo;
    io::write_text(out + ".summary.json", summary.dump(2) + "\n");
    io::RunManifest manifest;
    manifest.command = "stability";
    manifest.add_input(base_path);
    manifest.add_input(sweep_path);
    manifest.tolerances = {{"k_modes", double(k_modes)}};
    manifest.wall_clock_s = timer.elapsed();
    io::write_manifest(out, manifest);
    return 0;
}

// locality --spec1 a.json --spec2 b.json --s 0.5 --out loc.json
int cmd_locality(const std::string& spec1_path, const std::string& spec2_path, double s,
                 const std::string& out, bool with_born, int k_lo, int k_hi) {
    Timer timer;
    auto g1 = io::read_spec_json(spec1_path);
    auto g2 = io::read_spec_json(spec2_path);
    auto rep = locality_test(g1, g2, s, k_lo, k_hi, 0.05, with_born, threads_flag);
    json j;
    j["log_s"] = rep.log_s;
    j["rho_hat"] = rep.rho_hat;
    j["rho_hat_plain"] = rep.rho_hat_plain;
    j["relative_gap"] = rep.relative_gap;
    j["decay_ok"] = rep.decay_ok;
    j["inconclusive"] = rep.inconclusive;
    json per_k = json::array();
    for (std::size_t i = 0; i < rep.k.size(); ++i)
        per_k.push_back({{"k", rep.k[i]}, {"delta_lambda", rep.delta_lambda[i]}});
    j["per_k"] = per_k;
    if (with_born) {
        j["born_diff_annulus"] = rep.born_diff_annulus;
        j["born_diff_inside"] = rep.born_diff_inside;
    }
    io::write_text(out, j.dump(2) + "\n");
    io::RunManifest manifest;
    manifest.command = "locality";
    manifest.add_input(spec1_path);
    manifest.add_input(spec2_path);
    manifest.tolerances = {{"s", s}, {"k_lo", double(k_lo)}, {"k_hi", double(k_hi)}};
    manifest.wall_clock_s = timer.elapsed();
    io::write_manifest(out, manifest);
    return 0;
}

// examples --d 3 --mu 1 --nu 0 --out ex.csv
int cmd_examples(int d, double mu, double nu, const std::string& out, int n) {
    Timer timer;
    auto fam = example_family(d, mu, nu);
    std::ostringstream os;
    os << "r,gamma,gammaB\n";
    for (double r : default_grid(n))
        os << io::format_double(r) << ',' << io::format_double(fam.spec.gamma.eval(r)) << ','
           << io::format_double(fam.born.jet(r).v) << "\n";
    io::write_text(out, os.str());
    io::RunManifest manifest;
    manifest.command = "examples";
    manifest.tolerances = {{"d", double(d)}, {"mu", mu}, {"nu", nu}, {"n", double(n)}};
    manifest.wall_clock_s = timer.elapsed();
    io::write_manifest(out, manifest);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"radialborn: Dirichlet-to-Neumann spectra and Born approximations of radial conductivities"};
    app.require_subcommand(1);

    std::string spec_path, out, route = "conductivity", born_route = "fourier";
    std::string spectrum_path, hints_path;
    std::string born_path, space = "family:example", spec2_path, sweep_path;
    int kmax = 100, sing_kmax = 200, d = 3, n = 512, budget = 500, k_lo = 10, k_hi = 40;
    double rtol = 1e-12, P = 30.0, mu = 1.0, nu = 1.0, s_annulus = 0.5;
    double mu_fixed = -1.0, nu_fixed = -1.0;
    bool with_born = false;

    auto* fwd = app.add_subcommand("forward", "compute the DtN spectrum of a conductivity");
    fwd->add_option("--spec", spec_path, "conductivity spec JSON")->required();
    fwd->add_option("--kmax", kmax, "highest mode index");
    fwd->add_option("--route", route, "conductivity|schrodinger|both");
    fwd->add_option("--out", out, "output CSV")->required();
    fwd->add_option("--rtol", rtol, "ODE relative tolerance");
    add_threads_flag(fwd);

    auto* brn = app.add_subcommand("born", "reconstruct the Born approximation from a spectrum");
    brn->add_option("--spectrum", spectrum_path, "spectrum CSV")->required();
    brn->add_option("--out", out, "output CSV")->required();
    brn->add_option("--route", born_route, "fourier|moments")->capture_default_str();
    brn->add_option("--d", d, "ambient dimension");
    brn->add_option("--P", P, "inverse-transform frequency cutoff");
    brn->add_option("--hints", hints_path, "singularities report JSON with kappas/resonance");

    auto* sing = app.add_subcommand("singularities", "Jost analysis and singular decomposition");
    sing->add_option("--spec", spec_path, "conductivity spec JSON")->required();
    sing->add_option("--out", out, "output report JSON")->required();
    sing->add_option("--kmax", sing_kmax, "modes for the Born reconstruction")->capture_default_str();
    add_threads_flag(sing);

    auto* inv = app.add_subcommand("invert", "recover a conductivity from Born data");
    inv->add_option("--born", born_path, "born CSV")->required();
    inv->add_option("--space", space, "family:example | logbasis[:n]")->capture_default_str();
    inv->add_option("--out", out, "output fit JSON")->required();
    inv->add_option("--d", d, "ambient dimension");
    inv->add_option("--fix-mu", mu_fixed, "pin mu");
    inv->add_option("--fix-nu", nu_fixed, "pin nu");
    inv->add_option("--budget", budget, "objective evaluation budget");

    auto* stab = app.add_subcommand("stability", "perturbation sweep of the Born map");
    stab->add_option("--base", spec_path, "base conductivity spec JSON")->required();
    stab->add_option("--sweep", sweep_path, "sweep description JSON")->required();
    stab->add_option("--out", out, "output table CSV")->required();
    add_threads_flag(stab);

    auto* loc = app.add_subcommand("locality", "exponential decay test for matching annuli");
    loc->add_option("--spec1", spec_path, "first conductivity spec JSON")->required();
    loc->add_option("--spec2", spec2_path, "second conductivity spec JSON")->required();
    loc->add_option("--s", s_annulus, "annulus inner radius")->required();
    loc->add_option("--out", out, "output report JSON")->required();
    loc->add_flag("--with-born", with_born, "also compare reconstructed Born profiles");
    loc->add_option("--k-lo", k_lo, "lowest mode in the decay fit");
    loc->add_option("--k-hi", k_hi, "highest mode in the decay fit");
    add_threads_flag(loc);

    auto* ex = app.add_subcommand("examples", "emit the explicit family profiles");
    ex->add_option("--d", d, "ambient dimension")->required();
    ex->add_option("--mu", mu, "family parameter mu")->required();
    ex->add_option("--nu", nu, "family parameter nu")->required();
    ex->add_option("--out", out, "output CSV")->required();
    ex->add_option("--n", n, "grid size");

    auto* self = app.add_subcommand("selftest", "run the acceptance suite");
    add_threads_flag(self);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fwd->parsed()) return cmd_forward(spec_path, kmax, route, out, rtol);
        if (brn->parsed()) return cmd_born(spectrum_path, out, born_route, d, P, hints_path);
        if (sing->parsed()) return cmd_singularities(spec_path, out, sing_kmax);
        if (inv->parsed()) return cmd_invert(born_path, space, out, d, mu_fixed, nu_fixed, budget);
        if (stab->parsed()) return cmd_stability(spec_path, sweep_path, out);
        if (loc->parsed())
            return cmd_locality(spec_path, spec2_path, s_annulus, out, with_born, k_lo, k_hi);
        if (ex->parsed()) return cmd_examples(d, mu, nu, out, n);
        if (self->parsed()) {
            auto results = rb::selftest::run_acceptance(threads_flag);
            std::fputs(rb::selftest::format_table(results).c_str(), stdout);
            for (const auto& r : results)
                if (!r.pass) return 3;
            return 0;
        }
    } catch (const rb::SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 4;
    } catch (const rb::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
