// invsq: command-line front end for the inverse-square spectral pipelines.
//
// Every run writes its results (CSV or JSON) plus a manifest JSON recording
// the resolved configuration; identical manifests produce byte-identical
// outputs. Exit codes: 0 success, 1 domain error, 2 usage / malformed input.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invsq/approxefn.hpp"
#include "invsq/common.hpp"
#include "invsq/experiments.hpp"
#include "invsq/exterior.hpp"
#include "invsq/ladder.hpp"
#include "invsq/oscillation.hpp"
#include "invsq/spec_file.hpp"

namespace {

using nlohmann::json;
using namespace invsq;

int log_level() {
    const char* v = std::getenv("INVSQ_LOG");
    return v ? std::atoi(v) : 0;
}

void log_line(const std::string& msg) {
    if (log_level() > 0) std::cerr << "invsq: " << msg << "\n";
}

// Fixed-precision, locale-independent number formatting for reproducibility.
std::string fmt(double x) {
    x += 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> parse_grid(const std::string& list) {
    std::vector<double> grid;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t pos = 0;
            grid.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--E-grid", "not a number: '" + tok + "'");
        }
        if (!(grid.back() > 0.0)) throw CLI::ValidationError("--E-grid", "entries must be > 0");
    }
    if (grid.empty()) throw CLI::ValidationError("--E-grid", "empty grid");
    std::sort(grid.begin(), grid.end(), std::greater<>());
    return grid;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << body;
}

struct CommonOpts {
    std::string potential;
    std::string out;
    double tol_ode = 1e-10;
    double tol_eig = 1e-8;
    int basis = 12;
    int threads = 1;
    unsigned seed = 12345;
};

void write_manifest(const CommonOpts& c, const std::string& subcommand, const json& params) {
    json m;
    m["tool"] = "invsq";
    m["version"] = "0.1.0";
    m["subcommand"] = subcommand;
    m["potential_file"] = c.potential;
    m["out"] = c.out;
    m["tolerances"] = {{"tol_ode", c.tol_ode}, {"tol_eig", c.tol_eig}};
    m["basis"] = c.basis;
    m["threads"] = c.threads;
    m["seed"] = c.seed;
    m["parameters"] = params;
    write_file(c.out + ".manifest.json", m.dump(2) + "\n");
}

AngularMode mode_from_mu(double mu, int d) {
    AngularMode m;
    m.mu = mu;
    classify_mode(m, d);
    return m;
}

// ---- subcommand bodies -----------------------------------------------------

void run_angular(const CommonOpts& c) {
    const PotentialSpec spec = load_potential_spec(c.potential);
    const AngularSpectrum s = angular_spectrum(spec.angular, c.basis, c.tol_eig);
    std::ostringstream csv;
    csv << "index,eigenvalue,mu,multiplicity,critical,tau,alpha_re,alpha_im\n";
    for (const AngularMode& m : s.modes)
        csv << m.index << ',' << fmt(m.eigenvalue()) << ',' << fmt(m.mu) << ',' << m.multiplicity
            << ',' << (m.critical ? 1 : 0) << ',' << fmt(m.tau) << ',' << fmt(m.alpha.real())
            << ',' << fmt(m.alpha.imag()) << '\n';
    write_file(c.out, csv.str());
    write_manifest(c, "angular", {{"galerkin_residual", s.galerkin_residual}});
}

void run_count(const CommonOpts& c, const std::string& grid_list, const std::string& sign,
               bool exhaustive) {
    const std::vector<double> grid = parse_grid(grid_list);
    PotentialSpec spec = load_potential_spec(c.potential);
    if (sign == "minus" && spec.radial.kind() == RadialPerturbation::Kind::LogPower)
        spec.radial = RadialPerturbation::log_power(spec.radial.coefficient(),
                                                    spec.radial.power(), -1);
    const int d = spec.angular.dimension();
    const AngularSpectrum s = angular_spectrum(spec.angular, c.basis, c.tol_eig);
    const CountReport rep = count_report(s, grid, spec.radial, d, exhaustive);
    std::ostringstream csv;
    csv << "E,mode_index,count,predicted,total\n";
    for (std::size_t i = 0; i < rep.E_grid.size(); ++i) {
        for (std::size_t k = 0; k < rep.mode_info.size(); ++k)
            csv << fmt(rep.E_grid[i]) << ',' << rep.mode_info[k].mode_index << ','
                << rep.per_mode_counts[i][k] << ',' << fmt(rep.predicted[i]) << ','
                << rep.totals[i] << '\n';
        if (rep.mode_info.empty())
            csv << fmt(rep.E_grid[i]) << ",0,0," << fmt(rep.predicted[i]) << ','
                << rep.totals[i] << '\n';
    }
    write_file(c.out, csv.str());
    write_manifest(c, "count",
                   {{"E_grid", grid}, {"sign", sign}, {"exhaustive", exhaustive},
                    {"fit_slope", rep.fit.slope}});
}

void run_slope(const CommonOpts& c, const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw Error("cannot open input CSV: " + in_path);
    std::string line;
    std::getline(in, line);  // header
    std::map<double, std::pair<double, double>> rows;  // E -> (total, predicted)
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string e, idx, cnt, pred, tot;
        if (!std::getline(ss, e, ',') || !std::getline(ss, idx, ',') ||
            !std::getline(ss, cnt, ',') || !std::getline(ss, pred, ',') || !std::getline(ss, tot))
            throw Error("slope: malformed CSV row: " + line);
        rows[std::stod(e)] = {std::stod(tot), std::stod(pred)};
    }
    std::vector<double> grid, totals, predicted;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {  // descending E
        grid.push_back(it->first);
        totals.push_back(it->second.first);
        predicted.push_back(it->second.second);
    }
    const SlopeFit fit = slope_fit(grid, totals);
    const SlopeFit pfit = slope_fit(grid, predicted);
    json out;
    out["slope"] = fit.slope;
    out["predicted_slope"] = pfit.slope;
    out["max_residual"] = fit.max_abs_residual;
    out["intercept"] = fit.intercept;
    write_file(c.out, out.dump(2) + "\n");
    write_manifest(c, "slope", {{"in", in_path}});
}

void run_exterior(const CommonOpts& c, double mode_mu, double lambda) {
    const AngularMode mode = mode_from_mu(mode_mu, 3);
    const ExteriorSolution sol =
        evaluate_exterior(mode, lambda, 0.01 / std::sqrt(lambda), 30.0 / std::sqrt(lambda));
    std::ostringstream csv;
    csv << "r,X,Xprime,logderiv\n";
    for (std::size_t i = 0; i < sol.r.size(); ++i)
        csv << fmt(sol.r[i]) << ',' << fmt(sol.X[i]) << ',' << fmt(sol.Xp[i]) << ','
            << fmt(sol.X[i] != 0.0 ? sol.Xp[i] / sol.X[i]
                                   : std::numeric_limits<double>::quiet_NaN())
            << '\n';
    write_file(c.out, csv.str());
    write_manifest(c, "exterior",
                   {{"mode_mu", mode_mu}, {"lambda", lambda}, {"log_scale", sol.log_scale}});
}

void run_ladder(const CommonOpts& c, int n_max) {
    const PotentialSpec spec = load_potential_spec(c.potential);
    const InteriorModel model = interior_model(spec, c.basis);
    const EigenLadder lad = compute_ladder(model, n_max);
    std::ostringstream csv;
    csv << "n,lambda_n,xi_n,ratio,a_estimate\n";
    for (std::size_t i = 0; i < lad.lambda_n.size(); ++i)
        csv << (i + 1) << ',' << fmt(lad.lambda_n[i]) << ',' << fmt(lad.xi_n[i]) << ','
            << (i < lad.ratios.size() ? fmt(lad.ratios[i]) : std::string()) << ','
            << fmt(lad.a_estimates[i]) << '\n';
    write_file(c.out, csv.str());
    write_manifest(c, "ladder",
                   {{"n_max", n_max}, {"sigma", lad.sigma}, {"c", lad.c}, {"d", lad.d},
                    {"branch_k", lad.branch_k}, {"warnings", lad.warnings}});
    for (const std::string& w : lad.warnings) log_line("warning: " + w);
}

void run_localize(const CommonOpts& c, int n, double epsilon) {
    const PotentialSpec spec = load_potential_spec(c.potential);
    const InteriorModel model = interior_model(spec, c.basis);
    const EigenLadder lad = compute_ladder(model, n);
    const LocalizationReport rep =
        localization(model, n, lad.lambda_n.at(n - 1), lad.sigma, epsilon);
    json out;
    out["n"] = rep.n;
    out["lambda"] = rep.lambda;
    out["mass_fraction"] = rep.mass_fraction;
    out["r_lo"] = rep.r_lo;
    out["r_hi"] = rep.r_hi;
    out["C_minus"] = rep.C_minus;
    out["C_plus"] = rep.C_plus;
    out["interior_fraction"] = rep.interior_fraction;
    write_file(c.out, out.dump(2) + "\n");
    write_manifest(c, "localize", {{"n", n}, {"epsilon", epsilon}});
}

void run_phi_residual(const CommonOpts& c, const std::string& n_range, double delta,
                      int mode_cut) {
    int a = 0, b = 0;
    if (std::sscanf(n_range.c_str(), "%d:%d", &a, &b) != 2 || a < 1 || b < a)
        throw CLI::ValidationError("--n-range", "expected A:B with 1 <= A <= B");
    const PotentialSpec spec = load_potential_spec(c.potential);
    const InteriorModel model = interior_model(spec, c.basis);
    const ApproxContext ctx = make_approx_context(model);
    std::ostringstream csv;
    csv << "n,lambda,rho,residual,ratio,phi1,norm\n";
    for (int n = a; n <= b; ++n) {
        log_line("phi-residual: rung " + std::to_string(n));
        const double lambda = solve_approx_lambda(model, ctx, n, delta);
        const PhiFunction phi = build_phi(model, lambda, mode_cut, delta);
        const ResidualNorm res = residual_norm(phi);
        csv << n << ',' << fmt(lambda) << ',' << fmt(phi.rho) << ',' << fmt(res.num) << ','
            << fmt(res.ratio) << ',' << fmt(phi.modes.front().phi) << ','
            << fmt(std::sqrt(phi.norm2)) << '\n';
    }
    write_file(c.out, csv.str());
    write_manifest(c, "phi-residual",
                   {{"n_range", n_range}, {"delta", delta}, {"mode_cut", mode_cut},
                    {"sigma", ctx.sigma}, {"C", ctx.C}});
}

void run_counterexample(const CommonOpts& c, const std::string& grid_list, double tame_C) {
    const std::vector<double> grid = parse_grid(grid_list);
    const CounterexampleT T = build_counterexample_T(build_periodic_g());
    const std::vector<int> sharp = sharpness_experiment(T.perturbation(), grid);
    const std::vector<int> tame =
        sharpness_experiment(RadialPerturbation::log_power(tame_C, 2.5), grid);
    std::ostringstream csv;
    csv << "E,count_counterexample,count_log_power\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv << fmt(grid[i]) << ',' << sharp[i] << ',' << tame[i] << '\n';
    write_file(c.out, csv.str());
    write_manifest(c, "counterexample",
                   {{"E_grid", grid}, {"sup_t2_T", T.sup_t2_T}, {"C", tame_C}});
}

void run_hemisphere(const CommonOpts& c, double epsilon, const std::string& grid_list) {
    const std::vector<double> grid = parse_grid(grid_list);
    const HemisphereResult res = hemisphere_experiment(epsilon, grid, c.basis);
    std::ostringstream csv;
    csv << "E,count_even,count_odd,predicted_even\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv << fmt(grid[i]) << ',' << res.counts_even[i] << ',' << res.counts_odd[i] << ','
            << fmt(res.predicted_even[i]) << '\n';
    write_file(c.out, csv.str());
    write_manifest(c, "hemisphere",
                   {{"epsilon", epsilon}, {"E_grid", grid},
                    {"lambda_min_even", res.lambda_min_even},
                    {"lambda_min_odd", res.lambda_min_odd}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral pipelines for Schrodinger operators with inverse-square tails"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after the subcommand too

    CommonOpts c;
    app.add_option("--tol-ode", c.tol_ode, "ODE integrator relative tolerance")
        ->capture_default_str();
    app.add_option("--tol-eig", c.tol_eig, "eigenvalue degeneracy tolerance")
        ->capture_default_str();
    app.add_option("--basis", c.basis, "angular basis size (max degree + 1)")
        ->capture_default_str();
    app.add_option("--threads", c.threads, "worker threads for grid runs")->capture_default_str();
    app.add_option("--seed", c.seed, "seed for randomized suites")->capture_default_str();

    std::string grid_list, sign = "plus", in_path, n_range = "1:6";
    double mode_mu = 1.0, lambda = 1e-4, epsilon = 0.01;
    int n_max = 10, n = 10, mode_cut = 1;
    double delta = 0.2;
    bool exhaustive = false;

    auto add_common = [&](CLI::App* sub, bool needs_potential) {
        if (needs_potential)
            sub->add_option("--potential", c.potential, "potential-spec JSON file")->required();
        sub->add_option("--out", c.out, "output file")->required();
    };

    CLI::App* sc_angular = app.add_subcommand("angular", "angular spectrum CSV");
    add_common(sc_angular, true);

    CLI::App* sc_count = app.add_subcommand("count", "bound-state counts over an E grid");
    add_common(sc_count, true);
    sc_count->add_option("--E-grid", grid_list, "comma-separated energies")->required();
    sc_count->add_option("--sign", sign, "envelope sign for the radial tail")
        ->check(CLI::IsMember({"plus", "minus"}));
    sc_count->add_flag("--exhaustive", exhaustive, "count non-critical modes too");

    CLI::App* sc_slope = app.add_subcommand("slope", "fit counts vs ln(1/E) from a count CSV");
    sc_slope->add_option("--in", in_path, "count CSV")->required();
    sc_slope->add_option("--out", c.out, "output JSON")->required();

    CLI::App* sc_ext = app.add_subcommand("exterior", "decaying exterior solution CSV");
    sc_ext->add_option("--mode-mu", mode_mu, "angular coupling mu")->required();
    sc_ext->add_option("--lambda", lambda, "spectral parameter lambda > 0")->required();
    sc_ext->add_option("--out", c.out, "output CSV")->required();

    CLI::App* sc_ladder = app.add_subcommand("ladder", "geometric eigenvalue ladder CSV");
    add_common(sc_ladder, true);
    sc_ladder->add_option("--n-max", n_max, "deepest rung")->capture_default_str();

    CLI::App* sc_loc = app.add_subcommand("localize", "annulus localization JSON");
    add_common(sc_loc, true);
    sc_loc->add_option("--n", n, "rung index")->required();
    sc_loc->add_option("--epsilon", epsilon, "density envelope threshold")
        ->capture_default_str();

    CLI::App* sc_phi = app.add_subcommand("phi-residual", "approximate eigenfunction residuals");
    add_common(sc_phi, true);
    sc_phi->add_option("--n-range", n_range, "rung range A:B")->capture_default_str();
    sc_phi->add_option("--delta", delta, "matching radius exponent shift")
        ->capture_default_str();
    sc_phi->add_option("--mode-cut", mode_cut, "number of angular modes kept")
        ->capture_default_str();

    double tame_C = 9.0;
    CLI::App* sc_cex = app.add_subcommand("counterexample", "hypothesis (ii) sharpness contrast");
    sc_cex->add_option("--E-grid", grid_list, "comma-separated energies")->required();
    sc_cex->add_option("--C", tame_C, "amplitude of the decaying comparison tail")
        ->capture_default_str();
    sc_cex->add_option("--out", c.out, "output CSV")->required();

    CLI::App* sc_hemi = app.add_subcommand("hemisphere", "hemisphere even/odd experiment");
    sc_hemi->add_option("--epsilon", epsilon, "transition half-width")->required();
    sc_hemi->add_option("--E-grid", grid_list, "comma-separated energies")->required();
    sc_hemi->add_option("--out", c.out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc_angular->parsed()) run_angular(c);
        if (sc_count->parsed()) run_count(c, grid_list, sign, exhaustive);
        if (sc_slope->parsed()) run_slope(c, in_path);
        if (sc_ext->parsed()) run_exterior(c, mode_mu, lambda);
        if (sc_ladder->parsed()) run_ladder(c, n_max);
        if (sc_loc->parsed()) run_localize(c, n, epsilon);
        if (sc_phi->parsed()) run_phi_residual(c, n_range, delta, mode_cut);
        if (sc_cex->parsed()) run_counterexample(c, grid_list, tame_C);
        if (sc_hemi->parsed()) run_hemisphere(c, epsilon, grid_list);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "invsq: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        const std::string msg = e.what();
        std::cerr << "invsq: error: " << msg << "\n";
        return msg.rfind("potential spec:", 0) == 0 ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "invsq: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
