// polyfact command-line tool: factorizations, synthetic data generation,
// inscribed-ellipsoid solves, geometry certificates, and sweep experiments.
//
// Exit codes: 0 success / certificate holds, 1 error (bad file, bad spec),
// 2 factorization hit max-iters without converging, 3 certificate fails.
#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "polyfact/checks.hpp"
#include "polyfact/experiment.hpp"
#include "polyfact/factorizer.hpp"
#include "polyfact/matrix_io.hpp"
#include "polyfact/metrics.hpp"
#include "polyfact/mvie.hpp"
#include "polyfact/polytope_json.hpp"

namespace {

using namespace polyfact;

int cmd_factorize(const std::string& input, const std::string& polytope_arg, int rank,
                  double lambda, double tau, double step_scale, int max_iters, double rel_tol,
                  std::uint64_t seed, bool raw_step, bool staged, const std::string& out_dir) {
    FactorizationProblem prob;
    prob.Y = read_matrix(input);
    prob.polytope = resolve_polytope_arg(polytope_arg, rank);
    prob.rank = rank;
    prob.lambda = lambda;
    prob.tau = tau;
    prob.step_scale = step_scale;
    prob.max_iters = max_iters;
    prob.rel_tol = rel_tol;
    prob.seed = seed;
    prob.raw_step = raw_step;

    FactorizationResult res = staged ? factorize_staged(prob) : factorize(prob);

    std::filesystem::create_directories(out_dir);
    write_matrix_csv(out_dir + "/H.csv", res.H);
    write_matrix_csv(out_dir + "/S.csv", res.S);
    Matrix trace(static_cast<Index>(res.objective_trace.size()), 1);
    for (Index i = 0; i < trace.rows(); ++i)
        trace(i, 0) = res.objective_trace[static_cast<size_t>(i)];
    write_matrix_csv(out_dir + "/trace.csv", trace);

    nlohmann::json summary;
    summary["iterations"] = res.iterations;
    summary["converged"] = res.converged;
    summary["final_objective"] = res.objective_trace.back();
    summary["detmax_objective"] = detmax_objective(res.S);
    summary["lambda"] = lambda;
    summary["tau"] = tau;
    summary["step_scale"] = step_scale;
    summary["seed"] = seed;
    summary["raw_step"] = raw_step;
    summary["staged"] = staged;
    std::ofstream js(out_dir + "/summary.json");
    if (!js) throw PolyfactError("cannot write " + out_dir + "/summary.json");
    js << summary.dump(2) << "\n";

    std::cout << summary.dump(2) << std::endl;
    return res.converged ? 0 : 2;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    auto records = run_experiment(cfg);
    std::filesystem::create_directories(out_dir);
    write_experiment_results(out_dir + "/results.csv", records);
    write_experiment_aggregate(out_dir + "/aggregate.csv", records);
    int failures = 0;
    for (const auto& r : records)
        if (!r.error.empty()) ++failures;
    std::cout << records.size() << " runs, " << failures << " failed; results in " << out_dir
              << std::endl;
    return 0;
}

int cmd_generate(const std::string& polytope_arg, int dim, const std::string& generator, int N,
                 double rho, int M, double snr_db, std::uint64_t seed,
                 const std::string& out_dir) {
    Polytope p = resolve_polytope_arg(polytope_arg, dim);
    GroundTruthParams gp;
    if (generator == "polar_domain") gp.generator = GeneratorKind::PolarDomain;
    else if (generator == "inflated_mvie") gp.generator = GeneratorKind::InflatedMvie;
    else throw PolyfactError("unknown generator: " + generator);
    gp.M = M;
    gp.N = N;
    gp.rho = rho;
    gp.snr_db = snr_db;
    GroundTruth gt = make_ground_truth(p, gp, seed);
    save_ground_truth(out_dir, gt, p);
    std::cout << "wrote " << out_dir << " (S_g is " << gt.S_g.rows() << " x " << gt.S_g.cols()
              << ")" << std::endl;
    return 0;
}

int cmd_mvie(const std::string& polytope_arg, int dim, double tol) {
    Polytope p = resolve_polytope_arg(polytope_arg, dim);
    Ellipsoid e = mvie(p, tol);
    nlohmann::json out = ellipsoid_to_json(e);
    HalfspaceForm h = p.has_hform() ? p.hform()
                                    : (p.has_feature_spec()
                                           ? feature_spec_to_halfspaces(p.feature_spec())
                                           : vertices_to_halfspaces(p.vform()));
    JohnReport jr = verify_john(e, h);
    out["contact_count"] = jr.contact_count;
    out["is_plausible_mvie"] = jr.is_plausible_mvie;
    out["certificate_residual"] = jr.certificate_residual;
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_check_identifiable(const std::string& polytope_arg, int dim, double tol) {
    Polytope p = resolve_polytope_arg(polytope_arg, dim);
    IdentifiabilityReport rep = check_identifiable(p, tol);
    nlohmann::json out;
    out["identifiable"] = rep.identifiable;
    out["automorphism_count"] = rep.automorphism_count;
    if (rep.witness) out["witness"] = detail::matrix_to_json(*rep.witness);
    std::cout << out.dump(2) << std::endl;
    return rep.identifiable ? 0 : 3;
}

int cmd_check_scattered(const std::string& polytope_arg, int dim, const std::string& samples,
                        double tol) {
    Polytope p = resolve_polytope_arg(polytope_arg, dim);
    Matrix S = read_matrix(samples);
    ScatterReport rep = check_scattered(S, p, tol);
    nlohmann::json out;
    out["ss1_holds"] = rep.ss1_holds;
    out["ss2_holds"] = rep.ss2_holds;
    out["tangent_polar_point_count"] = rep.tangent_polar_points.size();
    out["violating_point_count"] = rep.violating_points.size();
    std::cout << out.dump(2) << std::endl;
    return (rep.ss1_holds && rep.ss2_holds) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polytopic matrix factorization toolkit"};
    app.require_subcommand(1);

    // factorize
    std::string input, polytope_arg, out_dir = "out", config_path, generator = "inflated_mvie";
    std::string samples;
    int rank = 0, dim = 0, N = 100, M = 0, max_iters = 10000;
    double lambda = 0.01, tau = 1e-8, step_scale = 5.0, rel_tol = 1e-8, tol = 1e-6;
    double rho = 1.0, snr_db = std::numeric_limits<double>::infinity(), mvie_tol = 1e-9;
    std::uint64_t seed = 0;
    bool raw_step = false, staged = false;

    auto* fac = app.add_subcommand("factorize", "recover H, S from an input matrix");
    fac->add_option("--input", input, "input matrix (.csv or .f64)")->required();
    fac->add_option("--polytope", polytope_arg,
                    "binf|b1|binfplus|b1plus|composite or a JSON file")
        ->required();
    fac->add_option("--rank,-r", rank, "latent dimension r")->required();
    fac->add_option("--lambda", lambda, "log det regularization weight");
    fac->add_option("--tau", tau, "Gram ridge parameter");
    fac->add_option("--step-scale", step_scale, "c in L = c * ||H'H||_2");
    fac->add_option("--max-iters", max_iters, "iteration cap");
    fac->add_option("--rel-tol", rel_tol, "relative objective tolerance");
    fac->add_option("--seed", seed, "RNG seed for initialization");
    fac->add_flag("--raw-paper-step", raw_step, "use the un-scaled raw gradient step variant");
    fac->add_flag("--staged", staged, "warm/determinant/refine schedule (better recovery)");
    fac->add_option("--out", out_dir, "output directory");

    auto* exp = app.add_subcommand("experiment", "run a sweep from a JSON config");
    exp->add_option("--config", config_path, "experiment config JSON")->required();
    exp->add_option("--out", out_dir, "output directory");

    auto* gen = app.add_subcommand("generate", "write a synthetic ground-truth directory");
    gen->add_option("--polytope", polytope_arg, "polytope name or JSON file")->required();
    gen->add_option("--dim", dim, "polytope dimension (for named polytopes)");
    gen->add_option("--generator", generator, "polar_domain|inflated_mvie");
    gen->add_option("--N", N, "sample count (point budget for polar_domain)");
    gen->add_option("--rho", rho, "inflation constant");
    gen->add_option("--M", M, "mixing output dimension")->required();
    gen->add_option("--snr", snr_db, "SNR in dB (omit for noiseless)");
    gen->add_option("--seed", seed, "base seed");
    gen->add_option("--out", out_dir, "output directory");

    auto* mv = app.add_subcommand("mvie", "maximum-volume inscribed ellipsoid");
    mv->add_option("--polytope", polytope_arg, "polytope name or JSON file")->required();
    mv->add_option("--dim", dim, "polytope dimension (for named polytopes)");
    mv->add_option("--tol", mvie_tol, "solver tolerance");

    auto* ci = app.add_subcommand("check-identifiable", "vertex-set symmetry certificate");
    ci->add_option("--polytope", polytope_arg, "polytope name or JSON file")->required();
    ci->add_option("--dim", dim, "polytope dimension (for named polytopes)");
    ci->add_option("--tol", tol, "matching tolerance");

    auto* cs = app.add_subcommand("check-scattered", "sufficient-scattering certificate");
    cs->add_option("--polytope", polytope_arg, "polytope name or JSON file")->required();
    cs->add_option("--dim", dim, "polytope dimension (for named polytopes)");
    cs->add_option("--samples", samples, "sample matrix (.csv or .f64)")->required();
    cs->add_option("--tol", tol, "tangency tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(fac))
            return cmd_factorize(input, polytope_arg, rank, lambda, tau, step_scale, max_iters,
                                 rel_tol, seed, raw_step, staged, out_dir);
        if (app.got_subcommand(exp)) return cmd_experiment(config_path, out_dir);
        if (app.got_subcommand(gen))
            return cmd_generate(polytope_arg, dim, generator, N, rho, M, snr_db, seed, out_dir);
        if (app.got_subcommand(mv)) return cmd_mvie(polytope_arg, dim, mvie_tol);
        if (app.got_subcommand(ci)) return cmd_check_identifiable(polytope_arg, dim, tol);
        if (app.got_subcommand(cs)) return cmd_check_scattered(polytope_arg, dim, samples, tol);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << std::endl;
        return 1;
    }
    return 1;
}
