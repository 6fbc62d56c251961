// Sweep harness: builds synthetic ground truth over a grid of
// (N, snr_db, rho) cells, runs the factorizer for several realizations per
// cell on a worker pool, and writes per-run and aggregate CSV files.
#ifndef POLYFACT_EXPERIMENT_HPP
#define POLYFACT_EXPERIMENT_HPP

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "polyfact/datagen.hpp"
#include "polyfact/factorizer.hpp"
#include "polyfact/matrix_io.hpp"
#include "polyfact/metrics.hpp"
#include "polyfact/polytope_json.hpp"

namespace polyfact {

enum class GeneratorKind { PolarDomain, InflatedMvie };

struct GroundTruthParams {
    GeneratorKind generator = GeneratorKind::InflatedMvie;
    int M = 0;
    int N = 0;  // sample count (the point budget L for the polar-domain path)
    double rho = 1.0;
    double snr_db = std::numeric_limits<double>::infinity();
};

inline GroundTruth make_ground_truth(const Polytope& p, const GroundTruthParams& gp,
                                     std::uint64_t seed) {
    GroundTruth gt;
    gt.seed = seed;
    gt.snr_db = gp.snr_db;
    if (gp.generator == GeneratorKind::PolarDomain)
        gt.S_g = generate_polar_domain(p, gp.N, derive_seed(seed, 0));
    else
        gt.S_g = generate_inflated_mvie(p, InflationParams{gp.rho, gp.N}, derive_seed(seed, 0));
    gt.H_g = generate_mixing(gp.M, static_cast<int>(gt.S_g.rows()), derive_seed(seed, 1));
    gt.Y_clean = gt.H_g * gt.S_g;
    gt.Y_noisy = add_noise(gt.Y_clean, gp.snr_db, derive_seed(seed, 2));
    return gt;
}

inline void save_ground_truth(const std::string& dir, const GroundTruth& gt, const Polytope& p) {
    std::filesystem::create_directories(dir);
    write_matrix_csv(dir + "/Hg.csv", gt.H_g);
    write_matrix_csv(dir + "/Sg.csv", gt.S_g);
    write_matrix_csv(dir + "/Y.csv", gt.Y_noisy);
    nlohmann::json meta;
    meta["seed"] = gt.seed;
    meta["snr_db"] = std::isinf(gt.snr_db) ? nlohmann::json("inf") : nlohmann::json(gt.snr_db);
    meta["polytope"] = polytope_to_json(p);
    std::ofstream out(dir + "/meta.json");
    if (!out) throw PolyfactError("cannot write " + dir + "/meta.json");
    out << meta.dump(2) << "\n";
}

struct LambdaOverride {
    std::optional<int> N;
    std::optional<double> snr_db;
    std::optional<double> rho;
    double lambda = 0.0;
};

struct ExperimentConfig {
    nlohmann::json polytope_spec;  // as passed to polytope_from_json, or a name string
    int dim = 0;
    int M = 0;
    std::vector<int> N_list;
    std::vector<double> snr_list;
    std::vector<double> rho_list{1.0};
    int realizations = 1;
    GeneratorKind generator = GeneratorKind::InflatedMvie;
    double lambda = 0.01;
    double tau = 1e-8;
    double step_scale = 5.0;
    int max_iters = 10000;
    double rel_tol = 1e-8;
    bool staged = false;  // run the staged warm/determinant/refine schedule
    std::uint64_t base_seed = 0;
    std::vector<LambdaOverride> lambda_overrides;

    void validate() const {
        if (realizations < 1) throw PolyfactError("ExperimentConfig: realizations must be >= 1");
        if (N_list.empty() || snr_list.empty() || rho_list.empty())
            throw PolyfactError("ExperimentConfig: sweep axes must be nonempty");
        if (N_list.size() * snr_list.size() * rho_list.size() > 10000)
            throw PolyfactError("ExperimentConfig: more than 10^4 sweep cells");
        if (dim < 1 || M < dim) throw PolyfactError("ExperimentConfig: need 1 <= dim <= M");
    }

    double lambda_for(int N, double snr_db, double rho) const {
        auto same = [](double a, double b) {
            return (std::isinf(a) && std::isinf(b)) || std::abs(a - b) < 1e-12;
        };
        for (const auto& ov : lambda_overrides) {
            if (ov.N && *ov.N != N) continue;
            if (ov.snr_db && !same(*ov.snr_db, snr_db)) continue;
            if (ov.rho && !same(*ov.rho, rho)) continue;
            return ov.lambda;
        }
        return lambda;
    }
};

namespace detail {

inline double snr_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "infinity")
            return std::numeric_limits<double>::infinity();
        throw PolyfactError("snr_db: unknown string value '" + s + "'");
    }
    return j.get<double>();
}

inline std::string format_snr(double snr_db) {
    if (std::isinf(snr_db)) return "inf";
    std::ostringstream os;
    os << snr_db;
    return os.str();
}

}  // namespace detail

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.polytope_spec = j.at("polytope");
    c.dim = j.at("dim").get<int>();
    c.M = j.at("M").get<int>();
    c.N_list = j.at("N").get<std::vector<int>>();
    for (const auto& s : j.at("snr_db")) c.snr_list.push_back(detail::snr_from_json(s));
    if (j.contains("rho")) c.rho_list = j.at("rho").get<std::vector<double>>();
    c.realizations = j.value("realizations", 1);
    std::string gen = j.value("generator", std::string("inflated_mvie"));
    if (gen == "polar_domain") c.generator = GeneratorKind::PolarDomain;
    else if (gen == "inflated_mvie") c.generator = GeneratorKind::InflatedMvie;
    else throw PolyfactError("ExperimentConfig: unknown generator '" + gen + "'");
    c.lambda = j.value("lambda", 0.01);
    c.tau = j.value("tau", 1e-8);
    c.step_scale = j.value("step_scale", 5.0);
    c.max_iters = j.value("max_iters", 10000);
    c.rel_tol = j.value("rel_tol", 1e-8);
    std::string solver = j.value("solver", std::string("plain"));
    if (solver == "staged") c.staged = true;
    else if (solver != "plain")
        throw PolyfactError("ExperimentConfig: unknown solver '" + solver + "'");
    c.base_seed = j.value("base_seed", std::uint64_t{0});
    if (j.contains("lambda_overrides")) {
        for (const auto& jo : j.at("lambda_overrides")) {
            LambdaOverride ov;
            if (jo.contains("N")) ov.N = jo.at("N").get<int>();
            if (jo.contains("snr_db")) ov.snr_db = detail::snr_from_json(jo.at("snr_db"));
            if (jo.contains("rho")) ov.rho = jo.at("rho").get<double>();
            ov.lambda = jo.at("lambda").get<double>();
            c.lambda_overrides.push_back(ov);
        }
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PolyfactError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw PolyfactError(std::string("config parse error: ") + ex.what());
    }
    return experiment_config_from_json(j);
}

struct ExperimentRecord {
    std::uint64_t seed = 0;
    int N = 0;
    double snr_db = 0.0;
    double rho = 1.0;
    int iterations = 0;
    bool converged = false;
    double mean_sir_db = std::numeric_limits<double>::quiet_NaN();
    double detmax = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0.0;
    std::string error;
};

inline int worker_pool_size() {
    if (const char* env = std::getenv("POLYFACT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    Polytope p = cfg.polytope_spec.is_string()
                     ? resolve_polytope_arg(cfg.polytope_spec.get<std::string>(), cfg.dim)
                     : polytope_from_json(cfg.polytope_spec);
    if (p.dim() != cfg.dim) throw PolyfactError("run_experiment: polytope dim != config dim");

    struct Task {
        int N;
        double snr_db, rho;
        std::uint64_t cell;
        int rep;
    };
    std::vector<Task> tasks;
    std::uint64_t cell = 0;
    for (int N : cfg.N_list)
        for (double snr : cfg.snr_list)
            for (double rho : cfg.rho_list) {
                for (int rep = 0; rep < cfg.realizations; ++rep)
                    tasks.push_back(Task{N, snr, rho, cell, rep});
                ++cell;
            }

    std::vector<ExperimentRecord> records(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            ExperimentRecord rec;
            rec.N = t.N;
            rec.snr_db = t.snr_db;
            rec.rho = t.rho;
            rec.seed = derive_seed(cfg.base_seed, t.cell, static_cast<std::uint64_t>(t.rep));
            auto t0 = std::chrono::steady_clock::now();
            try {
                GroundTruthParams gp;
                gp.generator = cfg.generator;
                gp.M = cfg.M;
                gp.N = t.N;
                gp.rho = t.rho;
                gp.snr_db = t.snr_db;
                GroundTruth gt = make_ground_truth(p, gp, rec.seed);

                FactorizationProblem prob;
                prob.Y = gt.Y_noisy;
                prob.polytope = p;
                prob.rank = cfg.dim;
                prob.lambda = cfg.lambda_for(t.N, t.snr_db, t.rho);
                prob.tau = cfg.tau;
                prob.step_scale = cfg.step_scale;
                prob.max_iters = cfg.max_iters;
                prob.rel_tol = cfg.rel_tol;
                prob.seed = derive_seed(rec.seed, 3);
                FactorizationResult res = cfg.staged ? factorize_staged(prob) : factorize(prob);
                rec.iterations = res.iterations;
                rec.converged = res.converged;
                rec.mean_sir_db = sir(res.S, gt.S_g).mean_db;
                rec.detmax = detmax_objective(res.S);
            } catch (const std::exception& ex) {
                rec.error = ex.what();
            }
            rec.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
            records[i] = rec;
        }
    };

    int nthreads = std::min<int>(worker_pool_size(), static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return records;
}

inline void write_experiment_results(const std::string& path,
                                     const std::vector<ExperimentRecord>& records) {
    std::ofstream out(path);
    if (!out) throw PolyfactError("cannot write " + path);
    out << "seed,N,snr_db,rho,iterations,converged,mean_sir_db,detmax_objective,wall_ms,error\n";
    out << std::setprecision(17);
    for (const auto& r : records) {
        out << r.seed << "," << r.N << "," << detail::format_snr(r.snr_db) << "," << r.rho << ","
            << r.iterations << "," << (r.converged ? 1 : 0) << "," << r.mean_sir_db << ","
            << r.detmax << "," << r.wall_ms << "," << r.error << "\n";
    }
}

struct CellAggregate {
    int N = 0;
    double snr_db = 0.0;
    double rho = 1.0;
    int count = 0;
    int converged = 0;
    double sir_mean = std::numeric_limits<double>::quiet_NaN();
    double sir_std = std::numeric_limits<double>::quiet_NaN();
};

// Per-cell mean and (sample) standard deviation of the mean SIR, skipping
// failed realizations.
inline std::vector<CellAggregate> aggregate_records(const std::vector<ExperimentRecord>& records) {
    std::vector<CellAggregate> cells;
    auto find_cell = [&](const ExperimentRecord& r) -> CellAggregate& {
        for (auto& c : cells) {
            bool same_snr = (std::isinf(c.snr_db) && std::isinf(r.snr_db)) ||
                            std::abs(c.snr_db - r.snr_db) < 1e-12;
            if (c.N == r.N && same_snr && std::abs(c.rho - r.rho) < 1e-12) return c;
        }
        cells.push_back(CellAggregate{r.N, r.snr_db, r.rho, 0, 0});
        return cells.back();
    };
    for (const auto& r : records) find_cell(r);  // deterministic cell order
    for (auto& c : cells) {
        double sum = 0.0, sum2 = 0.0;
        int n = 0;
        for (const auto& r : records) {
            bool same_snr = (std::isinf(c.snr_db) && std::isinf(r.snr_db)) ||
                            std::abs(c.snr_db - r.snr_db) < 1e-12;
            if (!(c.N == r.N && same_snr && std::abs(c.rho - r.rho) < 1e-12)) continue;
            ++c.count;
            if (r.converged) ++c.converged;
            if (std::isfinite(r.mean_sir_db)) {
                sum += r.mean_sir_db;
                sum2 += r.mean_sir_db * r.mean_sir_db;
                ++n;
            }
        }
        if (n > 0) {
            c.sir_mean = sum / n;
            c.sir_std = n > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1))) : 0.0;
        }
    }
    return cells;
}

inline void write_experiment_aggregate(const std::string& path,
                                       const std::vector<ExperimentRecord>& records) {
    auto cells = aggregate_records(records);
    std::ofstream out(path);
    if (!out) throw PolyfactError("cannot write " + path);
    out << "N,snr_db,rho,count,converged,mean_sir_db_mean,mean_sir_db_std\n";
    out << std::setprecision(17);
    for (const auto& c : cells)
        out << c.N << "," << detail::format_snr(c.snr_db) << "," << c.rho << "," << c.count << ","
            << c.converged << "," << c.sir_mean << "," << c.sir_std << "\n";
}

} // namespace polyfact

#endif
