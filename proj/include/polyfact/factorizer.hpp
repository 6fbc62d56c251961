// Alternating solver for the polytope-constrained determinant-minimization
// Lagrangian: accelerated projected-gradient updates of the latent matrix S
// interleaved with regularized least-squares updates of the mixing matrix H.
#ifndef POLYFACT_FACTORIZER_HPP
#define POLYFACT_FACTORIZER_HPP

#include <random>
#include <vector>

#include "polyfact/projection.hpp"
#include "polyfact/polytope.hpp"

namespace polyfact {

struct FactorizationProblem {
    Matrix Y;
    Polytope polytope = make_special(SpecialKind::BInf, 1);
    int rank = 0;
    double lambda = 0.01;
    double tau = 1e-8;
    double step_scale = 5.0;     // c in L = c * ||H'H||_2
    int max_iters = 10000;
    double rel_tol = 1e-8;
    std::uint64_t seed = 0;
    std::optional<Matrix> H0;
    std::optional<Matrix> S0;
    bool raw_step = false;       // run the un-scaled gradient-step variant
    bool adaptive_restart = true;  // drop momentum whenever the objective rises
    int projection_sweeps = 5;

    void validate() const {
        if (rank < 1 || rank > std::min(Y.rows(), Y.cols()))
            throw PolyfactError("FactorizationProblem: rank out of range");
        if (lambda <= 0 || tau <= 0)
            throw PolyfactError("FactorizationProblem: lambda and tau must be > 0");
        if (!Y.allFinite()) throw PolyfactError("FactorizationProblem: Y has non-finite entries");
        if (polytope.dim() != rank)
            throw PolyfactError("FactorizationProblem: polytope dimension != rank");
    }
};

struct FactorizationResult {
    Matrix H;
    Matrix S;
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
};

// ||Y - HS||_F^2 + lambda * log det(H'H + tau I)
inline double evaluate_lagrangian(const Matrix& H, const Matrix& S, double lambda, double tau,
                                  const Matrix& Y) {
    if (H.cols() != S.rows() || H.rows() != Y.rows() || S.cols() != Y.cols())
        throw PolyfactError("evaluate_lagrangian: shape mismatch");
    Matrix G = H.transpose() * H + tau * Matrix::Identity(H.cols(), H.cols());
    Eigen::LLT<Matrix> llt(G);
    double logdet = 0.0;
    for (Index i = 0; i < G.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
    return (Y - H * S).squaredNorm() + lambda * logdet;
}

// det(S S'), the scattering measure the factorization criterion maximizes.
inline double detmax_objective(const Matrix& S) {
    Matrix G = S * S.transpose();
    return G.determinant();
}

namespace detail {

// largest eigenvalue of the PSD matrix G by power iteration
inline double spectral_norm_psd(const Matrix& G, int steps = 50, double tol = 1e-10) {
    Vector v = Vector::Ones(G.rows()).normalized();
    double lam = 0.0;
    for (int i = 0; i < steps; ++i) {
        Vector w = G * v;
        double nl = w.norm();
        if (nl < 1e-300) return 0.0;
        w /= nl;
        if (std::abs(nl - lam) <= tol * std::max(1.0, lam)) {
            lam = nl;
            break;
        }
        lam = nl;
        v = w;
    }
    return lam;
}

}  // namespace detail

inline FactorizationResult factorize(const FactorizationProblem& prob) {
    prob.validate();
    const Index M = prob.Y.rows(), N = prob.Y.cols();
    const int r = prob.rank;
    Projector project(prob.polytope, prob.projection_sweeps);

    std::mt19937_64 rng(prob.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix H;
    if (prob.H0) H = *prob.H0;
    else {
        H.resize(M, r);
        for (Index i = 0; i < M; ++i)
            for (Index j = 0; j < r; ++j) H(i, j) = gauss(rng);
    }
    Matrix S;
    if (prob.S0) S = *prob.S0;
    else {
        S.resize(r, N);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < N; ++j) S(i, j) = gauss(rng);
        project.project_columns(S);
    }

    Matrix X = S;
    Matrix F = Matrix::Identity(r, r);
    double q = 1.0;

    FactorizationResult res;
    res.objective_trace.push_back(evaluate_lagrangian(H, S, prob.lambda, prob.tau, prob.Y));

    int stable = 0;
    for (int t = 0; t < prob.max_iters; ++t) {
        double L = prob.step_scale * detail::spectral_norm_psd(H.transpose() * H);
        L = std::max(L, 1e-12);

        Matrix grad = H.transpose() * (prob.Y - H * X);  // r x N, ascent direction on fit
        Matrix S_next = prob.raw_step ? (X - grad).eval() : (X + grad / L).eval();
        project.project_columns(S_next);

        double q_next = (1.0 + std::sqrt(1.0 + q * q)) / 2.0;
        X = S_next + ((q - 1.0) / q_next) * (S_next - S);
        q = q_next;
        S = S_next;

        Matrix A = S * S.transpose() + prob.lambda * F;
        Eigen::FullPivLU<Matrix> lu(A);
        if (!lu.isInvertible()) {
            A += 1e-12 * Matrix::Identity(r, r);
            lu.compute(A);
        }
        H = prob.Y * S.transpose() * lu.inverse();
        F = (H.transpose() * H + prob.tau * Matrix::Identity(r, r)).inverse();

        double obj = evaluate_lagrangian(H, S, prob.lambda, prob.tau, prob.Y);
        if (!std::isfinite(obj))
            throw PolyfactError("factorize: objective became non-finite at iteration " +
                                std::to_string(t));
        double prev = res.objective_trace.back();
        if (prob.adaptive_restart && obj > prev) {
            q = 1.0;
            X = S;
        }
        res.objective_trace.push_back(obj);
        res.iterations = t + 1;

        double rel = std::abs(obj - prev) / std::max(1.0, std::abs(prev));
        stable = rel < prob.rel_tol ? stable + 1 : 0;
        if (stable >= 10) {
            res.converged = true;
            break;
        }
    }
    res.H = H;
    res.S = S;
    return res;
}

// Staged schedule: a few fit-only restarts (tiny lambda) keep the best-fitting
// basin, a strong determinant phase at the requested lambda shrinks the
// mixing, and a final refinement phase at a reduced lambda polishes the
// solution. The total iteration budget is prob.max_iters.
struct StagedOptions {
    int warm_restarts = 3;
    int warm_iters = 500;
    double warm_lambda = 1e-10;
    double refine_fraction = 1.0 / 3.0;  // tail share of the post-warm budget
    double refine_scale = 0.1;           // refinement lambda = lambda * scale
};

inline FactorizationResult factorize_staged(const FactorizationProblem& prob,
                                            const StagedOptions& opt = {}) {
    prob.validate();
    if (opt.warm_restarts < 1 || opt.warm_iters < 1)
        throw PolyfactError("factorize_staged: warm phase must be nonempty");
    if (opt.refine_fraction < 0.0 || opt.refine_fraction >= 1.0)
        throw PolyfactError("factorize_staged: refine_fraction out of [0,1)");

    FactorizationResult best;
    double best_fit = std::numeric_limits<double>::infinity();
    int used = 0;
    for (int k = 0; k < opt.warm_restarts; ++k) {
        FactorizationProblem warm = prob;
        warm.lambda = opt.warm_lambda;
        warm.max_iters = opt.warm_iters;
        warm.seed = derive_seed(prob.seed, 0x5741524dULL, static_cast<std::uint64_t>(k));
        FactorizationResult res = factorize(warm);
        used += res.iterations;
        double fit = (prob.Y - res.H * res.S).norm();
        if (fit < best_fit) {
            best_fit = fit;
            best = std::move(res);
        }
    }

    const int remaining = std::max(prob.max_iters - used, 0);
    const int det_iters = static_cast<int>(remaining * (1.0 - opt.refine_fraction));

    FactorizationProblem det = prob;
    det.H0 = best.H;
    det.S0 = best.S;
    det.max_iters = det_iters;
    FactorizationResult mid = det_iters > 0 ? factorize(det) : std::move(best);
    used += det_iters > 0 ? mid.iterations : 0;

    FactorizationProblem refine = prob;
    refine.lambda = std::max(prob.lambda * opt.refine_scale, 1e-300);
    refine.H0 = mid.H;
    refine.S0 = mid.S;
    refine.max_iters = std::max(prob.max_iters - used, 1);
    FactorizationResult res = factorize(refine);
    res.iterations += used;
    return res;
}

} // namespace polyfact

#endif
