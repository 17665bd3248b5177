#pragma once

#include <utility>
#include <vector>

#include "degroot/graph.hpp"

namespace degroot {

struct StationaryDistribution {
    std::vector<double> pi;
    double pi_min = 0.0;
    double pi_max = 0.0;
    long iterations = 0;     // 0 when a closed form or direct solve was used
    double residual = 0.0;   // max_v |(pi P - pi)(v)|
};

// pi P = pi, sum pi = 1, entries > 0. Closed forms (simple random walk,
// Eulerian digraph walk) are used when they verify; otherwise a direct solve
// for n <= 2000 and damped power iteration above that (cap 1e6, tol 1e-10).
// Throws on non-convergence, which signals a reducible or defective matrix.
StationaryDistribution stationary(const TransitionMatrix& p);

// time reversal: pi(v) P*_vw = pi(w) P_wv
TransitionMatrix reversal(const TransitionMatrix& p, const std::vector<double>& pi);
// (P + P*)/2, reversible w.r.t. pi
TransitionMatrix symmetrize(const TransitionMatrix& p, const std::vector<double>& pi);
// P* P, row stochastic, self-adjoint and positive semidefinite in the pi inner product
TransitionMatrix star_product(const TransitionMatrix& p, const std::vector<double>& pi);

struct SpectralReport {
    double lambda2_sym = 0.0;     // second largest eigenvalue of (P+P*)/2
    double gamma = 0.0;           // 1 - lambda2_sym
    double lambda2_pstarp = 0.0;  // second largest eigenvalue of P*P
    double gamma_pstarp = 0.0;
    double gamma_hat = 0.0;       // (1 - pi_min) gamma_pstarp + 2 pi_min gamma
    bool reversible = false;
};

SpectralReport spectral_gaps(const TransitionMatrix& p, const StationaryDistribution& pi);

// right eigenvector for lambda2 of the symmetrized chain (equals the second
// right eigenvector of P itself when P is reversible)
std::vector<double> second_right_eigenvector(const TransitionMatrix& p,
                                             const StationaryDistribution& pi);

// Unit resistances on the edges of the (required symmetric) support.
double effective_resistance(const TransitionMatrix& p, VertexId v, VertexId w);

struct ResistanceReport {
    double r_max = 0.0;
    VertexId argmax_v = 0;
    VertexId argmax_w = 0;
    bool exhaustive = true;  // false: sampled pairs, value is a lower bound
};

ResistanceReport r_max(const TransitionMatrix& p, int sample_pairs = 4096,
                       std::uint64_t seed = 1);

// e^{t(P-I)} f0 by uniformization; Poisson tail truncated below 1e-12.
std::vector<double> expected_opinions(const TransitionMatrix& p, const std::vector<double>& f0,
                                      double t);

struct OpinionSummary {
    double mean = 0.0;    // E_pi(f)
    double var_pi = 0.0;
    double energy = 0.0;  // Dirichlet form of P at f
    double osc = 0.0;
};

OpinionSummary summarize(const TransitionMatrix& p, const std::vector<double>& pi,
                         const std::vector<double>& f);

double energy_of(const TransitionMatrix& p, const std::vector<double>& pi,
                 const std::vector<double>& f);

struct DriftReport {
    double energy_drift = 0.0;    // sum_v [ E(f after ring at v) - E(f) ], one unit-rate ring each
    double norm_sq_drift = 0.0;   // ||Pf||_pi^2 - ||f||_pi^2  (= -E_{P*P}(f))
    double m2_drift = 0.0;        // sum_v pi(v)^2 ((Pf)(v) - f(v))^2
    double m2_lower = 0.0;        // pi_min ||(I-P)f||_pi^2
    double m2_upper = 0.0;        // pi_max ||(I-P)f||_pi^2
    double iminusp_norm_sq = 0.0; // ||(I-P)f||_pi^2
};

DriftReport drifts(const TransitionMatrix& p, const std::vector<double>& pi,
                   const std::vector<double>& f);

}  // namespace degroot
