#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "degroot/graph.hpp"
#include "degroot/spectral.hpp"

namespace degroot {

// --- consensus-time bounds -------------------------------------------------

// reversible chains: (1/gamma) log(4e E0 / (gamma pi_min eps^2))
double reversible_tau_bound(double gamma, double pi_min, double eps, double energy0);
// same bound with the worst-case E0 = 1/2 substituted (needs osc(f0) <= 1)
double reversible_tau_bound_crude(double gamma, double pi_min, double eps);

// simple random walk: (R |E| + 1) ceil(log2(1/eps)); R is R_max when known,
// else the diameter (R_max <= diam)
double srw_tau_bound(double r_max_or_diam, double edge_count, double eps);

// any irreducible chain: (1/gamma_hat) log(4e var0 / (eps^2 pi_min));
// returns 0 when 4 var0 < eps^2 pi_min (consensus already reached)
double general_tau_bound(double gamma_hat, double var0, double pi_min, double eps);

// chains with P_vv >= delta: gamma_hat replaced by 2 delta gamma
double lazy_tau_bound(double gamma, double delta, double var0, double pi_min, double eps);

// Eulerian digraph walk: C n m^2 log(e m / eps^2); m exponent drops to 1 for
// the lazy walk. C is an unquantified constant, reported as configurable.
double eulerian_tau_bound(double n, double m, double eps, bool lazy, double c = 1.0);

// --- consensus-variance bounds ----------------------------------------------

// reversible, deterministic f0: pi_min E0 <= Var(f_inf) <= pi_max E0
std::pair<double, double> variance_bounds(double pi_min, double pi_max, double energy0);
// random f0 variant: bounds on Var(f_inf) - Var(M0)
std::pair<double, double> variance_bounds_random(double pi_min, double pi_max,
                                                 double mean_energy0);
// P_vv >= delta: Var(f_inf) <= pi_max var0 / delta
double variance_bound_lazy(double pi_max, double var0, double delta);
// SRW with |f0| <= 1: Var(f_inf) <= max_degree / |E|
double variance_bound_srw(double max_degree, double edge_count);

// --- reports and verdicts ----------------------------------------------------

struct BoundReport {
    std::string name;
    double value = 0.0;
    double value_lower = 0.0;  // used by two-sided reports
    bool two_sided = false;
    bool is_upper = true;  // direction of `value` relative to the measured quantity
    bool applicable = false;
    bool up_to_constant = false;  // carries an unquantified constant, not checkable
    std::string reason;           // why inapplicable, when it is
    std::map<std::string, double> inputs;
};

enum class Verdict { consistent, violated, inconclusive };
const char* verdict_name(Verdict v);

// Upper bounds: consistent when mean - 3 stderr <= bound. Lower bounds:
// consistent when mean + 3 stderr >= bound. Any censoring -> inconclusive.
Verdict compare(double measured_mean, double measured_stderr, double censored_fraction,
                const BoundReport& bound);

// Every bound whose preconditions the inputs satisfy, with its inputs echoed.
std::vector<BoundReport> evaluate_tau_bounds(const TransitionMatrix& p,
                                             const StationaryDistribution& pi,
                                             const SpectralReport& spec, const GraphMetrics& m,
                                             const std::vector<double>& f0, double eps);

std::vector<BoundReport> evaluate_variance_bounds(const TransitionMatrix& p,
                                                  const StationaryDistribution& pi,
                                                  const SpectralReport& spec,
                                                  const GraphMetrics& m,
                                                  const std::vector<double>& f0);

// censoring horizon: 100x the reversible-gap bound when gamma > 0, else 1e6
double default_t_max(double gamma, double pi_min, double eps, double energy0);

}  // namespace degroot
