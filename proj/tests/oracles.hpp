#pragma once

// Test-only oracles, independent of the library's computation paths: a dense
// scaling-and-squaring matrix exponential, closed forms for the two-state
// chain, and the exact joint chain of shared-clock walkers.

#include <vector>

#include <Eigen/Dense>

#include "degroot/graph.hpp"

namespace oracles {

Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& a);

// e^{t(P-I)} f0 through the dense exponential
std::vector<double> dense_expected_opinions(const degroot::TransitionMatrix& p,
                                            const std::vector<double>& f0, double t);

// two-state chain (complete:2) started from (0,1): E f_t(0)
inline double two_state_mean_at_zero(double t) { return 0.5 * (1.0 - std::exp(-2.0 * t)); }

// P(X_1(t) = ... = X_d(t)) for d shared-clock walkers started at `origin`,
// by exponentiating the generator of the exact n^d-state joint chain
double joint_coincidence_exact(const degroot::TransitionMatrix& p, degroot::VertexId origin,
                               int d, double t);

}  // namespace oracles
