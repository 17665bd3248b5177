#pragma once

#include <cstdint>
#include <vector>

#include "degroot/dynamics.hpp"
#include "degroot/graph.hpp"
#include "degroot/stats.hpp"

namespace degroot {

// Unit mass spreading from an origin: a ring at v pushes v's mass to its
// neighbors in proportion to row v of P. Dense storage with an explicit
// support list so rings at zero-mass vertices are O(1); no mass is ever
// dropped, the total stays 1 up to rounding.
struct FragmentationState {
    VertexId origin = 0;
    double time = 0.0;
    std::vector<double> mass;
    std::vector<VertexId> support;        // may contain stale zero-mass entries
    std::vector<std::uint8_t> in_support;

    double total() const;
    double sum_pow(int d) const;
    double max_mass() const;
    void compact();
};

FragmentationState frag_init(int n, VertexId origin);
void frag_ring(FragmentationState& state, const TransitionMatrix& p, VertexId v, double time);

FragmentationState simulate_fragmentation(const TransitionMatrix& p, VertexId origin, double t,
                                          std::uint64_t clock_seed);

struct MomentEstimate {
    std::vector<double> t_grid;
    int d = 2;
    std::vector<double> mean;
    std::vector<double> stderr_;
    double slope = 0.0;  // least-squares slope of log mean vs log t
};

// E[sum_v m_t(v)^d] on a time grid, one trajectory per replica sampled at all
// grid times.
MomentEstimate moments(const TransitionMatrix& p, VertexId origin,
                       const std::vector<double>& t_grid, int d, int replicas,
                       std::uint64_t base_seed, int threads = 0);

// empirical P(exists v: m_t(v) >= eps)
WilsonInterval max_mass_tail(const TransitionMatrix& p, VertexId origin, double t, double eps,
                             int replicas, std::uint64_t base_seed, int threads = 0);

struct DualityResult {
    double t = 0.0;
    double s = 0.0;
    double max_abs_diff = 0.0;
    VertexId worst_origin = 0;
    std::vector<double> forward;  // f_t per origin
    std::vector<double> dual;     // sum_v m_s(o,v) f_{t-s}(v) per origin
};

// Shares one event log between the forward dynamics on [0,t] and the
// fragmentation driven by the reversed tail of the log; the two sides must
// agree per origin to floating-point accuracy, not just in expectation.
DualityResult duality_check(const TransitionMatrix& p, const std::vector<double>& f0, double t,
                            double s, std::uint64_t clock_seed);

}  // namespace degroot
