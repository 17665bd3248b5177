#pragma once

#include <cstdint>
#include <vector>

#include "degroot/dynamics.hpp"
#include "degroot/graph.hpp"
#include "degroot/stats.hpp"

namespace degroot {

// d walkers driven by one Poisson clock stream (the same lane construction as
// the opinion dynamics) with independent transition draws: when the clock of
// vertex v rings, every walker sitting at v takes its own P-step.
struct CoupledWalkState {
    std::vector<VertexId> pos;
    std::vector<long> steps;
    double time = 0.0;
};

struct MeetingOccupancy {
    int d = 0;
    std::vector<double> measure;  // pair (i,j), i<j, flattened row-major

    double& at(int i, int j);
    double at(int i, int j) const;
};

std::pair<CoupledWalkState, MeetingOccupancy> simulate_coupled(const TransitionMatrix& p,
                                                               const std::vector<VertexId>& starts,
                                                               double t, std::uint64_t clock_seed,
                                                               std::uint64_t walk_seed);

struct CoincidenceEstimate {
    WilsonInterval interval;
    int replicas = 0;
    std::vector<double> per_vertex;  // empirical P(all walkers at v), filled on request
};

CoincidenceEstimate coincidence_probability(const TransitionMatrix& p, VertexId origin, int d,
                                            double t, int replicas, std::uint64_t base_seed,
                                            int threads = 0, bool per_vertex = false);

struct MeetingTailCurve {
    double t = 0.0;
    double alpha0 = 0.45;
    std::vector<double> k_grid;
    std::vector<WilsonInterval> tail;  // P(|A_{1,2} cap [0,t]| >= k t^{1-alpha0})
    double decay_rate = 0.0;           // exponential fit of -log tail vs k (over positive points)
};

MeetingTailCurve meeting_tail(const TransitionMatrix& p, const std::vector<VertexId>& starts,
                              double t, const std::vector<double>& k_grid, double alpha0,
                              int replicas, std::uint64_t base_seed, int threads = 0);

}  // namespace degroot
