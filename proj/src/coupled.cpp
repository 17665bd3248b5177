#include "degroot/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degroot {

double& MeetingOccupancy::at(int i, int j) {
    if (i > j) std::swap(i, j);
    return measure[static_cast<std::size_t>(i) * d - i * (i + 1) / 2 + (j - i - 1)];
}

double MeetingOccupancy::at(int i, int j) const {
    return const_cast<MeetingOccupancy*>(this)->at(i, j);
}

std::pair<CoupledWalkState, MeetingOccupancy> simulate_coupled(const TransitionMatrix& p,
                                                               const std::vector<VertexId>& starts,
                                                               double t, std::uint64_t clock_seed,
                                                               std::uint64_t walk_seed) {
    const int d = static_cast<int>(starts.size());
    if (d < 2) throw std::invalid_argument("simulate_coupled: need d >= 2 walkers");
    if (t < 0) throw std::invalid_argument("simulate_coupled: t >= 0");
    for (VertexId v : starts)
        if (v < 0 || v >= p.size()) throw std::invalid_argument("simulate_coupled: start out of range");

    CoupledWalkState st;
    st.pos = starts;
    st.steps.assign(d, 0);
    MeetingOccupancy occ;
    occ.d = d;
    occ.measure.assign(static_cast<std::size_t>(d) * (d - 1) / 2, 0.0);

    Rng walk_rng(walk_seed);
    ClockStream clock(p.size(), clock_seed);

    auto step_from = [&](VertexId v) {
        const double u = walk_rng.unit();
        double cum = 0.0;
        const Arc* last = p.row_end(v) - 1;
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            cum += a->p;
            if (u < cum) return a->to;
        }
        return last->to;
    };

    double now = 0.0;
    for (;;) {
        const Event e = clock.next();
        const double until = std::min(e.time, t);
        const double dt = until - now;
        if (dt > 0) {
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    if (st.pos[i] == st.pos[j]) occ.at(i, j) += dt;
        }
        now = until;
        if (e.time > t) break;
        for (int i = 0; i < d; ++i)
            if (st.pos[i] == e.vertex) {
                st.pos[i] = step_from(e.vertex);
                ++st.steps[i];
            }
    }
    st.time = t;
    return {st, occ};
}

CoincidenceEstimate coincidence_probability(const TransitionMatrix& p, VertexId origin, int d,
                                            double t, int replicas, std::uint64_t base_seed,
                                            int threads, bool per_vertex) {
    if (d < 2) throw std::invalid_argument("coincidence_probability: d >= 2");
    const std::vector<VertexId> starts(d, origin);
    std::vector<VertexId> landing(replicas, -1);
    parallel_replicas(replicas, threads, [&](int r) {
        const auto cs = derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::clocks);
        const auto ws = derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::walkers);
        const auto [st, occ] = simulate_coupled(p, starts, t, cs, ws);
        bool all_equal = true;
        for (int i = 1; i < d; ++i)
            if (st.pos[i] != st.pos[0]) all_equal = false;
        landing[r] = all_equal ? st.pos[0] : -1;
    });

    CoincidenceEstimate est;
    est.replicas = replicas;
    std::size_t count = 0;
    for (VertexId v : landing) count += v >= 0;
    est.interval = wilson(count, static_cast<std::size_t>(replicas));
    if (per_vertex) {
        est.per_vertex.assign(p.size(), 0.0);
        for (VertexId v : landing)
            if (v >= 0) est.per_vertex[v] += 1.0 / static_cast<double>(replicas);
    }
    return est;
}

MeetingTailCurve meeting_tail(const TransitionMatrix& p, const std::vector<VertexId>& starts,
                              double t, const std::vector<double>& k_grid, double alpha0,
                              int replicas, std::uint64_t base_seed, int threads) {
    if (alpha0 <= 0 || alpha0 >= 1) throw std::invalid_argument("meeting_tail: alpha0 in (0,1)");
    if (starts.size() < 2) throw std::invalid_argument("meeting_tail: need >= 2 walkers");

    std::vector<double> occupancy(replicas, 0.0);
    parallel_replicas(replicas, threads, [&](int r) {
        const auto cs = derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::clocks);
        const auto ws = derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::walkers);
        const auto [st, occ] = simulate_coupled(p, starts, t, cs, ws);
        occupancy[r] = occ.at(0, 1);
    });

    MeetingTailCurve curve;
    curve.t = t;
    curve.alpha0 = alpha0;
    curve.k_grid = k_grid;
    const double unit = std::pow(t, 1.0 - alpha0);
    std::vector<double> ks, logs;
    for (double k : k_grid) {
        std::size_t count = 0;
        for (double a : occupancy)
            if (a >= k * unit) ++count;
        curve.tail.push_back(wilson(count, static_cast<std::size_t>(replicas)));
        if (count > 0) {
            ks.push_back(k);
            logs.push_back(std::log(static_cast<double>(count) / replicas));
        }
    }
    if (ks.size() >= 2) curve.decay_rate = -least_squares(ks, logs).slope;
    return curve;
}

}  // namespace degroot
