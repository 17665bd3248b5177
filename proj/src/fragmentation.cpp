#include "degroot/fragmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degroot {

double FragmentationState::total() const {
    double s = 0.0;
    for (VertexId v : support) s += mass[v];
    return s;
}

double FragmentationState::sum_pow(int d) const {
    double s = 0.0;
    for (VertexId v : support) {
        const double m = mass[v];
        if (m == 0.0) continue;
        double acc = m;
        for (int k = 1; k < d; ++k) acc *= m;
        s += acc;
    }
    return s;
}

double FragmentationState::max_mass() const {
    double s = 0.0;
    for (VertexId v : support) s = std::max(s, mass[v]);
    return s;
}

void FragmentationState::compact() {
    std::size_t keep = 0;
    for (VertexId v : support) {
        if (mass[v] > 0.0)
            support[keep++] = v;
        else
            in_support[v] = 0;
    }
    support.resize(keep);
}

FragmentationState frag_init(int n, VertexId origin) {
    if (origin < 0 || origin >= n) throw std::invalid_argument("frag_init: origin out of range");
    FragmentationState st;
    st.origin = origin;
    st.mass.assign(n, 0.0);
    st.in_support.assign(n, 0);
    st.mass[origin] = 1.0;
    st.support.push_back(origin);
    st.in_support[origin] = 1;
    return st;
}

void frag_ring(FragmentationState& state, const TransitionMatrix& p, VertexId v, double time) {
    state.time = time;
    const double m = state.mass[v];
    if (m == 0.0) return;
    state.mass[v] = 0.0;
    for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
        state.mass[a->to] += a->p * m;
        if (!state.in_support[a->to]) {
            state.in_support[a->to] = 1;
            state.support.push_back(a->to);
        }
    }
}

FragmentationState simulate_fragmentation(const TransitionMatrix& p, VertexId origin, double t,
                                          std::uint64_t clock_seed) {
    if (t < 0) throw std::invalid_argument("simulate_fragmentation: t >= 0");
    FragmentationState st = frag_init(p.size(), origin);
    ClockStream clock(p.size(), clock_seed);
    for (;;) {
        const Event e = clock.next();
        if (e.time > t) break;
        frag_ring(st, p, e.vertex, e.time);
    }
    st.time = t;
    return st;
}

MomentEstimate moments(const TransitionMatrix& p, VertexId origin,
                       const std::vector<double>& t_grid, int d, int replicas,
                       std::uint64_t base_seed, int threads) {
    if (d < 1) throw std::invalid_argument("moments: d >= 1");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1]) throw std::invalid_argument("moments: grid must be nondecreasing");

    std::vector<std::vector<double>> per_replica(replicas);
    parallel_replicas(replicas, threads, [&](int r) {
        FragmentationState st = frag_init(p.size(), origin);
        ClockStream clock(p.size(), derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::clocks));
        std::vector<double> vals(t_grid.size());
        std::size_t next_sample = 0;
        Event pending{0.0, 0};
        bool have_pending = false;
        while (next_sample < t_grid.size()) {
            if (!have_pending) {
                pending = clock.next();
                have_pending = true;
            }
            if (pending.time > t_grid[next_sample]) {
                vals[next_sample++] = st.sum_pow(d);
            } else {
                frag_ring(st, p, pending.vertex, pending.time);
                have_pending = false;
            }
        }
        per_replica[r] = std::move(vals);
    });

    MomentEstimate est;
    est.t_grid = t_grid;
    est.d = d;
    est.mean.resize(t_grid.size());
    est.stderr_.resize(t_grid.size());
    std::vector<double> column(replicas);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (int r = 0; r < replicas; ++r) column[r] = per_replica[r][i];
        const MeanStderr m = mean_stderr(column);
        est.mean[i] = m.mean;
        est.stderr_[i] = m.stderr_;
    }
    bool positive = !t_grid.empty();
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (t_grid[i] <= 0 || est.mean[i] <= 0) positive = false;
    if (positive && t_grid.size() >= 2) est.slope = loglog_slope(est.t_grid, est.mean);
    return est;
}

WilsonInterval max_mass_tail(const TransitionMatrix& p, VertexId origin, double t, double eps,
                             int replicas, std::uint64_t base_seed, int threads) {
    if (eps <= 0.0) throw std::invalid_argument("max_mass_tail: eps in (0, 1]");
    std::vector<std::uint8_t> hit(replicas, 0);
    parallel_replicas(replicas, threads, [&](int r) {
        const auto st = simulate_fragmentation(
            p, origin, t, derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::clocks));
        hit[r] = st.max_mass() >= eps ? 1 : 0;
    });
    std::size_t count = 0;
    for (auto h : hit) count += h;
    return wilson(count, static_cast<std::size_t>(replicas));
}

DualityResult duality_check(const TransitionMatrix& p, const std::vector<double>& f0, double t,
                            double s, std::uint64_t clock_seed) {
    if (s < 0 || s > t) throw std::invalid_argument("duality_check: need 0 <= s <= t");
    const int n = p.size();
    const EventLog log = generate_event_log(n, t, clock_seed);

    OpinionState st(f0);
    std::vector<double> f_mid = f0;  // f_{t-s}
    bool mid_taken = s >= t;         // s == t means f_mid = f0
    for (const Event& e : log) {
        if (!mid_taken && e.time > t - s) {
            f_mid = st.f;
            mid_taken = true;
        }
        apply_ring(st, p, e.vertex, e.time);
    }
    if (!mid_taken) f_mid = st.f;  // no event after t-s

    DualityResult out;
    out.t = t;
    out.s = s;
    out.forward = st.f;
    out.dual.resize(n);

    // reversed tail of the log: an event at u in (t-s, t] becomes one at t-u
    std::vector<Event> reversed;
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        if (it->time <= t - s) break;
        reversed.push_back({t - it->time, it->vertex});
    }

    for (VertexId o = 0; o < n; ++o) {
        FragmentationState frag = frag_init(n, o);
        for (const Event& e : reversed) frag_ring(frag, p, e.vertex, e.time);
        double acc = 0.0;
        for (VertexId v : frag.support) acc += frag.mass[v] * f_mid[v];
        out.dual[o] = acc;
        const double diff = std::abs(acc - out.forward[o]);
        if (diff > out.max_abs_diff) {
            out.max_abs_diff = diff;
            out.worst_origin = o;
        }
    }
    return out;
}

}  // namespace degroot
