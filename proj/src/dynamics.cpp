#include "degroot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "degroot/spectral.hpp"

namespace degroot {

EventLog generate_event_log(int n, double horizon, std::uint64_t seed) {
    EventLog log;
    ClockStream clock(n, seed);
    for (;;) {
        const Event e = clock.next();
        if (e.time > horizon) break;
        log.push_back(e);
    }
    return log;
}

void save_event_log(const EventLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.precision(17);
    for (const Event& e : log) out << e.time << " " << e.vertex << "\n";
}

EventLog load_event_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    EventLog log;
    double t;
    long v;
    while (in >> t >> v) log.push_back({t, static_cast<VertexId>(v)});
    return log;
}

OpinionState::OpinionState(std::vector<double> values) : f(std::move(values)) {
    if (f.empty()) throw std::invalid_argument("OpinionState: empty opinion vector");
    argmax = argmin = 0;
    max_val = min_val = f[0];
    for (VertexId v = 1; v < static_cast<VertexId>(f.size()); ++v) {
        if (f[v] > max_val) {
            max_val = f[v];
            argmax = v;
        }
        if (f[v] < min_val) {
            min_val = f[v];
            argmin = v;
        }
    }
}

void apply_ring(OpinionState& state, const TransitionMatrix& p, VertexId v, double time) {
    double x = p.row_average(v, state.f);
    // convex combination; clamping shaves off rounding spill past the extremes
    x = std::min(state.max_val, std::max(state.min_val, x));
    state.f[v] = x;
    state.time = time;

    if (v == state.argmax && x < state.max_val) {
        VertexId am = 0;
        double best = state.f[0];
        for (VertexId u = 1; u < static_cast<VertexId>(state.f.size()); ++u)
            if (state.f[u] > best) {
                best = state.f[u];
                am = u;
            }
        state.max_val = best;
        state.argmax = am;
    }
    if (v == state.argmin && x > state.min_val) {
        VertexId am = 0;
        double best = state.f[0];
        for (VertexId u = 1; u < static_cast<VertexId>(state.f.size()); ++u)
            if (state.f[u] < best) {
                best = state.f[u];
                am = u;
            }
        state.min_val = best;
        state.argmin = am;
    }
}

InitialOpinionSpec InitialOpinionSpec::parse(const std::string& text) {
    std::vector<std::string> tok;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            tok.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    tok.push_back(cur);

    InitialOpinionSpec spec;
    const std::string& name = tok[0];
    if (name == "uniform") {
        spec.kind = Kind::iid_uniform;
    } else if (name == "bernoulli") {
        spec.kind = Kind::iid_bernoulli;
        if (tok.size() > 1) spec.p = std::stod(tok[1]);
    } else if (name == "pm-one") {
        spec.kind = Kind::iid_bernoulli;
        spec.p = 0.5;
        spec.scale = 2.0;
        spec.shift = -1.0;
    } else if (name == "normal") {
        spec.kind = Kind::iid_normal;
    } else if (name == "second-eigenvector") {
        spec.kind = Kind::second_eigenvector;
    } else if (name == "step") {
        spec.kind = Kind::step;
        if (tok.size() > 1) {
            std::stringstream ss(tok[1]);
            std::string piece;
            while (std::getline(ss, piece, ',')) spec.support.push_back(std::stoi(piece));
        }
    } else if (name == "explicit") {
        if (tok.size() < 2) throw std::invalid_argument("init spec: explicit:<file>");
        spec.kind = Kind::explicit_vector;
        std::ifstream in(tok[1]);
        if (!in) throw std::runtime_error("cannot open " + tok[1]);
        double x;
        while (in >> x) spec.values.push_back(x);
        if (spec.values.empty()) throw std::runtime_error("explicit init: no values in " + tok[1]);
    } else {
        throw std::invalid_argument("unknown init spec: " + name);
    }
    return spec;
}

std::string InitialOpinionSpec::to_string() const {
    switch (kind) {
        case Kind::explicit_vector: return "explicit";
        case Kind::iid_uniform: return "uniform";
        case Kind::iid_bernoulli:
            if (scale == 2.0 && shift == -1.0 && p == 0.5) return "pm-one";
            return "bernoulli:" + std::to_string(p);
        case Kind::iid_normal: return "normal";
        case Kind::second_eigenvector: return "second-eigenvector";
        case Kind::step: return "step";
    }
    return "?";
}

bool InitialOpinionSpec::is_iid() const {
    return kind == Kind::iid_uniform || kind == Kind::iid_bernoulli || kind == Kind::iid_normal;
}

double InitialOpinionSpec::iid_mean() const {
    double mu = 0.0;
    switch (kind) {
        case Kind::iid_uniform: mu = 0.5; break;
        case Kind::iid_bernoulli: mu = p; break;
        case Kind::iid_normal: mu = 0.0; break;
        default: throw std::logic_error("iid_mean: not an iid init");
    }
    return scale * mu + shift;
}

InitialSampler::InitialSampler(const InitialOpinionSpec& spec, const TransitionMatrix& p)
    : spec_(spec), n_(p.size()) {
    switch (spec_.kind) {
        case InitialOpinionSpec::Kind::explicit_vector:
            if (static_cast<int>(spec_.values.size()) != n_)
                throw std::invalid_argument("explicit init: size mismatch");
            fixed_ = spec_.values;
            break;
        case InitialOpinionSpec::Kind::second_eigenvector: {
            const auto pi = stationary(p);
            std::vector<double> g = second_right_eigenvector(p, pi);
            const double lo = *std::min_element(g.begin(), g.end());
            const double hi = *std::max_element(g.begin(), g.end());
            if (hi - lo < 1e-300) throw std::runtime_error("eigenvector init: constant eigenvector");
            fixed_.resize(n_);
            for (int v = 0; v < n_; ++v) fixed_[v] = (g[v] - lo) / (hi - lo);
            break;
        }
        case InitialOpinionSpec::Kind::step: {
            fixed_.assign(n_, 0.0);
            if (spec_.support.empty()) {
                for (int v = n_ / 2; v < n_; ++v) fixed_[v] = 1.0;
            } else {
                for (VertexId v : spec_.support) {
                    if (v < 0 || v >= n_) throw std::invalid_argument("step init: vertex out of range");
                    fixed_[v] = 1.0;
                }
            }
            break;
        }
        default: break;
    }
}

std::vector<double> InitialSampler::draw(std::uint64_t base_seed, std::uint64_t replica) const {
    if (!fixed_.empty()) return fixed_;
    Rng rng(derive_seed(base_seed ^ spec_.opinion_seed, replica, SeedLane::opinions));
    std::vector<double> f(n_);
    for (int v = 0; v < n_; ++v) {
        double x = 0.0;
        switch (spec_.kind) {
            case InitialOpinionSpec::Kind::iid_uniform: x = rng.unit(); break;
            case InitialOpinionSpec::Kind::iid_bernoulli: x = rng.unit() < spec_.p ? 1.0 : 0.0; break;
            case InitialOpinionSpec::Kind::iid_normal: x = rng.normal(); break;
            default: throw std::logic_error("draw: unexpected kind");
        }
        f[v] = spec_.scale * x + spec_.shift;
    }
    return f;
}

ConsensusResult simulate(const TransitionMatrix& p, const std::vector<double>& f0, double eps,
                         double t_max, std::uint64_t clock_seed, const std::vector<double>* pi) {
    if (eps <= 0) throw std::invalid_argument("simulate: eps > 0 required");
    if (t_max <= 0) throw std::invalid_argument("simulate: t_max > 0 required");

    OpinionState st(f0);
    ConsensusResult res;

    auto finish = [&](bool censored, double tau) {
        res.censored = censored;
        res.tau = tau;
        res.final_osc = st.osc();
        res.midpoint = 0.5 * (st.max_val + st.min_val);
        if (pi) {
            double m = 0.0;
            for (int v = 0; v < p.size(); ++v) m += (*pi)[v] * st.f[v];
            res.consensus_value = m;
        } else {
            double m = 0.0;
            for (double x : st.f) m += x;
            res.consensus_value = m / static_cast<double>(st.f.size());
        }
        return res;
    };

    if (st.osc() <= eps) return finish(false, 0.0);

    ClockStream clock(p.size(), clock_seed);
    for (;;) {
        const Event e = clock.next();
        if (e.time > t_max) return finish(true, t_max);
        apply_ring(st, p, e.vertex, e.time);
        ++res.events;
        if (st.osc() <= eps) return finish(false, e.time);
    }
}

std::vector<TraceSample> simulate_trace(const TransitionMatrix& p, const std::vector<double>& pi,
                                        const std::vector<double>& f0,
                                        const std::vector<double>& sample_times,
                                        std::uint64_t clock_seed) {
    for (std::size_t i = 1; i < sample_times.size(); ++i)
        if (sample_times[i] < sample_times[i - 1])
            throw std::invalid_argument("simulate_trace: sample times must be nondecreasing");

    OpinionState st(f0);
    std::vector<TraceSample> out;
    out.reserve(sample_times.size());
    ClockStream clock(p.size(), clock_seed);
    std::size_t next_sample = 0;
    Event pending{0.0, 0};
    bool have_pending = false;

    auto emit = [&](double at) {
        const OpinionSummary s = summarize(p, pi, st.f);
        out.push_back({at, s.mean, s.var_pi, s.energy, s.osc});
    };

    while (next_sample < sample_times.size()) {
        if (!have_pending) {
            pending = clock.next();
            have_pending = true;
        }
        if (pending.time > sample_times[next_sample]) {
            emit(sample_times[next_sample]);
            ++next_sample;
        } else {
            apply_ring(st, p, pending.vertex, pending.time);
            have_pending = false;
        }
    }
    return out;
}

void parallel_replicas(int replicas, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw ? static_cast<int>(std::min(hw, 8u)) : 4;
    }
    threads = std::min(threads, replicas);
    if (threads <= 1) {
        for (int r = 0; r < replicas; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w]() {
            for (int r = w; r < replicas; r += threads) fn(r);
        });
    for (auto& th : pool) th.join();
}

TauEstimate estimate_tau(const TransitionMatrix& p, const InitialOpinionSpec& init, double eps,
                         int replicas, double t_max, std::uint64_t base_seed, int threads) {
    if (replicas < 2) throw std::invalid_argument("estimate_tau: replicas >= 2");
    InitialSampler sampler(init, p);
    std::vector<ConsensusResult> results(replicas);
    parallel_replicas(replicas, threads, [&](int r) {
        const auto f0 = sampler.draw(base_seed, static_cast<std::uint64_t>(r));
        const auto seed = derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::clocks);
        results[r] = simulate(p, f0, eps, t_max, seed);
    });

    TauEstimate est;
    est.replicas = replicas;
    for (const auto& res : results) {
        if (res.censored)
            ++est.censored;
        else
            est.taus.push_back(res.tau);
    }
    est.all_censored = est.taus.empty();
    est.per_replica = std::move(results);
    if (!est.all_censored) {
        const MeanStderr m = mean_stderr(est.taus);
        est.mean = m.mean;
        est.stderr_ = m.stderr_;
    }
    return est;
}

VarianceEstimate estimate_consensus_variance(const TransitionMatrix& p,
                                             const InitialOpinionSpec& init, int replicas,
                                             double stop_eps, double t_max,
                                             std::uint64_t base_seed, int threads) {
    if (replicas < 2) throw std::invalid_argument("estimate_consensus_variance: replicas >= 2");
    InitialSampler sampler(init, p);
    std::vector<ConsensusResult> results(replicas);
    parallel_replicas(replicas, threads, [&](int r) {
        const auto f0 = sampler.draw(base_seed, static_cast<std::uint64_t>(r));
        const auto seed = derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::clocks);
        results[r] = simulate(p, f0, stop_eps, t_max, seed);
    });

    VarianceEstimate est;
    est.replicas = replicas;
    for (const auto& res : results) {
        if (res.censored)
            ++est.censored;
        else
            est.values.push_back(res.midpoint);
    }
    est.per_replica = results;
    if (!est.values.empty()) {
        const MeanStderr m = mean_stderr(est.values);
        est.mean = m.mean;
        est.stderr_ = m.stderr_;
        est.variance = sample_variance(est.values);
    }
    return est;
}

std::vector<TailPoint> concentration_profile(const TransitionMatrix& p,
                                             const InitialOpinionSpec& init, VertexId o,
                                             const std::vector<double>& time_grid, double eps,
                                             int replicas, std::uint64_t base_seed, int threads) {
    if (!init.is_iid()) throw std::invalid_argument("concentration_profile: init must be iid");
    if (o < 0 || o >= p.size()) throw std::invalid_argument("concentration_profile: bad vertex");
    const double mu = init.iid_mean();
    InitialSampler sampler(init, p);

    std::vector<std::vector<std::uint8_t>> hits(replicas);
    parallel_replicas(replicas, threads, [&](int r) {
        const auto f0 = sampler.draw(base_seed, static_cast<std::uint64_t>(r));
        OpinionState st(f0);
        ClockStream clock(p.size(), derive_seed(base_seed, static_cast<std::uint64_t>(r), SeedLane::clocks));
        std::vector<std::uint8_t> hit(time_grid.size(), 0);
        std::size_t next_sample = 0;
        Event pending{0.0, 0};
        bool have_pending = false;
        while (next_sample < time_grid.size()) {
            if (!have_pending) {
                pending = clock.next();
                have_pending = true;
            }
            if (pending.time > time_grid[next_sample]) {
                hit[next_sample] = std::abs(st.f[o] - mu) >= eps ? 1 : 0;
                ++next_sample;
            } else {
                apply_ring(st, p, pending.vertex, pending.time);
                have_pending = false;
            }
        }
        hits[r] = std::move(hit);
    });

    std::vector<TailPoint> out(time_grid.size());
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        std::size_t count = 0;
        for (int r = 0; r < replicas; ++r) count += hits[r][i];
        out[i].t = time_grid[i];
        out[i].interval = wilson(count, static_cast<std::size_t>(replicas));
    }
    return out;
}

}  // namespace degroot
