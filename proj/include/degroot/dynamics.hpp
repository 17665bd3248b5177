#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "degroot/graph.hpp"
#include "degroot/rng.hpp"
#include "degroot/stats.hpp"

namespace degroot {

struct Event {
    double time;
    VertexId vertex;
};

using EventLog = std::vector<Event>;

// One aggregate Exp(n) interarrival plus a uniform vertex choice per event,
// which is exactly n independent unit-rate clocks. O(1) per event.
class ClockStream {
  public:
    ClockStream(int n, std::uint64_t seed) : rng_(seed), n_(n) {}

    Event next() {
        time_ += rng_.exponential(static_cast<double>(n_));
        return {time_, static_cast<VertexId>(rng_.below(static_cast<std::uint32_t>(n_)))};
    }

    double time() const { return time_; }

  private:
    Rng rng_;
    int n_;
    double time_ = 0.0;
};

EventLog generate_event_log(int n, double horizon, std::uint64_t seed);
void save_event_log(const EventLog& log, const std::string& path);  // "t v" per line
EventLog load_event_log(const std::string& path);

struct OpinionState {
    std::vector<double> f;
    double time = 0.0;
    double max_val = 0.0;
    double min_val = 0.0;
    VertexId argmax = 0;
    VertexId argmin = 0;

    explicit OpinionState(std::vector<double> values);
    double osc() const { return max_val - min_val; }
};

// f(v) <- sum_u P_vu f(u) with pre-ring values; extrema maintained
// incrementally, rescanning only when the extremal vertex itself was updated.
void apply_ring(OpinionState& state, const TransitionMatrix& p, VertexId v, double time);

struct InitialOpinionSpec {
    enum class Kind {
        explicit_vector,
        iid_uniform,      // uniform [0,1]
        iid_bernoulli,    // {0,1} with P(1) = p
        iid_normal,       // standard normal
        second_eigenvector,  // rescaled to [0,1]
        step,             // indicator of a vertex set (default: first half)
    };

    Kind kind = Kind::iid_uniform;
    std::vector<double> values;       // explicit_vector
    double p = 0.5;                   // iid_bernoulli
    double scale = 1.0;               // iid draws are mapped to scale*x + shift
    double shift = 0.0;
    std::vector<VertexId> support;    // step
    std::uint64_t opinion_seed = 0;

    // "uniform", "bernoulli:0.5", "pm-one" (= bernoulli rescaled to {-1,1}),
    // "normal", "second-eigenvector", "step", "step:0,1,2", "explicit:<file.json>"
    static InitialOpinionSpec parse(const std::string& text);
    std::string to_string() const;

    bool is_iid() const;
    bool is_deterministic() const { return !is_iid(); }
    double iid_mean() const;  // mean of one draw after the affine map
};

// Resolves deterministic kinds once (eigenvector, step, explicit) and hands out
// per-replica iid draws on the opinions lane otherwise.
class InitialSampler {
  public:
    InitialSampler(const InitialOpinionSpec& spec, const TransitionMatrix& p);
    std::vector<double> draw(std::uint64_t base_seed, std::uint64_t replica) const;

  private:
    InitialOpinionSpec spec_;
    int n_;
    std::vector<double> fixed_;
};

struct ConsensusResult {
    double tau = 0.0;
    bool censored = false;
    double consensus_value = 0.0;  // pi-mean at stop when pi was supplied, plain mean otherwise
    double midpoint = 0.0;         // (min f + max f)/2 at stop
    double final_osc = 0.0;
    std::uint64_t events = 0;
};

ConsensusResult simulate(const TransitionMatrix& p, const std::vector<double>& f0, double eps,
                         double t_max, std::uint64_t clock_seed,
                         const std::vector<double>* pi = nullptr);

struct TraceSample {
    double t = 0.0;
    double mean = 0.0;
    double var_pi = 0.0;
    double energy = 0.0;
    double osc = 0.0;
};

std::vector<TraceSample> simulate_trace(const TransitionMatrix& p, const std::vector<double>& pi,
                                        const std::vector<double>& f0,
                                        const std::vector<double>& sample_times,
                                        std::uint64_t clock_seed);

struct TauEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int replicas = 0;
    int censored = 0;
    bool all_censored = false;
    std::vector<double> taus;                 // uncensored values, replica order
    std::vector<ConsensusResult> per_replica; // full results, replica order
};

TauEstimate estimate_tau(const TransitionMatrix& p, const InitialOpinionSpec& init, double eps,
                         int replicas, double t_max, std::uint64_t base_seed, int threads = 0);

struct VarianceEstimate {
    double mean = 0.0;      // mean of the f_infinity estimates
    double variance = 0.0;  // sample variance of the estimates
    double stderr_ = 0.0;   // standard error of the mean
    int replicas = 0;
    int censored = 0;
    std::vector<double> values;
    std::vector<ConsensusResult> per_replica;
};

VarianceEstimate estimate_consensus_variance(const TransitionMatrix& p,
                                             const InitialOpinionSpec& init, int replicas,
                                             double stop_eps, double t_max,
                                             std::uint64_t base_seed, int threads = 0);

struct TailPoint {
    double t = 0.0;
    WilsonInterval interval;
};

// empirical P(|f_t(o) - mu| >= eps) on a shared time grid; init must be iid
std::vector<TailPoint> concentration_profile(const TransitionMatrix& p,
                                             const InitialOpinionSpec& init, VertexId o,
                                             const std::vector<double>& time_grid, double eps,
                                             int replicas, std::uint64_t base_seed,
                                             int threads = 0);

// Runs fn(replica) for every replica index with results stored by index; the
// caller's containers make the reduction deterministic regardless of thread
// scheduling.
void parallel_replicas(int replicas, int threads, const std::function<void(int)>& fn);

}  // namespace degroot
