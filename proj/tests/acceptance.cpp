// Acceptance suite: every check below pins its inputs, seeds and tolerances.
// Each criterion prints exactly one [PASS]/[FAIL] line; the exit code is the
// number of failures. Run "./acceptance" for the whole suite or "./acceptance N"
// for one criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "degroot/bounds.hpp"
#include "degroot/coupled.hpp"
#include "degroot/dynamics.hpp"
#include "degroot/experiments.hpp"
#include "degroot/fragmentation.hpp"
#include "degroot/graph.hpp"
#include "degroot/line_kernel.hpp"
#include "degroot/spectral.hpp"
#include "oracles.hpp"

using namespace degroot;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// 1. shared-log duality holds to 1e-9 on 100 random (graph, seed, s, t) tuples
Check criterion_1() {
    Check c;
    const std::vector<std::string> graphs = {"cycle:16", "hypercube:3", "drift-digraph:9",
                                             "star-path-star:8"};
    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
        const auto p = build_graph(GraphSpec::parse(graphs[j % graphs.size()]));
        Rng rng(derive_seed(8101, static_cast<std::uint64_t>(j), SeedLane::opinions));
        std::vector<double> f0(p.size());
        for (auto& x : f0) x = rng.unit();
        const double t = 1.0 + 7.0 * rng.unit();
        const double s = t * rng.unit();
        const auto res =
            duality_check(p, f0, t, s, derive_seed(8101, static_cast<std::uint64_t>(j), SeedLane::clocks));
        worst = std::max(worst, res.max_abs_diff);
    }
    c.require(worst < 1e-9, "max duality gap " + fmt(worst));
    c.note("max |forward - dual| = " + fmt(worst));
    return c;
}

// 2. two-state oracle: mean tau, survival at t=1, consensus variance, bounds
Check criterion_2() {
    Check c;
    const auto k2 = build_graph(GraphSpec::parse("complete:2"));
    const InitialOpinionSpec init = InitialOpinionSpec::parse("step");

    const auto est = estimate_tau(k2, init, 0.5, 10000, 100.0, 4242);
    c.require(std::abs(est.mean - 0.5) <= 0.02, "mean tau " + fmt(est.mean));
    std::size_t over = 0;
    for (double t : est.taus) over += t > 1.0;
    const double survival = static_cast<double>(over) / est.taus.size();
    c.require(std::abs(survival - std::exp(-2.0)) <= 0.01, "P(tau>1) " + fmt(survival));

    const auto var = estimate_consensus_variance(k2, init, 10000, 1e-6, 100.0, 4243);
    c.require(std::abs(var.variance - 0.25) <= 0.01, "variance " + fmt(var.variance));

    const auto pi = stationary(k2);
    const auto s0 = summarize(k2, pi.pi, {0.0, 1.0});
    const auto [lo, hi] = variance_bounds(pi.pi_min, pi.pi_max, s0.energy);
    c.require(lo == 0.25 && hi == 0.25, "bounds (" + fmt(lo) + ", " + fmt(hi) + ")");
    c.note("tau " + fmt(est.mean) + ", P(tau>1) " + fmt(survival) + ", var " + fmt(var.variance));
    return c;
}

// 3. martingale / supermartingale summaries plus the per-event hard assertion
Check criterion_3() {
    Check c;
    const auto p = build_graph(GraphSpec::parse("cycle:64"));
    const auto pi = stationary(p);
    const auto gaps = spectral_gaps(p, pi);
    const std::vector<double> grid = {1, 2, 4, 8, 16};
    const int reps = 2000;
    InitialSampler sampler(InitialOpinionSpec::parse("uniform"), p);

    long events = 0;
    long monotone_failures = 0;
    std::vector<std::vector<double>> dmean(grid.size(), std::vector<double>(reps));
    std::vector<std::vector<double>> gamma_energy(grid.size(), std::vector<double>(reps));

    for (int r = 0; r < reps; ++r) {
        const auto f0 = sampler.draw(6400, static_cast<std::uint64_t>(r));
        OpinionState st(f0);
        const auto s0 = summarize(p, pi.pi, f0);
        ClockStream clock(p.size(), derive_seed(6400, static_cast<std::uint64_t>(r), SeedLane::clocks));
        std::size_t g = 0;
        Event pending{0.0, 0};
        bool have = false;
        double prev_max = st.max_val, prev_min = st.min_val;
        while (g < grid.size()) {
            if (!have) {
                pending = clock.next();
                have = true;
            }
            if (pending.time > grid[g]) {
                const auto s = summarize(p, pi.pi, st.f);
                dmean[g][r] = s.mean - s0.mean;
                gamma_energy[g][r] = std::exp(gaps.gamma * grid[g]) * s.energy;
                ++g;
            } else {
                apply_ring(st, p, pending.vertex, pending.time);
                have = false;
                ++events;
                if (st.max_val > prev_max || st.min_val < prev_min) ++monotone_failures;
                prev_max = st.max_val;
                prev_min = st.min_val;
            }
        }
    }

    c.require(events >= 100000, "only " + std::to_string(events) + " events");
    c.require(monotone_failures == 0,
              std::to_string(monotone_failures) + " oscillation monotonicity violations");
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto m = mean_stderr(dmean[g]);
        c.require(std::abs(m.mean) <= 3.0 * m.stderr_,
                  "martingale drift at t=" + fmt(grid[g]) + ": " + fmt(m.mean));
    }
    for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        std::vector<double> diff(reps);
        for (int r = 0; r < reps; ++r) diff[r] = gamma_energy[g + 1][r] - gamma_energy[g][r];
        const auto m = mean_stderr(diff);
        c.require(m.mean <= 3.0 * m.stderr_,
                  "supermartingale rise at t=" + fmt(grid[g + 1]) + ": " + fmt(m.mean));
    }
    c.note(std::to_string(events) + " events, all oscillation steps monotone");
    return c;
}

// 4. mean fragmentation mass equals the heat-kernel row
Check criterion_4() {
    Check c;
    const auto p = build_graph(GraphSpec::parse("cycle:32"));
    const double t = 8.0;
    const int reps = 5000;
    std::vector<double> kernel(32);
    for (int v = 0; v < 32; ++v) {
        std::vector<double> e(32, 0.0);
        e[v] = 1.0;
        kernel[v] = expected_opinions(p, e, t)[0];
    }
    std::vector<std::vector<double>> mass(32, std::vector<double>(reps));
    for (int r = 0; r < reps; ++r) {
        const auto st =
            simulate_fragmentation(p, 0, t, derive_seed(3208, static_cast<std::uint64_t>(r), SeedLane::clocks));
        for (int v = 0; v < 32; ++v) mass[v][r] = st.mass[v];
    }
    double max_dev = 0.0;
    for (int v = 0; v < 32; ++v) {
        const auto m = mean_stderr(mass[v]);
        const double dev = std::abs(m.mean - kernel[v]);
        max_dev = std::max(max_dev, dev);
        c.require(dev <= 3.0 * m.stderr_ + 1e-12,
                  "vertex " + std::to_string(v) + " off by " + fmt(dev) + " (3se " +
                      fmt(3.0 * m.stderr_) + ")");
    }
    c.require(max_dev < 0.01, "max deviation " + fmt(max_dev));
    c.note("max deviation " + fmt(max_dev));
    return c;
}

// 5. coincidence probabilities equal fragmentation moments; exact 4-state check
Check criterion_5() {
    Check c;
    const auto p = build_graph(GraphSpec::parse("cycle:64"));
    const VertexId o = 11;
    const int reps = 4000;
    int combo = 0;
    for (int d : {2, 3})
        for (double t : {8.0, 32.0}) {
            const auto coin = coincidence_probability(p, o, d, t, reps, 777 + combo);
            const auto mom = moments(p, o, {t}, d, reps, 778 + combo);
            const double se_c = (coin.interval.hi - coin.interval.lo) / (2 * 1.96);
            const double gap = std::abs(coin.interval.p_hat - mom.mean[0]);
            const double budget = 3.0 * std::sqrt(se_c * se_c + mom.stderr_[0] * mom.stderr_[0]);
            c.require(gap <= budget, "d=" + std::to_string(d) + " t=" + fmt(t) + " gap " +
                                         fmt(gap) + " > " + fmt(budget));
            ++combo;
        }

    const auto k2 = build_graph(GraphSpec::parse("complete:2"));
    const double exact = oracles::joint_coincidence_exact(k2, 0, 2, 1.0);
    const auto coin2 = coincidence_probability(k2, 0, 2, 1.0, 2000, 991);
    const auto mom2 = moments(k2, 0, {1.0}, 2, 2000, 992);
    const double se2 = (coin2.interval.hi - coin2.interval.lo) / (2 * 1.96);
    c.require(std::abs(coin2.interval.p_hat - exact) <= 3.0 * se2 + 1e-12,
              "two-state coincidence " + fmt(coin2.interval.p_hat) + " vs exact " + fmt(exact));
    c.require(std::abs(mom2.mean[0] - exact) <= 3.0 * mom2.stderr_[0] + 1e-12,
              "two-state moment " + fmt(mom2.mean[0]) + " vs exact " + fmt(exact));
    c.note("exact two-state value " + fmt(exact));
    return c;
}

// 6. reversible second-moment decay exponent on the long cycle
Check criterion_6() {
    Check c;
    const auto p = build_graph(GraphSpec::parse("cycle:512"));
    const auto est = moments(p, 0, {16, 32, 64, 128, 256, 512}, 2, 2000, 51234);
    c.require(est.slope >= -0.6 && est.slope <= -0.4, "slope " + fmt(est.slope));
    c.note("fitted log-log slope " + fmt(est.slope));
    return c;
}

// 7. measured consensus times are consistent with every applicable bound
Check criterion_7() {
    Check c;
    const InitialOpinionSpec init = InitialOpinionSpec::parse("step");
    int point = 0;
    for (const std::string graph : {"cycle:32", "hypercube:4", "complete:16"})
        for (double eps : {0.5, 0.1}) {
            const auto p = build_graph(GraphSpec::parse(graph));
            const auto pi = stationary(p);
            const auto gaps = spectral_gaps(p, pi);
            const auto m = metrics(p, &pi.pi);
            InitialSampler sampler(init, p);
            const auto f0 = sampler.draw(1, 0);
            const double t_max = default_t_max(gaps.gamma, pi.pi_min, eps, 0.5);
            const auto est = estimate_tau(p, init, eps, 400, t_max, 9300 + point);
            const double cf = static_cast<double>(est.censored) / est.replicas;
            for (const auto& b : evaluate_tau_bounds(p, pi, gaps, m, f0, eps)) {
                if (b.name != "tau-reversible-gap-worstcase" && b.name != "tau-srw-resistance")
                    continue;
                const Verdict v = compare(est.mean, est.stderr_, cf, b);
                c.require(v == Verdict::consistent, graph + " eps=" + fmt(eps) + " " + b.name +
                                                        ": " + verdict_name(v) + " (measured " +
                                                        fmt(est.mean) + " vs " + fmt(b.value) + ")");
            }
            ++point;
        }

    {
        const auto p = build_graph(GraphSpec::parse("lazy:0.5:directed-cycle:32"));
        const auto pi = stationary(p);
        const auto gaps = spectral_gaps(p, pi);
        const auto m = metrics(p, &pi.pi);
        InitialSampler sampler(init, p);
        const auto f0 = sampler.draw(1, 0);
        const auto s0 = summarize(p, pi.pi, f0);
        for (double eps : {0.5, 0.1}) {
            const double bound = lazy_tau_bound(gaps.gamma, 0.5, s0.var_pi, pi.pi_min, eps);
            const auto est = estimate_tau(p, init, eps, 400, 100.0 * bound, 9400);
            const double cf = static_cast<double>(est.censored) / est.replicas;
            BoundReport b;
            b.name = "tau-lazy-gap";
            b.applicable = true;
            b.value = bound;
            const Verdict v = compare(est.mean, est.stderr_, cf, b);
            c.require(v == Verdict::consistent, "lazy directed cycle eps=" + fmt(eps) + ": " +
                                                    verdict_name(v) + " (measured " + fmt(est.mean) +
                                                    " vs " + fmt(bound) + ")");
        }
    }
    return c;
}

// 8. eigenvector start lives at least 1/(10 gamma)
Check criterion_8() {
    Check c;
    const auto p = build_graph(GraphSpec::parse("cycle:32"));
    const auto pi = stationary(p);
    const auto gaps = spectral_gaps(p, pi);
    const auto est = estimate_tau(p, InitialOpinionSpec::parse("second-eigenvector"), 0.5, 2000,
                                  default_t_max(gaps.gamma, pi.pi_min, 0.5, 0.5), 3232);
    const double threshold = 1.0 / (10.0 * gaps.gamma);
    c.require(est.censored == 0, "censored runs");
    c.require(est.mean >= threshold,
              "mean " + fmt(est.mean) + " below threshold " + fmt(threshold));
    c.note("mean " + fmt(est.mean) + " vs 1/(10 gamma) = " + fmt(threshold));
    return c;
}

// 9. drift digraph: super-polynomial growth shape over sizes 9..21
Check criterion_9() {
    Check c;
    ExperimentConfig cfg;
    cfg.name = "drift-blowup";
    cfg.seed = 2100;
    cfg.replicas = 400;
    cfg.t_max = 1e5;
    const auto rep = run_experiment(cfg);
    c.require(rep.has_verdict && rep.pass, "experiment verdict failed");
    if (rep.summary.contains("loglog_second_divided_differences")) {
        std::string s = "second divided differences:";
        for (double x : rep.summary["loglog_second_divided_differences"].get<std::vector<double>>())
            s += " " + fmt(x);
        c.note(s + " (censored " + std::to_string(rep.summary["censored_total"].get<int>()) + ")");
    }
    return c;
}

// 10. star-path-star: quadratic scaling exponent
Check criterion_10() {
    Check c;
    ExperimentConfig cfg;
    cfg.name = "star-path-quadratic";
    cfg.seed = 1044;
    cfg.replicas = 300;
    const auto rep = run_experiment(cfg);
    c.require(rep.has_verdict && rep.pass, "experiment verdict failed");
    if (rep.summary.contains("loglog_slope"))
        c.note("log-log slope " + fmt(rep.summary["loglog_slope"].get<double>()));
    return c;
}

// 11. spectral oracles: hypercube gap, cycle gap, hypercube resistance
Check criterion_11() {
    Check c;
    for (int l = 2; l <= 6; ++l) {
        const auto p = build_graph(GraphSpec::parse("hypercube:" + std::to_string(l)));
        const auto g = spectral_gaps(p, stationary(p));
        c.require(std::abs(g.gamma - 2.0 / l) <= 1e-8,
                  "hypercube l=" + std::to_string(l) + " gamma " + fmt(g.gamma));
    }
    for (int n : {64, 128}) {
        const auto p = build_graph(GraphSpec::parse("cycle:" + std::to_string(n)));
        const auto g = spectral_gaps(p, stationary(p));
        const double approx = 2.0 * std::numbers::pi * std::numbers::pi / (double(n) * n);
        c.require(std::abs(g.gamma - approx) <= 0.1 * approx,
                  "cycle n=" + std::to_string(n) + " gamma " + fmt(g.gamma) + " vs " + fmt(approx));
    }
    const auto q2 = build_graph(GraphSpec::parse("hypercube:2"));
    const auto rm = r_max(q2);
    c.require(rm.r_max >= 1.0 - 1e-9 && rm.r_max <= 3.0, "hypercube r_max " + fmt(rm.r_max));
    c.note("hypercube r_max " + fmt(rm.r_max));
    return c;
}

// 12. alternating-block line: deterministic oscillation of E f_t(0)
Check criterion_12() {
    Check c;
    ExperimentConfig cfg;
    cfg.name = "block-line-oscillation";
    const auto rep = run_experiment(cfg);
    c.require(rep.has_verdict && rep.pass, "experiment verdict failed");
    std::string vals = "E f at probes:";
    for (const auto& probe : rep.summary["probes"]) {
        const double v = probe["expected_opinion_at_origin"].get<double>();
        vals += " " + fmt(v);
        const bool high = probe["side"].get<std::string>() == "high";
        c.require(high ? v > 0.8 : v < 0.2,
                  "k=" + std::to_string(probe["k"].get<int>()) + " value " + fmt(v));
        if (probe.contains("cross_check_diff"))
            c.require(probe["cross_check_diff"].get<double>() < 1e-8,
                      "uniformization cross-check gap " +
                          fmt(probe["cross_check_diff"].get<double>()));
    }
    c.note(vals);
    return c;
}

const std::vector<std::pair<std::string, std::function<Check()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Check()>>> list = {
        {"duality replay exact to 1e-9 on 100 random tuples", criterion_1},
        {"two-state oracle: tau, survival, consensus variance, bounds", criterion_2},
        {"martingale / supermartingale summaries, osc monotone per event", criterion_3},
        {"mean fragmentation mass matches the heat kernel", criterion_4},
        {"coincidence probabilities equal fragmentation moments", criterion_5},
        {"second-moment decay slope in [-0.6, -0.4]", criterion_6},
        {"measured consensus times consistent with closed-form bounds", criterion_7},
        {"eigenvector start beats the 1/(10 gamma) floor", criterion_8},
        {"drift digraph grows super-polynomially", criterion_9},
        {"star-path-star scales quadratically", criterion_10},
        {"spectral oracles: gaps and resistance", criterion_11},
        {"alternating-block line oscillates below 0.2 / above 0.8", criterion_12},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (only != 0 && number != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Check c;
        try {
            c = criteria()[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d [%s] %s (%s) [%.1fs]\n", number, c.ok ? "PASS" : "FAIL",
                    criteria()[i].first.c_str(), c.detail.c_str(), secs);
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }
    return failures;
}
