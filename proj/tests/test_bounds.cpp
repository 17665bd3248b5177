#include <doctest.h>

#include <cmath>

#include "degroot/bounds.hpp"
#include "degroot/dynamics.hpp"
#include "degroot/stats.hpp"
#include "degroot/graph.hpp"
#include "degroot/rng.hpp"

using namespace degroot;

TEST_CASE("plug-in values") {
    // gamma = 1, pi_min = 1/2, eps = 1, E0 = 1/2 collapses to log(4e)
    CHECK(reversible_tau_bound(1.0, 0.5, 1.0, 0.5) ==
          doctest::Approx(std::log(4.0 * std::exp(1.0))));
    CHECK(reversible_tau_bound_crude(1.0, 0.5, 1.0) ==
          doctest::Approx(std::log(4.0 * std::exp(1.0))));
    CHECK_THROWS(reversible_tau_bound(0.0, 0.5, 0.5, 0.5));

    // two vertices, one edge: (R |E| + 1) ceil(log2(1/eps)) = 2 at eps = 1/2
    CHECK(srw_tau_bound(1.0, 1.0, 0.5) == 2.0);
    CHECK(srw_tau_bound(1.0, 1.0, 1.0) == 0.0);

    CHECK(general_tau_bound(0.5, 1e-9, 0.5, 0.9) == 0.0);  // consensus from the start
    CHECK(lazy_tau_bound(0.04, 0.5, 0.25, 0.125, 0.5) ==
          doctest::Approx(general_tau_bound(0.04, 0.25, 0.125, 0.5)));

    const auto [lo, hi] = variance_bounds(0.5, 0.5, 0.5);
    CHECK(lo == 0.25);
    CHECK(hi == 0.25);
    CHECK(variance_bound_srw(2.0, 8.0) == 0.25);
    CHECK(variance_bound_lazy(0.1, 0.25, 0.5) == doctest::Approx(0.05));
}

TEST_CASE("monotone in the right directions") {
    Rng rng(77);
    for (int k = 0; k < 200; ++k) {
        const double gamma = 0.01 + rng.unit();
        const double pi_min = 0.01 + 0.4 * rng.unit();
        const double eps = 0.05 + 0.9 * rng.unit();
        const double e0 = 0.01 + rng.unit();
        const double bump = 0.01 + rng.unit() * 0.1;

        CHECK(reversible_tau_bound(gamma, pi_min, eps, e0) >=
              reversible_tau_bound(gamma, pi_min, std::min(eps + bump, 0.999), e0));
        CHECK(reversible_tau_bound(gamma, pi_min, eps, e0 + bump) >=
              reversible_tau_bound(gamma, pi_min, eps, e0));
        CHECK(reversible_tau_bound(gamma, pi_min, eps, e0) >=
              reversible_tau_bound(gamma + bump, pi_min, eps, e0));

        const double var0 = 0.3 + rng.unit();
        const double gh = 0.01 + rng.unit();
        CHECK(general_tau_bound(gh, var0, pi_min, eps) >=
              general_tau_bound(gh, var0, pi_min, std::min(eps + bump, 0.999)));
        CHECK(general_tau_bound(gh, var0 + bump, pi_min, eps) >=
              general_tau_bound(gh, var0, pi_min, eps));
    }
}

TEST_CASE("verdicts") {
    BoundReport upper;
    upper.applicable = true;
    upper.is_upper = true;
    upper.value = 2.0;
    CHECK(compare(0.5, 0.01, 0.0, upper) == Verdict::consistent);
    CHECK(compare(5.0, 0.1, 0.0, upper) == Verdict::violated);
    CHECK(compare(0.5, 0.01, 0.4, upper) == Verdict::inconclusive);

    BoundReport lower = upper;
    lower.is_upper = false;
    lower.value = 1.0;
    CHECK(compare(5.0, 0.1, 0.0, lower) == Verdict::consistent);
    CHECK(compare(0.5, 0.01, 0.0, lower) == Verdict::violated);

    BoundReport window = upper;
    window.two_sided = true;
    window.value_lower = 1.0;
    window.value = 2.0;
    CHECK(compare(1.5, 0.01, 0.0, window) == Verdict::consistent);
    CHECK(compare(0.2, 0.01, 0.0, window) == Verdict::violated);

    BoundReport family = upper;
    family.up_to_constant = true;
    CHECK(compare(0.5, 0.01, 0.0, family) == Verdict::inconclusive);
}

TEST_CASE("evaluator: applicability flags per structure") {
    const auto k2 = build_graph(GraphSpec::parse("complete:2"));
    const auto pi2 = stationary(k2);
    const auto sp2 = spectral_gaps(k2, pi2);
    const auto m2 = metrics(k2, &pi2.pi);
    const std::vector<double> f0 = {0.0, 1.0};
    const auto taus = evaluate_tau_bounds(k2, pi2, sp2, m2, f0, 0.5);
    for (const auto& b : taus) {
        if (b.name == "tau-reversible-gap" || b.name == "tau-srw-resistance")
            CHECK(b.applicable);
        if (b.name == "tau-lazy-gap") CHECK(!b.applicable);  // no self loops
    }
    const auto vars = evaluate_variance_bounds(k2, pi2, sp2, m2, f0);
    for (const auto& b : vars) {
        if (b.name == "variance-energy-window") {
            CHECK(b.applicable);
            CHECK(b.value_lower == doctest::Approx(0.25));
            CHECK(b.value == doctest::Approx(0.25));
        }
        if (b.name == "variance-srw-degree") {
            CHECK(b.applicable);
            CHECK(b.value == doctest::Approx(1.0));  // Delta/|E| = 1/1
        }
    }

    const auto dc = build_graph(GraphSpec::parse("directed-cycle:8"));
    const auto pid = stationary(dc);
    const auto spd = spectral_gaps(dc, pid);
    const auto md = metrics(dc, &pid.pi);
    const auto dtaus = evaluate_tau_bounds(dc, pid, spd, md, {0, 0, 0, 0, 1, 1, 1, 1}, 0.5);
    bool saw_general = false;
    for (const auto& b : dtaus) {
        if (b.name == "tau-reversible-gap") CHECK(!b.applicable);
        if (b.name == "tau-srw-resistance") CHECK(!b.applicable);
        if (b.name == "tau-eulerian") {
            CHECK(b.applicable);
            CHECK(b.up_to_constant);
        }
        if (b.name == "tau-general-gap") {
            CHECK(b.applicable);
            CHECK(b.value > 0);
            saw_general = true;
        }
    }
    CHECK(saw_general);
}

TEST_CASE("general bound stays within shouting distance of the reversible one") {
    for (const char* spec : {"lazy:0.5:cycle:16", "complete:5"}) {
        const auto p = build_graph(GraphSpec::parse(spec));
        const auto pi = stationary(p);
        const auto g = spectral_gaps(p, pi);
        REQUIRE(g.reversible);
        InitialSampler sampler(InitialOpinionSpec::parse("step"), p);
        const auto f0 = sampler.draw(1, 0);
        const auto s = summarize(p, pi.pi, f0);
        const double rev = reversible_tau_bound(g.gamma, pi.pi_min, 0.25, s.energy);
        const double gen = general_tau_bound(g.gamma_hat, s.var_pi, pi.pi_min, 0.25);
        CHECK(gen / rev < 20.0);
        CHECK(gen / rev > 0.05);
    }
}

TEST_CASE("default horizon") {
    CHECK(default_t_max(0.0, 0.1, 0.5, 0.5) == 1e6);
    CHECK(default_t_max(0.5, 0.1, 0.5, 0.5) ==
          doctest::Approx(100.0 * reversible_tau_bound(0.5, 0.1, 0.5, 0.5)));
}

TEST_CASE("variance window brackets the measured consensus variance") {
    // uniform pi makes the window collapse to a point: Var(f_inf) = E0 / n
    const auto p = build_graph(GraphSpec::parse("cycle:8"));
    const auto pi = stationary(p);
    InitialSampler sampler(InitialOpinionSpec::parse("step"), p);
    const auto f0 = sampler.draw(1, 0);
    const auto s0 = summarize(p, pi.pi, f0);
    const auto [lo, hi] = variance_bounds(pi.pi_min, pi.pi_max, s0.energy);
    CHECK(lo == doctest::Approx(hi));

    const auto est = estimate_consensus_variance(p, InitialOpinionSpec::parse("step"), 3000, 1e-4,
                                                 1e5, 818);
    REQUIRE(est.censored == 0);
    // sample variance of n values has stderr ~ var sqrt(2/(n-1))
    const double var_se = est.variance * std::sqrt(2.0 / (est.values.size() - 1));
    CHECK(est.variance >= lo - 3.0 * var_se);
    CHECK(est.variance <= hi + 3.0 * var_se);
}

TEST_CASE("random starts shift the window by the variance of the initial mean") {
    const auto p = build_graph(GraphSpec::parse("cycle:8"));
    const auto pi = stationary(p);
    const InitialOpinionSpec init = InitialOpinionSpec::parse("uniform");
    InitialSampler sampler(init, p);

    const int reps = 3000;
    std::vector<double> m0(reps), e0(reps);
    for (int r = 0; r < reps; ++r) {
        const auto f0 = sampler.draw(333, static_cast<std::uint64_t>(r));
        const auto s = summarize(p, pi.pi, f0);
        m0[r] = s.mean;
        e0[r] = s.energy;
    }
    const double var_m0 = sample_variance(m0);
    const double mean_e0 = mean_stderr(e0).mean;
    const auto [lo, hi] = variance_bounds_random(pi.pi_min, pi.pi_max, mean_e0);

    const auto est = estimate_consensus_variance(p, init, reps, 1e-4, 1e5, 333);
    REQUIRE(est.censored == 0);
    const double centered = est.variance - var_m0;
    const double var_se = est.variance * std::sqrt(2.0 / (est.values.size() - 1));
    CHECK(centered >= lo - 3.0 * var_se);
    CHECK(centered <= hi + 3.0 * var_se);
}
