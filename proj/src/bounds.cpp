#include "degroot/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace degroot {

namespace {
constexpr double kE = 2.718281828459045235360287471352662498;
}

double reversible_tau_bound(double gamma, double pi_min, double eps, double energy0) {
    if (gamma <= 0) throw std::invalid_argument("reversible_tau_bound: gamma > 0 required");
    if (eps <= 0 || eps > 1) throw std::invalid_argument("reversible_tau_bound: eps in (0,1]");
    return (1.0 / gamma) * std::log(4.0 * kE * energy0 / (gamma * pi_min * eps * eps));
}

double reversible_tau_bound_crude(double gamma, double pi_min, double eps) {
    return reversible_tau_bound(gamma, pi_min, eps, 0.5);
}

double srw_tau_bound(double r_max_or_diam, double edge_count, double eps) {
    if (eps <= 0 || eps > 1) throw std::invalid_argument("srw_tau_bound: eps in (0,1]");
    const double rounds = std::ceil(std::log2(1.0 / eps));
    return (r_max_or_diam * edge_count + 1.0) * rounds;
}

double general_tau_bound(double gamma_hat, double var0, double pi_min, double eps) {
    if (4.0 * var0 < eps * eps * pi_min) return 0.0;
    if (gamma_hat <= 0) throw std::invalid_argument("general_tau_bound: gamma_hat > 0 required");
    return (1.0 / gamma_hat) * std::log(4.0 * kE * var0 / (eps * eps * pi_min));
}

double lazy_tau_bound(double gamma, double delta, double var0, double pi_min, double eps) {
    if (delta <= 0) throw std::invalid_argument("lazy_tau_bound: delta > 0 required");
    return general_tau_bound(2.0 * delta * gamma, var0, pi_min, eps);
}

double eulerian_tau_bound(double n, double m, double eps, bool lazy, double c) {
    const double m_pow = lazy ? m : m * m;
    return c * n * m_pow * std::log(kE * m / (eps * eps));
}

std::pair<double, double> variance_bounds(double pi_min, double pi_max, double energy0) {
    return {pi_min * energy0, pi_max * energy0};
}

std::pair<double, double> variance_bounds_random(double pi_min, double pi_max,
                                                 double mean_energy0) {
    return {pi_min * mean_energy0, pi_max * mean_energy0};
}

double variance_bound_lazy(double pi_max, double var0, double delta) {
    if (delta <= 0) throw std::invalid_argument("variance_bound_lazy: delta > 0 required");
    return pi_max * var0 / delta;
}

double variance_bound_srw(double max_degree, double edge_count) {
    return max_degree / edge_count;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict compare(double measured_mean, double measured_stderr, double censored_fraction,
                const BoundReport& bound) {
    if (!bound.applicable || bound.up_to_constant || censored_fraction > 0.0)
        return Verdict::inconclusive;
    if (bound.two_sided) {
        const bool lo_ok = measured_mean + 3.0 * measured_stderr >= bound.value_lower;
        const bool hi_ok = measured_mean - 3.0 * measured_stderr <= bound.value;
        return lo_ok && hi_ok ? Verdict::consistent : Verdict::violated;
    }
    if (bound.is_upper)
        return measured_mean - 3.0 * measured_stderr <= bound.value ? Verdict::consistent
                                                                    : Verdict::violated;
    return measured_mean + 3.0 * measured_stderr >= bound.value ? Verdict::consistent
                                                                : Verdict::violated;
}

namespace {

bool rows_are_plain_srw(const TransitionMatrix& p) {
    for (int v = 0; v < p.size(); ++v) {
        const double q = 1.0 / static_cast<double>(p.out_degree(v));
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            if (a->to == v) return false;
            if (std::abs(a->p - q) > 1e-14) return false;
        }
    }
    return true;
}

double min_self_loop(const TransitionMatrix& p) {
    double delta = 1.0;
    for (int v = 0; v < p.size(); ++v) delta = std::min(delta, p.entry(v, v));
    return delta;
}

}  // namespace

std::vector<BoundReport> evaluate_tau_bounds(const TransitionMatrix& p,
                                             const StationaryDistribution& pi,
                                             const SpectralReport& spec, const GraphMetrics& m,
                                             const std::vector<double>& f0, double eps) {
    std::vector<BoundReport> out;
    const OpinionSummary s = summarize(p, pi.pi, f0);
    const bool unit_osc = s.osc <= 1.0 + 1e-12;
    const bool plain_srw = rows_are_plain_srw(p);
    const double delta = min_self_loop(p);

    {
        BoundReport b;
        b.name = "tau-reversible-gap";
        b.inputs = {{"gamma", spec.gamma}, {"pi_min", pi.pi_min}, {"eps", eps}, {"energy0", s.energy}};
        if (!spec.reversible) {
            b.reason = "chain is not reversible";
        } else if (!unit_osc) {
            b.reason = "osc(f0) > 1";
        } else if (spec.gamma <= 0) {
            b.reason = "nonpositive spectral gap";
        } else if (eps >= 1) {
            b.reason = "eps >= 1";
        } else {
            b.applicable = true;
            b.value = reversible_tau_bound(spec.gamma, pi.pi_min, eps, s.energy);
        }
        out.push_back(b);

        BoundReport c = b;
        c.name = "tau-reversible-gap-worstcase";
        c.inputs["energy0"] = 0.5;
        if (c.applicable) c.value = reversible_tau_bound_crude(spec.gamma, pi.pi_min, eps);
        out.push_back(c);
    }

    {
        BoundReport b;
        b.name = "tau-srw-resistance";
        b.inputs = {{"edge_count", static_cast<double>(m.edge_count)}, {"eps", eps}};
        if (!m.is_undirected || !plain_srw) {
            b.reason = "not a simple random walk on an undirected graph";
        } else if (!unit_osc) {
            b.reason = "osc(f0) > 1";
        } else {
            double r = static_cast<double>(m.diameter);
            if (p.size() <= 512) {  // exhaustive resistance scan is cheap here
                r = r_max(p).r_max;
                b.inputs["r_max"] = r;
            } else {
                b.inputs["diameter"] = r;
            }
            b.applicable = true;
            b.value = srw_tau_bound(r, static_cast<double>(m.edge_count), eps);
        }
        out.push_back(b);
    }

    {
        BoundReport b;
        b.name = "tau-general-gap";
        b.inputs = {{"gamma_hat", spec.gamma_hat},
                    {"var0", s.var_pi},
                    {"pi_min", pi.pi_min},
                    {"eps", eps}};
        if (spec.gamma_hat <= 0 && 4.0 * s.var_pi >= eps * eps * pi.pi_min) {
            b.reason = "gamma_hat <= 0";
        } else {
            b.applicable = true;
            b.value = general_tau_bound(spec.gamma_hat, s.var_pi, pi.pi_min, eps);
        }
        out.push_back(b);
    }

    {
        BoundReport b;
        b.name = "tau-lazy-gap";
        b.inputs = {{"gamma", spec.gamma},
                    {"delta", delta},
                    {"var0", s.var_pi},
                    {"pi_min", pi.pi_min},
                    {"eps", eps}};
        if (delta <= 0) {
            b.reason = "no uniform self-loop weight";
        } else if (spec.gamma <= 0) {
            b.reason = "nonpositive spectral gap";
        } else {
            b.applicable = true;
            b.value = lazy_tau_bound(spec.gamma, delta, s.var_pi, pi.pi_min, eps);
        }
        out.push_back(b);
    }

    {
        BoundReport b;
        b.name = "tau-eulerian";
        b.up_to_constant = true;
        const double mm = static_cast<double>(p.arc_count());
        b.inputs = {{"n", static_cast<double>(p.size())}, {"m", mm}, {"eps", eps}, {"C", 1.0}};
        if (!m.is_eulerian || !plain_srw) {
            b.reason = "not a simple random walk on an Eulerian digraph";
        } else if (!unit_osc) {
            b.reason = "osc(f0) > 1";
        } else {
            b.applicable = true;
            b.value = eulerian_tau_bound(static_cast<double>(p.size()), mm, eps, false);
        }
        out.push_back(b);
    }

    return out;
}

std::vector<BoundReport> evaluate_variance_bounds(const TransitionMatrix& p,
                                                  const StationaryDistribution& pi,
                                                  const SpectralReport& spec,
                                                  const GraphMetrics& m,
                                                  const std::vector<double>& f0) {
    std::vector<BoundReport> out;
    const OpinionSummary s = summarize(p, pi.pi, f0);
    const double delta = min_self_loop(p);
    const bool plain_srw = rows_are_plain_srw(p);

    {
        BoundReport b;
        b.name = "variance-energy-window";
        b.two_sided = true;
        b.inputs = {{"pi_min", pi.pi_min}, {"pi_max", pi.pi_max}, {"energy0", s.energy}};
        if (!spec.reversible) {
            b.reason = "chain is not reversible";
        } else {
            b.applicable = true;
            const auto [lo, hi] = variance_bounds(pi.pi_min, pi.pi_max, s.energy);
            b.value_lower = lo;
            b.value = hi;
        }
        out.push_back(b);
    }

    {
        BoundReport b;
        b.name = "variance-lazy";
        b.inputs = {{"pi_max", pi.pi_max}, {"var0", s.var_pi}, {"delta", delta}};
        if (delta <= 0) {
            b.reason = "no uniform self-loop weight";
        } else {
            b.applicable = true;
            b.value = variance_bound_lazy(pi.pi_max, s.var_pi, delta);
        }
        out.push_back(b);
    }

    {
        BoundReport b;
        b.name = "variance-srw-degree";
        double sup = 0.0;
        for (double x : f0) sup = std::max(sup, std::abs(x));
        b.inputs = {{"max_degree", static_cast<double>(m.max_out_degree)},
                    {"edge_count", static_cast<double>(m.edge_count)},
                    {"sup_f0", sup}};
        if (!m.is_undirected || !plain_srw) {
            b.reason = "not a simple random walk on an undirected graph";
        } else if (sup > 1.0 + 1e-12) {
            b.reason = "|f0| exceeds 1";
        } else {
            b.applicable = true;
            b.value = variance_bound_srw(static_cast<double>(m.max_out_degree),
                                         static_cast<double>(m.edge_count));
        }
        out.push_back(b);
    }

    return out;
}

double default_t_max(double gamma, double pi_min, double eps, double energy0) {
    if (gamma > 0 && eps > 0 && eps < 1 && energy0 > 0)
        return 100.0 * reversible_tau_bound(gamma, pi_min, eps, energy0);
    return 1e6;
}

}  // namespace degroot
