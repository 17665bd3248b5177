// Command-line front end: event-driven opinion-averaging simulation, the dual
// mass-fragmentation process, shared-clock coupled walks, spectral oracles and
// the closed-form bound calculators, plus the curated experiment suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "degroot/bounds.hpp"
#include "degroot/coupled.hpp"
#include "degroot/dynamics.hpp"
#include "degroot/experiments.hpp"
#include "degroot/fragmentation.hpp"
#include "degroot/graph.hpp"
#include "degroot/spectral.hpp"

namespace {

using nlohmann::json;
using namespace degroot;

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) out.push_back(std::stod(piece));
    return out;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << body;
}

void emit(const std::string& out_dir, const json& summary, const std::string& csv_name = "",
          const std::string& csv_body = "") {
    if (out_dir.empty()) {
        std::cout << summary.dump(2) << "\n";
        return;
    }
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
    if (!csv_name.empty()) write_text(out_dir + "/" + csv_name, csv_body);
    std::cout << summary.dump(2) << "\n";
}

json bound_json(const BoundReport& b, Verdict* verdict) {
    json j;
    j["name"] = b.name;
    j["applicable"] = b.applicable;
    j["up_to_constant"] = b.up_to_constant;
    if (b.applicable) {
        if (b.two_sided) {
            j["lower"] = b.value_lower;
            j["upper"] = b.value;
        } else {
            j["value"] = b.value;
            j["direction"] = b.is_upper ? "upper" : "lower";
        }
    } else {
        j["reason"] = b.reason;
    }
    j["inputs"] = b.inputs;
    if (verdict) j["verdict"] = verdict_name(*verdict);
    return j;
}

struct CommonArgs {
    std::string graph;
    std::string init = "uniform";
    double eps = 0.5;
    int replicas = 100;
    std::uint64_t seed = 1;
    double t_max = 0.0;
    std::string out_dir;
    std::string format = "csv";
    int threads = 0;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_init = true) {
    cmd->add_option("--graph", a.graph, "graph spec, e.g. cycle:8 or lazy:0.5:directed-cycle:32")
        ->required();
    if (with_init) cmd->add_option("--init", a.init, "initial opinion spec, e.g. step, uniform, pm-one");
    cmd->add_option("--eps", a.eps, "oscillation threshold");
    cmd->add_option("--replicas", a.replicas, "number of replicas");
    cmd->add_option("--seed", a.seed, "base seed");
    cmd->add_option("--t-max", a.t_max, "censoring horizon (0 = derived default)");
    cmd->add_option("--out", a.out_dir, "output directory for summary.json and csv tables");
    cmd->add_option("--format", a.format, "csv or json replica dump")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", a.threads, "worker threads (0 = auto)");
    cmd->add_flag("--strict", a.strict, "exit 2 when a verdict is violated");
}

double resolve_t_max(const CommonArgs& a, const TransitionMatrix& p,
                     const StationaryDistribution& pi, const SpectralReport& spec,
                     const std::vector<double>& f0) {
    if (a.t_max > 0) return a.t_max;
    const auto s = summarize(p, pi.pi, f0);
    if (spec.gamma > 0 && a.eps < 1 && s.energy > 0)
        return default_t_max(spec.gamma, pi.pi_min, a.eps, s.energy);
    return 1e6;
}

int cmd_simulate(const CommonArgs& a, const std::string& dump_events) {
    const TransitionMatrix p = build_graph(GraphSpec::parse(a.graph));
    const auto pi = stationary(p);
    const InitialOpinionSpec init = InitialOpinionSpec::parse(a.init);
    InitialSampler sampler(init, p);

    json summary;
    double t_max = a.t_max;
    // the spectral pass is only required when the horizon has to be derived;
    // it can be slow or fail on very large chains, so treat it as optional
    try {
        const auto spec = spectral_gaps(p, pi);
        summary["gamma"] = spec.gamma;
        summary["gamma_hat"] = spec.gamma_hat;
        if (t_max <= 0) t_max = resolve_t_max(a, p, pi, spec, sampler.draw(a.seed, 0));
    } catch (const std::exception& e) {
        summary["spectral_error"] = e.what();
        if (t_max <= 0) t_max = 1e6;
    }

    const auto est = estimate_tau(p, init, a.eps, a.replicas, t_max, a.seed, a.threads);
    const auto var = estimate_consensus_variance(p, init, a.replicas,
                                                 std::min(a.eps, 1e-3), t_max, a.seed, a.threads);

    summary["command"] = "simulate";
    summary["graph"] = a.graph;
    summary["init"] = init.to_string();
    summary["eps"] = a.eps;
    summary["t_max"] = t_max;
    summary["seed"] = a.seed;
    summary["replicas"] = a.replicas;
    summary["tau"] = {{"mean", est.mean},
                      {"stderr", est.stderr_},
                      {"censored", est.censored},
                      {"all_censored", est.all_censored}};
    summary["consensus"] = {{"mean", var.mean},
                            {"variance", var.variance},
                            {"stderr", var.stderr_},
                            {"censored", var.censored}};
    summary["pi_min"] = pi.pi_min;

    if (!dump_events.empty()) {
        const auto parent = std::filesystem::path(dump_events).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        // replica 0's ring sequence, replayable through the same seed lane
        const auto log = generate_event_log(p.size(), t_max,
                                            derive_seed(a.seed, 0, SeedLane::clocks));
        save_event_log(log, dump_events);
        summary["event_log"] = dump_events;
    }

    std::ostringstream csv;
    csv << "replica,tau,censored,consensus_value,midpoint,events\n";
    csv.precision(17);
    for (std::size_t r = 0; r < est.per_replica.size(); ++r) {
        const auto& res = est.per_replica[r];
        csv << r << "," << res.tau << "," << (res.censored ? 1 : 0) << "," << res.consensus_value
            << "," << res.midpoint << "," << res.events << "\n";
    }
    emit(a.out_dir, summary, "replicas.csv", csv.str());
    return 0;
}

int cmd_trace(const CommonArgs& a, const std::string& times) {
    const TransitionMatrix p = build_graph(GraphSpec::parse(a.graph));
    const auto pi = stationary(p);
    const InitialOpinionSpec init = InitialOpinionSpec::parse(a.init);
    InitialSampler sampler(init, p);
    const auto grid = parse_grid(times);

    std::ostringstream csv;
    csv << "replica,t,mean,var_pi,energy,osc\n";
    csv.precision(17);
    for (int r = 0; r < a.replicas; ++r) {
        const auto f0 = sampler.draw(a.seed, static_cast<std::uint64_t>(r));
        const auto trace = simulate_trace(
            p, pi.pi, f0, grid, derive_seed(a.seed, static_cast<std::uint64_t>(r), SeedLane::clocks));
        for (const auto& s : trace)
            csv << r << "," << s.t << "," << s.mean << "," << s.var_pi << "," << s.energy << ","
                << s.osc << "\n";
    }

    json summary;
    summary["command"] = "trace";
    summary["graph"] = a.graph;
    summary["init"] = init.to_string();
    summary["times"] = grid;
    summary["replicas"] = a.replicas;
    emit(a.out_dir, summary, "trace.csv", csv.str());
    return 0;
}

int cmd_fragment(const CommonArgs& a, const std::string& t_grid, int origin, int d,
                 double tail_eps) {
    const TransitionMatrix p = build_graph(GraphSpec::parse(a.graph));
    const auto grid = parse_grid(t_grid);
    const auto est = moments(p, origin, grid, d, a.replicas, a.seed, a.threads);

    json summary;
    summary["command"] = "fragment";
    summary["graph"] = a.graph;
    summary["origin"] = origin;
    summary["d"] = d;
    summary["t_grid"] = grid;
    summary["mean"] = est.mean;
    summary["stderr"] = est.stderr_;
    summary["loglog_slope"] = est.slope;

    if (tail_eps > 0) {
        json tails = json::array();
        for (double t : grid) {
            const auto w = max_mass_tail(p, origin, t, tail_eps, a.replicas, a.seed, a.threads);
            tails.push_back({{"t", t}, {"p", w.p_hat}, {"wilson_lo", w.lo}, {"wilson_hi", w.hi}});
        }
        summary["max_mass_tail"] = {{"eps", tail_eps}, {"curve", tails}};
    }

    std::ostringstream csv;
    csv << "t,d,mean,stderr\n";
    csv.precision(17);
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv << grid[i] << "," << d << "," << est.mean[i] << "," << est.stderr_[i] << "\n";
    emit(a.out_dir, summary, "moments.csv", csv.str());
    return 0;
}

int cmd_couple(const CommonArgs& a, int origin, int d, double t) {
    const TransitionMatrix p = build_graph(GraphSpec::parse(a.graph));
    const auto est = coincidence_probability(p, origin, d, t, a.replicas, a.seed, a.threads);
    const auto frag = moments(p, origin, {t}, d, a.replicas, a.seed ^ 0x5bf0ULL, a.threads);

    json summary;
    summary["command"] = "couple";
    summary["graph"] = a.graph;
    summary["origin"] = origin;
    summary["d"] = d;
    summary["t"] = t;
    summary["coincidence"] = {{"p", est.interval.p_hat},
                              {"wilson_lo", est.interval.lo},
                              {"wilson_hi", est.interval.hi},
                              {"replicas", est.replicas}};
    summary["fragmentation_moment"] = {{"mean", frag.mean[0]}, {"stderr", frag.stderr_[0]}};
    emit(a.out_dir, summary);
    return 0;
}

int cmd_bounds(const CommonArgs& a) {
    const TransitionMatrix p = build_graph(GraphSpec::parse(a.graph));
    const auto pi = stationary(p);
    const auto spec = spectral_gaps(p, pi);
    const auto m = metrics(p, &pi.pi);
    const InitialOpinionSpec init = InitialOpinionSpec::parse(a.init);
    InitialSampler sampler(init, p);
    const auto f0 = sampler.draw(a.seed, 0);

    json summary;
    summary["command"] = "bounds";
    summary["graph"] = a.graph;
    summary["init"] = init.to_string();
    summary["eps"] = a.eps;
    summary["gamma"] = spec.gamma;
    summary["gamma_pstarp"] = spec.gamma_pstarp;
    summary["gamma_hat"] = spec.gamma_hat;
    summary["pi_min"] = pi.pi_min;
    summary["pi_max"] = pi.pi_max;
    summary["reversible"] = spec.reversible;

    std::ostringstream csv;
    csv << "name,applicable,value,lower,up_to_constant,reason\n";
    json arr = json::array();
    for (const auto& b : evaluate_tau_bounds(p, pi, spec, m, f0, a.eps)) {
        arr.push_back(bound_json(b, nullptr));
        csv << b.name << "," << b.applicable << "," << b.value << "," << b.value_lower << ","
            << b.up_to_constant << "," << b.reason << "\n";
    }
    for (const auto& b : evaluate_variance_bounds(p, pi, spec, m, f0)) {
        arr.push_back(bound_json(b, nullptr));
        csv << b.name << "," << b.applicable << "," << b.value << "," << b.value_lower << ","
            << b.up_to_constant << "," << b.reason << "\n";
    }
    summary["bounds"] = arr;
    emit(a.out_dir, summary, "bounds.csv", csv.str());
    return 0;
}

int cmd_validate(const std::string& graph, const std::string& load_json_path,
                 const std::string& load_edges_path, bool weighted) {
    TransitionMatrix p;
    if (!graph.empty())
        p = build_graph(GraphSpec::parse(graph));
    else if (!load_json_path.empty())
        p = load_json(load_json_path);
    else if (!load_edges_path.empty())
        p = load_edge_list(load_edges_path, weighted);
    else
        throw CLI::ValidationError("validate-graph", "need --graph, --load-json or --load-edges");

    const auto rep = validate(p);
    json j;
    j["command"] = "validate-graph";
    j["n"] = rep.n;
    j["ok"] = rep.ok();
    j["strongly_connected"] = rep.strongly_connected;
    j["component_count"] = rep.component_count;
    j["aperiodic"] = rep.aperiodic;
    j["period"] = rep.period;
    j["undirected_support"] = rep.undirected_support;
    j["bipartite"] = rep.bipartite;
    json viol = json::array();
    for (const auto& [v, dev] : rep.row_sum_violations) viol.push_back({{"vertex", v}, {"deviation", dev}});
    j["row_sum_violations"] = viol;
    j["negative_rows"] = rep.negative_rows;
    j["duplicate_target_rows"] = rep.duplicate_target_rows;

    if (rep.ok()) {
        const auto pi = stationary(p);
        const auto m = metrics(p, &pi.pi);
        j["metrics"] = {{"arc_count", m.arc_count},
                        {"edge_count", m.edge_count},
                        {"max_out_degree", m.max_out_degree},
                        {"max_in_degree", m.max_in_degree},
                        {"diameter", m.diameter},
                        {"directed_diameter", m.directed_diameter},
                        {"is_undirected", m.is_undirected},
                        {"is_eulerian", m.is_eulerian},
                        {"is_reversible", m.is_reversible}};
        j["pi_min"] = pi.pi_min;
        j["pi_max"] = pi.pi_max;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asynchronous opinion-averaging simulator and bound calculators"};
    app.require_subcommand(1);

    CommonArgs sim_args, trace_args, frag_args, couple_args, bounds_args;
    std::string trace_times = "1,2,4,8,16";
    std::string frag_grid = "16,32,64,128,256,512";
    int frag_origin = 0, frag_d = 2;
    double frag_tail_eps = 0.0;
    int couple_origin = 0, couple_d = 2;
    double couple_t = 8.0;

    auto* sim = app.add_subcommand("simulate", "replica consensus-time estimation");
    add_common(sim, sim_args);
    std::string dump_events;
    sim->add_option("--dump-events", dump_events, "write replica 0's event log ('t v' lines)");

    auto* trace = app.add_subcommand("trace", "summary time series along one trajectory per replica");
    add_common(trace, trace_args);
    trace->add_option("--times", trace_times, "comma separated sample times");

    auto* frag = app.add_subcommand("fragment", "fragmentation moments and max-mass tail");
    add_common(frag, frag_args, /*with_init=*/false);
    frag->add_option("--t-grid", frag_grid, "comma separated sample times");
    frag->add_option("--origin", frag_origin, "origin vertex");
    frag->add_option("--d", frag_d, "moment order");
    frag->add_option("--tail-eps", frag_tail_eps, "also estimate P(max mass >= eps) on the grid");

    auto* couple = app.add_subcommand("couple", "shared-clock walkers: coincidence vs fragmentation moment");
    add_common(couple, couple_args, /*with_init=*/false);
    couple->add_option("--origin", couple_origin, "common start vertex");
    couple->add_option("--d", couple_d, "number of walkers");
    couple->add_option("--t", couple_t, "horizon");

    auto* bnd = app.add_subcommand("bounds", "evaluate every applicable closed-form bound");
    add_common(bnd, bounds_args);

    std::string val_graph, val_json, val_edges;
    bool val_weighted = false;
    auto* val = app.add_subcommand("validate-graph", "stochasticity, connectivity and metrics report");
    val->add_option("--graph", val_graph, "graph spec");
    val->add_option("--load-json", val_json, "load a matrix from a json file");
    val->add_option("--load-edges", val_edges, "load a matrix from an edge-list file");
    val->add_flag("--weighted", val_weighted, "edge-list file carries explicit weights");

    ExperimentConfig exp_cfg;
    std::string exp_name, exp_config_path;
    auto* exp = app.add_subcommand("experiment", "run a curated experiment");
    exp->add_option("name", exp_name, "experiment name")->required(false);
    exp->add_option("--config", exp_config_path, "json config file (overrides flags)");
    exp->add_option("--graph", exp_cfg.graph);
    exp->add_option("--init", exp_cfg.init);
    exp->add_option("--eps", exp_cfg.eps);
    exp->add_option("--replicas", exp_cfg.replicas);
    exp->add_option("--t-max", exp_cfg.t_max);
    exp->add_option("--seed", exp_cfg.seed);
    exp->add_option("--n", exp_cfg.n);
    exp->add_option("--threads", exp_cfg.threads);
    exp->add_option("--out", exp_cfg.out_dir);
    exp->add_flag("--strict", exp_cfg.strict);
    auto* list = app.add_subcommand("experiments", "list experiment names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args, dump_events);
        if (trace->parsed()) return cmd_trace(trace_args, trace_times);
        if (frag->parsed())
            return cmd_fragment(frag_args, frag_grid, frag_origin, frag_d, frag_tail_eps);
        if (couple->parsed()) return cmd_couple(couple_args, couple_origin, couple_d, couple_t);
        if (bnd->parsed()) return cmd_bounds(bounds_args);
        if (val->parsed()) return cmd_validate(val_graph, val_json, val_edges, val_weighted);
        if (list->parsed()) {
            for (const auto& name : experiment_names()) std::cout << name << "\n";
            return 0;
        }
        if (exp->parsed()) {
            if (!exp_config_path.empty()) {
                std::ifstream in(exp_config_path);
                if (!in) throw std::runtime_error("cannot open " + exp_config_path);
                nlohmann::json j;
                in >> j;
                exp_cfg = ExperimentConfig::from_json(j);
            } else {
                if (exp_name.empty())
                    throw std::runtime_error("experiment: give a name or --config file");
                exp_cfg.name = exp_name;
            }
            const auto rep = run_experiment(exp_cfg);
            std::cout << rep.summary.dump(2) << "\n";
            if (exp_cfg.strict && rep.has_verdict && !rep.pass) return 2;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
