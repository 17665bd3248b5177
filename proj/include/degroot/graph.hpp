#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace degroot {

using VertexId = std::int32_t;

struct Arc {
    VertexId to;
    double p;
};

// Row-stochastic sparse matrix in CSR form. Immutable after construction and
// safe to share across threads.
class TransitionMatrix {
  public:
    TransitionMatrix() = default;

    static TransitionMatrix from_rows(const std::vector<std::vector<Arc>>& rows);

    int size() const { return n_; }
    int out_degree(VertexId v) const { return row_ptr_[v + 1] - row_ptr_[v]; }

    const Arc* row_begin(VertexId v) const { return arcs_.data() + row_ptr_[v]; }
    const Arc* row_end(VertexId v) const { return arcs_.data() + row_ptr_[v + 1]; }

    double entry(VertexId v, VertexId w) const;
    std::int64_t arc_count() const { return static_cast<std::int64_t>(arcs_.size()); }

    // y = P x (x indexed by column)
    void apply(const std::vector<double>& x, std::vector<double>& y) const;

    // y = P^T x
    void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const;

    // row-v averaged value: sum_u P_vu f(u)
    double row_average(VertexId v, const std::vector<double>& f) const;

  private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<Arc> arcs_;
};

struct GraphSpec {
    enum class Kind {
        cycle,
        path,
        complete,
        hypercube,
        directed_cycle,
        drift_digraph,
        star_path_star,
        leafy_line,
        alternating_block_line,
        srw_edge_list,
    };

    Kind kind = Kind::cycle;
    long n = 0;                          // size parameter (hypercube: l; drift digraph: half width)
    long radius = 0;                     // alternating_block_line truncation radius
    long basis = 0;                      // alternating_block_line block base
    std::vector<long> leaf_counts;       // leafy_line
    std::string file;                    // srw_edge_list
    std::optional<double> lazy_delta;    // wrap: P -> (1-delta) P + delta I

    // "cycle:8", "hypercube:3", "lazy:0.5:directed-cycle:32",
    // "leafy-line:64,512,4096", "alternating-block-line:344064:16",
    // "srw-edge-list:graph.txt"
    static GraphSpec parse(const std::string& text);
    std::string to_string() const;
};

TransitionMatrix build_graph(const GraphSpec& spec);
TransitionMatrix make_lazy(const TransitionMatrix& p, double delta);

struct ValidationReport {
    int n = 0;
    std::vector<std::pair<VertexId, double>> row_sum_violations;  // (vertex, |sum-1|)
    std::vector<VertexId> negative_rows;
    std::vector<VertexId> duplicate_target_rows;
    bool strongly_connected = false;
    int component_count = 0;
    bool aperiodic = false;
    int period = 0;
    bool undirected_support = false;
    bool bipartite = false;  // meaningful only when undirected_support

    bool ok() const {
        return row_sum_violations.empty() && negative_rows.empty() &&
               duplicate_target_rows.empty() && strongly_connected;
    }
};

ValidationReport validate(const TransitionMatrix& p);

struct GraphMetrics {
    int n = 0;
    std::int64_t arc_count = 0;
    std::int64_t edge_count = 0;  // undirected edges of the support
    int max_out_degree = 0;
    int max_in_degree = 0;
    int diameter = 0;           // of the undirected support
    int directed_diameter = 0;  // max directed eccentricity (0 if not strongly connected)
    bool is_undirected = false;
    bool is_eulerian = false;
    bool is_reversible = false;
};

// pi, when given, is used for the reversibility check; otherwise the support
// degree measure is used (exact for simple random walks and lazy variants).
GraphMetrics metrics(const TransitionMatrix& p, const std::vector<double>* pi = nullptr);

// Edge-list text format. Header "n <count> [directed]", then one arc per line
// "u v [weight]". Weighted files carry explicit row-stochastic entries;
// unweighted files describe a combinatorial graph that is turned into its
// simple random walk.
void save_edge_list(const TransitionMatrix& p, const std::string& path);
TransitionMatrix load_edge_list(const std::string& path, bool weighted);

// JSON schema: {"n": int, "directed": bool, "arcs": [[u, v, p], ...]}
void save_json(const TransitionMatrix& p, const std::string& path);
TransitionMatrix load_json(const std::string& path);
std::string to_json_string(const TransitionMatrix& p);
TransitionMatrix from_json_string(const std::string& text);

}  // namespace degroot
