#include "degroot/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace degroot {

namespace {

constexpr double kRowSumTol = 1e-12;

std::vector<std::vector<Arc>> srw_rows(int n, const std::vector<std::vector<VertexId>>& adj) {
    std::vector<std::vector<Arc>> rows(n);
    for (int v = 0; v < n; ++v) {
        if (adj[v].empty()) throw std::invalid_argument("srw: isolated vertex " + std::to_string(v));
        const double p = 1.0 / static_cast<double>(adj[v].size());
        rows[v].reserve(adj[v].size());
        for (VertexId w : adj[v]) rows[v].push_back({w, p});
    }
    return rows;
}

void add_undirected_edge(std::vector<std::vector<VertexId>>& adj, VertexId a, VertexId b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
}

std::vector<int> strong_components(const TransitionMatrix& p, std::vector<std::vector<VertexId>>* reverse_adj = nullptr);

}  // namespace

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<Arc>>& rows) {
    TransitionMatrix m;
    m.n_ = static_cast<int>(rows.size());
    if (m.n_ < 1) throw std::invalid_argument("TransitionMatrix: need n >= 1");
    m.row_ptr_.assign(m.n_ + 1, 0);
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    m.arcs_.reserve(total);
    for (int v = 0; v < m.n_; ++v) {
        auto row = rows[v];
        std::sort(row.begin(), row.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
        for (const Arc& a : row) {
            if (a.to < 0 || a.to >= m.n_)
                throw std::invalid_argument("TransitionMatrix: arc target out of range");
            m.arcs_.push_back(a);
        }
        m.row_ptr_[v + 1] = static_cast<int>(m.arcs_.size());
    }
    return m;
}

double TransitionMatrix::entry(VertexId v, VertexId w) const {
    for (const Arc* a = row_begin(v); a != row_end(v); ++a)
        if (a->to == w) return a->p;
    return 0.0;
}

void TransitionMatrix::apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int v = 0; v < n_; ++v) {
        double acc = 0.0;
        for (const Arc* a = row_begin(v); a != row_end(v); ++a) acc += a->p * x[a->to];
        y[v] = acc;
    }
}

void TransitionMatrix::apply_transpose(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int v = 0; v < n_; ++v) {
        const double xv = x[v];
        if (xv == 0.0) continue;
        for (const Arc* a = row_begin(v); a != row_end(v); ++a) y[a->to] += a->p * xv;
    }
}

double TransitionMatrix::row_average(VertexId v, const std::vector<double>& f) const {
    double acc = 0.0;
    for (const Arc* a = row_begin(v); a != row_end(v); ++a) acc += a->p * f[a->to];
    return acc;
}

GraphSpec GraphSpec::parse(const std::string& text) {
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

    GraphSpec spec;
    std::size_t i = 0;
    if (tok[i] == "lazy") {
        if (tok.size() < 3) throw std::invalid_argument("graph spec: lazy:<delta>:<inner>");
        spec.lazy_delta = std::stod(tok[1]);
        i = 2;
    }
    const std::string& name = tok[i];
    auto need = [&](std::size_t count) {
        if (tok.size() - i - 1 != count)
            throw std::invalid_argument("graph spec '" + name + "': wrong parameter count");
    };
    auto arg = [&](std::size_t k) { return tok[i + 1 + k]; };

    if (name == "cycle") {
        spec.kind = Kind::cycle;
        need(1);
        spec.n = std::stol(arg(0));
    } else if (name == "path") {
        spec.kind = Kind::path;
        need(1);
        spec.n = std::stol(arg(0));
    } else if (name == "complete") {
        spec.kind = Kind::complete;
        need(1);
        spec.n = std::stol(arg(0));
    } else if (name == "hypercube") {
        spec.kind = Kind::hypercube;
        need(1);
        spec.n = std::stol(arg(0));
    } else if (name == "directed-cycle") {
        spec.kind = Kind::directed_cycle;
        need(1);
        spec.n = std::stol(arg(0));
    } else if (name == "drift-digraph") {
        spec.kind = Kind::drift_digraph;
        need(1);
        spec.n = std::stol(arg(0));
    } else if (name == "star-path-star") {
        spec.kind = Kind::star_path_star;
        need(1);
        spec.n = std::stol(arg(0));
    } else if (name == "leafy-line") {
        spec.kind = Kind::leafy_line;
        need(1);
        std::stringstream ss(arg(0));
        std::string piece;
        while (std::getline(ss, piece, ',')) spec.leaf_counts.push_back(std::stol(piece));
    } else if (name == "alternating-block-line") {
        spec.kind = Kind::alternating_block_line;
        need(2);
        spec.radius = std::stol(arg(0));
        spec.basis = std::stol(arg(1));
    } else if (name == "srw-edge-list") {
        spec.kind = Kind::srw_edge_list;
        need(1);
        spec.file = arg(0);
    } else {
        throw std::invalid_argument("unknown graph spec: " + name);
    }
    return spec;
}

std::string GraphSpec::to_string() const {
    std::string prefix;
    if (lazy_delta) {
        std::ostringstream os;
        os << "lazy:" << *lazy_delta << ":";
        prefix = os.str();
    }
    switch (kind) {
        case Kind::cycle: return prefix + "cycle:" + std::to_string(n);
        case Kind::path: return prefix + "path:" + std::to_string(n);
        case Kind::complete: return prefix + "complete:" + std::to_string(n);
        case Kind::hypercube: return prefix + "hypercube:" + std::to_string(n);
        case Kind::directed_cycle: return prefix + "directed-cycle:" + std::to_string(n);
        case Kind::drift_digraph: return prefix + "drift-digraph:" + std::to_string(n);
        case Kind::star_path_star: return prefix + "star-path-star:" + std::to_string(n);
        case Kind::leafy_line: {
            std::string s = prefix + "leafy-line:";
            for (std::size_t i = 0; i < leaf_counts.size(); ++i)
                s += (i ? "," : "") + std::to_string(leaf_counts[i]);
            return s;
        }
        case Kind::alternating_block_line:
            return prefix + "alternating-block-line:" + std::to_string(radius) + ":" +
                   std::to_string(basis);
        case Kind::srw_edge_list: return prefix + "srw-edge-list:" + file;
    }
    return prefix;
}

TransitionMatrix make_lazy(const TransitionMatrix& p, double delta) {
    if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("lazy: delta must be in [0,1)");
    const int n = p.size();
    std::vector<std::vector<Arc>> rows(n);
    for (int v = 0; v < n; ++v) {
        bool has_self = false;
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            double q = (1.0 - delta) * a->p;
            if (a->to == v) {
                q += delta;
                has_self = true;
            }
            rows[v].push_back({a->to, q});
        }
        if (!has_self) rows[v].push_back({v, delta});
    }
    return TransitionMatrix::from_rows(rows);
}

TransitionMatrix build_graph(const GraphSpec& spec) {
    using Kind = GraphSpec::Kind;
    TransitionMatrix p;
    switch (spec.kind) {
        case Kind::cycle: {
            const long n = spec.n;
            if (n < 3) throw std::invalid_argument("cycle: n >= 3 (use complete:2 for two vertices)");
            std::vector<std::vector<VertexId>> adj(n);
            for (long v = 0; v < n; ++v)
                add_undirected_edge(adj, static_cast<VertexId>(v), static_cast<VertexId>((v + 1) % n));
            p = TransitionMatrix::from_rows(srw_rows(static_cast<int>(n), adj));
            break;
        }
        case Kind::path: {
            const long n = spec.n;
            if (n < 2) throw std::invalid_argument("path: n >= 2");
            std::vector<std::vector<VertexId>> adj(n);
            for (long v = 0; v + 1 < n; ++v)
                add_undirected_edge(adj, static_cast<VertexId>(v), static_cast<VertexId>(v + 1));
            p = TransitionMatrix::from_rows(srw_rows(static_cast<int>(n), adj));
            break;
        }
        case Kind::complete: {
            const long n = spec.n;
            if (n < 2) throw std::invalid_argument("complete: n >= 2");
            std::vector<std::vector<Arc>> rows(n);
            const double q = 1.0 / static_cast<double>(n - 1);
            for (long v = 0; v < n; ++v)
                for (long w = 0; w < n; ++w)
                    if (w != v) rows[v].push_back({static_cast<VertexId>(w), q});
            p = TransitionMatrix::from_rows(rows);
            break;
        }
        case Kind::hypercube: {
            const long l = spec.n;
            if (l < 1 || l > 24) throw std::invalid_argument("hypercube: l in [1,24]");
            const long n = 1L << l;
            std::vector<std::vector<Arc>> rows(n);
            const double q = 1.0 / static_cast<double>(l);
            for (long v = 0; v < n; ++v)
                for (long b = 0; b < l; ++b)
                    rows[v].push_back({static_cast<VertexId>(v ^ (1L << b)), q});
            p = TransitionMatrix::from_rows(rows);
            break;
        }
        case Kind::directed_cycle: {
            const long n = spec.n;
            if (n < 2) throw std::invalid_argument("directed-cycle: n >= 2");
            std::vector<std::vector<Arc>> rows(n);
            for (long v = 0; v < n; ++v) rows[v].push_back({static_cast<VertexId>((v + 1) % n), 1.0});
            p = TransitionMatrix::from_rows(rows);
            break;
        }
        case Kind::drift_digraph: {
            // Vertices {-n..n} mapped to index i+n. Interior negative side drifts
            // outward to the left, interior positive side outward to the right.
            const long n = spec.n;
            if (n < 4) throw std::invalid_argument("drift-digraph: n >= 4");
            const long size = 2 * n + 1;
            auto idx = [n](long i) { return static_cast<VertexId>(i + n); };
            std::vector<std::vector<VertexId>> out(size);
            for (long i = -n + 2; i < 0; ++i) out[idx(i)] = {idx(i + 1), idx(i - 1), idx(i - 2)};
            for (long i = 1; i <= n - 2; ++i) out[idx(i)] = {idx(i - 1), idx(i + 1), idx(i + 2)};
            out[idx(0)] = {idx(-1), idx(1)};
            out[idx(-n)] = {idx(-n + 1)};
            out[idx(-n + 1)] = {idx(-n), idx(-n + 2)};
            out[idx(n)] = {idx(n - 1)};
            out[idx(n - 1)] = {idx(n), idx(n - 2)};
            p = TransitionMatrix::from_rows(srw_rows(static_cast<int>(size), out));
            break;
        }
        case Kind::star_path_star: {
            // star (n leaves, center v1) -- path of n edges -- star (n leaves, center v2)
            const long n = spec.n;
            if (n < 2) throw std::invalid_argument("star-path-star: n >= 2");
            const long size = 3 * n + 1;
            std::vector<std::vector<VertexId>> adj(size);
            const VertexId c1 = 0;
            const VertexId c2 = static_cast<VertexId>(2 * n);
            for (long i = 1; i <= n; ++i) add_undirected_edge(adj, c1, static_cast<VertexId>(i));
            // path c1 = q0, q1..q_{n-1} interior at indices n+1..2n-1, q_n = c2
            VertexId prev = c1;
            for (long i = 1; i < n; ++i) {
                const VertexId q = static_cast<VertexId>(n + i);
                add_undirected_edge(adj, prev, q);
                prev = q;
            }
            add_undirected_edge(adj, prev, c2);
            for (long i = 1; i <= n; ++i)
                add_undirected_edge(adj, c2, static_cast<VertexId>(2 * n + i));
            p = TransitionMatrix::from_rows(srw_rows(static_cast<int>(size), adj));
            break;
        }
        case Kind::leafy_line: {
            const auto& counts = spec.leaf_counts;
            if (counts.empty()) throw std::invalid_argument("leafy-line: need leaf counts");
            long size = static_cast<long>(counts.size());
            for (long c : counts) {
                if (c < 1) throw std::invalid_argument("leafy-line: leaf counts >= 1");
                size += c;
            }
            std::vector<std::vector<VertexId>> adj(size);
            // line vertices first, then leaves star by star
            for (std::size_t i = 0; i + 1 < counts.size(); ++i)
                add_undirected_edge(adj, static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
            long next = static_cast<long>(counts.size());
            for (std::size_t i = 0; i < counts.size(); ++i)
                for (long k = 0; k < counts[i]; ++k)
                    add_undirected_edge(adj, static_cast<VertexId>(i), static_cast<VertexId>(next++));
            p = TransitionMatrix::from_rows(srw_rows(static_cast<int>(size), adj));
            break;
        }
        case Kind::alternating_block_line: {
            // reflecting truncation of the line: a path on 2R+1 vertices
            const long r = spec.radius;
            if (r < 1) throw std::invalid_argument("alternating-block-line: radius >= 1");
            if (spec.basis < 2) throw std::invalid_argument("alternating-block-line: basis >= 2");
            GraphSpec path_spec;
            path_spec.kind = Kind::path;
            path_spec.n = 2 * r + 1;
            p = build_graph(path_spec);
            break;
        }
        case Kind::srw_edge_list: {
            p = load_edge_list(spec.file, /*weighted=*/false);
            break;
        }
    }

    if (spec.lazy_delta) p = make_lazy(p, *spec.lazy_delta);

    const auto comps = strong_components(p);
    const int count = *std::max_element(comps.begin(), comps.end()) + 1;
    if (count != 1) throw std::invalid_argument("graph spec produced a non strongly connected matrix");
    return p;
}

namespace {

// Kosaraju
std::vector<int> strong_components(const TransitionMatrix& p,
                                   std::vector<std::vector<VertexId>>* reverse_adj /*= nullptr*/) {
    const int n = p.size();
    std::vector<std::vector<VertexId>> radj(n);
    for (int v = 0; v < n; ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) radj[a->to].push_back(v);

    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    std::vector<std::pair<int, int>> stack;  // (vertex, next arc offset)
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        stack.push_back({s, 0});
        seen[s] = 1;
        while (!stack.empty()) {
            auto& [v, off] = stack.back();
            if (off < p.out_degree(v)) {
                const VertexId w = p.row_begin(v)[off++].to;
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back({w, 0});
                }
            } else {
                order.push_back(v);
                stack.pop_back();
            }
        }
    }

    std::vector<int> comp(n, -1);
    int c = 0;
    for (int i = n - 1; i >= 0; --i) {
        const int s = order[i];
        if (comp[s] >= 0) continue;
        std::vector<int> dfs{s};
        comp[s] = c;
        while (!dfs.empty()) {
            const int v = dfs.back();
            dfs.pop_back();
            for (VertexId w : radj[v])
                if (comp[w] < 0) {
                    comp[w] = c;
                    dfs.push_back(w);
                }
        }
        ++c;
    }
    if (reverse_adj) *reverse_adj = std::move(radj);
    return comp;
}

// gcd of cycle lengths through vertex 0, computed from BFS levels
int chain_period(const TransitionMatrix& p) {
    const int n = p.size();
    std::vector<int> level(n, -1);
    std::queue<int> q;
    q.push(0);
    level[0] = 0;
    long long g = 0;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            if (level[a->to] < 0) {
                level[a->to] = level[v] + 1;
                q.push(a->to);
            } else {
                g = std::gcd(g, static_cast<long long>(level[v] + 1 - level[a->to]));
            }
        }
    }
    return static_cast<int>(g == 0 ? 0 : std::llabs(g));
}

std::vector<std::vector<VertexId>> undirected_support(const TransitionMatrix& p) {
    const int n = p.size();
    std::vector<std::unordered_set<int>> nb(n);
    for (int v = 0; v < n; ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            if (a->to != v) {
                nb[v].insert(a->to);
                nb[a->to].insert(v);
            }
    std::vector<std::vector<VertexId>> adj(n);
    for (int v = 0; v < n; ++v) {
        adj[v].assign(nb[v].begin(), nb[v].end());
        std::sort(adj[v].begin(), adj[v].end());
    }
    return adj;
}

int bfs_ecc(const std::vector<std::vector<VertexId>>& adj, int s, std::vector<int>& dist) {
    dist.assign(adj.size(), -1);
    std::queue<int> q;
    q.push(s);
    dist[s] = 0;
    int ecc = 0;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        ecc = std::max(ecc, dist[v]);
        for (int w : adj[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
    }
    for (std::size_t v = 0; v < adj.size(); ++v)
        if (dist[v] < 0) return -1;  // disconnected
    return ecc;
}

}  // namespace

ValidationReport validate(const TransitionMatrix& p) {
    ValidationReport rep;
    const int n = p.size();
    rep.n = n;
    for (int v = 0; v < n; ++v) {
        double sum = 0.0;
        bool neg = false;
        int prev = -1;
        bool dup = false;
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            sum += a->p;
            if (a->p < 0.0) neg = true;
            if (a->to == prev) dup = true;
            prev = a->to;
        }
        if (std::abs(sum - 1.0) > kRowSumTol) rep.row_sum_violations.push_back({v, std::abs(sum - 1.0)});
        if (neg) rep.negative_rows.push_back(v);
        if (dup) rep.duplicate_target_rows.push_back(v);
    }

    const auto comp = strong_components(p);
    rep.component_count = *std::max_element(comp.begin(), comp.end()) + 1;
    rep.strongly_connected = rep.component_count == 1;
    if (rep.strongly_connected) {
        rep.period = chain_period(p);
        rep.aperiodic = rep.period == 1;
    }

    bool sym = true;
    for (int v = 0; v < n && sym; ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            if (a->to != v && p.entry(a->to, v) == 0.0) {
                sym = false;
                break;
            }
    rep.undirected_support = sym;
    if (sym && rep.strongly_connected) rep.bipartite = rep.period == 2;
    return rep;
}

GraphMetrics metrics(const TransitionMatrix& p, const std::vector<double>* pi) {
    GraphMetrics m;
    const int n = p.size();
    m.n = n;
    m.arc_count = p.arc_count();

    std::vector<int> in_deg(n, 0);
    for (int v = 0; v < n; ++v) {
        m.max_out_degree = std::max(m.max_out_degree, p.out_degree(v));
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) ++in_deg[a->to];
    }
    m.max_in_degree = *std::max_element(in_deg.begin(), in_deg.end());

    bool eulerian = true;
    for (int v = 0; v < n; ++v)
        if (in_deg[v] != p.out_degree(v)) {
            eulerian = false;
            break;
        }

    const auto comp = strong_components(p);
    const bool strong = *std::max_element(comp.begin(), comp.end()) == 0;
    m.is_eulerian = eulerian && strong;

    const auto adj = undirected_support(p);
    std::int64_t deg_sum = 0;
    for (const auto& nb : adj) deg_sum += static_cast<std::int64_t>(nb.size());
    m.edge_count = deg_sum / 2;

    bool undirected = true;
    for (int v = 0; v < n && undirected; ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            if (a->to != v && p.entry(a->to, v) == 0.0) {
                undirected = false;
                break;
            }
    m.is_undirected = undirected;

    std::vector<int> dist;
    int diam = 0;
    for (int v = 0; v < n; ++v) {
        const int e = bfs_ecc(adj, v, dist);
        if (e < 0) {
            diam = -1;
            break;
        }
        diam = std::max(diam, e);
    }
    m.diameter = diam;

    if (strong) {
        std::vector<std::vector<VertexId>> dadj(n);
        for (int v = 0; v < n; ++v)
            for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
                if (a->to != v) dadj[v].push_back(a->to);
        int ddiam = 0;
        for (int v = 0; v < n; ++v) ddiam = std::max(ddiam, bfs_ecc(dadj, v, dist));
        m.directed_diameter = ddiam;
    }

    // Detailed balance against the supplied pi, or against the support degree
    // measure when none is given (exact for SRW and its lazy variants; other
    // reversible chains should be checked with an explicit pi).
    std::vector<double> mu(n);
    if (pi) {
        mu = *pi;
    } else {
        for (int v = 0; v < n; ++v) {
            int d = 0;
            for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
                if (a->to != v) ++d;
            mu[v] = static_cast<double>(d);
        }
    }
    bool rev = m.is_undirected;
    for (int v = 0; v < n && rev; ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            if (std::abs(mu[v] * a->p - mu[a->to] * p.entry(a->to, v)) > 1e-10 * (mu[v] + mu[a->to])) {
                rev = false;
                break;
            }
    m.is_reversible = rev;
    return m;
}

void save_edge_list(const TransitionMatrix& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.precision(17);
    out << p.size() << " " << p.arc_count() << " directed\n";
    for (int v = 0; v < p.size(); ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            out << v << " " << a->to << " " << a->p << "\n";
}

TransitionMatrix load_edge_list(const std::string& path, bool weighted) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    int lineno = 0;

    auto fail = [&](const std::string& what) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
    };

    long n = 0, count = 0;
    bool directed = false;
    {
        if (!std::getline(in, line)) fail("missing header");
        ++lineno;
        std::istringstream h(line);
        std::string tag;
        if (!(h >> n >> count)) fail("bad header, expected 'n <count> [directed]'");
        if (h >> tag) {
            if (tag != "directed") fail("bad header tag '" + tag + "'");
            directed = true;
        }
        if (n < 1) fail("invalid n");
    }

    std::vector<std::vector<Arc>> rows(n);
    std::vector<std::vector<VertexId>> adj(n);
    long seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long u, v;
        double w;
        if (!(ls >> u >> v)) fail("malformed arc line");
        if (u < 0 || u >= n || v < 0 || v >= n) fail("vertex out of range");
        const bool has_weight = static_cast<bool>(ls >> w);
        if (weighted && !has_weight) fail("missing weight");
        if (!weighted && has_weight) fail("unexpected weight in unweighted mode");
        if (weighted) {
            rows[u].push_back({static_cast<VertexId>(v), w});
        } else {
            adj[u].push_back(static_cast<VertexId>(v));
            if (!directed) adj[v].push_back(static_cast<VertexId>(u));
        }
        ++seen;
    }
    if (seen != count) {
        lineno = 1;
        fail("header arc count " + std::to_string(count) + " != lines " + std::to_string(seen));
    }

    TransitionMatrix p = weighted ? TransitionMatrix::from_rows(rows)
                                  : TransitionMatrix::from_rows(srw_rows(static_cast<int>(n), adj));
    const auto rep = validate(p);
    if (!rep.row_sum_violations.empty())
        throw std::runtime_error(path + ": row sums violate stochasticity (first at vertex " +
                                 std::to_string(rep.row_sum_violations.front().first) + ")");
    if (!rep.strongly_connected) throw std::runtime_error(path + ": matrix is not strongly connected");
    return p;
}

std::string to_json_string(const TransitionMatrix& p) {
    nlohmann::json j;
    j["n"] = p.size();
    const auto m = metrics(p);
    j["directed"] = !m.is_undirected;
    auto& arcs = j["arcs"] = nlohmann::json::array();
    for (int v = 0; v < p.size(); ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            arcs.push_back({v, a->to, a->p});
    return j.dump();
}

TransitionMatrix from_json_string(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const long n = j.at("n").get<long>();
    if (n < 1) throw std::invalid_argument("json graph: n must be >= 1");
    std::vector<std::vector<Arc>> rows(n);
    for (const auto& arc : j.at("arcs")) {
        const long u = arc.at(0).get<long>();
        const long v = arc.at(1).get<long>();
        const double p = arc.at(2).get<double>();
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("json graph: vertex out of range");
        rows[u].push_back({static_cast<VertexId>(v), p});
    }
    TransitionMatrix p = TransitionMatrix::from_rows(rows);
    const auto rep = validate(p);
    if (!rep.row_sum_violations.empty())
        throw std::runtime_error("json graph: row sums violate stochasticity");
    return p;
}

void save_json(const TransitionMatrix& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << to_json_string(p) << "\n";
}

TransitionMatrix load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

}  // namespace degroot
