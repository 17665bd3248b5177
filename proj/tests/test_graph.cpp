#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "degroot/graph.hpp"

using namespace degroot;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("cycle generator rows") {
    const auto p = build_graph(GraphSpec::parse("cycle:4"));
    CHECK(p.size() == 4);
    CHECK(p.entry(0, 1) == 0.5);
    CHECK(p.entry(0, 3) == 0.5);
    CHECK(p.entry(0, 2) == 0.0);
    CHECK(p.out_degree(0) == 2);
}

TEST_CASE("drift digraph interior rows and endpoints") {
    const long hw = 6;  // vertices {-6..6} at indices i+6
    GraphSpec gs;
    gs.kind = GraphSpec::Kind::drift_digraph;
    gs.n = hw;
    const auto p = build_graph(gs);
    CHECK(p.size() == 13);
    auto idx = [hw](long label) { return static_cast<VertexId>(label + hw); };
    // positive interior: out-edges {i-1, i+1, i+2}, each 1/3
    for (long i = 1; i <= hw - 2; ++i) {
        CHECK(p.out_degree(idx(i)) == 3);
        CHECK(p.entry(idx(i), idx(i - 1)) == doctest::Approx(1.0 / 3));
        CHECK(p.entry(idx(i), idx(i + 1)) == doctest::Approx(1.0 / 3));
        CHECK(p.entry(idx(i), idx(i + 2)) == doctest::Approx(1.0 / 3));
    }
    // negative interior mirrors
    CHECK(p.entry(idx(-2), idx(-1)) == doctest::Approx(1.0 / 3));
    CHECK(p.entry(idx(-2), idx(-3)) == doctest::Approx(1.0 / 3));
    CHECK(p.entry(idx(-2), idx(-4)) == doctest::Approx(1.0 / 3));
    CHECK(p.entry(idx(0), idx(1)) == 0.5);
    CHECK(p.entry(idx(0), idx(-1)) == 0.5);
    CHECK(p.entry(idx(-hw), idx(-hw + 1)) == 1.0);

    const auto m = metrics(p);
    CHECK(!m.is_eulerian);
    CHECK(validate(p).strongly_connected);
    CHECK_THROWS(build_graph(GraphSpec::parse("drift-digraph:3")));
}

TEST_CASE("star path star center degree") {
    for (long n : {2L, 8L}) {
        GraphSpec gs;
        gs.kind = GraphSpec::Kind::star_path_star;
        gs.n = n;
        const auto p = build_graph(gs);
        CHECK(p.size() == 3 * n + 1);
        CHECK(p.out_degree(0) == n + 1);  // center v1
        const auto m = metrics(p);
        CHECK(m.edge_count == 3 * n);
        CHECK(m.is_undirected);
    }
}

TEST_CASE("validate accepts generated graphs with zero violations") {
    for (const char* spec : {"cycle:5", "path:7", "complete:6", "hypercube:3", "directed-cycle:9",
                             "drift-digraph:4", "star-path-star:3", "leafy-line:3,5",
                             "alternating-block-line:20:4", "lazy:0.5:directed-cycle:8"}) {
        const auto p = build_graph(GraphSpec::parse(spec));
        const auto rep = validate(p);
        CHECK_MESSAGE(rep.ok(), spec);
    }
}

TEST_CASE("odd cycle is aperiodic, even cycle bipartite") {
    const auto rep5 = validate(build_graph(GraphSpec::parse("cycle:5")));
    CHECK(rep5.strongly_connected);
    CHECK(rep5.aperiodic);
    const auto rep4 = validate(build_graph(GraphSpec::parse("cycle:4")));
    CHECK(rep4.period == 2);
    CHECK(rep4.bipartite);
}

TEST_CASE("validate flags a bad row sum") {
    std::vector<std::vector<Arc>> rows(2);
    rows[0] = {{1, 0.9}};
    rows[1] = {{0, 1.0}};
    const auto rep = validate(TransitionMatrix::from_rows(rows));
    REQUIRE(rep.row_sum_violations.size() == 1);
    CHECK(rep.row_sum_violations[0].first == 0);
    CHECK(rep.row_sum_violations[0].second == doctest::Approx(0.1));
}

TEST_CASE("validate flags disconnection") {
    // two disjoint 2-cycles
    std::vector<std::vector<Arc>> rows(4);
    rows[0] = {{1, 1.0}};
    rows[1] = {{0, 1.0}};
    rows[2] = {{3, 1.0}};
    rows[3] = {{2, 1.0}};
    const auto rep = validate(TransitionMatrix::from_rows(rows));
    CHECK(!rep.strongly_connected);
    CHECK(rep.component_count == 2);
}

TEST_CASE("metrics on cycle and hypercube") {
    const auto c8 = metrics(build_graph(GraphSpec::parse("cycle:8")));
    CHECK(c8.diameter == 4);
    CHECK(c8.edge_count == 8);
    CHECK(c8.max_out_degree == 2);
    CHECK(c8.is_eulerian);  // indeg == outdeg everywhere

    const auto h3 = metrics(build_graph(GraphSpec::parse("hypercube:3")));
    CHECK(h3.n == 8);
    CHECK(h3.diameter == 3);
    CHECK(h3.max_out_degree == 3);
    CHECK(h3.is_reversible);
}

TEST_CASE("eulerian flag equals the degree audit") {
    for (const char* spec : {"directed-cycle:7", "drift-digraph:4", "cycle:6"}) {
        const auto p = build_graph(GraphSpec::parse(spec));
        std::vector<int> indeg(p.size(), 0);
        for (int v = 0; v < p.size(); ++v)
            for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) ++indeg[a->to];
        bool audit = true;
        for (int v = 0; v < p.size(); ++v)
            if (indeg[v] != p.out_degree(v)) audit = false;
        CHECK(metrics(p).is_eulerian == audit);
    }
}

TEST_CASE("srw rows are uniform over out-neighbors") {
    for (const char* spec : {"cycle:9", "path:5", "hypercube:4", "star-path-star:4",
                             "drift-digraph:5", "leafy-line:2,3,4"}) {
        const auto p = build_graph(GraphSpec::parse(spec));
        for (int v = 0; v < p.size(); ++v)
            for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
                CHECK(a->p == doctest::Approx(1.0 / p.out_degree(v)).epsilon(1e-14));
    }
}

TEST_CASE("lazy wrap is (P+I)/2 at delta one half") {
    const auto p = build_graph(GraphSpec::parse("cycle:6"));
    const auto lazy = make_lazy(p, 0.5);
    for (int v = 0; v < p.size(); ++v) {
        CHECK(lazy.entry(v, v) >= 0.5);
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            CHECK(lazy.entry(v, a->to) == 0.5 * a->p + (a->to == v ? 0.5 : 0.0));
    }
    CHECK(validate(lazy).ok());
}

TEST_CASE("edge list round trip") {
    const auto p = build_graph(GraphSpec::parse("cycle:3"));
    const auto path = temp_path("degroot_cycle3.edges");
    save_edge_list(p, path);
    const auto q = load_edge_list(path, /*weighted=*/true);
    REQUIRE(q.size() == p.size());
    for (int v = 0; v < p.size(); ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            CHECK(q.entry(v, a->to) == a->p);
    std::remove(path.c_str());
}

TEST_CASE("json round trip") {
    const auto p = build_graph(GraphSpec::parse("drift-digraph:4"));
    const auto q = from_json_string(to_json_string(p));
    REQUIRE(q.size() == p.size());
    for (int v = 0; v < p.size(); ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            CHECK(q.entry(v, a->to) == a->p);
}

TEST_CASE("edge list parse errors carry the line number") {
    const auto path = temp_path("degroot_bad.edges");
    {
        std::ofstream out(path);
        out << "2 2\n0 1 1.0\n0 1\n";
    }
    try {
        load_edge_list(path, /*weighted=*/true);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
        CHECK(std::string(e.what()).find("weight") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("json with n=0 rejected") {
    CHECK_THROWS(from_json_string("{\"n\": 0, \"directed\": false, \"arcs\": []}"));
}

TEST_CASE("unweighted edge list builds the walk and checks connectivity") {
    const auto path = temp_path("degroot_tri.edges");
    {
        std::ofstream out(path);
        out << "3 3\n0 1\n1 2\n2 0\n";
    }
    const auto p = load_edge_list(path, /*weighted=*/false);
    CHECK(p.entry(0, 1) == 0.5);
    CHECK(p.entry(0, 2) == 0.5);
    std::remove(path.c_str());

    const auto bad = temp_path("degroot_split.edges");
    {
        std::ofstream out(bad);
        out << "4 2\n0 1\n2 3\n";
    }
    CHECK_THROWS(load_edge_list(bad, false));
    std::remove(bad.c_str());
}

TEST_CASE("graph spec parse and print round trip") {
    for (const char* s : {"cycle:8", "lazy:0.5:directed-cycle:32", "leafy-line:64,512,4096",
                          "alternating-block-line:344:16"}) {
        CHECK(GraphSpec::parse(s).to_string() == s);
    }
    CHECK_THROWS(GraphSpec::parse("moebius:7"));
    CHECK_THROWS(build_graph(GraphSpec::parse("cycle:2")));
}
