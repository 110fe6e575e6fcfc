#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "heatcut/graph.hpp"
#include "helpers.hpp"

using namespace heatcut;
using testing::dense_laplacian;
using testing::dense_matvec;

TEST_CASE("edge list loading") {
    std::istringstream in("0 1\n1 2\n");
    Graph g = Graph::load_edge_list(in);
    CHECK(g.n() == 3);
    CHECK(g.m() == 2);
    CHECK(g.deg(0) == 1);
    CHECK(g.deg(1) == 2);
    CHECK(g.deg(2) == 1);

    SUBCASE("self-loop rejected") {
        std::istringstream bad("0 0\n");
        CHECK_THROWS_AS(Graph::load_edge_list(bad), std::invalid_argument);
    }
    SUBCASE("disconnected rejected") {
        std::istringstream bad("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
        CHECK_THROWS_AS(Graph::load_edge_list(bad), std::invalid_argument);
    }
    SUBCASE("duplicate edges collapse") {
        std::istringstream dup("0 1\n1 0\n0 1\n1 2\n");
        Graph d = Graph::load_edge_list(dup);
        CHECK(d.m() == 2);
    }
    SUBCASE("comments and arbitrary ids compact in sorted order") {
        std::istringstream odd("# header\n10 7\n7 42 # tail comment\n");
        Graph d = Graph::load_edge_list(odd);
        CHECK(d.n() == 3);
        CHECK(d.original_ids() == std::vector<long long>{7, 10, 42});
        CHECK(d.deg(0) == 2);  // id 7 touches both edges
    }
    SUBCASE("parse failure") {
        std::istringstream bad("0 1\n2\n");
        CHECK_THROWS_AS(Graph::load_edge_list(bad), std::invalid_argument);
    }
    SUBCASE("empty input") {
        std::istringstream bad("# nothing\n");
        CHECK_THROWS_AS(Graph::load_edge_list(bad), std::invalid_argument);
    }
}

TEST_CASE("laplacian apply") {
    Graph p3 = Graph::path(3);
    CHECK(p3.laplacian_apply({1, 1, 1}) == std::vector<double>{0, 0, 0});
    CHECK(p3.laplacian_apply({1, 0, 0}) == std::vector<double>{1, -1, 0});

    Graph k4 = Graph::clique(4);
    CHECK(k4.laplacian_apply({1, 0, 0, 0}) == std::vector<double>{3, -1, -1, -1});

    CHECK_THROWS_AS(p3.laplacian_apply({1, 0}), std::invalid_argument);

    SUBCASE("agrees with the dense matrix on random graphs") {
        Rng rng(12);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 5 + static_cast<int>(rng.below(45));
            Graph g = testing::random_connected_graph(n, 0.15, rng);
            std::vector<double> x = rng.gaussian_vector(n);
            std::vector<double> want = dense_matvec(dense_laplacian(g), n, x);
            std::vector<double> got = g.laplacian_apply(x);
            CHECK(testing::l2_dist(want, got) < 1e-12 * (1 + testing::l2_norm(want)));
        }
    }
    SUBCASE("quadratic form is the edge sum") {
        Rng rng(13);
        Graph g = testing::random_connected_graph(30, 0.2, rng);
        std::vector<double> x = rng.gaussian_vector(30);
        double quad = 0;
        std::vector<double> lx = g.laplacian_apply(x);
        for (int i = 0; i < 30; ++i) quad += x[i] * lx[i];
        double edge_sum = 0;
        for (int v = 0; v < 30; ++v)
            for (int w : g.neighbors(v))
                if (w > v) edge_sum += (x[v] - x[w]) * (x[v] - x[w]);
        CHECK(quad == doctest::Approx(edge_sum).epsilon(1e-12));
        CHECK(quad >= 0);
    }
}

TEST_CASE("cut statistics") {
    Graph k4 = Graph::clique(4);
    Cut c = k4.cut_stats(std::vector<int>{0});
    CHECK(c.boundary == 3);
    CHECK(c.vol == 3);
    CHECK(c.conductance == doctest::Approx(1.0));

    // two triangles joined by the edge 2-3
    Graph tt = Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
    Cut t = tt.cut_stats(std::vector<int>{0, 1, 2});
    CHECK(t.boundary == 1);
    CHECK(t.vol == 7);
    CHECK(t.conductance == doctest::Approx(1.0 / 7.0));

    Graph p3 = Graph::path(3);
    Cut s = p3.cut_stats(std::vector<int>{0, 2});
    CHECK(s.boundary == 2);
    CHECK(s.vol == 2);
    CHECK(s.conductance == doctest::Approx(1.0));

    SUBCASE("complement has the same conductance") {
        Cut comp = tt.cut_stats(std::vector<int>{3, 4, 5});
        CHECK(comp.conductance == doctest::Approx(t.conductance));
        CHECK(comp.balance == doctest::Approx(t.balance));
    }
    SUBCASE("empty and full sides rejected") {
        CHECK_THROWS_AS(k4.cut_stats(std::vector<int>{}), std::invalid_argument);
        CHECK_THROWS_AS(k4.cut_stats(std::vector<int>{0, 1, 2, 3}), std::invalid_argument);
    }
}

TEST_CASE("generators") {
    Graph k4 = Graph::clique(4);
    CHECK(k4.n() == 4);
    CHECK(k4.m() == 6);

    Graph reg = Graph::random_regular(10, 3, 1);
    CHECK(reg.m() == 15);
    for (int v = 0; v < 10; ++v) CHECK(reg.deg(v) == 3);

    SUBCASE("regular generator is deterministic per seed") {
        Graph again = Graph::random_regular(10, 3, 1);
        std::ostringstream a, b;
        reg.write_edge_list(a);
        again.write_edge_list(b);
        CHECK(a.str() == b.str());
        Graph other = Graph::random_regular(10, 3, 2);
        std::ostringstream c;
        other.write_edge_list(c);
        CHECK(a.str() != c.str());
    }
    SUBCASE("planted bisection has exactly the requested cross edges") {
        Graph pl = Graph::planted_bisection(20, 4, 2, 7);
        std::vector<int> half;
        for (int v = 0; v < 10; ++v) half.push_back(v);
        Cut c2 = pl.cut_stats(half);
        CHECK(c2.boundary == 2);
    }
    SUBCASE("infeasible degree sequence") {
        CHECK_THROWS_AS(Graph::random_regular(5, 3, 1), std::invalid_argument);
    }
    SUBCASE("dumbbell") {
        Graph db = Graph::dumbbell(4, 6);
        CHECK(db.n() == 10);
        CHECK(db.m() == 6 + 15 + 1);
        Cut c2 = db.cut_stats(std::vector<int>{0, 1, 2, 3});
        CHECK(c2.boundary == 1);
    }
}

TEST_CASE("edge list round trip") {
    Graph g = Graph::planted_bisection(20, 3, 3, 11);
    std::ostringstream out;
    g.write_edge_list(out);
    std::istringstream in(out.str());
    Graph back = Graph::load_edge_list(in);
    CHECK(back.n() == g.n());
    CHECK(back.m() == g.m());
    std::ostringstream out2;
    back.write_edge_list(out2);
    CHECK(out.str() == out2.str());
}

TEST_CASE("complete-graph laplacian factorization") {
    // The factored form D - (1/2m) D 1 1^T D matches the degree-weighted
    // variance around the degree-weighted mean.
    Rng rng(77);
    Graph g = testing::random_connected_graph(24, 0.2, rng);
    const double twom = static_cast<double>(g.total_volume());
    std::vector<double> x = rng.gaussian_vector(24);
    double mean = 0;
    for (int i = 0; i < 24; ++i) mean += g.deg(i) * x[i];
    mean /= twom;
    double factored = 0, weighted = 0, dsum = 0;
    for (int i = 0; i < 24; ++i) {
        factored += g.deg(i) * x[i] * x[i];
        dsum += g.deg(i) * x[i];
        weighted += g.deg(i) * (x[i] - mean) * (x[i] - mean);
    }
    factored -= dsum * dsum / twom;
    CHECK(factored == doctest::Approx(weighted).epsilon(1e-12));
}
