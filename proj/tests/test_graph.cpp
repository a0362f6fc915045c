#include "doctest.h"
#include "qlab/graph.hpp"
#include "qlab/constructions.hpp"

#include <cmath>
#include <random>

using namespace qlab;

namespace {

ConfigGraph complete_graph(int R) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < R; ++i)
        for (int j = i + 1; j < R; ++j) edges.emplace_back(i, j);
    return ConfigGraph::from_adjacency(R, edges);
}

}  // namespace

TEST_CASE("complete graph popularity matches hand counting") {
    ConfigGraph g = complete_graph(8);
    CHECK(g.edge_count() == 28);
    CHECK(g.K_emp() == doctest::Approx(64.0 / 56.0));
    auto pop = popular_pairs(g, 1.0);
    CHECK(pop.pairs.size() == 28);     // threshold 8/4 = 2, every pair has 6
    CHECK(pop.sum_common == 28 * 6);
}

TEST_CASE("empty graph has no popular pairs and infinite K") {
    ConfigGraph g = ConfigGraph::from_adjacency(6, {});
    CHECK(g.edge_count() == 0);
    CHECK(std::isinf(g.K_emp()));
    auto pop = popular_pairs(g, 2.0);
    CHECK(pop.pairs.empty());
    CHECK(pop.sum_common == 0);
}

TEST_CASE("graph lemma holds with explicit constants on random graphs") {
    std::mt19937_64 rng(31337);
    for (double K : {2.0, 4.0}) {
        for (int trial = 0; trial < 3; ++trial) {
            int R = 256;
            double target = (double)R * (double)R / (2.0 * K);
            std::vector<std::pair<int, int>> edges;
            double prob = target / ((double)R * (R - 1) / 2.0) * 1.1;
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            do {
                edges.clear();
                for (int i = 0; i < R; ++i)
                    for (int j = i + 1; j < R; ++j)
                        if (unif(rng) < prob) edges.emplace_back(i, j);
            } while ((double)edges.size() < target);
            ConfigGraph g = ConfigGraph::from_adjacency(R, edges);
            REQUIRE((double)g.edge_count() >= target);  // E >= R^2/(2K)
            REQUIRE(K <= std::sqrt((double)R) / 4.0);
            auto pop = popular_pairs(g, K);
            double floor = (double)R * R * R / (16.0 * K * K);
            CHECK((double)pop.sum_common >= floor);
        }
    }
}

TEST_CASE("two points differing by a cell offset give one labeled edge") {
    i64 N = 256;
    DyadicLevel lv{8, 1};
    std::vector<TorusPoint> pts = {
        TorusPoint{Rat(1, 16), Rat(1, 16)},
        TorusPoint{Rat(1, 16) + Rat(1, 11), Rat(1, 16) + Rat(1, 11)},
    };
    ConfigGraph g = build_graph(pts, N, lv);
    CHECK(g.edge_count() == 1);
    LabeledDiff w = g.label(1, 0);  // z_1 - z_0 = (1/11, 1/11)
    CHECK(w.q == 11);
    CHECK(w.a == 1);
    CHECK(w.b == 1);
    LabeledDiff wr = g.label(0, 1);
    CHECK(wr.a == -1);
    CHECK(wr.b == -1);
    CHECK(wr.q == 11);
}

TEST_CASE("points with off-arc differences give an edgeless graph") {
    i64 N = 256;
    DyadicLevel lv{8, 2};
    // x-differences far from every b/q window at q in [8,16)
    std::vector<TorusPoint> pts = {
        TorusPoint{Rat(0), Rat(0)},
        TorusPoint{Rat(1, 2) + Rat(1, 1000), Rat(1, 2) + Rat(1, 1000)},
    };
    ConfigGraph g = build_graph(pts, N, lv);
    CHECK(g.edge_count() == 0);
    CHECK(std::isinf(g.K_emp()));
}

TEST_CASE("separation violations are rejected") {
    std::vector<TorusPoint> pts = {
        TorusPoint{Rat(0), Rat(0)},
        TorusPoint{Rat(1, 1000), Rat(1, 2)},
    };
    CHECK_THROWS_AS(build_graph(pts, 256, DyadicLevel{4, 0}), std::invalid_argument);
}

TEST_CASE("fixed-denominator graph: density, partition, dominant triple, fork") {
    Construction c = build_fixed_denominator(13);
    i64 N = 1 << 10;
    DyadicLevel lv{8, 3};
    ConfigGraph g = build_graph(c.points, N, lv);
    int R = g.R();
    CHECK(R == 25);
    // edges exactly where gcd(a2 - a1, 13) = 1
    i64 expect = 0;
    for (i64 a1 = -12; a1 <= 12; ++a1)
        for (i64 a2 = a1 + 1; a2 <= 12; ++a2)
            if ((a2 - a1) % 13 != 0) ++expect;
    CHECK(g.edge_count() == expect);
    CHECK((double)g.edge_count() >= (double)R * R / 4.0);

    // partition property: the (D,P,F) classes cover every common neighbor
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        int i = (int)(rng() % (unsigned)R), j = (int)(rng() % (unsigned)R);
        if (i == j) continue;
        auto part = dpf_partition(g, i, j);
        size_t total = 0;
        for (const auto& [key, members] : part) {
            auto [D, P, F] = key;
            CHECK(F <= P);
            CHECK(P <= D);
            total += members.size();
        }
        CHECK((i64)total == g.common_count(i, j));
    }

    DominantTriple dom = dominant_triple(g, 1.0);
    CHECK(dom.D == 8);  // the block of q = 13
    CHECK(dom.P == 1);
    CHECK(dom.F == 1);

    ForkChain fork = extract_fork(g, dom.D, dom.P, dom.F);
    CHECK(fork.S.size() >= fork.S_prime.size());
    CHECK(fork.S_prime.size() >= fork.S_dprime.size());
    CHECK(fork.S_dprime.size() >= fork.S_tprime.size());
    CHECK(fork.S_prime.size() == fork.S.size());  // single denominator: one d class
    double logQ = std::log2(8.0) + 1.0;
    CHECK((double)fork.S_prime.size() >= (double)fork.S.size() / (logQ * logQ));
    CHECK((double)fork.S_dprime.size() >= (double)fork.S_prime.size() / logQ);
    CHECK((double)fork.S_tprime.size() >= (double)fork.S_dprime.size() / logQ);
    CHECK(fork.fixed_d == 13);

    ForkReport rep = fork_structure_check(fork);
    CHECK(rep.pairs_checked > 0);
    CHECK(rep.violations == 0);

    auto fn = fork_dyadic_neighbor_count(g, fork, lv);
    CHECK(fn.max_count <= N / lv.pow2l());
    CHECK(fn.bound_ratio <= 1.0);
}

TEST_CASE("fork extraction errors on graphs without the structure") {
    ConfigGraph g = ConfigGraph::from_adjacency(4, {});
    CHECK_THROWS_AS(extract_fork(g, 1, 1, 1), std::domain_error);
}
