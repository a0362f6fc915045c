#include "doctest.h"
#include "qlab/arcs.hpp"

#include <random>
#include <set>
#include <tuple>

using namespace qlab;

TEST_CASE("cell counts follow the totient sum") {
    CHECK(count_arcs(DyadicLevel{1, 0}) == 1);
    // q in [4,8): phi(4)*4 + phi(5)*5 + phi(6)*6 + phi(7)*7 = 8+20+12+42
    CHECK(count_arcs(DyadicLevel{4, 1}) == 82);
    for (i64 Q : {1LL, 2LL, 4LL, 8LL, 16LL, 32LL, 64LL}) {
        DyadicLevel lv{Q, 0};
        auto cells = enumerate_arcs(lv, 2 * Q, Rat(1));
        CHECK((i64)cells.size() == count_arcs(lv));
        std::set<std::tuple<i64, i64, i64>> seen;
        for (const auto& c : cells) {
            CHECK(c.q >= Q);
            CHECK(c.q < 2 * Q);
            seen.insert({c.q, c.a, c.b});
        }
        CHECK((i64)seen.size() == count_arcs(lv));  // exactly once
    }
}

TEST_CASE("cell geometry") {
    ArcCell c = make_arc_cell(DyadicLevel{4, 1}, 64, 5, 2, 3, Rat(1));
    CHECK(c.x_lo == Rat(3, 5) - Rat(1, 10));
    CHECK(c.x_hi == Rat(3, 5) + Rat(1, 10));
    CHECK(c.t_lo == Rat(2, 5) - Rat(1, 640));
    CHECK(c.t_hi == Rat(2, 5) + Rat(1, 640));
}

TEST_CASE("best rational approximation satisfies the Dirichlet window") {
    std::mt19937_64 rng(3);
    i64 N = 1 << 10;
    for (int trial = 0; trial < 300; ++trial) {
        i64 den = 2 + (i64)(rng() % (N * N));
        i64 num = (i64)(rng() % den);
        Rat t(num, den);
        BestRational br = best_rational_t(t, N);
        i64 q = br.frac.den;
        CHECK(q <= N);
        Rat err = (t - br.frac).abs();
        CHECK(err * Rat(N) * Rat(q) <= Rat(1));
        CHECK(br.level.Q == dyadic_block(q));
        CHECK(br.level.l <= max_level(N, q));
        if (err.num != 0) {
            // l is the largest admissible dyadic level
            CHECK(err * Rat(br.level.pow2l()) * Rat(N) * Rat(q) <= Rat(1));
            if (br.level.l < max_level(N, q))
                CHECK(err * Rat(2 * br.level.pow2l()) * Rat(N) * Rat(q) > Rat(1));
        } else {
            CHECK(br.level.l == max_level(N, q));
        }
    }
    // exact small fraction: q = 3, maximal level
    BestRational br = best_rational_t(Rat(1, 3), 64);
    CHECK(br.frac == Rat(1, 3));
    CHECK(br.level.Q == 2);
    CHECK(br.level.l == max_level(64, 3));
}

TEST_CASE("membership returns the lexicographically smallest covering cell") {
    i64 N = 256;
    DyadicLevel lv{8, 2};
    // center of a known cell
    TorusPoint z{Rat(3, 11), Rat(4, 11)};
    auto cell = arc_membership(z, lv, N, false, Rat(1));
    REQUIRE(cell.has_value());
    CHECK(cell->q == 11);
    CHECK(cell->a == 4);
    CHECK(cell->b == 3);
    // the same point, shifted by integers, lands in the same cell
    auto cell2 = arc_membership(TorusPoint{Rat(3, 11) + Rat(2), Rat(4, 11) - Rat(1)}, lv, N, false, Rat(1));
    REQUIRE(cell2.has_value());
    CHECK(cell2->q == 11);
    CHECK(cell2->a == 4);
    CHECK(cell2->b == 3);
    // a point with t far from every a/q at this block
    auto none = arc_membership(TorusPoint{Rat(0), Rat(1, 2) + Rat(1, 101)}, lv, N, false, Rat(1));
    CHECK_FALSE(none.has_value());
}

TEST_CASE("membership against the exhaustive cell scan") {
    i64 N = 128;
    DyadicLevel lv{4, 1};
    auto cells = enumerate_arcs(lv, N, Rat(1));
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        Rat x((i64)(rng() % 4096), 4096);
        Rat t((i64)(rng() % 4096), 4096);
        bool covered = false;
        for (const auto& c : cells) {
            Rat dx = (x - Rat(c.b, c.q)).mod1_centered().abs();
            Rat dt = (t - Rat(c.a, c.q)).mod1_centered().abs();
            if (dx <= c.x_hi - Rat(c.b, c.q) && dt <= c.t_hi - Rat(c.a, c.q)) covered = true;
        }
        auto cell = arc_membership(TorusPoint{x, t}, lv, N, false, Rat(1));
        CHECK(cell.has_value() == covered);
    }
}

TEST_CASE("dyadic annuli at distinct levels are disjoint in t") {
    i64 N = 256;
    i64 q = 9;
    Rat a_q(4, 9);
    for (int l1 = 0; l1 + 1 <= max_level(N, q); ++l1) {
        // a t-value in the annulus at level l1
        Rat mid = a_q + (Rat(1, (i64(1) << l1) * q * N) + Rat(1, (i64(1) << (l1 + 1)) * q * N)) / Rat(2);
        int hits = 0;
        for (int l2 = 0; l2 <= max_level(N, q); ++l2) {
            for (const auto& cell : arc_membership_all(TorusPoint{Rat(4, 9), mid}, DyadicLevel{8, l2}, N, true, Rat(1)))
                if (cell.q == q && cell.b == 4) ++hits;
        }
        CHECK(hits == 1);
    }
}

TEST_CASE("kernel ratio report produces bounded samples") {
    KernelBoundReport rep = kernel_bound_report(256, DyadicLevel{8, 2}, 50, 12345);
    CHECK((i64)rep.samples.size() >= 50);
    CHECK(rep.max_on_ratio > 0.0);
    CHECK(rep.max_on_ratio < 20.0);
    if (!rep.off_sampling_failed) CHECK(rep.max_off_ratio < 2.0);
    for (const auto& s : rep.samples)
        if (s.on_arc) {
            CHECK(s.q >= 8);
            CHECK(s.q < 16);
        }
}
