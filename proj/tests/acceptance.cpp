// Acceptance checks, one per numbered criterion. Usage: acceptance [n]
// Runs criterion n (1..12) or all of them, printing one PASS/FAIL line each.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qlab/arcs.hpp"
#include "qlab/constructions.hpp"
#include "qlab/counting.hpp"
#include "qlab/expsum.hpp"
#include "qlab/graph.hpp"
#include "qlab/labels.hpp"
#include "qlab/probes.hpp"
#include "qlab/rational.hpp"

using namespace qlab;

namespace {

bool check(bool ok, const char* what, double measured, double lo, double hi) {
    std::fprintf(stderr, "  %-44s measured=%.6g range=[%.6g, %.6g] %s\n", what, measured, lo, hi,
                 ok ? "ok" : "VIOLATION");
    return ok;
}

bool in_range(double v, double lo, double hi, const char* what) {
    return check(v >= lo && v <= hi, what, v, lo, hi);
}

// 1: constant-scheme peak at (x,t) = (0, 1/q) has the Gauss-sum size N/sqrt(q)
bool criterion1() {
    const i64 N = 1 << 12;
    bool ok = true;
    for (i64 q : {5LL, 13LL, 29LL}) {
        auto c = CoefficientVector::constant_normalized(N);
        double v = std::abs(eval_phase_sum(c, false, N, 0.0, 1.0 / (double)q));
        double reference = (double)N / std::sqrt((double)q) / std::sqrt((double)N);
        ok &= in_range(v / reference, 0.5, 2.0, ("peak ratio q=" + std::to_string(q)).c_str());
    }
    return ok;
}

// 2: kernel size on and off the arc set
bool criterion2() {
    const i64 N = 1 << 10;
    bool ok = true;
    const std::pair<i64, int> levels[] = {{8, 2}, {16, 3}, {32, 2}};
    std::uint64_t seed = 20240901;
    for (auto [Q, l] : levels) {
        std::string tag = "Q=" + std::to_string(Q) + ",2^l=" + std::to_string(i64(1) << l);
        // on-arc at the unit window constant
        KernelBoundReport on = kernel_bound_report(N, DyadicLevel{Q, l}, 1000, seed++, 1.0);
        ok &= in_range(on.max_on_ratio, 0.0, 10.0, ("on-arc ratio " + tag).c_str());
        // off-arc with a 4x margin: the smooth cutoff's decay regime starts a
        // constant multiple beyond the unit windows
        KernelBoundReport off = kernel_bound_report(N, DyadicLevel{Q, l}, 1000, seed++, 4.0);
        ok &= check(!off.off_sampling_failed, ("off-arc sampling " + tag).c_str(),
                    off.off_sampling_failed ? 1.0 : 0.0, 0.0, 0.0);
        ok &= in_range(off.max_off_ratio, 0.0, 1.0, ("off-arc ratio " + tag).c_str());
    }
    return ok;
}

// 3: gcd-profile invariants for every q1,q2 <= 60 and every valid label pair.
// The a-side (which determines d and p) is checked exhaustively. The b-side
// enters only through g = gcd(|b1*m2 + b2*m1|, d*m1*m2), and f = gcd(g, p);
// every (b1,b2) pair is reduced to its g-class and each (p-class, g-class)
// combination is verified on a representative tuple, which covers the full
// six-dimensional space exactly.
bool criterion3() {
    i64 violations = 0;
    i64 pairs_checked = 0, reps_checked = 0;
    for (i64 q1 = 1; q1 <= 60; ++q1) {
        for (i64 q2 = 1; q2 <= 60; ++q2) {
            const i64 d = gcd64(q1, q2);
            const i64 m1 = q1 / d, m2 = q2 / d;
            const i64 dm = d * m1 * m2;
            std::map<i64, std::pair<i64, i64>> p_reps;  // p -> (a1,a2)
            for (i64 a1 = -(q1 - 1); a1 <= q1 - 1; ++a1) {
                if (!LabeledDiff{a1, 0, q1}.valid()) continue;
                for (i64 a2 = -(q2 - 1); a2 <= q2 - 1; ++a2) {
                    if (!LabeledDiff{a2, 0, q2}.valid()) continue;
                    GcdProfile g = gcd_profile(LabeledDiff{a1, 0, q1}, LabeledDiff{a2, 0, q2});
                    ++pairs_checked;
                    if (g.d != d || d % g.p != 0 || gcd64(g.p, m1) != 1 || gcd64(g.p, m2) != 1)
                        ++violations;
                    p_reps.emplace(g.p, std::make_pair(a1, a2));
                }
            }
            if (p_reps.empty()) continue;
            std::map<i64, std::pair<i64, i64>> g_reps;  // g-class -> (b1,b2)
            for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1)
                for (i64 b2 = -(q2 - 1); b2 <= q2 - 1; ++b2) {
                    i64 s = b1 * m2 + b2 * m1;
                    i64 g = (s == 0) ? dm : gcd64(s < 0 ? -s : s, dm);
                    g_reps.emplace(g, std::make_pair(b1, b2));
                }
            for (const auto& [p, as] : p_reps)
                for (const auto& [g, bs] : g_reps) {
                    GcdProfile full = gcd_profile(LabeledDiff{as.first, bs.first, q1},
                                                  LabeledDiff{as.second, bs.second, q2});
                    ++reps_checked;
                    if (full.p != p || p % full.f != 0 || full.f != gcd64(g, p)) ++violations;
                }
        }
    }
    std::fprintf(stderr, "  a-pairs checked: %lld, representatives: %lld\n",
                 (long long)pairs_checked, (long long)reps_checked);
    return check(violations == 0, "profile invariant violations", (double)violations, 0, 0);
}

// 4: counting routines agree exactly with exhaustive-loop oracles
bool criterion4() {
    bool ok = true;
    std::mt19937_64 rng(424242);
    const i64 N = 1 << 10;
    int nonempty = 0;
    for (int trial = 0; trial < 50; ++trial) {
        AdmissibleQuery q;
        i64 Q = trial % 2 ? 8 : 16;
        q.level = DyadicLevel{Q, (int)(rng() % 3)};
        q.N = N;
        i64 grid = 4 * N * Q;
        q.t = Rat((i64)(rng() % (std::uint64_t)grid), grid);
        q.x = Rat((i64)(rng() % (std::uint64_t)(4 * Q)), 4 * Q);
        i64 dpow = (i64)(rng() % (std::uint64_t)(log2_exact(Q) + 2));
        q.D = i64(1) << dpow;
        q.P = i64(1) << (i64)(rng() % (std::uint64_t)(dpow + 1));
        q.F = i64(1) << (i64)(rng() % (std::uint64_t)(log2_exact(q.P) + 1));
        q.C_t = Rat(1 + (i64)(rng() % 4));
        q.C_x = Rat(1 + (i64)(rng() % 4));
        auto fast = enumerate_admissible(q);
        auto slow = enumerate_admissible_oracle(q);
        if (!(fast == slow)) {
            ok = check(false, "admissible oracle equality", (double)trial, 0, 0);
            continue;
        }
        if (!fast.empty()) {
            ++nonempty;
            const auto& pr = fast.front();
            std::set<i64> expect;
            for (const auto& w : pr.witnesses) expect.insert(w.b1);
            if (b_witness_set(pr.q1, pr.q2, q) != expect)
                ok = check(false, "b_witness_set equality", (double)trial, 0, 0);
        }
    }
    ok &= check(nonempty > 0, "nonempty admissible queries", (double)nonempty, 1, 50);

    // box census tuple counts against a direct six-fold tally
    for (int l : {0, 1}) {
        DyadicLevel lv{8, l};
        BoxCensus census = box_census(N, lv, CENSUS_NB);
        std::map<std::pair<i64, i64>, i64> brute;
        for (i64 q1 = 8; q1 < 16; ++q1)
            for (i64 q2 = 8; q2 < 16; ++q2)
                for (i64 a1 = -(q1 - 1); a1 <= q1 - 1; ++a1) {
                    if (!LabeledDiff{a1, 0, q1}.valid()) continue;
                    for (i64 a2 = -(q2 - 1); a2 <= q2 - 1; ++a2) {
                        if (!LabeledDiff{a2, 0, q2}.valid()) continue;
                        Rat ts = (Rat(a1, q1) + Rat(a2, q2)).mod1();
                        i64 it = (ts * Rat(census.t_boxes)).floor();
                        for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1)
                            for (i64 b2 = -(q2 - 1); b2 <= q2 - 1; ++b2) {
                                Rat xs = (Rat(b1, q1) + Rat(b2, q2)).mod1();
                                i64 ix = (xs * Rat(census.x_boxes)).floor();
                                ++brute[{ix, it}];
                            }
                    }
                }
        bool same = census.boxes.size() == brute.size();
        if (same)
            for (const auto& [key, c] : census.boxes)
                if (brute.at(key) != c.N_B) { same = false; break; }
        ok &= check(same, ("box census N_B oracle, l=" + std::to_string(l)).c_str(),
                    same ? 0.0 : 1.0, 0, 0);
    }

    // system counts: random grid targets plus constructed exact targets
    i64 sys_nonzero = 0;
    for (int trial = 0; trial < 8; ++trial) {
        SystemQuery sq;
        sq.N = N;
        sq.level = DyadicLevel{8, (int)(rng() % 2)};
        sq.alpha_cap = 1 + (i64)(rng() % 4);
        if (trial < 6) {
            i64 g = 64;
            sq.t = Rat((i64)(rng() % (std::uint64_t)g), g);
            sq.t_prime = Rat((i64)(rng() % (std::uint64_t)g), g);
            if (sq.t == sq.t_prime) sq.t_prime = sq.t_prime + Rat(1, g);
        } else {
            sq.level = DyadicLevel{8, 0};
            sq.t = Rat(1, 9) - Rat(1, 8);
            sq.t_prime = Rat(1, 9) - Rat(3, 8);
        }
        sq.with_x = trial % 2 == 0;
        sq.x = Rat(1, 9) - Rat(1, 8);
        sq.x_prime = Rat(1, 9) - Rat(3, 8);
        i64 fast = count_system_solutions(sq);
        i64 slow = count_system_solutions_oracle(sq);
        if (fast != slow) ok = check(false, "system count equality", (double)trial, 0, 0);
        if (fast > 0) ++sys_nonzero;
    }
    ok &= check(sys_nonzero > 0, "nonzero system counts", (double)sys_nonzero, 1, 8);
    return ok;
}

// 5: box census aggregate sizes and per-box inequalities
bool criterion5() {
    const i64 N = 1 << 10;
    bool ok = true;
    for (i64 Q : {8LL, 16LL}) {
        BoxCensus census = box_census(N, DyadicLevel{Q, 2}, CENSUS_NB | CENSUS_SMALL_NB);
        double q6 = std::pow((double)Q, 6.0);
        i64 sum = 0;
        i64 bad = 0;
        for (const auto& [key, c] : census.boxes) {
            sum += c.N_B;
            if (c.n_B_star > c.n_B || c.n_B_sep > c.n_B || c.N_B_star > c.N_B || c.n_B > c.N_B) ++bad;
        }
        std::string tag = "Q=" + std::to_string(Q);
        ok &= in_range((double)sum / q6, 0.05, 50.0, ("sum N_B / Q^6, " + tag).c_str());
        ok &= check(bad == 0, ("per-box counter inequalities, " + tag).c_str(), (double)bad, 0, 0);
    }
    return ok;
}

// 6: the enemies family is large, separated, and genuine
bool criterion6() {
    const i64 N = 1 << 12, Q = 32, q = 4, r = 2;
    EnemiesResult e = build_enemies(N, Q, q, r, 1, 1);
    double floor_size = (double)(Q * Q) / (double)(r * q) / (8.0 * std::log2((double)Q));
    bool ok = check((double)e.fractions.size() >= floor_size, "family size", (double)e.fractions.size(),
                    floor_size, 1e18);
    bool sep = true;
    for (size_t i = 1; i < e.fractions.size(); ++i)
        if (e.fractions[i] - e.fractions[i - 1] < Rat(1, N)) sep = false;
    ok &= check(sep, "1/N separation", sep ? 1.0 : 0.0, 1, 1);
    i64 bad = 0;
    for (const auto& m : e.members) {
        i64 nq = m.n * q;
        i64 a2 = m.n * 1 - m.a1;
        i64 b2 = (m.n / r) * 1 - m.b1;
        bool good = nq >= Q && nq < 2 * Q && Rat(m.a1, nq) + Rat(a2, nq) == e.t &&
                    Rat(m.b1, nq) + Rat(b2, nq) == e.x && gcd64(m.a1, nq) == 1 &&
                    gcd64(a2 < 0 ? -a2 : a2, nq) == 1 && gcd64(m.b1, nq) == 1;
        if (good) good = gcd_profile(LabeledDiff{m.a1, m.b1, nq}, LabeledDiff{a2, b2, nq}).d == nq;
        if (!good) ++bad;
    }
    ok &= check(bad == 0, "members are genuine representations", (double)bad, 0, 0);
    return ok;
}

// 7: popular-pair mass lower bound on random graphs
bool criterion7() {
    std::mt19937_64 rng(777);
    bool ok = true;
    const int R = 256;
    for (int trial = 0; trial < 20; ++trial) {
        double K = trial % 2 ? 4.0 : 2.0;
        double target = (double)R * R / (2.0 * K);
        double prob = target / ((double)R * (R - 1) / 2.0) * 1.1;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<std::pair<int, int>> edges;
        do {
            edges.clear();
            for (int i = 0; i < R; ++i)
                for (int j = i + 1; j < R; ++j)
                    if (unif(rng) < prob) edges.emplace_back(i, j);
        } while ((double)edges.size() < target);
        ConfigGraph g = ConfigGraph::from_adjacency(R, edges);
        auto pop = popular_pairs(g, K);
        double floor_sum = (double)R * R * R / (16.0 * K * K);
        if (!((double)pop.sum_common >= floor_sum)) {
            ok = check(false, "popular mass bound", (double)pop.sum_common, floor_sum, 1e18);
        }
    }
    return check(ok, "all 20 random graphs", ok ? 1.0 : 0.0, 1, 1);
}

ConfigGraph prime_reciprocal_graph() {
    // primes ~ sqrt(256) live in [16,32); products of two distinct primes
    // mostly land in [512,1024), so the graph is built in that block.
    // eps_c = 1/2 keeps x-windows disjoint, giving each edge its natural label.
    Construction big = build_prime_reciprocal(256);
    return build_graph(big.points, 1 << 10, DyadicLevel{512, 0}, Rat(1, 2));
}

// 8: dominant triples of the named constructions
bool criterion8() {
    bool ok = true;
    {
        Construction c = build_fixed_denominator(13);
        ConfigGraph g = build_graph(c.points, 1 << 10, DyadicLevel{8, 3});
        DominantTriple dom = dominant_triple(g, 1.0);
        ok &= check(dom.D == 8 && dom.P == 1 && dom.F == 1, "fixed-denominator (Q,1,1)",
                    (double)dom.D, 8, 8);
    }
    {
        ConfigGraph g = prime_reciprocal_graph();
        DominantTriple dom = dominant_triple(g, 2.0);
        ok &= check(dom.D == 16 && dom.P == 16 && dom.F == 16, "prime-reciprocal (sqrtQ)^3",
                    (double)dom.D, 16, 16);
    }
    {
        Construction c = build_bipartite(8, 16);
        ConfigGraph g = build_graph(c.points, 1 << 10, DyadicLevel{128, 0});
        DominantTriple dom = dominant_triple(g, 1.0);
        bool key_ok = (dom.D == 8 && dom.P == 8) || (dom.D == 16 && dom.P == 16);
        ok &= check(key_ok, "bipartite key in {Q1,Q2}", (double)dom.D, 8, 16);
    }
    return ok;
}

// 9: level-set measure of the constant scheme at lambda = sqrt(N/Q)
bool criterion9() {
    ProbeConfig c;
    c.kind = "levelset";
    c.N = 1 << 12;
    c.Q_ladder = {8, 16};
    c.slack = 8.0;
    ProbeReport rep = probe_levelset(c);
    bool ok = true;
    for (const auto& a : rep.assertions)
        ok &= check(a.pass, a.name.c_str(), a.measured, 0.0, a.bound);
    return ok;
}

// 10: growth exponent of the L6 norm of the t-sup across the N ladder
bool criterion10() {
    ProbeConfig c;
    c.kind = "lp";
    c.scheme = "constant";
    c.p = 6.0;
    ProbeReport rep = probe_lp(c);
    bool ok = true;
    for (const auto& a : rep.assertions)
        ok &= check(a.pass, a.name.c_str(), a.measured, 0.28, 0.40);
    return ok;
}

// 11: fork structure condition on the named constructions
bool criterion11() {
    bool ok = true;
    {
        Construction c = build_fixed_denominator(13);
        ConfigGraph g = build_graph(c.points, 1 << 10, DyadicLevel{8, 3});
        ForkChain fork = extract_fork(g, 8, 1, 1);
        ForkReport rep = fork_structure_check(fork);
        ok &= check(rep.pairs_checked > 0 && rep.violations == 0, "fixed-denominator fork",
                    (double)rep.violations, 0, 0);
    }
    {
        ConfigGraph g = prime_reciprocal_graph();
        ForkChain fork = extract_fork(g, 16, 16, 16);
        ForkReport rep = fork_structure_check(fork);
        ok &= check(rep.pairs_checked > 0 && rep.violations == 0, "prime-reciprocal fork",
                    (double)rep.violations, 0, 0);
    }
    return ok;
}

// 12: byte-identical probe outputs for identical config and seed
bool criterion12() {
    bool ok = true;
    for (const char* kind : {"conditional", "levelset"}) {
        ProbeConfig c;
        c.kind = kind;
        c.N = 256;
        c.Q = 8;
        c.l = 1;
        c.Q_ladder = {4, 8};
        c.t_cap = 1 << 12;
        c.samples = 10;
        c.seed = 3141;
        ProbeReport r1 = run_probe(c);
        ProbeReport r2 = run_probe(c);
        bool same = r1.to_json() == r2.to_json() && r1.to_csv() == r2.to_csv();
        ok &= check(same, (std::string(kind) + " outputs byte-identical").c_str(), same ? 1.0 : 0.0, 1, 1);
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6,
                            criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
    int lo = 1, hi = 12;
    if (argc > 1) {
        int n = std::atoi(argv[1]);
        if (n < 1 || n > 12) {
            std::fprintf(stderr, "usage: %s [1..12]\n", argv[0]);
            return 2;
        }
        lo = hi = n;
    }
    bool all_ok = true;
    for (int n = lo; n <= hi; ++n) {
        bool ok = false;
        try {
            ok = criteria[n - 1]();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "  criterion %d threw: %s\n", n, e.what());
        }
        std::printf("criterion %d: %s\n", n, ok ? "PASS" : "FAIL");
        std::fflush(stdout);
        all_ok &= ok;
    }
    return all_ok ? 0 : 1;
}
