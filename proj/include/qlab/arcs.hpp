#pragma once

#include <optional>
#include <vector>
#include <cstdint>
#include "qlab/rational.hpp"

namespace qlab {

// One rectangle of S_{Q,l}: x in [b/q - eps_c/(2^l q), b/q + eps_c/(2^l q)],
// t in [a/q - 1/(2^l q N), a/q + 1/(2^l q N)] (or the dyadic t-annulus).
struct ArcCell {
    DyadicLevel level;
    i64 q = 1;
    i64 a = 0;  // 0 <= a <= q-1, gcd(a,q)=1 (a=0 only for q=1)
    i64 b = 0;  // 0 <= b <= q-1
    Rat x_lo, x_hi;
    Rat t_lo, t_hi;
};

ArcCell make_arc_cell(const DyadicLevel& level, i64 N, i64 q, i64 a, i64 b, const Rat& eps_c);

struct BestRational {
    Rat frac;  // a/q with q <= N and |t - a/q| <= 1/(Nq)
    DyadicLevel level;
};

// Dirichlet approximation via continued-fraction convergents; the returned l
// satisfies |t - a/q| ~ 1/(2^l N q), capped at 2^l = N/Q and maximal for exact t.
BestRational best_rational_t(const Rat& t, i64 N);

// witness cell containing z modulo 1, smallest (q,a,b) lexicographically
std::optional<ArcCell> arc_membership(const TorusPoint& z, const DyadicLevel& level, i64 N,
                                      bool dyadic, const Rat& eps_c);

std::vector<ArcCell> arc_membership_all(const TorusPoint& z, const DyadicLevel& level, i64 N,
                                        bool dyadic, const Rat& eps_c);

// every cell of the level exactly once; count = sum over q~Q of phi(q)*q
std::vector<ArcCell> enumerate_arcs(const DyadicLevel& level, i64 N, const Rat& eps_c);

i64 count_arcs(const DyadicLevel& level);  // totient-sum formula

struct KernelSample {
    double x = 0.0, t = 0.0;
    i64 q = 0, a = 0, b = 0;
    i64 Q = 0;
    int l = 0;
    double abs_K = 0.0;
    double ratio = 0.0;
    bool on_arc = false;
};

struct KernelBoundReport {
    i64 N = 0;
    DyadicLevel level;
    std::vector<KernelSample> samples;
    double max_on_ratio = 0.0;   // |K| / (2^{l/2} sqrt(N)) over on-arc samples
    double max_off_ratio = 0.0;  // |K| / sqrt(N) over off-arc samples
    i64 off_rejections = 0;
    bool off_sampling_failed = false;
};

KernelBoundReport kernel_bound_report(i64 N, const DyadicLevel& level, i64 sample_count,
                                      std::uint64_t rng_seed, double eps_c = 1.0);

}  // namespace qlab
