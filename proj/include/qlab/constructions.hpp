#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>
#include "qlab/rational.hpp"
#include "qlab/labels.hpp"

namespace qlab {

enum class ConstructionKind {
    sharp_c1,
    enemies,
    fixed_denominator,
    prime_reciprocal,
    prime_reciprocal_modified,
    bipartite,
    sqrt_admissible,
    random_baseline,
};

std::string kind_name(ConstructionKind k);

struct Construction {
    ConstructionKind kind;
    std::vector<TorusPoint> points;
    std::map<std::string, double> predicted;  // metric name -> expected value
};

bool is_separated(const std::vector<TorusPoint>& points, i64 N);

std::vector<i64> primes_in_block(i64 X);  // primes in [X, 2X)
i64 sqrt_block(i64 Q);                    // power of two s with s^2 in the block of Q

// points (x_i + j/(Q 2^l), b_i/q) over a maximal 1/N-separated family x_i near
// the fractions b/q, 2 <= j <= J = floor(2^{l/2}/M^2)
Construction build_sharp_c1(i64 N, i64 q, const DyadicLevel& level, double M);

struct EnemiesMember {
    i64 n = 1;   // n = rm, with nq in the Q-block
    i64 b1 = 1;  // gcd(b1, nq) = 1
    i64 a1 = 1;  // gcd(a1, nq) = gcd(na - a1, nq) = 1
};

struct EnemiesResult {
    Rat x, t;
    i64 N = 1, Q = 1, q = 1, r = 1, a = 0, b = 1;
    std::vector<Rat> fractions;  // distinct b1/(nq), sorted
    std::vector<EnemiesMember> members;
};

EnemiesResult build_enemies(i64 N, i64 Q, i64 q, i64 r, i64 a, i64 b);

Construction build_fixed_denominator(i64 q);  // points (a/q, a/q), |a| <= q-1

// base variant: (c/r, c/r) over primes r with r^2 in the Q-block; modified
// variant (modified_d prime): (1/(dq), 1/(dq)) over primes q with dq^2 ~ Q
Construction build_prime_reciprocal(i64 Q, i64 modified_d = 0);

Construction build_bipartite(i64 Q1, i64 Q2);  // sides over primes ~ Q1 and ~ Q2

struct SqrtAdmissible {
    Rat x, t;
    LabeledDiff label1, label2;  // (a1,b1,q1=r1*r3), (a2,b2,q2=r2*r3)
    GcdProfile profile;          // expected d = p = f = r3
};

SqrtAdmissible build_sqrt_admissible(i64 r1, i64 r2, i64 r3, i64 c1, i64 c2, i64 d1, i64 d2);

Construction build_random_baseline(i64 R, i64 N, const DyadicLevel& level, std::uint64_t seed);

}  // namespace qlab
