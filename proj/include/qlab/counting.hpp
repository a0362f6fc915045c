#pragma once

#include <map>
#include <set>
#include <vector>
#include <cstdint>
#include "qlab/rational.hpp"
#include "qlab/labels.hpp"

namespace qlab {

// Query for pairs (q1,q2) ~ Q with witnesses (a1,a2,b1,b2) placing
// a1/q1 + a2/q2 within C_t/(2^l N Q) of t and b1/q1 + b2/q2 within
// C_x/(2^l Q) of x, with gcd profile blocks d~D, p~P, f~F.
struct AdmissibleQuery {
    Rat x, t;
    i64 N = 1;
    DyadicLevel level;
    i64 D = 1, P = 1, F = 1;  // powers of two, F <= P <= D <= 2Q
    Rat C_t = Rat(1);
    Rat C_x = Rat(1);

    Rat t_window() const { return C_t / Rat::make128((i128)level.pow2l() * N * level.Q, 1); }
    Rat x_window() const { return C_x / Rat::make128((i128)level.pow2l() * level.Q, 1); }
    void validate() const;
};

struct Witness {
    i64 a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    i64 f = 1;
    auto operator<=>(const Witness&) const = default;
};

struct AdmissiblePair {
    i64 q1 = 1, q2 = 1;
    i64 d = 1, p = 1;
    std::vector<Witness> witnesses;  // lexicographic order
    auto operator<=>(const AdmissiblePair&) const = default;
};

// CRT-window enumeration over s = a1*m2 + a2*m1 (and the analogous b-sum)
std::vector<AdmissiblePair> enumerate_admissible(const AdmissibleQuery& query);

// reference: plain loops over (q1,q2,a1,a2,b1,b2)
std::vector<AdmissiblePair> enumerate_admissible_oracle(const AdmissibleQuery& query);

std::set<i64> b_witness_set(i64 q1, i64 q2, const AdmissibleQuery& query);

// maximum number of 1/N-separated points selectable from the witness x-arc
// intervals [b1/q1 - C_x/(2^l q1), b1/q1 + C_x/(2^l q1)], greedy rule
i64 count_L_separated(const Rat& x, const Rat& t, const AdmissibleQuery& query);

struct BoxCounters {
    i64 N_B = 0;       // tuples
    i64 N_B_star = 0;  // tuples with gcd(q1,q2)=1
    i64 n_B = 0;       // distinct (b1,q1)
    i64 n_B_star = 0;  // distinct (b1,q1), coprime denominators
    i64 n_B_sep = 0;   // 1/N-separated distinct b1/q1
};

struct BoxCensus {
    i64 N = 1;
    DyadicLevel level;
    i64 x_boxes = 1;  // 2^l Q, box width 1/(2^l Q)
    i64 t_boxes = 1;  // N 2^l Q, box height 1/(N 2^l Q)
    std::map<std::pair<i64, i64>, BoxCounters> boxes;  // (ix, it) -> counters
    i64 total_tuples = 0;
    i64 sum_n_B = 0;
    i64 max_n_B = 0;
};

enum CensusVariant : unsigned {
    CENSUS_NB = 1u,        // N_B and N_B*
    CENSUS_SMALL_NB = 2u,  // n_B, n_B*, separated n_B
};

BoxCensus box_census(i64 N, const DyadicLevel& level, unsigned variants);

// two-target system count: tuples (a1,a2,a3,q1,q2,q3), q_i ~ Q, gcd(a_i,q_i)=1,
// |a_i| <= q_i - 1, gcd(q1,q2) <= alpha_cap, gcd(q1,q3) <= alpha_cap, with
// |a1/q1 - a2/q2 - t| <= C_t/(2^l N Q) and |a1/q1 - a3/q3 - t'| <= C_t/(2^l N Q)
// (and the analogous x-inequalities over b's when x, x' are given, counting
// the b-solutions multiplicatively).
struct SystemQuery {
    Rat t, t_prime;
    bool with_x = false;
    Rat x, x_prime;
    i64 N = 1;
    DyadicLevel level;
    i64 alpha_cap = 1;
    Rat C_t = Rat(1);
    Rat C_x = Rat(1);
};

i64 count_system_solutions(const SystemQuery& query);
i64 count_system_solutions_oracle(const SystemQuery& query);

}  // namespace qlab
