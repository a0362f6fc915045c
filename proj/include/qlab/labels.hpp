#pragma once

#include <complex>
#include "qlab/rational.hpp"

namespace qlab {

// Arc label (a, b, q) attached to a difference of two configuration points:
// the t-part is near a/q, the x-part near b/q. Signed numerators.
struct LabeledDiff {
    i64 a = 0;
    i64 b = 0;
    i64 q = 1;

    bool valid() const {
        if (q < 1) return false;
        if (a > q - 1 || a < -(q - 1)) return false;
        if (b > q - 1 || b < -(q - 1)) return false;
        if (q == 1) return a == 0;
        return a != 0 && gcd64(a < 0 ? -a : a, q) == 1;
    }

    LabeledDiff negated() const { return LabeledDiff{-a, -b, q}; }
};

// The invariants of a pair of labels: d = gcd(q1,q2), q1 = d*m1, q2 = d*m2,
// p = gcd((a1*q2+a2*q1)/d, q1*q2/d), f = gcd((b1*q2+b2*q1)/d, p).
struct GcdProfile {
    i64 d = 1;
    i64 m1 = 1;
    i64 m2 = 1;
    i64 p = 1;
    i64 f = 1;
    Rat t_sum;           // a1/q1 + a2/q2 in lowest terms, denominator (d/p)*m1*m2
    i64 x_sum_num = 0;   // B with b1/q1 + b2/q2 = B / x_sum_den, gcd(B, p/f) = 1
    i64 x_sum_den = 1;   // (p/f)*(d/p)*m1*m2
    bool x_sum_zero = false;  // B == 0, forcing f = p
};

Rat reduce_fraction(i64 num, i64 den);

GcdProfile gcd_profile(const LabeledDiff& d1, const LabeledDiff& d2);

// sum_{n=0}^{q-1} e(a n^2 / q) by direct summation
std::complex<double> exact_gauss_sum(i64 a, i64 q);

}  // namespace qlab
