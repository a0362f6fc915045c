#include "qlab/labels.hpp"

#include <cmath>
#include <numbers>

namespace qlab {

Rat reduce_fraction(i64 num, i64 den) {
    if (den == 0) throw std::domain_error("reduce_fraction: zero denominator");
    return Rat(num, den);
}

GcdProfile gcd_profile(const LabeledDiff& l1, const LabeledDiff& l2) {
    if (!l1.valid()) throw std::invalid_argument("gcd_profile: first label violates gcd(a,q)=1 or |a|,|b|<=q-1");
    if (!l2.valid()) throw std::invalid_argument("gcd_profile: second label violates gcd(a,q)=1 or |a|,|b|<=q-1");

    GcdProfile g;
    g.d = gcd64(l1.q, l2.q);
    g.m1 = l1.q / g.d;
    g.m2 = l2.q / g.d;

    // (a1*q2 + a2*q1)/d = a1*m2 + a2*m1, and q1*q2/d = d*m1*m2
    i128 sa = (i128)l1.a * g.m2 + (i128)l2.a * g.m1;
    i128 dm1m2 = (i128)g.d * g.m1 * g.m2;
    g.p = checked_i64(gcd128(sa, dm1m2), "gcd_profile p");
    if (sa == 0) g.p = checked_i64(dm1m2, "gcd_profile p");  // gcd(0, n) = n

    g.t_sum = Rat::make128(sa, dm1m2);

    i128 sb = (i128)l1.b * g.m2 + (i128)l2.b * g.m1;
    g.f = checked_i64(gcd128(sb, g.p), "gcd_profile f");
    if (sb == 0) {
        g.f = g.p;
        g.x_sum_zero = true;
    }
    g.x_sum_num = checked_i64(sb / g.f, "gcd_profile x_sum_num");
    g.x_sum_den = checked_i64(dm1m2 / g.f, "gcd_profile x_sum_den");
    return g;
}

std::complex<double> exact_gauss_sum(i64 a, i64 q) {
    if (q < 1) throw std::domain_error("exact_gauss_sum: q must be positive");
    i64 aa = a % q;
    if (aa < 0) aa += q;
    if (gcd64(aa == 0 ? q : aa, q) != 1 && q != 1)
        throw std::domain_error("exact_gauss_sum: gcd(a,q) must be 1");
    std::complex<double> s = 0.0;
    for (i64 n = 0; n < q; ++n) {
        i64 r = (i64)(((i128)aa * n % q) * n % q);
        s += std::polar(1.0, 2.0 * std::numbers::pi * (double)r / (double)q);
    }
    return s;
}

}  // namespace qlab
