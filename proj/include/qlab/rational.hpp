#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <compare>

namespace qlab {

using i64 = std::int64_t;
using i128 = __int128;

inline i128 iabs128(i128 x) { return x < 0 ? -x : x; }

inline i128 gcd128(i128 a, i128 b) {
    a = iabs128(a);
    b = iabs128(b);
    while (b != 0) {
        i128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline i64 gcd64(i64 a, i64 b) { return (i64)gcd128(a, b); }

inline i64 checked_i64(i128 v, const char* what) {
    if (v > (i128)INT64_MAX || v < (i128)INT64_MIN)
        throw std::overflow_error(std::string("integer overflow in ") + what);
    return (i64)v;
}

// Exact rational, always in lowest terms with positive denominator.
// Intermediates are 128-bit; results must fit in 64 bits or we throw.
struct Rat {
    i64 num = 0;
    i64 den = 1;

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i64 n, i64 d) { *this = make128(n, d); }

    static Rat make128(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat r;
        r.num = checked_i64(n, "rational numerator");
        r.den = checked_i64(d, "rational denominator");
        return r;
    }

    Rat operator+(const Rat& o) const {
        return make128((i128)num * o.den + (i128)o.num * den, (i128)den * o.den);
    }
    Rat operator-(const Rat& o) const {
        return make128((i128)num * o.den - (i128)o.num * den, (i128)den * o.den);
    }
    Rat operator*(const Rat& o) const {
        return make128((i128)num * o.num, (i128)den * o.den);
    }
    Rat operator/(const Rat& o) const {
        if (o.num == 0) throw std::domain_error("rational division by zero");
        return make128((i128)num * o.den, (i128)den * o.num);
    }
    Rat operator-() const {
        Rat r;
        r.num = -num;
        r.den = den;
        return r;
    }
    std::strong_ordering operator<=>(const Rat& o) const {
        i128 lhs = (i128)num * o.den;
        i128 rhs = (i128)o.num * den;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }

    Rat abs() const { return num < 0 ? -*this : *this; }

    i64 floor() const {
        i64 q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }

    // representative in [0,1)
    Rat mod1() const {
        i64 f = floor();
        Rat r;
        r.num = checked_i64((i128)num - (i128)f * den, "mod1");
        r.den = den;
        return r;
    }

    // representative in [-1/2, 1/2)
    Rat mod1_centered() const {
        Rat r = mod1();
        if (Rat(2 * 1) * r >= Rat(1)) return r - Rat(1);
        return r;
    }

    double to_double() const { return (double)num / (double)den; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

inline bool is_pow2(i64 x) { return x > 0 && (x & (x - 1)) == 0; }

// largest power of two <= x (x >= 1)
inline i64 dyadic_block(i64 x) {
    if (x < 1) throw std::domain_error("dyadic_block of non-positive value");
    i64 b = 1;
    while (b * 2 <= x) b *= 2;
    return b;
}

inline int log2_exact(i64 x) {
    if (!is_pow2(x)) throw std::domain_error("not a power of two");
    int l = 0;
    while ((i64(1) << l) < x) ++l;
    return l;
}

// Dyadic scale pair: denominator block [Q, 2Q) and distance level l.
struct DyadicLevel {
    i64 Q = 1;  // power of two
    int l = 0;

    i64 pow2l() const { return i64(1) << l; }

    bool valid_for(i64 N) const {
        return is_pow2(Q) && Q >= 1 && Q <= N && l >= 0 && pow2l() * Q <= N;
    }
};

// max l with 2^l <= N / Q_block(q)
inline int max_level(i64 N, i64 q) {
    i64 Q = dyadic_block(q);
    int l = 0;
    while ((i64(1) << (l + 1)) * Q <= N) ++l;
    return l;
}

struct TorusPoint {
    Rat x;
    Rat t;
    bool operator==(const TorusPoint& o) const { return x == o.x && t == o.t; }
};

}  // namespace qlab
