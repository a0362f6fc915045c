#include "qlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace qlab {

namespace {

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

void append_diagonal(std::vector<TorusPoint>& points, i64 r) {
    for (i64 c = -(r - 1); c <= r - 1; ++c) {
        if (c == 0) continue;
        points.push_back(TorusPoint{Rat(c, r), Rat(c, r)});
    }
}

}  // namespace

std::string kind_name(ConstructionKind k) {
    switch (k) {
        case ConstructionKind::sharp_c1: return "sharp_c1";
        case ConstructionKind::enemies: return "enemies";
        case ConstructionKind::fixed_denominator: return "fixed_denominator";
        case ConstructionKind::prime_reciprocal: return "prime_reciprocal";
        case ConstructionKind::prime_reciprocal_modified: return "prime_reciprocal_modified";
        case ConstructionKind::bipartite: return "bipartite";
        case ConstructionKind::sqrt_admissible: return "sqrt_admissible";
        case ConstructionKind::random_baseline: return "random_baseline";
    }
    return "unknown";
}

bool is_separated(const std::vector<TorusPoint>& points, i64 N) {
    std::vector<Rat> xs;
    xs.reserve(points.size());
    for (const auto& z : points) xs.push_back(z.x);
    std::sort(xs.begin(), xs.end());
    Rat step(1, N);
    for (size_t i = 1; i < xs.size(); ++i)
        if (xs[i] - xs[i - 1] < step) return false;
    return true;
}

std::vector<i64> primes_in_block(i64 X) {
    std::vector<i64> out;
    for (i64 p = X; p < 2 * X; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

i64 sqrt_block(i64 Q) {
    i64 s = 1;
    while (s * s < Q) s <<= 1;
    return s;
}

Construction build_sharp_c1(i64 N, i64 q, const DyadicLevel& level, double M) {
    if (!is_prime(q)) throw std::domain_error("sharp_c1: q must be prime");
    if (dyadic_block(q) != level.Q) throw std::domain_error("sharp_c1: q is not in the Q-block");
    if (!level.valid_for(N)) throw std::domain_error("sharp_c1: invalid level for N");
    if (M <= 0.0) throw std::domain_error("sharp_c1: M must be positive");
    i64 J = (i64)std::floor(std::sqrt((double)level.pow2l()) / (M * M));
    if (J < 2) throw std::domain_error("sharp_c1: infeasible parameters, J < 2");
    Rat width = Rat(1) / Rat::make128((i128)level.Q * level.pow2l(), 1);
    Rat step(1, N);
    // maximal 1/N-separated family, greedy from the left endpoint of each
    // neighborhood of b/q
    std::vector<std::pair<Rat, i64>> family;  // (x_i, b)
    Rat prev;
    bool have_prev = false;
    for (i64 b = 0; b < q; ++b) {
        Rat lo = Rat(b, q) - width;
        Rat hi = Rat(b, q) + width;
        Rat cand = lo;
        if (have_prev && prev + step > cand) cand = prev + step;
        while (cand <= hi) {
            family.emplace_back(cand, b);
            prev = cand;
            have_prev = true;
            cand = cand + step;
        }
    }
    std::vector<TorusPoint> raw;
    for (const auto& [xi, b] : family)
        for (i64 j = 2; j <= J; ++j)
            raw.push_back(TorusPoint{xi + Rat(j) * width, Rat(b, q)});
    // shifts by different j may land closer than 1/N; keep a greedy subfamily
    std::sort(raw.begin(), raw.end(),
              [](const TorusPoint& a, const TorusPoint& b) { return a.x < b.x || (a.x == b.x && a.t < b.t); });
    Construction c;
    c.kind = ConstructionKind::sharp_c1;
    for (const auto& z : raw)
        if (c.points.empty() || z.x - c.points.back().x >= step) c.points.push_back(z);
    c.predicted["R"] = (double)J * (double)N / (double)level.pow2l();
    c.predicted["J"] = (double)J;
    c.predicted["pair_fraction_min"] = 1.0 / (2.0 * (double)J);
    return c;
}

EnemiesResult build_enemies(i64 N, i64 Q, i64 q, i64 r, i64 a, i64 b) {
    if (q < 1 || q > Q || r < 1 || r > Q / q) throw std::domain_error("enemies: need 1<=q<=Q, 1<=r<=Q/q");
    if (r * q * N < Q * Q) throw std::domain_error("enemies: need rq >= Q^2/N");
    if (a < 0 || a > q - 1 || b < 0 || b > q - 1) throw std::domain_error("enemies: a,b out of range");
    EnemiesResult res;
    res.N = N;
    res.Q = Q;
    res.q = q;
    res.r = r;
    res.a = a;
    res.b = b;
    res.t = Rat(a, q);
    res.x = Rat(b, r * q);
    for (i64 n = r; n * q < 2 * Q; n += r) {
        if (n * q < Q) continue;
        i64 nq = n * q;
        // a1 coprime to nq with a2 = na - a1 also coprime and nonzero
        i64 a1 = 0;
        for (i64 cand = 1; cand <= nq - 1; ++cand) {
            i64 a2 = n * a - cand;
            if (a2 == 0) continue;
            if (gcd64(cand, nq) == 1 && gcd64(a2 < 0 ? -a2 : a2, nq) == 1) {
                a1 = cand;
                break;
            }
        }
        if (a1 == 0) continue;
        for (i64 b1 = 1; b1 <= nq - 1; ++b1) {
            if (gcd64(b1, nq) != 1) continue;
            res.members.push_back(EnemiesMember{n, b1, a1});
            res.fractions.push_back(Rat(b1, nq));
        }
    }
    std::sort(res.fractions.begin(), res.fractions.end());
    return res;
}

Construction build_fixed_denominator(i64 q) {
    if (!is_prime(q)) throw std::domain_error("fixed_denominator: q must be prime");
    if (q > (1 << 10)) throw std::domain_error("fixed_denominator: q exceeds guard");
    Construction c;
    c.kind = ConstructionKind::fixed_denominator;
    for (i64 a = -(q - 1); a <= q - 1; ++a) c.points.push_back(TorusPoint{Rat(a, q), Rat(a, q)});
    c.predicted["R"] = (double)(2 * q - 1);
    c.predicted["D"] = (double)dyadic_block(q);
    c.predicted["P"] = 1.0;
    c.predicted["F"] = 1.0;
    c.predicted["K"] = 1.0;
    return c;
}

Construction build_prime_reciprocal(i64 Q, i64 modified_d) {
    Construction c;
    if (modified_d == 0) {
        c.kind = ConstructionKind::prime_reciprocal;
        i64 s = sqrt_block(Q);
        auto primes = primes_in_block(s);
        if (primes.size() < 2) throw std::domain_error("prime_reciprocal: not enough primes in the block");
        for (i64 rp : primes) append_diagonal(c.points, rp);
        c.predicted["D"] = (double)s;
        c.predicted["P"] = (double)s;
        c.predicted["F"] = (double)s;
        c.predicted["K"] = 1.0;
    } else {
        if (!is_prime(modified_d)) throw std::domain_error("prime_reciprocal: d must be prime");
        c.kind = ConstructionKind::prime_reciprocal_modified;
        i64 s = 1;
        while (modified_d * s * s < Q) s <<= 1;
        std::vector<i64> primes;
        for (i64 p = 2; p < 2 * s; ++p)
            if (is_prime(p) && p != modified_d) primes.push_back(p);
        if (primes.size() < 2) throw std::domain_error("prime_reciprocal: not enough primes");
        for (i64 qp : primes) {
            i64 dq = modified_d * qp;
            c.points.push_back(TorusPoint{Rat(1, dq), Rat(1, dq)});
        }
        c.predicted["D"] = std::sqrt((double)Q * (double)modified_d);
        c.predicted["P"] = std::sqrt((double)Q / (double)modified_d);
        c.predicted["F"] = c.predicted["P"];
    }
    return c;
}

Construction build_bipartite(i64 Q1, i64 Q2) {
    if (!is_pow2(Q1) || !is_pow2(Q2) || Q1 == Q2) throw std::domain_error("bipartite: need distinct powers of two");
    auto p1 = primes_in_block(Q1);
    auto p2 = primes_in_block(Q2);
    if (p1.empty() || p2.empty()) throw std::domain_error("bipartite: a side has no primes");
    std::vector<TorusPoint> v1, v2;
    for (i64 rp : p1) append_diagonal(v1, rp);
    for (i64 rp : p2) append_diagonal(v2, rp);
    size_t side = std::min(v1.size(), v2.size());
    v1.resize(side);
    v2.resize(side);
    Construction c;
    c.kind = ConstructionKind::bipartite;
    c.points = v1;
    c.points.insert(c.points.end(), v2.begin(), v2.end());
    c.predicted["Q"] = (double)(Q1 * Q2);
    c.predicted["D1"] = (double)Q1;
    c.predicted["D2"] = (double)Q2;
    c.predicted["K"] = 1.0;
    return c;
}

SqrtAdmissible build_sqrt_admissible(i64 r1, i64 r2, i64 r3, i64 c1, i64 c2, i64 d1, i64 d2) {
    if (!is_prime(r1) || !is_prime(r2) || !is_prime(r3) || r1 == r2 || r1 == r3 || r2 == r3)
        throw std::domain_error("sqrt_admissible: need three distinct primes");
    if (c1 < 1 || c1 > r1 - 1 || c2 < 1 || c2 > r2 - 1 || d1 < 1 || d1 > r1 - 1 || d2 < 1 || d2 > r2 - 1)
        throw std::domain_error("sqrt_admissible: numerators out of range");
    const i64 c3 = 1, d3 = 1;
    SqrtAdmissible out;
    out.t = Rat(c2, r2) - Rat(c1, r1);
    out.x = Rat(d2, r2) - Rat(d1, r1);
    out.label1 = LabeledDiff{c3 * r1 - c1 * r3, d3 * r1 - d1 * r3, r1 * r3};
    out.label2 = LabeledDiff{c2 * r3 - c3 * r2, d2 * r3 - d3 * r2, r2 * r3};
    if (!out.label1.valid() || !out.label2.valid())
        throw std::domain_error("sqrt_admissible: constructed labels are invalid");
    out.profile = gcd_profile(out.label1, out.label2);
    return out;
}

Construction build_random_baseline(i64 R, i64 N, const DyadicLevel& level, std::uint64_t seed) {
    if (R > (1 << 12)) throw std::domain_error("random_baseline: R exceeds guard");
    if (R > N / 2) throw std::domain_error("random_baseline: R too large for the 1/N grid");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> grid(0, N - 1);
    std::set<i64> ks;
    while ((i64)ks.size() < R) ks.insert(grid(rng));
    Construction c;
    c.kind = ConstructionKind::random_baseline;
    for (i64 k : ks) c.points.push_back(TorusPoint{Rat(k, N), Rat(k, N)});
    c.predicted["density"] = (double)level.Q / ((double)N * (double)level.pow2l());
    return c;
}

}  // namespace qlab
