#include "qlab/arcs.hpp"
#include "qlab/expsum.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qlab {

namespace {

bool in_closed(const Rat& v, const Rat& lo, const Rat& hi) { return lo <= v && v <= hi; }

// distance of v to the nearest integer multiple shift of the interval around c,
// i.e. membership of v in [c-w, c+w] modulo 1
bool near_mod1(const Rat& v, const Rat& c, const Rat& w) {
    Rat d = (v - c).mod1_centered();
    return d.abs() <= w;
}

i64 phi(i64 q) {
    i64 r = q, n = q;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

}  // namespace

ArcCell make_arc_cell(const DyadicLevel& level, i64 N, i64 q, i64 a, i64 b, const Rat& eps_c) {
    ArcCell c;
    c.level = level;
    c.q = q;
    c.a = a;
    c.b = b;
    Rat wx = eps_c / Rat::make128((i128)level.pow2l() * q, 1);
    Rat wt = Rat(1) / Rat::make128((i128)level.pow2l() * q * N, 1);
    Rat xc(b, q), tc(a, q);
    c.x_lo = xc - wx;
    c.x_hi = xc + wx;
    c.t_lo = tc - wt;
    c.t_hi = tc + wt;
    return c;
}

BestRational best_rational_t(const Rat& t, i64 N) {
    if (N < 1) throw std::domain_error("best_rational_t: N must be >= 1");
    // continued-fraction convergents of t, ascending denominator
    i64 p_prev = 1, q_prev = 0;
    i64 p_cur = t.floor(), q_cur = 1;
    Rat rem = t - Rat(p_cur);
    BestRational out;
    while (true) {
        if (q_cur <= N) {
            Rat approx(p_cur, q_cur);
            Rat err = (t - approx).abs();
            // |t - a/q| <= 1/(Nq)
            if (err * Rat::make128((i128)N * q_cur, 1) <= Rat(1)) {
                out.frac = approx;
                i64 Q = dyadic_block(q_cur);
                int lmax = max_level(N, q_cur);
                int l;
                if (err.num == 0) {
                    l = lmax;
                } else {
                    // largest l with 2^l * N * q * err <= 1
                    l = 0;
                    Rat scaled = err * Rat::make128((i128)N * q_cur, 1);
                    while (l < lmax && Rat::make128(i64(1) << (l + 1), 1) * scaled <= Rat(1)) ++l;
                }
                out.level = DyadicLevel{Q, l};
                return out;
            }
        } else {
            throw std::logic_error("best_rational_t: Dirichlet approximation not found");
        }
        // next convergent
        if (rem.num == 0) throw std::logic_error("best_rational_t: exhausted exact expansion");
        Rat inv = Rat(1) / rem;
        i64 a_k = inv.floor();
        rem = inv - Rat(a_k);
        i64 p_next = checked_i64((i128)a_k * p_cur + p_prev, "convergent numerator");
        i64 q_next = checked_i64((i128)a_k * q_cur + q_prev, "convergent denominator");
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
}

namespace {

// smallest valid b for (x, q) or -1; candidates via floor/ceil when the window
// is narrower than half the spacing, otherwise linear scan from 0
i64 smallest_b(const Rat& x, i64 q, const Rat& wx) {
    if (Rat(2) * wx * Rat(q) < Rat(1)) {
        Rat xq = x * Rat(q);
        i64 f = xq.floor();
        i64 c1 = ((f % q) + q) % q;
        i64 c2 = (((f + 1) % q) + q) % q;
        i64 lo = std::min(c1, c2), hi = std::max(c1, c2);
        if (near_mod1(x, Rat(lo, q), wx)) return lo;
        if (near_mod1(x, Rat(hi, q), wx)) return hi;
        return -1;
    }
    for (i64 b = 0; b < q; ++b)
        if (near_mod1(x, Rat(b, q), wx)) return b;
    return -1;
}

bool t_matches(const Rat& t, i64 q, i64 a, i64 N, const DyadicLevel& level, bool dyadic) {
    Rat d = (t - Rat(a, q)).mod1_centered().abs();
    Rat wt = Rat(1) / Rat::make128((i128)level.pow2l() * q * N, 1);
    if (dyadic && level.pow2l() * level.Q < N) {
        Rat lo = Rat(1) / Rat::make128((i128)level.pow2l() * 2 * q * N, 1);
        return lo <= d && d < wt;
    }
    return d <= wt;
}

// valid a for the t-window at (q, level) or -1 (unique since window < spacing/2)
i64 find_a(const Rat& t, i64 q, i64 N, const DyadicLevel& level, bool dyadic) {
    Rat tq = t * Rat(q);
    for (i64 cand : {tq.floor(), tq.floor() + 1}) {
        i64 a = ((cand % q) + q) % q;
        bool reduced = (q == 1) ? (a == 0) : (a != 0 && gcd64(a, q) == 1);
        if (!reduced) continue;
        if (t_matches(t, q, a, N, level, dyadic)) return a;
    }
    return -1;
}

}  // namespace

std::optional<ArcCell> arc_membership(const TorusPoint& z, const DyadicLevel& level, i64 N,
                                      bool dyadic, const Rat& eps_c) {
    if (!level.valid_for(N)) throw std::domain_error("arc_membership: invalid level for N");
    Rat x = z.x.mod1();
    Rat t = z.t.mod1();
    for (i64 q = level.Q; q < 2 * level.Q; ++q) {
        i64 a = find_a(t, q, N, level, dyadic);
        if (a < 0) continue;
        Rat wx = eps_c / Rat::make128((i128)level.pow2l() * q, 1);
        i64 b = smallest_b(x, q, wx);
        if (b < 0) continue;
        return make_arc_cell(level, N, q, a, b, eps_c);
    }
    return std::nullopt;
}

std::vector<ArcCell> arc_membership_all(const TorusPoint& z, const DyadicLevel& level, i64 N,
                                        bool dyadic, const Rat& eps_c) {
    if (!level.valid_for(N)) throw std::domain_error("arc_membership_all: invalid level for N");
    std::vector<ArcCell> out;
    Rat x = z.x.mod1();
    Rat t = z.t.mod1();
    for (i64 q = level.Q; q < 2 * level.Q; ++q) {
        i64 a = find_a(t, q, N, level, dyadic);
        if (a < 0) continue;
        Rat wx = eps_c / Rat::make128((i128)level.pow2l() * q, 1);
        for (i64 b = 0; b < q; ++b)
            if (near_mod1(x, Rat(b, q), wx)) out.push_back(make_arc_cell(level, N, q, a, b, eps_c));
    }
    return out;
}

i64 count_arcs(const DyadicLevel& level) {
    i64 total = 0;
    for (i64 q = level.Q; q < 2 * level.Q; ++q) total += (q == 1 ? 1 : phi(q) * q);
    return total;
}

std::vector<ArcCell> enumerate_arcs(const DyadicLevel& level, i64 N, const Rat& eps_c) {
    if (!level.valid_for(N)) throw std::domain_error("enumerate_arcs: invalid level for N");
    if (count_arcs(level) > 100000000LL) throw std::domain_error("enumerate_arcs: cell count exceeds guard");
    std::vector<ArcCell> out;
    out.reserve((size_t)count_arcs(level));
    for (i64 q = level.Q; q < 2 * level.Q; ++q) {
        if (q == 1) {
            out.push_back(make_arc_cell(level, N, 1, 0, 0, eps_c));
            continue;
        }
        for (i64 a = 1; a < q; ++a) {
            if (gcd64(a, q) != 1) continue;
            for (i64 b = 0; b < q; ++b) out.push_back(make_arc_cell(level, N, q, a, b, eps_c));
        }
    }
    return out;
}

KernelBoundReport kernel_bound_report(i64 N, const DyadicLevel& level, i64 sample_count,
                                      std::uint64_t rng_seed, double eps_c) {
    if (sample_count < 1) throw std::domain_error("kernel_bound_report: sample_count must be >= 1");
    if (!level.valid_for(N)) throw std::domain_error("kernel_bound_report: invalid level for N");
    KernelBoundReport rep;
    rep.N = N;
    rep.level = level;
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double sqrtN = std::sqrt((double)N);
    double scale_on = std::sqrt((double)level.pow2l()) * sqrtN;

    // on-arc: random cell, uniform point inside it
    std::uniform_int_distribution<i64> qd(level.Q, 2 * level.Q - 1);
    for (i64 s = 0; s < sample_count; ++s) {
        i64 q = qd(rng);
        i64 a, b;
        if (q == 1) {
            a = 0;
        } else {
            do {
                a = 1 + (i64)(unif(rng) * (double)(q - 1));
                if (a > q - 1) a = q - 1;
            } while (gcd64(a, q) != 1);
        }
        b = (i64)(unif(rng) * (double)q);
        if (b > q - 1) b = q - 1;
        double wx = eps_c / ((double)level.pow2l() * (double)q);
        double wt = 1.0 / ((double)level.pow2l() * (double)q * (double)N);
        double x = (double)b / (double)q + (2.0 * unif(rng) - 1.0) * wx;
        double t = (double)a / (double)q + (2.0 * unif(rng) - 1.0) * wt;
        KernelSample ks;
        ks.x = x;
        ks.t = t;
        ks.q = q;
        ks.a = a;
        ks.b = b;
        ks.Q = level.Q;
        ks.l = level.l;
        ks.abs_K = std::abs(eval_kernel(N, x, t));
        ks.ratio = ks.abs_K / scale_on;
        ks.on_arc = true;
        rep.max_on_ratio = std::max(rep.max_on_ratio, ks.ratio);
        rep.samples.push_back(ks);
    }

    // off-arc: rejection sampling; the t coordinate fixes (q,a,l) through its
    // best rational approximation, then x must avoid every b/q window at that l
    const i64 max_attempts = sample_count * 2000;
    i64 accepted = 0, attempts = 0;
    const i64 rat_den = i64(1) << 40;
    while (accepted < sample_count && attempts < max_attempts) {
        ++attempts;
        double x = unif(rng);
        double t = unif(rng);
        Rat tr((i64)std::llround(t * (double)rat_den), rat_den);
        BestRational br = best_rational_t(tr.mod1(), N);
        i64 q = br.frac.den;
        double thr = eps_c * (double)q / ((double)br.level.Q * (double)br.level.pow2l());
        double xq = x * (double)q;
        double dist = std::abs(xq - std::llround(xq));
        if (dist <= thr) continue;  // inside an x-window, not off-arc
        KernelSample ks;
        ks.x = x;
        ks.t = t;
        ks.q = q;
        ks.a = ((br.frac.num % q) + q) % q;
        ks.b = -1;
        ks.Q = br.level.Q;
        ks.l = br.level.l;
        ks.abs_K = std::abs(eval_kernel(N, x, t));
        ks.ratio = ks.abs_K / sqrtN;
        ks.on_arc = false;
        rep.max_off_ratio = std::max(rep.max_off_ratio, ks.ratio);
        rep.samples.push_back(ks);
        ++accepted;
    }
    rep.off_rejections = attempts - accepted;
    rep.off_sampling_failed = accepted < sample_count;
    return rep;
}

}  // namespace qlab
