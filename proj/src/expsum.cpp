#include "qlab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double TWO_PI = 2.0 * std::numbers::pi;
constexpr i64 N_GUARD = i64(1) << 24;
constexpr i64 KAHAN_THRESHOLD = i64(1) << 14;

cd e_of(double theta) { return std::polar(1.0, TWO_PI * theta); }

// fractional part computed in extended precision; keeps the seed phases of the
// recurrence accurate when n^2 t is large
double mod1l(long double v) { return (double)(v - std::floor(v)); }

struct KahanSum {
    cd sum = 0.0;
    cd comp = 0.0;
    void add(cd v) {
        cd y = v - comp;
        cd t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

void check_point(i64 N, double x, double t) {
    if (N < 1) throw std::domain_error("N must be >= 1");
    if (N > N_GUARD) throw std::domain_error("N exceeds the 2^24 evaluation guard");
    if (!std::isfinite(x) || !std::isfinite(t)) throw std::domain_error("non-finite evaluation point");
}

std::vector<bool> prime_sieve(i64 N) {
    std::vector<bool> is_prime(N + 1, true);
    if (N >= 0) is_prime[0] = false;
    if (N >= 1) is_prime[1] = false;
    for (i64 p = 2; p * p <= N; ++p)
        if (is_prime[p])
            for (i64 m = p * p; m <= N; m += p) is_prime[m] = false;
    return is_prime;
}

}  // namespace

double weight(double u) {
    double v = u / 2.0;
    double s = 1.0 - v * v;
    if (s <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / s);
}

double CoefficientVector::l1_norm() const {
    double s = 0.0;
    for (cd v : values) s += std::abs(v);
    return s;
}

double CoefficientVector::l2_norm() const {
    double s = 0.0;
    for (cd v : values) s += std::norm(v);
    return std::sqrt(s);
}

CoefficientVector CoefficientVector::constant_normalized(i64 N) {
    CoefficientVector c;
    c.n_min = 1;
    c.n_max = N;
    c.values.assign((size_t)N, cd(1.0 / std::sqrt((double)N), 0.0));
    c.scheme = CoeffScheme::constant_normalized;
    return c;
}

CoefficientVector CoefficientVector::unimodular_random(i64 N, std::uint64_t seed) {
    CoefficientVector c;
    c.n_min = 1;
    c.n_max = N;
    c.values.resize((size_t)N);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double amp = 1.0 / std::sqrt((double)N);
    for (auto& v : c.values) v = std::polar(amp, TWO_PI * unif(rng));
    c.scheme = CoeffScheme::unimodular_random;
    return c;
}

CoefficientVector CoefficientVector::single_frequency(i64 n0) {
    CoefficientVector c;
    c.n_min = n0;
    c.n_max = n0;
    c.values = {cd(1.0, 0.0)};
    c.scheme = CoeffScheme::single_frequency;
    return c;
}

CoefficientVector CoefficientVector::prime_support_cubic(i64 N, double theta) {
    auto is_prime = prime_sieve(N);
    i64 count = std::count(is_prime.begin(), is_prime.end(), true);
    if (count == 0) throw std::domain_error("prime_support_cubic: no primes <= N");
    CoefficientVector c;
    c.n_min = 1;
    c.n_max = N;
    c.values.assign((size_t)N, cd(0.0, 0.0));
    double amp = 1.0 / std::sqrt((double)count);
    for (i64 n = 2; n <= N; ++n)
        if (is_prime[n]) {
            double cubic = (double)n * (double)n * (double)n * theta;
            c.values[(size_t)(n - 1)] = std::polar(amp, TWO_PI * (cubic - std::floor(cubic)));
        }
    c.scheme = CoeffScheme::prime_support_cubic;
    return c;
}

ScaleParams ScaleParams::from_lambda(i64 N, double lambda, double epsilon_c) {
    if (lambda <= 0.0) throw std::domain_error("lambda must be positive");
    ScaleParams p;
    p.N = N;
    p.lambda = lambda;
    p.M = lambda / std::pow((double)N, 0.25);
    p.epsilon_c = epsilon_c;
    return p;
}

ScaleParams ScaleParams::from_M(i64 N, double M, double epsilon_c) {
    if (M <= 0.0) throw std::domain_error("M must be positive");
    ScaleParams p;
    p.N = N;
    p.M = M;
    p.lambda = M * std::pow((double)N, 0.25);
    p.epsilon_c = epsilon_c;
    return p;
}

GridSpec GridSpec::canonical(i64 N, i64 c_t) {
    if (N < 1 || c_t < 1) throw std::domain_error("bad grid parameters");
    GridSpec g;
    g.N = N;
    g.c_t = c_t;
    g.x_count = N;
    g.t_count = c_t * N * N;
    return g;
}

GridSpec GridSpec::capped(i64 N, i64 c_t, i64 t_cap) {
    GridSpec g = canonical(N, c_t);
    if (t_cap < 1) throw std::domain_error("bad t_cap");
    while (g.t_count > t_cap && g.t_count % 2 == 0) g.t_count /= 2;
    return g;
}

cd eval_phase_sum(const CoefficientVector& coeffs, bool weighted, i64 N, double x, double t) {
    check_point(N, x, t);
    i64 n0 = coeffs.n_min;
    i64 n1 = coeffs.n_max;
    long double x0 = (long double)x - std::floor((long double)x);
    long double t0 = (long double)t - std::floor((long double)t);
    // phase(n+1) - phase(n) = x + (2n+1) t, second difference 2t
    cd ph = e_of(mod1l((long double)n0 * x0 + (long double)n0 * (long double)n0 * t0));
    cd step = e_of(mod1l(x0 + (long double)(2 * n0 + 1) * t0));
    cd twist = e_of(mod1l(2.0L * t0));
    bool use_kahan = (n1 - n0 + 1) > KAHAN_THRESHOLD;
    KahanSum ks;
    cd plain = 0.0;
    for (i64 n = n0; n <= n1; ++n) {
        cd term = coeffs.values[(size_t)(n - n0)] * ph;
        if (weighted) term *= weight((double)n / (double)N);
        if (use_kahan)
            ks.add(term);
        else
            plain += term;
        ph *= step;
        step *= twist;
    }
    return use_kahan ? ks.sum : plain;
}

cd eval_phase_sum_naive(const CoefficientVector& coeffs, bool weighted, i64 N, double x, double t) {
    check_point(N, x, t);
    cd s = 0.0;
    for (i64 n = coeffs.n_min; n <= coeffs.n_max; ++n) {
        cd c = coeffs.values[(size_t)(n - coeffs.n_min)];
        if (c == cd(0.0, 0.0)) continue;
        if (weighted) c *= weight((double)n / (double)N);
        long double dn = (long double)n;
        s += c * e_of(mod1l(dn * (long double)x + dn * dn * (long double)t));
    }
    return s;
}

cd eval_kernel(i64 N, double x, double t) {
    check_point(N, x, t);
    i64 n0 = -2 * N;
    long double x0 = (long double)x - std::floor((long double)x);
    long double t0 = (long double)t - std::floor((long double)t);
    cd ph = e_of(mod1l((long double)n0 * x0 + (long double)n0 * (long double)n0 * t0));
    cd step = e_of(mod1l(x0 + (long double)(2 * n0 + 1) * t0));
    cd twist = e_of(mod1l(2.0L * t0));
    bool use_kahan = N > KAHAN_THRESHOLD;
    KahanSum ks;
    cd plain = 0.0;
    for (i64 n = n0; n <= 2 * N; ++n) {
        double w = weight((double)n / (double)N);
        cd term = (w * w) * ph;
        if (use_kahan)
            ks.add(term);
        else
            plain += term;
        ph *= step;
        step *= twist;
    }
    return use_kahan ? ks.sum : plain;
}

SupResult sup_over_t(const CoefficientVector& coeffs, i64 N, double x, const GridSpec& grid) {
    if (grid.t_count < 1) throw std::domain_error("empty t grid");
    SupResult best;
    best.sup_value = -1.0;
    for (i64 k = 0; k < grid.t_count; ++k) {
        double t = grid.t_at(k);
        double v = std::abs(eval_phase_sum(coeffs, false, N, x, t));
        if (v > best.sup_value) {
            best.sup_value = v;
            best.argmax_t = t;
        }
    }
    return best;
}

void fft_pow2(std::vector<cd>& a) {
    size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::domain_error("fft size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = TWO_PI / (double)len;
        cd wl = std::polar(1.0, ang);
        for (size_t i = 0; i < n; i += len) {
            cd w = 1.0;
            for (size_t k = 0; k < len / 2; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<double> sup_over_t_all_x(const CoefficientVector& coeffs, i64 N, const GridSpec& grid) {
    size_t X = (size_t)grid.x_count;
    std::vector<double> sup(X, -1.0);
    bool fft_ok = (X & (X - 1)) == 0 && X > 1;
    if (!fft_ok) {
        for (size_t j = 0; j < X; ++j)
            sup[j] = sup_over_t(coeffs, N, grid.x_at((i64)j), grid).sup_value;
        return sup;
    }
    i64 n0 = coeffs.n_min;
    i64 n1 = coeffs.n_max;
    std::vector<cd> bins(X);
    size_t m0 = (size_t)(((n0 % (i64)X) + (i64)X) % (i64)X);
    for (i64 k = 0; k < grid.t_count; ++k) {
        long double t0 = (long double)k / (long double)grid.t_count;
        std::fill(bins.begin(), bins.end(), cd(0.0, 0.0));
        // c_n e(n^2 t) by recurrence, folded modulo X; the FFT then supplies e(n x_j)
        cd ph = e_of(mod1l((long double)n0 * (long double)n0 * t0));
        cd step = e_of(mod1l((long double)(2 * n0 + 1) * t0));
        cd twist = e_of(mod1l(2.0L * t0));
        size_t m = m0;
        for (i64 n = n0; n <= n1; ++n) {
            bins[m] += coeffs.values[(size_t)(n - n0)] * ph;
            ph *= step;
            step *= twist;
            if (++m == X) m = 0;
        }
        fft_pow2(bins);
        for (size_t j = 0; j < X; ++j) {
            double v = std::abs(bins[j]);
            if (v > sup[j]) sup[j] = v;
        }
        // bins was overwritten in place; refill next round
    }
    return sup;
}

double level_set_measure(const CoefficientVector& coeffs, const ScaleParams& params, const GridSpec& grid) {
    if (params.lambda < 0.0) throw std::domain_error("lambda must be non-negative");
    auto sup = sup_over_t_all_x(coeffs, params.N, grid);
    i64 hits = 0;
    for (double v : sup)
        if (v >= params.lambda) ++hits;
    return (double)hits / (double)grid.x_count;
}

double lp_norm_of_sup(const CoefficientVector& coeffs, i64 N, double p, const GridSpec& grid) {
    if (p < 1.0) throw std::domain_error("p must be >= 1");
    auto sup = sup_over_t_all_x(coeffs, N, grid);
    double s = 0.0;
    for (double v : sup) s += std::pow(v, p);
    return std::pow(s / (double)grid.x_count, 1.0 / p);
}

}  // namespace qlab
