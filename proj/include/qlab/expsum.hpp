#pragma once

#include <complex>
#include <vector>
#include <cstdint>
#include "qlab/rational.hpp"

namespace qlab {

using cd = std::complex<double>;

// Fixed smooth bump supported on [-2,2]: w(u) = exp(1 - 1/(1-(u/2)^2)), w(0)=1.
double weight(double u);

enum class CoeffScheme {
    constant_normalized,
    unimodular_random,
    single_frequency,
    prime_support_cubic,
    custom,
};

struct CoefficientVector {
    i64 n_min = 1;
    i64 n_max = 1;
    std::vector<cd> values;  // indexed by n - n_min
    CoeffScheme scheme = CoeffScheme::custom;

    cd at(i64 n) const {
        if (n < n_min || n > n_max) return 0.0;
        return values[(size_t)(n - n_min)];
    }
    double l1_norm() const;
    double l2_norm() const;

    static CoefficientVector constant_normalized(i64 N);
    static CoefficientVector unimodular_random(i64 N, std::uint64_t seed);
    static CoefficientVector single_frequency(i64 n0);
    static CoefficientVector prime_support_cubic(i64 N, double theta);
};

struct ScaleParams {
    i64 N = 1;
    double lambda = 1.0;  // level threshold, lambda = M * N^{1/4}
    double M = 1.0;
    double epsilon_c = 1.0;

    static ScaleParams from_lambda(i64 N, double lambda, double epsilon_c = 1.0);
    static ScaleParams from_M(i64 N, double M, double epsilon_c = 1.0);
};

// Uniform grids: x_j = j / x_count on [0,1), t_k = k / t_count on [0,1).
// Canonical resolution is x_count = N, t_count = c_t * N^2.
struct GridSpec {
    i64 N = 1;
    i64 c_t = 4;
    i64 x_count = 1;
    i64 t_count = 1;

    double x_at(i64 j) const { return (double)j / (double)x_count; }
    double t_at(i64 k) const { return (double)k / (double)t_count; }

    static GridSpec canonical(i64 N, i64 c_t = 4);
    // canonical t grid decimated to at most t_cap samples (stride divides c_t*N^2)
    static GridSpec capped(i64 N, i64 c_t, i64 t_cap);
};

// sum over n of a_n [w(n/N) if weighted] e(n x + n^2 t), e(u) = exp(2 pi i u).
// Phases advance by a second-order recurrence; no per-term transcendentals.
cd eval_phase_sum(const CoefficientVector& coeffs, bool weighted, i64 N, double x, double t);

// reference evaluation with per-term transcendentals, for cross-checks
cd eval_phase_sum_naive(const CoefficientVector& coeffs, bool weighted, i64 N, double x, double t);

// K(x,t) = sum_{|n| <= 2N} w(n/N)^2 e(n x + n^2 t)
cd eval_kernel(i64 N, double x, double t);

struct SupResult {
    double sup_value = 0.0;
    double argmax_t = 0.0;
};

SupResult sup_over_t(const CoefficientVector& coeffs, i64 N, double x, const GridSpec& grid);

// sup over the grid's t samples of |phase sum|, for every x_j = j/x_count at once.
// Uses an FFT across x per t sample when x_count is a power of two.
std::vector<double> sup_over_t_all_x(const CoefficientVector& coeffs, i64 N, const GridSpec& grid);

double level_set_measure(const CoefficientVector& coeffs, const ScaleParams& params, const GridSpec& grid);

double lp_norm_of_sup(const CoefficientVector& coeffs, i64 N, double p, const GridSpec& grid);

// in-place radix-2 DFT with kernel e(+2 pi i jk / n); n must be a power of two
void fft_pow2(std::vector<cd>& a);

}  // namespace qlab
