#include "wrem/kernels.hpp"

#include <cmath>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define WREM_AVX2_BODY 1
#endif

namespace wrem::kernels::avx2 {

#ifdef WREM_AVX2_BODY

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline __m256d vabs(__m256d x) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(x, mask);
}

} // namespace

bool available() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
}

double weighted_abs_pow_sum(const double* v, const double* m, std::size_t n, double p) {
    if (p != 1.0 && p != 2.0) return scalar::weighted_abs_pow_sum(v, m, n, p);
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    if (p == 1.0) {
        for (; i + 8 <= n; i += 8) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(m + i), vabs(_mm256_loadu_pd(v + i)), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(m + i + 4), vabs(_mm256_loadu_pd(v + i + 4)), acc1);
        }
    } else {
        for (; i + 8 <= n; i += 8) {
            __m256d a = _mm256_loadu_pd(v + i), b = _mm256_loadu_pd(v + i + 4);
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(m + i), _mm256_mul_pd(a, a), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(m + i + 4), _mm256_mul_pd(b, b), acc1);
        }
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    return s + scalar::weighted_abs_pow_sum(v + i, m + i, n - i, p);
}

double weighted_sum(const double* v, const double* m, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(m + i), _mm256_loadu_pd(v + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(m + i + 4), _mm256_loadu_pd(v + i + 4), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    return s + scalar::weighted_sum(v + i, m + i, n - i);
}

void scaled_diff(const double* a, const double* b, double* out, std::size_t n, double scale) {
    const __m256d sc = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(a + i)), sc));
    scalar::scaled_diff(a + i, b + i, out + i, n - i, scale);
}

void magnitude(const double* x, const double* y, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(x + i), b = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b))));
    }
    scalar::magnitude(x + i, y + i, out + i, n - i);
}

#else

bool available() { return false; }
double weighted_abs_pow_sum(const double* v, const double* m, std::size_t n, double p) {
    return scalar::weighted_abs_pow_sum(v, m, n, p);
}
double weighted_sum(const double* v, const double* m, std::size_t n) { return scalar::weighted_sum(v, m, n); }
void scaled_diff(const double* a, const double* b, double* out, std::size_t n, double scale) {
    scalar::scaled_diff(a, b, out, n, scale);
}
void magnitude(const double* x, const double* y, double* out, std::size_t n) { scalar::magnitude(x, y, out, n); }

#endif

} // namespace wrem::kernels::avx2
