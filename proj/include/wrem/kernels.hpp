#pragma once

#include <cstddef>

// Hot grid loops. Each kernel has a scalar reference and an AVX2 variant;
// the dispatcher picks one at runtime.
namespace wrem::kernels {

enum class Isa { scalar, avx2 };

Isa detected_isa();
Isa active_isa();
void set_isa(Isa isa);  // forcing avx2 on a machine without it falls back to scalar
const char* isa_name(Isa isa);

// sum_i m[i] * |v[i]|^p
double weighted_abs_pow_sum(const double* v, const double* m, std::size_t n, double p);
// sum_i m[i] * v[i]
double weighted_sum(const double* v, const double* m, std::size_t n);
// out[i] = (b[i] - a[i]) * scale
void scaled_diff(const double* a, const double* b, double* out, std::size_t n, double scale);
// out[i] = sqrt(x[i]^2 + y[i]^2)
void magnitude(const double* x, const double* y, double* out, std::size_t n);

namespace scalar {
double weighted_abs_pow_sum(const double* v, const double* m, std::size_t n, double p);
double weighted_sum(const double* v, const double* m, std::size_t n);
void scaled_diff(const double* a, const double* b, double* out, std::size_t n, double scale);
void magnitude(const double* x, const double* y, double* out, std::size_t n);
}

namespace avx2 {
bool available();
double weighted_abs_pow_sum(const double* v, const double* m, std::size_t n, double p);
double weighted_sum(const double* v, const double* m, std::size_t n);
void scaled_diff(const double* a, const double* b, double* out, std::size_t n, double scale);
void magnitude(const double* x, const double* y, double* out, std::size_t n);
}

} // namespace wrem::kernels
