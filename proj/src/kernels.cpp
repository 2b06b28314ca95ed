#include "wrem/kernels.hpp"

#include <atomic>
#include <cmath>

namespace wrem::kernels {

namespace scalar {

double weighted_abs_pow_sum(const double* v, const double* m, std::size_t n, double p) {
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) s += m[i] * std::abs(v[i]);
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) s += m[i] * (v[i] * v[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            if (m[i] != 0.0) s += m[i] * std::pow(std::abs(v[i]), p);
    }
    return s;
}

double weighted_sum(const double* v, const double* m, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += m[i] * v[i];
    return s;
}

void scaled_diff(const double* a, const double* b, double* out, std::size_t n, double scale) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (b[i] - a[i]) * scale;
}

void magnitude(const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i]);
}

} // namespace scalar

namespace {

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detected_isa()};
    return isa;
}

} // namespace

Isa detected_isa() { return avx2::available() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double weighted_abs_pow_sum(const double* v, const double* m, std::size_t n, double p) {
    if (active_isa() == Isa::avx2) return avx2::weighted_abs_pow_sum(v, m, n, p);
    return scalar::weighted_abs_pow_sum(v, m, n, p);
}

double weighted_sum(const double* v, const double* m, std::size_t n) {
    if (active_isa() == Isa::avx2) return avx2::weighted_sum(v, m, n);
    return scalar::weighted_sum(v, m, n);
}

void scaled_diff(const double* a, const double* b, double* out, std::size_t n, double scale) {
    if (active_isa() == Isa::avx2) return avx2::scaled_diff(a, b, out, n, scale);
    scalar::scaled_diff(a, b, out, n, scale);
}

void magnitude(const double* x, const double* y, double* out, std::size_t n) {
    if (active_isa() == Isa::avx2) return avx2::magnitude(x, y, out, n);
    scalar::magnitude(x, y, out, n);
}

} // namespace wrem::kernels
