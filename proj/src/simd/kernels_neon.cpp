#include <arm_neon.h>

#include "focalqg/simd/kernels.hpp"

namespace focalqg::simd::neon {

// Two float64x2 registers hold lanes (l0, l1) and (l2, l3).

namespace {

double reduce(float64x2_t lo, float64x2_t hi, double tail) {
  double l0 = vgetq_lane_f64(lo, 0), l1 = vgetq_lane_f64(lo, 1);
  double l2 = vgetq_lane_f64(hi, 0), l3 = vgetq_lane_f64(hi, 1);
  return ((l0 + l1) + (l2 + l3)) + tail;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return reduce(lo, hi, tail);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    lo = vaddq_f64(lo, vmulq_f64(d0, d0));
    hi = vaddq_f64(hi, vmulq_f64(d1, d1));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    tail += d * d;
  }
  return reduce(lo, hi, tail);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace focalqg::simd::neon
