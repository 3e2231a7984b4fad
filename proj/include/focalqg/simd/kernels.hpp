#pragma once

// Dense double-precision kernels behind cosine similarity and the linear
// re-ranker. Every variant uses the same reduction layout: four lane
// accumulators over blocks of four elements, combined as
// ((l0 + l1) + (l2 + l3)) + tail, with the tail summed left to right.
// Because of that shared layout the SIMD variants are bit-identical to the
// scalar reference, not merely close to it.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace focalqg::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend);

// Compiled in and supported by the running CPU.
bool is_available(Backend backend);
std::vector<Backend> available_backends();
Backend best_available();

// The process-wide active variant. Initialised on first use from the
// FOCALQG_SIMD environment variable (scalar|avx2|neon) when set, otherwise
// best_available().
Backend active_backend();
// Throws focalqg::Error(InvalidArgument) if the variant is unavailable.
void set_backend(Backend backend);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Direct entry points for each variant, used by the equivalence tests.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& kernels_for(Backend backend);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(FOCALQG_HAVE_AVX2_KERNELS)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(FOCALQG_HAVE_NEON_KERNELS)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace focalqg::simd
