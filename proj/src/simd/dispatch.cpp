#include <atomic>
#include <cstdlib>
#include <string>

#include "focalqg/error.hpp"
#include "focalqg/simd/kernels.hpp"

namespace focalqg::simd {

namespace {

const KernelTable kScalar{scalar::dot, scalar::squared_distance, scalar::axpy};
#if defined(FOCALQG_HAVE_AVX2_KERNELS)
const KernelTable kAvx2{avx2::dot, avx2::squared_distance, avx2::axpy};
#endif
#if defined(FOCALQG_HAVE_NEON_KERNELS)
const KernelTable kNeon{neon::dot, neon::squared_distance, neon::axpy};
#endif

bool cpu_has_avx2() {
#if defined(FOCALQG_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("FOCALQG_SIMD")) {
    std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && is_available(Backend::Avx2)) return Backend::Avx2;
    if (v == "neon" && is_available(Backend::Neon)) return Backend::Neon;
  }
  return best_available();
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels_for(initial_backend())};
  return table;
}

std::atomic<Backend>& active_id() {
  static std::atomic<Backend> id{initial_backend()};
  return id;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorCode::DimensionMismatch, "vector sizes differ: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool is_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
    case Backend::Neon:
#if defined(FOCALQG_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon})
    if (is_available(b)) out.push_back(b);
  return out;
}

Backend best_available() {
  if (is_available(Backend::Avx2)) return Backend::Avx2;
  if (is_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

const KernelTable& kernels_for(Backend backend) {
  switch (backend) {
#if defined(FOCALQG_HAVE_AVX2_KERNELS)
    case Backend::Avx2:
      if (cpu_has_avx2()) return kAvx2;
      break;
#endif
#if defined(FOCALQG_HAVE_NEON_KERNELS)
    case Backend::Neon: return kNeon;
#endif
    default: break;
  }
  if (backend != Backend::Scalar)
    fail(ErrorCode::InvalidArgument, "SIMD backend not available: " + std::string(to_string(backend)));
  return kScalar;
}

Backend active_backend() { return active_id().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  const KernelTable& table = kernels_for(backend);
  active_table().store(&table, std::memory_order_relaxed);
  active_id().store(backend, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return active_table().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
  return active_table().load(std::memory_order_relaxed)->dot(a.data(), a.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return active_table().load(std::memory_order_relaxed)->squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size());
  active_table().load(std::memory_order_relaxed)->axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace focalqg::simd
