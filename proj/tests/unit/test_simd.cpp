#include <doctest.h>

#include <cmath>
#include <cstring>

#include "focalqg/error.hpp"
#include "focalqg/simd/kernels.hpp"
#include "focalqg/text.hpp"
#include "support.hpp"

using namespace focalqg;
namespace simd = focalqg::simd;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-10.0, 10.0);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar kernels agree with a plain loop") {
  Rng rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 256u}) {
    auto a = random_vector(rng, n), b = random_vector(rng, n);
    long double dot = 0, dist = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(a[i]) * b[i];
      dist += static_cast<long double>(a[i] - b[i]) * (a[i] - b[i]);
    }
    CHECK(simd::scalar::dot(a.data(), b.data(), n) == doctest::Approx(static_cast<double>(dot)).epsilon(1e-12));
    CHECK(simd::scalar::squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(static_cast<double>(dist)).epsilon(1e-12));
  }
}

TEST_CASE("every available variant is bit-identical to the scalar reference") {
  const auto& ref = simd::kernels_for(simd::Backend::Scalar);
  Rng rng(2024);
  for (simd::Backend backend : simd::available_backends()) {
    CAPTURE(simd::to_string(backend));
    const auto& k = simd::kernels_for(backend);
    for (int trial = 0; trial < 300; ++trial) {
      std::size_t n = rng.below(70);
      auto a = random_vector(rng, n), b = random_vector(rng, n);
      CHECK(same_bits(k.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)));
      CHECK(same_bits(k.squared_distance(a.data(), b.data(), n), ref.squared_distance(a.data(), b.data(), n)));
      double alpha = rng.uniform(-2.0, 2.0);
      auto y1 = b, y2 = b;
      k.axpy(alpha, a.data(), y1.data(), n);
      ref.axpy(alpha, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(y1[i], y2[i]));
    }
  }
}

TEST_CASE("backend switching and validation") {
  simd::Backend before = simd::active_backend();
  CHECK(simd::is_available(simd::Backend::Scalar));
  simd::set_backend(simd::Backend::Scalar);
  CHECK(simd::active_backend() == simd::Backend::Scalar);
  std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
  CHECK(simd::dot(a, b) == 35.0);
  CHECK(simd::squared_norm(a) == 55.0);
  CHECK(simd::squared_distance(a, b) == 40.0);
  simd::axpy(2.0, a, b);
  CHECK(b == std::vector<double>{7, 8, 9, 10, 11});
  for (simd::Backend x : {simd::Backend::Avx2, simd::Backend::Neon})
    if (!simd::is_available(x))
      CHECK(testing::error_code_of([&] { simd::set_backend(x); }) == ErrorCode::InvalidArgument);
  simd::set_backend(before);
  CHECK(simd::active_backend() == before);
}

TEST_CASE("span wrappers reject mismatched sizes") {
  std::vector<double> a{1, 2}, b{1, 2, 3};
  CHECK(testing::error_code_of([&] { simd::dot(a, b); }) == ErrorCode::DimensionMismatch);
  CHECK(testing::error_code_of([&] { simd::squared_distance(a, b); }) == ErrorCode::DimensionMismatch);
  CHECK(testing::error_code_of([&] { simd::axpy(1.0, a, b); }) == ErrorCode::DimensionMismatch);
}
