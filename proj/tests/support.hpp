#pragma once

#include <filesystem>
#include <string>

#include "focalqg/error.hpp"

#ifndef FOCALQG_FIXTURE_DIR
#error "FOCALQG_FIXTURE_DIR must be defined by the build"
#endif

namespace focalqg::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(FOCALQG_FIXTURE_DIR) / name; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("focalqg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a focalqg::Error");
}

}  // namespace focalqg::testing
