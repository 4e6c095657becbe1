#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "phigeo/types.hpp"

namespace testutil {

// Unique scratch directory, removed (recursively) on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    static std::atomic<unsigned> counter{0};
    path_ = base / ("phigeo-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline double rand_in(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline phigeo::Complex rand_point(std::mt19937_64& rng, double r_min,
                                  double r_max) {
  double r = rand_in(rng, r_min, r_max);
  double th = rand_in(rng, 0.0, phigeo::kTwoPi);
  return std::polar(r, th);
}

}  // namespace testutil
