#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lightdoa/rng.hpp"
#include "lightdoa/tensor.hpp"

namespace testutil {

using lightdoa::Rng;

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
}

template <typename T>
lightdoa::nn::Tensor<T> random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0,
                                      double hi = 1.0) {
  lightdoa::nn::Tensor<T> t(std::move(shape));
  for (auto& v : t.data) v = static_cast<T>(rng.uniform(lo, hi));
  return t;
}

// Values bounded away from zero, for checks through ReLU kinks.
template <typename T>
lightdoa::nn::Tensor<T> random_tensor_nonzero(std::vector<int> shape, Rng& rng,
                                              double margin = 0.1) {
  lightdoa::nn::Tensor<T> t(std::move(shape));
  for (auto& v : t.data) {
    const double u = rng.uniform(margin, 1.5);
    v = static_cast<T>(rng.uniform01() < 0.5 ? -u : u);
  }
  return t;
}

// Central finite differences on a sampled subset of coordinates, against the
// analytic gradient. Returns the worst relative error seen.
inline double max_fd_error(const std::function<double()>& objective, double* values,
                           const double* analytic, std::size_t n, Rng& rng,
                           std::size_t max_coords = 24, double h = 1e-5) {
  std::vector<std::size_t> coords(n);
  for (std::size_t i = 0; i < n; ++i) coords[i] = i;
  if (n > max_coords) {
    for (std::size_t i = 0; i < max_coords; ++i)
      std::swap(coords[i], coords[i + rng.next_below(n - i)]);
    coords.resize(max_coords);
  }

  double worst = 0.0;
  for (std::size_t i : coords) {
    const double orig = values[i];
    values[i] = orig + h;
    const double jp = objective();
    values[i] = orig - h;
    const double jm = objective();
    values[i] = orig;
    const double fd = (jp - jm) / (2.0 * h);
    worst = std::max(worst, rel_err(fd, analytic[i]));
  }
  return worst;
}

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
};

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.c_str(), "rb");
  if (!f) return {};
  std::vector<unsigned char> bytes;
  unsigned char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) bytes.insert(bytes.end(), buf, buf + got);
  std::fclose(f);
  return bytes;
}

}  // namespace testutil
