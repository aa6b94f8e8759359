#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seerisk {

/// Risk classes are the integers 1..5; index k of a count vector holds class k+1.
inline constexpr int kNumClasses = 5;
inline constexpr int kMinRisk = 1;
inline constexpr int kMaxRisk = 5;

using ClassCounts = std::array<std::uint64_t, kNumClasses>;

constexpr bool is_valid_risk(int label) { return label >= kMinRisk && label <= kMaxRisk; }

ClassCounts class_histogram(std::span<const int> labels);

// Errors come in two families so that front ends can map them to distinct
// exit statuses: bad configuration/input versus bad data or runtime failure.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps a failure with the pipeline stage it came from.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message, bool config_error);

  const std::string& stage() const noexcept { return stage_; }
  bool is_config_error() const noexcept { return config_error_; }

 private:
  std::string stage_;
  bool config_error_;
};

/// splitmix64 finalizer; derives independent stream seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// 64-bit FNV-1a, stable across platforms (std::hash is not).
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Random source with platform-independent draws.
///
/// The engine sequence of std::mt19937_64 is fixed by the standard, but the
/// std::*_distribution adaptors are implementation-defined, so every draw
/// used by the library goes through the helpers below.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Standard normal via Box-Muller (one value per call).
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const double> values);

  /// Rows selected by index, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Column indices of a one-hot group inside a feature matrix.
using OneHotGroup = std::vector<std::size_t>;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace seerisk
