#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace fraver {

inline constexpr int kMaxDim = 3;

/// Point in R^d for d <= 3; coordinates past the ambient dimension stay zero.
using Point = std::array<double, kMaxDim>;

/// Every failure carries a short machine-readable code ("nyquist",
/// "underresolved", "empty set", ...) next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

inline double squared_distance(const Point& a, const Point& b, int dim) {
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double t = a[i] - b[i];
    acc += t * t;
  }
  return acc;
}

}  // namespace fraver
