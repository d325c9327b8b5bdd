#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "fraver/common.hpp"
#include "json.hpp"

namespace fraver {

inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 24;

/// Uniform periodic box grid: nodes origin + h * n, n in [0, per_axis)^dim,
/// h = side / per_axis. Flat storage with the last axis fastest.
struct GridSpec {
  int dim = 2;
  int per_axis = 64;
  Point origin{};
  double side = 1.0;

  double spacing() const { return side / per_axis; }
  std::size_t cells() const;
  /// Largest frequency per axis, per_axis / (2 side).
  double nyquist() const { return per_axis / (2.0 * side); }
  void validate(std::size_t budget = kDefaultCellBudget) const;

  /// Node index of the grid point nearest to x; throws "outside grid".
  std::size_t nearest_node(const Point& x) const;
  Point node_position(std::size_t flat) const;
  /// Frequency vector of DFT index `flat` (components m / side, m in [-N/2, N/2)).
  Point frequency(std::size_t flat) const;
};

enum class SpaceTag { physical, frequency };

struct GridFunction {
  GridSpec spec;
  std::vector<std::complex<double>> values;
  SpaceTag space = SpaceTag::physical;

  GridFunction() = default;
  GridFunction(GridSpec s, SpaceTag tag);
};

/// Continuous-transform normalisation: forward multiplies the DFT (e^{-2 pi i})
/// by h^d and the origin phase, so for a rasterised density it returns the
/// exact Fourier transform of the snapped measure at the lattice frequencies.
GridFunction forward_fft(const GridFunction& g);
GridFunction inverse_fft(const GridFunction& g);

/// Sum |g|^2 h^d (physical) or sum |g|^2 / side^d (frequency).
double l2_norm(const GridFunction& g);

int dft_index_to_signed(int n, int per_axis);

/// Flat binary export: little-endian float64 header (dim, per_axis, side,
/// origin[dim]) then values as (re, im) pairs; a JSON sidecar at
/// `path` + ".json" describes the layout.
void write_grid_binary(const GridFunction& g, const std::filesystem::path& path);
GridFunction read_grid_binary(const std::filesystem::path& path);

nlohmann::json to_json(const GridSpec& s);
GridSpec grid_spec_from_json(const nlohmann::json& j);

}  // namespace fraver
