#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fraver/grid.hpp"
#include "json.hpp"

namespace fraver {

/// (1/eps) 1{1 - eps/2 < |z_{1..k+1}| < 1 + eps/2} 1{z_{k+2..d} in [-1, 1]^{d-k-1}}.
struct AnnulusOp {
  int k_sphere = 1;
  double epsilon = 0.1;
};

/// min(|z|, eps)^{-(d - alpha)}.
struct RieszOp {
  double alpha = 1.0;
  double epsilon = 0.01;
};

/// (1/eps) phi(Phi(x, y) / eps) psi(x, y) with Phi, psi from the catalog.
struct LevelSetOp {
  std::string phi_id = "sphere";
  std::string psi_id = "one";
  double epsilon = 0.05;
};

struct OperatorSpec {
  std::variant<AnnulusOp, RieszOp, LevelSetOp> variant;
  int dim = 2;

  void validate() const;
  bool is_convolution() const { return !std::holds_alternative<LevelSetOp>(variant); }
  double epsilon() const;
  /// Radius of the kernel support (infinity for Riesz).
  double kernel_reach() const;
  std::string name() const;
};

OperatorSpec annulus_operator(int dim, int k_sphere, double epsilon);
OperatorSpec riesz_operator(int dim, double alpha, double epsilon);
OperatorSpec levelset_operator(int dim, std::string phi_id, std::string psi_id, double epsilon);

nlohmann::json to_json(const OperatorSpec& s);
OperatorSpec operator_spec_from_json(const nlohmann::json& j);

/// Compactly supported bump c exp(-1/(1-t^2)) on (-1, 1) with unit integral,
/// dilated to [-scale, scale].
struct MollifierSpec {
  double scale = 1.0;

  double operator()(double t) const;
  static double normalisation();
};

/// Convolution kernel K(z) of the annulus and Riesz variants.
double kernel_value(const OperatorSpec& spec, const Point& z);

/// Catalog entries: "dot-product" x.y - 1, "sphere" |x - y|^2 - 1,
/// "paraboloid" y_d - |y' - x'|^2 - x_d.
double levelset_phi(const std::string& id, const Point& x, const Point& y, int dim);
/// "one" is 1 everywhere; "away-origin" is a smooth bump in |x| and in |y|
/// supported in 1/4 < |.| < 7/4.
double levelset_psi(const std::string& id, const Point& x, const Point& y, int dim);
bool levelset_registered(const std::string& phi_id, const std::string& psi_id);

/// (1/eps) phi(Phi(x, y)/eps) psi(x, y).
double levelset_kernel(const LevelSetOp& op, const Point& x, const Point& y, int dim);

/// Kernel grids, centred at the box centre. Throw "underresolved" when the
/// kernel's eps scale is below 4 (annulus) or 2 (Riesz) grid spacings.
GridFunction annulus_kernel(int dim, int k_sphere, double epsilon, const GridSpec& spec);
GridFunction riesz_kernel(int dim, double alpha, double epsilon, const GridSpec& spec);

/// Closed-form Fourier transform of the annulus kernel at frequency xi.
double annulus_multiplier(int dim, int k_sphere, double epsilon, const Point& xi);

/// Fourier multiplier of a convolution variant on the lattice of `grid`,
/// in r2c half-spectrum layout (last axis N/2 + 1). Annulus: closed form.
/// Riesz: h^d times the DFT of the sampled, periodically centred kernel.
std::vector<double> kernel_multiplier_half(const OperatorSpec& spec, const GridSpec& grid);

/// Same multiplier from the DFT of the sampled kernel for every variant
/// (numeric route), as (|xi|, |K^(xi)|) over the half spectrum.
std::vector<std::pair<double, double>> sampled_multiplier_radial(const OperatorSpec& spec,
                                                                 const GridSpec& grid);

/// Frequency of half-spectrum index `flat`.
Point half_spectrum_frequency(const GridSpec& grid, std::size_t flat);
std::size_t half_spectrum_size(const GridSpec& grid);

}  // namespace fraver
