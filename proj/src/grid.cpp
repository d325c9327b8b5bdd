#include "fraver/grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace fraver {

std::size_t GridSpec::cells() const {
  std::size_t c = 1;
  for (int i = 0; i < dim; ++i) c *= static_cast<std::size_t>(per_axis);
  return c;
}

void GridSpec::validate(std::size_t budget) const {
  if (dim < 1 || dim > 3) throw Error("grid", "grid dimension must be 1..3");
  if (per_axis < 8 || !std::has_single_bit(static_cast<unsigned>(per_axis)))
    throw Error("grid", "per_axis must be a power of two >= 8");
  if (!(side > 0.0)) throw Error("grid", "side must be positive");
  if (cells() > budget) throw Error("budget", "grid exceeds the cell budget");
}

std::size_t GridSpec::nearest_node(const Point& x) const {
  const double h = spacing();
  std::size_t flat = 0;
  for (int i = 0; i < dim; ++i) {
    const double t = std::floor((x[i] - origin[i]) / h + 0.5);
    if (t < 0.0 || t >= per_axis) throw Error("outside grid", "point lies outside the grid box");
    flat = flat * per_axis + static_cast<std::size_t>(t);
  }
  return flat;
}

Point GridSpec::node_position(std::size_t flat) const {
  Point p{};
  const double h = spacing();
  for (int i = dim - 1; i >= 0; --i) {
    p[i] = origin[i] + h * static_cast<double>(flat % per_axis);
    flat /= per_axis;
  }
  return p;
}

int dft_index_to_signed(int n, int per_axis) { return n < per_axis / 2 ? n : n - per_axis; }

Point GridSpec::frequency(std::size_t flat) const {
  Point f{};
  for (int i = dim - 1; i >= 0; --i) {
    f[i] = dft_index_to_signed(static_cast<int>(flat % per_axis), per_axis) / side;
    flat /= per_axis;
  }
  return f;
}

GridFunction::GridFunction(GridSpec s, SpaceTag tag)
    : spec(s), values(s.cells(), {0.0, 0.0}), space(tag) {}

namespace {

void run_c2c(const GridSpec& spec, std::vector<std::complex<double>>& data, int sign) {
  int n[3] = {spec.per_axis, spec.per_axis, spec.per_axis};
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft(spec.dim, n, ptr, ptr, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

// e^{-2 pi i xi . origin} for every frequency index.
std::complex<double> origin_phase(const GridSpec& spec, std::size_t flat) {
  const Point f = spec.frequency(flat);
  double dot = 0.0;
  for (int i = 0; i < spec.dim; ++i) dot += f[i] * spec.origin[i];
  return std::polar(1.0, -2.0 * std::numbers::pi * dot);
}

}  // namespace

GridFunction forward_fft(const GridFunction& g) {
  if (g.space != SpaceTag::physical) throw Error("space", "forward_fft expects a physical grid");
  GridFunction out = g;
  out.space = SpaceTag::frequency;
  run_c2c(g.spec, out.values, FFTW_FORWARD);
  const double cell = std::pow(g.spec.spacing(), g.spec.dim);
  for (std::size_t m = 0; m < out.values.size(); ++m) out.values[m] *= cell * origin_phase(g.spec, m);
  return out;
}

GridFunction inverse_fft(const GridFunction& g) {
  if (g.space != SpaceTag::frequency) throw Error("space", "inverse_fft expects a frequency grid");
  GridFunction out = g;
  out.space = SpaceTag::physical;
  for (std::size_t m = 0; m < out.values.size(); ++m) out.values[m] *= std::conj(origin_phase(g.spec, m));
  run_c2c(g.spec, out.values, FFTW_BACKWARD);
  const double scale = 1.0 / std::pow(g.spec.side, g.spec.dim);
  for (auto& v : out.values) v *= scale;
  return out;
}

double l2_norm(const GridFunction& g) {
  double acc = 0.0;
  for (const auto& v : g.values) acc += std::norm(v);
  const double w = g.space == SpaceTag::physical ? std::pow(g.spec.spacing(), g.spec.dim)
                                                 : 1.0 / std::pow(g.spec.side, g.spec.dim);
  return std::sqrt(acc * w);
}

namespace {

void put_f64(std::ofstream& os, double v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

double get_f64(std::ifstream& is) {
  double v = 0.0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw Error("io", "truncated grid file");
  return v;
}

}  // namespace

void write_grid_binary(const GridFunction& g, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("io", "cannot open " + path.string());
  put_f64(os, g.spec.dim);
  put_f64(os, g.spec.per_axis);
  put_f64(os, g.spec.side);
  for (int i = 0; i < g.spec.dim; ++i) put_f64(os, g.spec.origin[i]);
  for (const auto& v : g.values) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  nlohmann::json side = to_json(g.spec);
  side["space"] = g.space == SpaceTag::physical ? "physical" : "frequency";
  side["layout"] = "f64le header [dim, per_axis, side, origin...] then (re, im) pairs, last axis fastest";
  std::ofstream js(path.string() + ".json");
  js << side.dump(2) << '\n';
}

GridFunction read_grid_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("io", "cannot open " + path.string());
  GridSpec spec;
  spec.dim = static_cast<int>(get_f64(is));
  spec.per_axis = static_cast<int>(get_f64(is));
  spec.side = get_f64(is);
  for (int i = 0; i < spec.dim; ++i) spec.origin[i] = get_f64(is);
  spec.validate();
  SpaceTag tag = SpaceTag::physical;
  std::ifstream js(path.string() + ".json");
  if (js) {
    const auto meta = nlohmann::json::parse(js);
    if (meta.value("space", std::string("physical")) == "frequency") tag = SpaceTag::frequency;
  }
  GridFunction g(spec, tag);
  for (auto& v : g.values) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    v = {re, im};
  }
  return g;
}

nlohmann::json to_json(const GridSpec& s) {
  nlohmann::json origin = nlohmann::json::array();
  for (int i = 0; i < s.dim; ++i) origin.push_back(s.origin[i]);
  return {{"dim", s.dim}, {"per_axis", s.per_axis}, {"side", s.side}, {"origin", origin}};
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
  GridSpec s;
  s.dim = j.at("dim").get<int>();
  s.per_axis = j.at("per_axis").get<int>();
  s.side = j.at("side").get<double>();
  const auto& o = j.at("origin");
  for (int i = 0; i < s.dim && i < static_cast<int>(o.size()); ++i) s.origin[i] = o.at(i).get<double>();
  return s;
}

}  // namespace fraver
