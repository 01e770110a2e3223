#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibc/farfield.hpp"
#include "gibc/forward.hpp"
#include "gibc/geometry.hpp"
#include "gibc/inversion.hpp"
#include "gibc/surface_calculus.hpp"

namespace gibc
{

// Curve description. Polar curves use r(theta) = r0 + sum_n cos_n[n-1] cos(n theta) +
// sin_n[n-1] sin(n theta) around center.
struct GeometrySpec
{
  std::string kind = "circle";  // circle | ellipse | polar | lshape | file
  double radius = 0.3;           // circle radius, ellipse semi-axis a, polar r0, lshape size
  double radius_b = 0.2;         // ellipse semi-axis b
  Vec2 center;
  std::vector<double> cos_n;
  std::vector<double> sin_n;
  std::string file;
  std::size_t nodes = 0;  // 0 selects ceil(perimeter / h)
};

// Value at polar angle theta (about the curve center) of
// c0 + sum_n a[n-1] cos(n (theta + phase)) + b[n-1] sin(n (theta + phase)).
struct FourierProfile
{
  std::complex<double> c0;
  std::vector<std::complex<double>> a;
  std::vector<std::complex<double>> b;
  double phase = 0.0;

  std::complex<double> operator()(double theta) const;
};

struct ImpedanceSpec
{
  std::string kind = "fourier";  // fourier | file
  FourierProfile lambda;
  FourierProfile mu;
  std::string file;
  ActiveSet active;
};

struct ModelSpec
{
  GeometrySpec geometry;
  ImpedanceSpec impedance;
};

struct RunConfig
{
  ScatterConfig scatter;
  std::size_t incident_count = 8;
  double incident_offset = 0.0;  // angles offset + 2 pi j / N
  std::size_t observations = 64;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double data_h = 0.02;  // mesh size for synthetic data
  ModelSpec truth;
  ModelSpec initial;
  InversionConfig inversion;
  std::string data;  // far field CSV for invert
  // Directions, test count and steps used by validate.
  int validate_directions = 3;
  std::vector<double> validate_steps = {8e-3, 4e-3, 2e-3, 1e-3};
  double validate_h = 0.02;

  std::vector<double> incident_angles() const;
};

// Unknown keys and malformed values throw ConfigError.
RunConfig run_config_from_json(const nlohmann::json &j);
nlohmann::json to_json(const RunConfig &cfg);
RunConfig read_run_config(const std::filesystem::path &path);

// Curve of the spec; relative file paths resolve against base.
BoundaryCurve build_curve(const GeometrySpec &spec, double h,
                          const std::filesystem::path &base = {});
ImpedanceField build_impedance(const ImpedanceSpec &spec, const GeometrySpec &geometry,
                               const BoundaryCurve &curve, const std::filesystem::path &base = {});

// Adds complex Gaussian noise to the Fourier coefficients of each far field, scaled so that
// ||noise|| / ||u_inf|| equals delta exactly for every incident field.
FarField add_noise(const FarField &clean, double delta, std::uint64_t seed);

// Far fields of the truth model on a mesh of size data_h, with noise.
struct SyntheticData
{
  FarField clean;
  FarField noisy;
  BoundaryCurve curve;
  ImpedanceField imp;
};

SyntheticData synthesize_data(const RunConfig &cfg, const std::filesystem::path &base = {});

}  // namespace gibc
