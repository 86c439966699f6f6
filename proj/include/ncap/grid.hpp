#pragma once

#include <functional>
#include <span>
#include <string>

#include "ncap/region.hpp"
#include "ncap/space.hpp"

namespace ncap {

/// Positive weight field w on R^n, sampled at lattice nodes and edge midpoints.
struct ScalarField {
  std::function<double(std::span<const double>)> eval;
  std::string description;

  static ScalarField constant(double c);
  /// w(x) = |x|^a
  static ScalarField radial_power(double a);
  /// Parses "const:<c>" or "power:<a>".
  static ScalarField parse(const std::string& spec);
};

/// Rasterize `domain` on the lattice h*Z^n. Node measure is w(x) h^n; each
/// axis edge has length h and energy weight w(midpoint) h^n, so that
/// sum_e weight_e |du/h|^p approximates the weighted integral of the
/// l^p-combination of partial derivatives. An edge is kept when both
/// endpoints and its midpoint lie in the domain.
MetricMeasureGraph build_grid(const Region& domain, double h,
                              const ScalarField& weight, double p);

}  // namespace ncap
