#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "ncap/capacity.hpp"

namespace ncap {

double unit_sphere_area(int n) {
  if (n < 1) throw ValidationError("dimension must be positive");
  double half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double radial_condenser_oracle(double r, double R, double p, int n,
                               const std::function<double(double)>& weight) {
  if (!(r > 0.0) || !(r < R)) throw ValidationError("oracle needs 0 < r < R");
  if (!(p > 1.0)) throw ValidationError("oracle needs p > 1");
  const double area = unit_sphere_area(n);
  const double expo = -1.0 / (p - 1.0);
  auto integrand = [&](double s) {
    double w = weight(s);
    if (!(w > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(area * std::pow(s, n - 1) * w, expo);
  };
  double error = 0.0;
  double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, r, R, 20, 1e-14, &error);
  if (!std::isfinite(integral) || !(integral > 0.0)) return kInfiniteCapacity;
  return std::pow(integral, 1.0 - p);
}

double path_capacity_oracle(std::span<const double> weights, double p) {
  if (!(p > 1.0)) throw ValidationError("oracle needs p > 1");
  if (weights.empty()) throw ValidationError("path needs at least one edge");
  double s = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ValidationError("path weights must be positive");
    s += std::pow(w, -1.0 / (p - 1.0));
  }
  return std::pow(s, 1.0 - p);
}

}  // namespace ncap
