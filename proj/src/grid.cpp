#include "ncap/grid.hpp"

#include <cmath>
#include <sstream>

namespace ncap {

ScalarField ScalarField::constant(double c) {
  return ScalarField{[c](std::span<const double>) { return c; },
                     "const:" + std::to_string(c)};
}

ScalarField ScalarField::radial_power(double a) {
  return ScalarField{[a](std::span<const double> x) {
                       double r2 = 0.0;
                       for (double xi : x) r2 += xi * xi;
                       return std::pow(r2, 0.5 * a);
                     },
                     "power:" + std::to_string(a)};
}

ScalarField ScalarField::parse(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ValidationError("weight spec must look like const:<c> or power:<a>");
  std::string kind = spec.substr(0, colon);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw ValidationError("weight spec has a malformed number: " + spec);
  }
  if (kind == "const") return constant(value);
  if (kind == "power") return radial_power(value);
  throw ValidationError("unknown weight kind: " + kind);
}

MetricMeasureGraph build_grid(const Region& domain, double h,
                              const ScalarField& weight, double p) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw ValidationError("mesh size h must be positive");
  if (!(p >= 1.0)) throw ValidationError("exponent p must be at least 1");
  if (!domain.is_geometric())
    throw ValidationError("grid domain must be a geometric predicate");
  auto bounds = domain.bounds();
  if (!bounds) throw ValidationError("grid domain must be bounded");

  const std::size_t dim = bounds->lo.size();
  std::vector<long long> kmin(dim), extent(dim);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (bounds->lo[i] > bounds->hi[i])
      throw ValidationError("empty rasterization");
    kmin[i] = static_cast<long long>(std::ceil(bounds->lo[i] / h - 1e-9));
    long long kmax = static_cast<long long>(std::floor(bounds->hi[i] / h + 1e-9));
    extent[i] = std::max(0LL, kmax - kmin[i] + 1);
    total *= static_cast<std::size_t>(extent[i]);
  }

  const double cell = std::pow(h, static_cast<double>(dim));
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(total, kNone);
  std::vector<NodeData> nodes;
  std::vector<long long> k(dim);
  std::vector<double> x(dim);

  auto position_of = [&](std::size_t flat, std::vector<double>& out) {
    for (std::size_t i = 0; i < dim; ++i) {
      long long ki = kmin[i] + static_cast<long long>(flat % extent[i]);
      flat /= extent[i];
      out[i] = static_cast<double>(ki) * h;
    }
  };

  for (std::size_t flat = 0; flat < total; ++flat) {
    position_of(flat, x);
    if (!domain.contains_point(x)) continue;
    double w = weight.eval(x);
    if (!(w > 0.0) || !std::isfinite(w)) {
      std::ostringstream msg;
      msg << "nonpositive weight sample at node " << nodes.size();
      throw ValidationError(msg.str());
    }
    slot[flat] = nodes.size();
    nodes.push_back(NodeData{static_cast<NodeId>(nodes.size()), w * cell, x});
  }
  if (nodes.empty()) throw ValidationError("empty rasterization");

  std::vector<EdgeData> edges;
  std::vector<double> mid(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (slot[flat] == kNone) continue;
    std::size_t stride = 1;
    std::size_t rest = flat;
    for (std::size_t i = 0; i < dim; ++i) {
      std::size_t ki = rest % extent[i];
      rest /= extent[i];
      if (ki + 1 < static_cast<std::size_t>(extent[i])) {
        std::size_t other = flat + stride;
        if (slot[other] != kNone) {
          const auto& pa = nodes[slot[flat]].position;
          const auto& pb = nodes[slot[other]].position;
          for (std::size_t d = 0; d < dim; ++d) mid[d] = 0.5 * (pa[d] + pb[d]);
          if (domain.contains_point(mid)) {
            double w = weight.eval(mid);
            if (!(w > 0.0) || !std::isfinite(w))
              throw ValidationError("nonpositive weight sample at an edge midpoint");
            double len = std::abs(pb[i] - pa[i]);
            edges.push_back(EdgeData{static_cast<NodeId>(slot[flat]),
                                     static_cast<NodeId>(slot[other]), len,
                                     w * cell});
          }
        }
      }
      stride *= static_cast<std::size_t>(extent[i]);
    }
  }

  SpaceMeta meta;
  meta.dimension = static_cast<int>(dim);
  meta.mesh_size = h;
  return MetricMeasureGraph::build(std::move(nodes), std::move(edges), meta);
}

}  // namespace ncap
