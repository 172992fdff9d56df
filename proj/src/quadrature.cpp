#include "hypsweep/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hypsweep::quad {
namespace {

void legendre_nodes(std::size_t n, double* nodes, double* weights) {
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

struct Stored {
  std::vector<double> nodes;
  std::vector<double> weights;
};

}  // namespace

const Rule& gauss_legendre() {
  static const Rule rule = [] {
    Rule r{};
    legendre_nodes(kOrder, r.nodes.data(), r.weights.data());
    return r;
  }();
  return rule;
}

DynRule gauss_legendre(std::size_t order) {
  if (order < 2 || order > 64) throw std::invalid_argument("gauss_legendre: order out of [2, 64]");
  static std::mutex mu;
  static std::map<std::size_t, Stored> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) {
    Stored s{std::vector<double>(order), std::vector<double>(order)};
    legendre_nodes(order, s.nodes.data(), s.weights.data());
    it = cache.emplace(order, std::move(s)).first;
  }
  return {it->second.nodes.data(), it->second.weights.data(), order};
}

}  // namespace hypsweep::quad
