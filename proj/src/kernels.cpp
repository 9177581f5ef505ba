#include "immunet/kernels.hpp"

#include <omp.h>

#include <vector>

namespace immunet::kernels {

namespace serial {

void shifted_spmv(const Graph& g, std::span<const double> x, std::span<double> y) {
  const auto& off = g.offsets();
  const auto& adj = g.adjacency();
  const auto& w = g.edge_weights();
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = x[i];
    for (std::size_t e = off[i]; e < off[i + 1]; ++e) acc += w[e] * x[adj[e]];
    y[i] = acc;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

}  // namespace serial

namespace parallel {

void shifted_spmv(const Graph& g, std::span<const double> x, std::span<double> y) {
  const auto& off = g.offsets();
  const auto& adj = g.adjacency();
  const auto& w = g.edge_weights();
  const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for schedule(dynamic, 512)
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = x[i];
    for (std::size_t e = off[i]; e < off[i + 1]; ++e) acc += w[e] * x[adj[e]];
    y[i] = acc;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const auto blocks = static_cast<std::int64_t>((n + kReduceBlock - 1) / kReduceBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[static_cast<std::size_t>(blk)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) x[i] *= a;
}

}  // namespace parallel

void set_num_threads(int threads) {
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace immunet::kernels
