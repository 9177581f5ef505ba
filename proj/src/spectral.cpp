#include "immunet/spectral.hpp"

#include <cmath>
#include <limits>

#include "immunet/error.hpp"

namespace immunet {

namespace {

template <class Ops>
EigenPair power_iterate(const Graph& g, const PowerIterationOptions& opts) {
  const std::size_t n = g.num_nodes();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n), r(n);
  double prev_rq = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    Ops::shifted_spmv(g, v, w);
    const double rq = Ops::dot(v, w);
    r = w;
    Ops::axpy(-rq, v, r);
    residual = std::sqrt(Ops::dot(r, r));
    const double lambda = rq - 1.0;
    if (std::abs(rq - prev_rq) < opts.tol && residual <= opts.tol * std::max(1.0, lambda)) {
      EigenPair out;
      out.lambda = std::max(0.0, lambda);
      double sum = 0.0;
      for (double x : v) sum += x;
      if (sum < 0.0) Ops::scale(-1.0, v);
      out.u = std::move(v);
      out.iterations = it;
      out.residual = residual;
      return out;
    }
    prev_rq = rq;
    const double norm = std::sqrt(Ops::dot(w, w));
    Ops::scale(1.0 / norm, w);
    std::swap(v, w);
  }
  throw ConvergenceError(opts.max_iter, residual);
}

struct SerialOps {
  static void shifted_spmv(const Graph& g, std::span<const double> x, std::span<double> y) {
    kernels::serial::shifted_spmv(g, x, y);
  }
  static double dot(std::span<const double> a, std::span<const double> b) { return kernels::serial::dot(a, b); }
  static void axpy(double a, std::span<const double> x, std::span<double> y) { kernels::serial::axpy(a, x, y); }
  static void scale(double a, std::span<double> x) { kernels::serial::scale(a, x); }
};

struct ParallelOps {
  static void shifted_spmv(const Graph& g, std::span<const double> x, std::span<double> y) {
    kernels::parallel::shifted_spmv(g, x, y);
  }
  static double dot(std::span<const double> a, std::span<const double> b) { return kernels::parallel::dot(a, b); }
  static void axpy(double a, std::span<const double> x, std::span<double> y) { kernels::parallel::axpy(a, x, y); }
  static void scale(double a, std::span<double> x) { kernels::parallel::scale(a, x); }
};

}  // namespace

EigenPair largest_eigenpair(const Graph& g, const PowerIterationOptions& opts) {
  if (g.num_nodes() == 0) throw Error("spectral", "graph has no nodes");
  if (!(opts.tol > 0.0)) throw Error("spectral", "tolerance must be positive");
  if (opts.max_iter < 1) throw Error("spectral", "max_iter must be at least 1");
  return opts.exec == Exec::kSerial ? power_iterate<SerialOps>(g, opts) : power_iterate<ParallelOps>(g, opts);
}

}  // namespace immunet
