#pragma once

#include <cstddef>
#include <vector>

#include "immunet/graph.hpp"
#include "immunet/kernels.hpp"

namespace immunet {

/// Largest adjacency eigenvalue with its unit eigenvector, sign-normalized
/// so that the entries sum to a nonnegative value.
struct EigenPair {
  double lambda = 0.0;
  std::vector<double> u;
  std::size_t iterations = 0;
  double residual = 0.0;  // ||A u - lambda u||_2
};

struct PowerIterationOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10'000;
  Exec exec = Exec::kParallel;
};

/// Power iteration on A + I from the all-ones vector. Stops once successive
/// Rayleigh quotients differ by less than `tol` and the residual is within
/// tol * max(1, lambda). The +I shift keeps bipartite graphs from
/// oscillating between +lambda and -lambda.
///
/// On a disconnected graph the result is the dominant component's pair.
/// Throws Error on n == 0 and ConvergenceError after max_iter.
EigenPair largest_eigenpair(const Graph& g, const PowerIterationOptions& opts = {});

}  // namespace immunet
