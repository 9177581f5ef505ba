#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference
// (kept for tests and the benchmark) and an OpenMP version whose result is
// bit-identical for any thread count.

#include <span>

#include "immunet/graph.hpp"

namespace immunet {

enum class Exec { kSerial, kParallel };

namespace kernels {

// Fixed reduction block; the parallel dot sums per-block partials in block
// order, so its rounding does not depend on the thread count.
inline constexpr std::size_t kReduceBlock = 4096;

namespace serial {
/// y = (A + I) x
void shifted_spmv(const Graph& g, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
/// y = a * x + y
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
}  // namespace serial

namespace parallel {
void shifted_spmv(const Graph& g, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
}  // namespace parallel

/// Caps the OpenMP team size for the calling thread (0 = runtime default).
void set_num_threads(int threads);
int max_threads();

}  // namespace kernels
}  // namespace immunet
