#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pushbutton {

/// Pairwise (cascade) summation. The reduction tree depends only on the input
/// length, so the result is identical however the values were produced.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(std::size_t n);

/// Wraps an angle to [0, 2*pi).
double wrap_phase(double radians);

/// Wraps an angle to (-pi, pi].
double wrap_phase_signed(double radians);

/// Runs body(begin, end) over [0, count) split into `workers` contiguous chunks.
/// workers <= 1 runs inline on the calling thread.
template <typename Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body);

}  // namespace pushbutton

#include "pushbutton/detail/parallel.hpp"
