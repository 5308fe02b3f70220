#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace skynow {

// Bulk numeric kernels. Each has an OpenMP implementation and a serial
// reference twin; both produce bit-identical results for any thread count
// (reductions are computed over fixed-size blocks and combined in block
// order, so the summation tree never depends on the schedule).

inline constexpr std::size_t kSumBlock = 4096;

// Accumulates f(i) over [0, n) in fixed blocks.
double blocked_sum(std::size_t n, const double* x);
double blocked_sum_serial(std::size_t n, const double* x);

// sum((a-b)^2) and sum(|a-b|), the metric inner loops.
struct ErrorSums {
    double sq = 0.0;
    double abs = 0.0;
    double truth = 0.0;  // sum of the reference values, for nRMSE
};
ErrorSums error_sums(std::size_t n, const double* truth, const double* pred);
ErrorSums error_sums_serial(std::size_t n, const double* truth, const double* pred);

// Symmetric Gram accumulation for ridge regression: given X (n x d,
// row-major) and y (n), computes G = X^T X (lower triangle, packed row-major:
// g[r*(r+1)/2 + c], c <= r) and b = X^T y. Work is split into a fixed number
// of sample stripes (independent of thread count), each accumulated serially,
// then merged in stripe order.
struct GramSystem {
    std::size_t dim = 0;
    std::vector<double> gram_lower;  // dim*(dim+1)/2
    std::vector<double> rhs;         // dim
};
GramSystem gram_accumulate(std::size_t n, std::size_t d, const double* x,
                           const double* y);
GramSystem gram_accumulate_serial(std::size_t n, std::size_t d, const double* x,
                                  const double* y);

// Exact area-average (box) downscale of a single-channel u8 plane with
// arbitrary integer sizes. Output pixel = mean of the covered source area,
// fractional edges weighted. Rounding: nearest, half away from zero.
void box_resize_u8(const std::uint8_t* src, int src_w, int src_h, int stride_px,
                   std::uint8_t* dst, int dst_w, int dst_h);

// Same arithmetic, f64 accumulation path kept as the reference.
void box_resize_u8_serial(const std::uint8_t* src, int src_w, int src_h,
                          int stride_px, std::uint8_t* dst, int dst_w, int dst_h);

// Cholesky solve of the packed-lower SPD system (G + diag) w = b, in place.
// Throws on a non-positive pivot.
std::vector<double> solve_spd_packed(std::vector<double> gram_lower,
                                     std::vector<double> rhs);

}  // namespace skynow
