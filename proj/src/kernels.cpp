#include "skynow/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

std::size_t block_count(std::size_t n) { return (n + kSumBlock - 1) / kSumBlock; }

}  // namespace

double blocked_sum(std::size_t n, const double* x) {
    const std::size_t nb = block_count(n);
    std::vector<double> partial(nb, 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t hi = std::min(n, lo + kSumBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double blocked_sum_serial(std::size_t n, const double* x) {
    const std::size_t nb = block_count(n);
    double total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * kSumBlock;
        const std::size_t hi = std::min(n, lo + kSumBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        total += s;
    }
    return total;
}

namespace {

ErrorSums error_sums_impl(std::size_t n, const double* truth, const double* pred,
                          bool parallel) {
    const std::size_t nb = block_count(n);
    std::vector<ErrorSums> partial(nb);
    auto body = [&](std::size_t b) {
        const std::size_t lo = b * kSumBlock;
        const std::size_t hi = std::min(n, lo + kSumBlock);
        ErrorSums s;
        for (std::size_t i = lo; i < hi; ++i) {
            const double e = truth[i] - pred[i];
            s.sq += e * e;
            s.abs += std::abs(e);
            s.truth += truth[i];
        }
        partial[b] = s;
    };
    if (parallel) {
        #pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b)
            body(static_cast<std::size_t>(b));
    } else {
        for (std::size_t b = 0; b < nb; ++b) body(b);
    }
    ErrorSums total;
    for (const auto& p : partial) {
        total.sq += p.sq;
        total.abs += p.abs;
        total.truth += p.truth;
    }
    return total;
}

}  // namespace

ErrorSums error_sums(std::size_t n, const double* truth, const double* pred) {
    return error_sums_impl(n, truth, pred, true);
}

ErrorSums error_sums_serial(std::size_t n, const double* truth, const double* pred) {
    return error_sums_impl(n, truth, pred, false);
}

namespace {

// Stripe count is a function of the problem size only, never of the thread
// count, so the merge order (and the result) is schedule-independent.
std::size_t gram_stripes(std::size_t n, std::size_t d) {
    const std::size_t packed = d * (d + 1) / 2;
    const std::size_t budget = 256u << 20;  // bytes for stripe partials
    std::size_t s = std::min<std::size_t>(32, std::max<std::size_t>(1, budget / (packed * sizeof(double) + 1)));
    s = std::min(s, std::max<std::size_t>(1, n / 64));  // no point striping tiny n
    return std::max<std::size_t>(1, s);
}

void gram_stripe(std::size_t lo, std::size_t hi, std::size_t d, const double* x,
                 const double* y, double* g, double* b) {
    for (std::size_t i = lo; i < hi; ++i) {
        const double* row = x + i * d;
        const double yi = y[i];
        std::size_t p = 0;
        for (std::size_t r = 0; r < d; ++r) {
            const double xr = row[r];
            for (std::size_t c = 0; c <= r; ++c) g[p++] += xr * row[c];
            b[r] += xr * yi;
        }
    }
}

GramSystem gram_accumulate_impl(std::size_t n, std::size_t d, const double* x,
                                const double* y, bool parallel) {
    const std::size_t packed = d * (d + 1) / 2;
    const std::size_t ns = gram_stripes(n, d);
    std::vector<std::vector<double>> pg(ns), pb(ns);
    auto body = [&](std::size_t s) {
        pg[s].assign(packed, 0.0);
        pb[s].assign(d, 0.0);
        const std::size_t lo = n * s / ns;
        const std::size_t hi = n * (s + 1) / ns;
        gram_stripe(lo, hi, d, x, y, pg[s].data(), pb[s].data());
    };
    if (parallel) {
        #pragma omp parallel for schedule(dynamic)
        for (std::int64_t s = 0; s < static_cast<std::int64_t>(ns); ++s)
            body(static_cast<std::size_t>(s));
    } else {
        for (std::size_t s = 0; s < ns; ++s) body(s);
    }
    GramSystem out;
    out.dim = d;
    out.gram_lower.assign(packed, 0.0);
    out.rhs.assign(d, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t p = 0; p < packed; ++p) out.gram_lower[p] += pg[s][p];
        for (std::size_t r = 0; r < d; ++r) out.rhs[r] += pb[s][r];
    }
    return out;
}

}  // namespace

GramSystem gram_accumulate(std::size_t n, std::size_t d, const double* x,
                           const double* y) {
    return gram_accumulate_impl(n, d, x, y, true);
}

GramSystem gram_accumulate_serial(std::size_t n, std::size_t d, const double* x,
                                  const double* y) {
    return gram_accumulate_impl(n, d, x, y, false);
}

namespace {

void box_resize_row(const std::uint8_t* src, int src_w, int src_h, int stride_px,
                    std::uint8_t* dst, int dst_w, int dst_h, int oy) {
    const double sx = static_cast<double>(src_w) / dst_w;
    const double sy = static_cast<double>(src_h) / dst_h;
    const double y0 = oy * sy;
    const double y1 = (oy + 1) * sy;
    const int iy0 = static_cast<int>(y0);
    const int iy1 = std::min(src_h - 1, static_cast<int>(std::ceil(y1)) - 1);
    for (int ox = 0; ox < dst_w; ++ox) {
        const double x0 = ox * sx;
        const double x1 = (ox + 1) * sx;
        const int ix0 = static_cast<int>(x0);
        const int ix1 = std::min(src_w - 1, static_cast<int>(std::ceil(x1)) - 1);
        double acc = 0.0, area = 0.0;
        for (int iy = iy0; iy <= iy1; ++iy) {
            const double wy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
            const std::uint8_t* row = src + static_cast<std::size_t>(iy) * stride_px;
            for (int ix = ix0; ix <= ix1; ++ix) {
                const double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
                acc += wx * wy * row[ix];
                area += wx * wy;
            }
        }
        const double v = acc / area;
        dst[static_cast<std::size_t>(oy) * dst_w + ox] =
            static_cast<std::uint8_t>(std::lround(std::min(255.0, std::max(0.0, v))));
    }
}

}  // namespace

void box_resize_u8(const std::uint8_t* src, int src_w, int src_h, int stride_px,
                   std::uint8_t* dst, int dst_w, int dst_h) {
    #pragma omp parallel for schedule(static)
    for (int oy = 0; oy < dst_h; ++oy)
        box_resize_row(src, src_w, src_h, stride_px, dst, dst_w, dst_h, oy);
}

void box_resize_u8_serial(const std::uint8_t* src, int src_w, int src_h,
                          int stride_px, std::uint8_t* dst, int dst_w, int dst_h) {
    for (int oy = 0; oy < dst_h; ++oy)
        box_resize_row(src, src_w, src_h, stride_px, dst, dst_w, dst_h, oy);
}

std::vector<double> solve_spd_packed(std::vector<double> g, std::vector<double> b) {
    const std::size_t d = b.size();
    if (g.size() != d * (d + 1) / 2) throw ShapeError("solve_spd_packed: size mismatch");
    auto at = [&g](std::size_t r, std::size_t c) -> double& {
        return g[r * (r + 1) / 2 + c];  // c <= r
    };
    double max_diag = 0.0;
    for (std::size_t r = 0; r < d; ++r) max_diag = std::max(max_diag, at(r, r));
    const double pivot_floor = max_diag * 1e-13;
    // In-place Cholesky G = L L^T.
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c <= r; ++c) {
            double s = at(r, c);
            for (std::size_t k = 0; k < c; ++k) s -= at(r, k) * at(c, k);
            if (r == c) {
                if (!(s > pivot_floor))
                    throw DataError(
                        "normal matrix not positive definite; increase the ridge "
                        "penalty (lambda > 0)");
                at(r, c) = std::sqrt(s);
            } else {
                at(r, c) = s / at(c, c);
            }
        }
    }
    // Forward then backward substitution.
    for (std::size_t r = 0; r < d; ++r) {
        double s = b[r];
        for (std::size_t k = 0; k < r; ++k) s -= at(r, k) * b[k];
        b[r] = s / at(r, r);
    }
    for (std::size_t ri = d; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t k = ri + 1; k < d; ++k) s -= at(k, ri) * b[k];
        b[ri] = s / at(ri, ri);
    }
    return b;
}

}  // namespace skynow
