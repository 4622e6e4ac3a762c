#include "srsa/fourier.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

#include <fftw3.h>
#include <fmt/format.h>

#include "srsa/error.hpp"
#include "srsa/params.hpp"

namespace srsa {

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "transform size must be > 0");
    std::lock_guard lock(planner_mutex());
    in_ = fftw_malloc(sizeof(fftw_complex) * n);
    out_ = fftw_malloc(sizeof(fftw_complex) * n);
    if (!in_ || !out_) {
        fftw_free(in_);
        fftw_free(out_);
        throw Error(ErrorCode::InvalidArgument, fmt::format("cannot allocate transform buffers of size {}", n));
    }
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), static_cast<fftw_complex*>(in_), static_cast<fftw_complex*>(out_),
                             FFTW_FORWARD, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(in_);
    fftw_free(out_);
}

void FftPlan::forward(std::span<const cplx> in, std::span<cplx> out) {
    if (in.size() != n_ || out.size() != n_)
        throw Error(ErrorCode::InvalidArgument, fmt::format("transform expects {} points", n_));
    // std::complex<double> and fftw_complex share layout
    std::memcpy(in_, in.data(), sizeof(fftw_complex) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::memcpy(out.data(), out_, sizeof(fftw_complex) * n_);
}

std::vector<double> momentum_grid(std::size_t n, double dx) {
    const double dp = 2.0 * kPi / (static_cast<double>(n) * dx);
    std::vector<double> p(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t m = 0; m < n; ++m) p[m] = static_cast<double>(static_cast<std::ptrdiff_t>(m) - half) * dp;
    return p;
}

std::vector<cplx> continuum_transform(std::span<const cplx> f, double x0, double dx) {
    const std::size_t n = f.size();
    if (n % 2) throw Error(ErrorCode::InvalidArgument, "transform size must be even");
    // (−1)^j moves p = 0 to the middle of the output
    std::vector<cplx> shifted(f.begin(), f.end());
    for (std::size_t j = 1; j < n; j += 2) shifted[j] = -shifted[j];
    std::vector<cplx> out(n);
    FftPlan plan(n);
    plan.forward(shifted, out);
    const auto p = momentum_grid(n, dx);
    const double scale = dx / std::sqrt(2.0 * kPi);
    for (std::size_t m = 0; m < n; ++m) out[m] *= scale * std::polar(1.0, -p[m] * x0);
    return out;
}

} // namespace srsa
