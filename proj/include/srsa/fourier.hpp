// fourier.hpp: continuum-normalized Fourier transform on a uniform grid.
//
// F(p_m) = (Δx/√(2π)) Σ_j f_j e^{−i p_m x_j}, x_j = x₀ + jΔx,
// p_m = (m − n/2)Δp, Δp = 2π/(nΔx).

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace srsa {

using cplx = std::complex<double>;

// Forward DFT of fixed size n (FFTW). Each instance owns its plan and
// aligned buffers; distinct instances may be used from different threads.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const { return n_; }

    // out_m = Σ_j in_j e^{−2πi jm/n}
    void forward(std::span<const cplx> in, std::span<cplx> out);

private:
    std::size_t n_;
    void* in_{nullptr};
    void* out_{nullptr};
    void* plan_{nullptr};
};

// Centered momentum grid conjugate to n points of spacing dx.
std::vector<double> momentum_grid(std::size_t n, double dx);

std::vector<cplx> continuum_transform(std::span<const cplx> f, double x0, double dx);

} // namespace srsa
