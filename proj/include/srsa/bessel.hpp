// bessel.hpp: integer-order Bessel functions and the Jacobi–Anger expansion.

#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace srsa {

// J_0(x) … J_{n_max}(x) by Miller's downward recurrence, normalized with
// J_0 + 2Σ J_{2k} = 1. Intended for moderate |x| (tens at most).
std::vector<double> bessel_j_table(int n_max, double x);

// J_n(x) for any integer n (J_{−n} = (−1)^n J_n).
double bessel_j(int n, double x);

// Σ_{n=−n_max}^{n_max} (s·i)^n J_n(R) e^{−s·i·n·ζ} with s = ±1, which tends to
// e^{s·i·R cos ζ}.
std::complex<double> jacobi_anger(double r, double zeta, int n_max, int sign = +1);

// J₀, J₁ either exactly or by the small-argument forms 1 − (R/2)² and R/2.
enum class BesselForm { Polynomial, Exact };
std::string_view to_string(BesselForm f) noexcept;

double bessel_j0_approx(double r, BesselForm form);
double bessel_j1_approx(double r, BesselForm form);

} // namespace srsa
