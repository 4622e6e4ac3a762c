#include "srsa/bessel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "srsa/error.hpp"

namespace srsa {

std::vector<double> bessel_j_table(int n_max, double x) {
    if (n_max < 0) throw Error(ErrorCode::InvalidArgument, fmt::format("n_max must be >= 0 (got {})", n_max));
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "Bessel argument must be finite");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const double ax = std::abs(x);
    const double scale = std::max(static_cast<double>(n_max), ax);
    int start = static_cast<int>(scale + 20.0 + std::sqrt(40.0 * scale));
    start += start % 2;  // even, so the normalization sum starts on an even order

    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[static_cast<std::size_t>(start) + 1] = 0.0;
    j[static_cast<std::size_t>(start)] = 1e-300;
    for (int k = start; k >= 1; --k) {
        const auto ku = static_cast<std::size_t>(k);
        j[ku - 1] = 2.0 * k / ax * j[ku] - j[ku + 1];
        if (std::abs(j[ku - 1]) > 1e250) {
            for (std::size_t i = ku - 1; i < j.size(); ++i) j[i] *= 1e-250;
        }
    }
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * j[static_cast<std::size_t>(k)];
    for (int n = 0; n <= n_max; ++n) {
        double v = j[static_cast<std::size_t>(n)] / norm;
        if (x < 0 && (n % 2)) v = -v;
        out[static_cast<std::size_t>(n)] = v;
    }
    return out;
}

double bessel_j(int n, double x) {
    const int an = std::abs(n);
    const double v = bessel_j_table(an, x)[static_cast<std::size_t>(an)];
    return (n < 0 && (an % 2)) ? -v : v;
}

std::complex<double> jacobi_anger(double r, double zeta, int n_max, int sign) {
    if (n_max < 0) throw Error(ErrorCode::InvalidArgument, fmt::format("n_max must be >= 0 (got {})", n_max));
    const double s = sign >= 0 ? 1.0 : -1.0;
    const auto j = bessel_j_table(n_max, r);
    // terms n and −n combine to (s·i)^n J_n · 2cos(nζ)
    std::complex<double> sum = j[0];
    std::complex<double> in{1.0, 0.0};
    const std::complex<double> unit{0.0, s};
    for (int n = 1; n <= n_max; ++n) {
        in *= unit;
        sum += in * (2.0 * j[static_cast<std::size_t>(n)] * std::cos(n * zeta));
    }
    return sum;
}

std::string_view to_string(BesselForm f) noexcept { return f == BesselForm::Polynomial ? "polynomial" : "exact"; }

double bessel_j0_approx(double r, BesselForm form) {
    return form == BesselForm::Polynomial ? 1.0 - 0.25 * r * r : bessel_j(0, r);
}

double bessel_j1_approx(double r, BesselForm form) {
    return form == BesselForm::Polynomial ? 0.5 * r : bessel_j(1, r);
}

} // namespace srsa
