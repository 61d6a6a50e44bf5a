#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's closed forms: everything here is direct quadrature or brute force.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pockets/normal_form.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

inline double gaussian_density(double x, double alpha) { return std::sqrt(alpha / pi) * std::exp(-alpha * x * x); }

/// Fourier transform of the normalized Gaussian at integer frequency k, by
/// adaptive quadrature over [-10/sqrt(alpha), 10/sqrt(alpha)].
inline double gaussian_ft(int k, double alpha) {
    using boost::math::quadrature::gauss_kronrod;
    const double r = 10.0 / std::sqrt(alpha);
    auto integrand = [&](double x) { return gaussian_density(x, alpha) * std::cos(2.0 * pi * k * x); };
    return gauss_kronrod<double, 61>::integrate(integrand, -r, r, 20, 1e-14);
}

/// Periodized Gaussian; five images are plenty for alpha >= 20.
inline double periodic_gaussian(double x, double alpha) {
    double s = 0.0;
    for (int n = -3; n <= 3; ++n) s += gaussian_density(x - n, alpha);
    return s;
}

/// (phi * block)(t) = int_0^lambda phi(t - s) ds, by composite 30-point
/// Gauss-Legendre quadrature with panels much narrower than the Gaussian.
inline double smoothed_block(double t, double lambda, double alpha, int panels = 48) {
    using Rule = boost::math::quadrature::gauss<double, 30>;
    if (lambda <= 0.0) return 0.0;
    const double h = lambda / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i)
        sum += Rule::integrate([&](double s) { return periodic_gaussian(t - s, alpha); }, i * h, (i + 1) * h);
    return sum;
}

/// Fourier coefficients c_k, |k| <= kmax, of the smoothed block by double
/// quadrature: composite Gauss-Legendre in t over one period and in s.
inline std::vector<cplx> smoothed_block_coeffs(double lambda, double alpha, int kmax, int panels = 128) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    std::vector<cplx> c(static_cast<std::size_t>(2 * kmax + 1));
    const double h = 1.0 / panels;
    const auto& nodes = Rule::abscissa();
    const auto& weights = Rule::weights();
    auto accumulate = [&](double t, double w) {
        const double v = smoothed_block(t, lambda, alpha) * w;
        for (int k = -kmax; k <= kmax; ++k)
            c[static_cast<std::size_t>(k + kmax)] += v * std::polar(1.0, -2.0 * pi * k * t);
    };
    for (int panel = 0; panel < panels; ++panel) {
        const double mid = (panel + 0.5) * h;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double w = weights[i] * 0.5 * h;
            if (nodes[i] == 0.0) {
                accumulate(mid, w);
            } else {
                accumulate(mid + 0.5 * h * nodes[i], w);
                accumulate(mid - 0.5 * h * nodes[i], w);
            }
        }
    }
    return c;
}

/// Direct evaluation of a field and its x-derivative from its term list.
struct PointValue {
    cplx value;
    cplx dx;
};

inline PointValue evaluate_terms(const pockets::TaylorFourierField& field, double x, double y) {
    PointValue out{};
    for (const auto& [index, c] : field.terms()) {
        const cplx e = std::polar(1.0, 2.0 * pi * (index.k * x + index.l * y));
        out.value += c * e;
        out.dx += cplx{0.0, 2.0 * pi * index.k} * c * e;
    }
    return out;
}

/// RK4 for x' = rhs(x, y) over one period with n steps, straight from rhs().
inline double reference_map(double x0, const pockets::OscillatorParams& params, int n) {
    const double h = 1.0 / n;
    double x = x0;
    for (int i = 0; i < n; ++i) {
        const double y = i * h;
        const double k1 = pockets::rhs(x, y, params).first;
        const double k2 = pockets::rhs(x + 0.5 * h * k1, y + 0.5 * h, params).first;
        const double k3 = pockets::rhs(x + 0.5 * h * k2, y + 0.5 * h, params).first;
        const double k4 = pockets::rhs(x + h * k3, y + h, params).first;
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += std::log(xs[i]), my += std::log(ys[i]);
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace oracle
