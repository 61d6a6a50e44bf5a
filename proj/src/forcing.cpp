#include "pockets/forcing.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "pockets/trig.hpp"

namespace pockets {

using std::numbers::pi;

void SeasonalForcing::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (order < 1) throw std::invalid_argument("truncation order K must be at least 1");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
}

cplx block_coeff(int k, double lambda) {
    if (k == 0) return {lambda, 0.0};
    // (i / 2 pi k)(e^{-2 pi i k lambda} - 1) = sin(pi k lambda)/(pi k) e^{-i pi k lambda}
    const double kl = static_cast<double>(k) * lambda;
    const double amp = sinpi(kl) / (pi * k);
    return {amp * cospi(kl), -amp * sinpi(kl)};
}

double gaussian_transform(int k, double alpha) {
    const double kk = static_cast<double>(k);
    return std::exp(-pi * pi * kk * kk / alpha);
}

double cosine_bump_transform(int k, double alpha) {
    if (k == 0) return 1.0;
    const double half_width = std::sqrt(1.0 / (2.0 * alpha * (1.0 / 3.0 - 2.0 / (pi * pi))));
    const double z = 2.0 * pi * std::abs(k) * half_width;
    const double denom = pi * pi - z * z;
    if (std::abs(denom) < 1e-9) return 0.5;  // removable point z = pi
    return std::sin(z) * pi * pi / (z * denom);
}

double smoother_transform(int k, double alpha, Smoother smoother) {
    return smoother == Smoother::gaussian ? gaussian_transform(k, alpha) : cosine_bump_transform(k, alpha);
}

cplx smoothed_coeff(int k, const SeasonalForcing& sf) {
    return smoother_transform(k, sf.alpha, sf.smoother) * block_coeff(k, sf.lambda);
}

cplx perturbation_coeff(int k, int order) {
    if (k == 0 || std::abs(k) > order) return {};
    const double j = std::abs(k);
    return {0.0, (k > 0 ? -0.5 : 0.5) / (j * j)};
}

cplx perturbed_coeff(int k, const SeasonalForcing& sf) {
    const cplx base = smoothed_coeff(k, sf);
    if (sf.beta == 0.0) return base;
    return base + sf.beta * sf.lambda * (1.0 - sf.lambda) * perturbation_coeff(k, sf.order);
}

FourierSeries1 forcing_series(const SeasonalForcing& sf) {
    std::vector<cplx> c(2 * static_cast<std::size_t>(sf.order) + 1);
    for (int k = -sf.order; k <= sf.order; ++k) c[static_cast<std::size_t>(k + sf.order)] = perturbed_coeff(k, sf);
    return FourierSeries1(std::move(c), true);
}

double eval_forcing(double t, const SeasonalForcing& sf) { return forcing_series(sf).evaluate_real(t); }

}  // namespace pockets
