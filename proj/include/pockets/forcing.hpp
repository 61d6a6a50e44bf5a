#pragma once

#include "pockets/fourier.hpp"

namespace pockets {

/// Mollifier convolved with the block forcing.
enum class Smoother {
    gaussian,     ///< sqrt(alpha/pi) exp(-alpha x^2)
    cosine_bump,  ///< squared-cosine bump with the Gaussian's variance 1/(2 alpha)
};

/// Smoothed seasonal block forcing: daylight fraction `lambda`, mollifier
/// width `alpha`, truncation order `order` and perturbation amplitude `beta`.
struct SeasonalForcing {
    double lambda = 0.5;
    double alpha = 50.0;
    int order = 64;
    double beta = 0.0;
    Smoother smoother = Smoother::gaussian;

    /// Throws std::invalid_argument unless lambda, beta in [0,1], alpha > 0, order >= 1.
    void validate() const;
};

/// Fourier coefficient of the unit block of length lambda on [0, 1).
cplx block_coeff(int k, double lambda);

/// Fourier transform of the normalized Gaussian at frequency k: exp(-pi^2 k^2 / alpha).
double gaussian_transform(int k, double alpha);

/// Fourier transform of the squared-cosine bump of half-width
/// sqrt(1 / (2 alpha (1/3 - 2/pi^2))) at frequency k.
double cosine_bump_transform(int k, double alpha);

double smoother_transform(int k, double alpha, Smoother smoother);

/// Coefficient of the mollified block, smoother_transform * block_coeff.
/// Ignores sf.beta; see perturbed_coeff.
cplx smoothed_coeff(int k, const SeasonalForcing& sf);

/// Coefficient of the fixed perturbation shape s(t) = sum_{j=1}^{K} sin(2 pi j t) / j^2.
cplx perturbation_coeff(int k, int order);

/// smoothed_coeff + beta lambda (1 - lambda) s_k. The lambda (1 - lambda)
/// factor keeps winter (lambda = 0) and summer (lambda = 1) unperturbed.
cplx perturbed_coeff(int k, const SeasonalForcing& sf);

/// Coefficients of the forcing actually applied, perturbed_coeff for |k| <= order.
FourierSeries1 forcing_series(const SeasonalForcing& sf);

/// Value of the truncated forcing series at time t (1-periodic).
double eval_forcing(double t, const SeasonalForcing& sf);

}  // namespace pockets
