#include "pockets/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pockets/trig.hpp"

namespace pockets {

namespace {

constexpr double kRealnessTol = 1e-12;

cplx unit_phase(int k, double t) {
    // Reduce k*t before scaling by pi so large k keeps full accuracy.
    const double kt = static_cast<double>(k) * t;
    const double arg = 2.0 * (kt - std::nearbyint(kt));
    return {cospi(arg), sinpi(arg)};
}

}  // namespace

FourierSeries1::FourierSeries1(std::vector<cplx> coeffs, bool real)
    : coeffs_(std::move(coeffs)), real_(real) {
    if (coeffs_.empty() || coeffs_.size() % 2 == 0)
        throw std::invalid_argument("Fourier series needs 2K+1 coefficients");
    order_ = static_cast<int>(coeffs_.size() / 2);
    if (!real_) return;
    for (int k = 0; k <= order_; ++k) {
        const cplx a = (*this)[k];
        const cplx b = std::conj((*this)[-k]);
        if (std::abs(a - b) > kRealnessTol * (1.0 + std::abs(a)))
            throw std::invalid_argument("series flagged real violates c(-k) = conj(c(k)) at k = " +
                                        std::to_string(k));
    }
}

FourierSeries1 FourierSeries1::zeros(int order, bool real) {
    if (order < 0) throw std::invalid_argument("Fourier order must be non-negative");
    return FourierSeries1(std::vector<cplx>(2 * static_cast<std::size_t>(order) + 1), real);
}

FourierSeries1 FourierSeries1::sine() {
    return FourierSeries1({cplx{0.0, 0.5}, cplx{}, cplx{0.0, -0.5}}, true);
}

cplx FourierSeries1::operator[](int k) const {
    if (k < -order_ || k > order_) return {};
    return coeffs_[static_cast<std::size_t>(k + order_)];
}

void FourierSeries1::set(int k, cplx value) {
    if (k < -order_ || k > order_) throw std::out_of_range("Fourier index outside support");
    if (real_ && k == 0 && std::abs(value.imag()) > kRealnessTol)
        throw std::invalid_argument("mean of a real series must be real");
    coeffs_[static_cast<std::size_t>(k + order_)] = real_ && k == 0 ? cplx{value.real(), 0.0} : value;
    if (real_ && k != 0) coeffs_[static_cast<std::size_t>(order_ - k)] = std::conj(value);
}

cplx FourierSeries1::evaluate(double t) const {
    cplx sum{};
    for (int k = -order_; k <= order_; ++k) sum += (*this)[k] * unit_phase(k, t);
    return sum;
}

double FourierSeries1::evaluate_real(double t) const {
    if (!real_) return evaluate(t).real();
    double sum = (*this)[0].real();
    for (int k = 1; k <= order_; ++k) sum += 2.0 * ((*this)[k] * unit_phase(k, t)).real();
    return sum;
}

double FourierSeries1::derivative_real(double t) const {
    cplx sum{};
    for (int k = -order_; k <= order_; ++k)
        sum += cplx{0.0, 2.0 * std::numbers::pi * k} * (*this)[k] * unit_phase(k, t);
    return sum.real();
}

double FourierSeries1::second_derivative_real(double t) const {
    double sum = 0.0;
    for (int k = -order_; k <= order_; ++k) {
        const double w = 2.0 * std::numbers::pi * k;
        sum -= w * w * ((*this)[k] * unit_phase(k, t)).real();
    }
    return sum;
}

}  // namespace pockets
