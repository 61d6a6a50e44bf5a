#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pockets {

using cplx = std::complex<double>;

/// Truncated complex Fourier series on the circle, sum_{|k|<=K} c_k e^{2 pi i k t}.
///
/// A series flagged real must satisfy c_{-k} = conj(c_k); the constructor
/// checks this and throws std::invalid_argument otherwise.
class FourierSeries1 {
public:
    FourierSeries1() = default;

    /// `coeffs` holds c_{-K} .. c_K, so its size must be odd.
    FourierSeries1(std::vector<cplx> coeffs, bool real);

    /// Zero series of order K.
    static FourierSeries1 zeros(int order, bool real = true);

    /// sin(2 pi t): c_{+-1} = -+i/2.
    static FourierSeries1 sine();

    int order() const { return order_; }
    bool is_real() const { return real_; }

    /// Coefficient c_k; zero outside the support.
    cplx operator[](int k) const;

    /// Mirrors the value into c_{-k} for real series.
    void set(int k, cplx value);

    std::span<const cplx> coefficients() const { return coeffs_; }

    cplx evaluate(double t) const;
    /// Real part of evaluate(t); for real series the imaginary part is rounding noise.
    double evaluate_real(double t) const;
    double derivative_real(double t) const;
    double second_derivative_real(double t) const;

private:
    std::vector<cplx> coeffs_{cplx{}};
    int order_ = 0;
    bool real_ = true;
};

}  // namespace pockets
