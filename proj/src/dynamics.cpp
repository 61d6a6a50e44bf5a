#include "pockets/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pockets/trig.hpp"

namespace pockets {

void OscillatorParams::validate() const {
    if (p < 1 || q < 1) throw std::invalid_argument("p and q must be positive");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("p and q must be coprime");
    if (!std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be non-negative");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be non-negative");
    if (steps_per_period < 64) throw std::invalid_argument("steps_per_period must be at least 64");
    if (!nonlinearity.is_real()) throw std::invalid_argument("nonlinearity f must be a real series");
    forcing.validate();
}

std::pair<double, double> rhs(double x, double y, const OscillatorParams& params) {
    const double fx = params.eta == 0.0 ? 0.0 : params.eta * params.nonlinearity.evaluate_real(x);
    const double gy = params.eps == 0.0 ? 0.0 : params.eps * eval_forcing(y, params.forcing);
    return {params.omega() + fx + gy, 1.0};
}

namespace {

// Samples of the real series at t = j / (2N), j = 0..2N, using exact roots of unity.
std::vector<double> sample_half_steps(const FourierSeries1& series, int steps) {
    const int m = 2 * steps;
    std::vector<cplx> roots(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double t = 2.0 * j / m;
        roots[static_cast<std::size_t>(j)] = {cospi(t), sinpi(t)};
    }
    std::vector<double> out(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
        double v = series[0].real();
        for (int k = 1; k <= series.order(); ++k) {
            const auto idx = static_cast<std::size_t>((static_cast<long long>(k) * j) % m);
            v += 2.0 * (series[k] * roots[idx]).real();
        }
        out[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

struct SineField {
    double amp;
    double operator()(double x) const { return amp * sin_turns(x); }
};

struct HarmonicField {
    const double* cw;
    const double* sw;
    int terms;
    double operator()(double x) const {
        const double s1 = sin_turns(x);
        const double c1 = cos_turns(x);
        double ck = c1, sk = s1, acc = cw[0] * c1 + sw[0] * s1;
        for (int k = 1; k < terms; ++k) {
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
            acc += cw[k] * ck + sw[k] * sk;
        }
        return acc;
    }
};

struct ZeroField {
    double operator()(double) const { return 0.0; }
};

template <class Field>
void rk4_period(std::span<double> xs, double drift, const double* g, int steps, Field field) {
    const double h = 1.0 / steps;
    const double hh = 0.5 * h;
    const double h6 = h / 6.0;
    for (int n = 0; n < steps; ++n) {
        const double v0 = drift + g[2 * n];
        const double v1 = drift + g[2 * n + 1];
        const double v2 = drift + g[2 * n + 2];
        double* x = xs.data();
        const std::size_t size = xs.size();
        for (std::size_t i = 0; i < size; ++i) {
            const double xi = x[i];
            const double k1 = v0 + field(xi);
            const double k2 = v1 + field(xi + hh * k1);
            const double k3 = v1 + field(xi + hh * k2);
            const double k4 = v2 + field(xi + h * k3);
            x[i] = xi + h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
}

}  // namespace

LiftedMap::LiftedMap(OscillatorParams params) : params_(std::move(params)) {
    params_.validate();
    const auto& f = params_.nonlinearity;
    drift_ = params_.omega() + params_.eta * f[0].real();

    if (params_.eps != 0.0) {
        forcing_ = sample_half_steps(forcing_series(params_.forcing), params_.steps_per_period);
        for (double& v : forcing_) v *= params_.eps;
    } else {
        forcing_.assign(2 * static_cast<std::size_t>(params_.steps_per_period) + 1, 0.0);
    }

    int top = 0;
    for (int k = 1; k <= f.order(); ++k)
        if (f[k] != cplx{}) top = k;
    if (params_.eta != 0.0) {
        for (int k = 1; k <= top; ++k) {
            cos_weights_.push_back(2.0 * params_.eta * f[k].real());
            sin_weights_.push_back(-2.0 * params_.eta * f[k].imag());
        }
    }
    sine_only_ = cos_weights_.size() == 1 && cos_weights_[0] == 0.0;
}

void LiftedMap::apply(std::span<double> xs) const {
    const int steps = params_.steps_per_period;
    if (cos_weights_.empty())
        rk4_period(xs, drift_, forcing_.data(), steps, ZeroField{});
    else if (sine_only_)
        rk4_period(xs, drift_, forcing_.data(), steps, SineField{sin_weights_[0]});
    else
        rk4_period(xs, drift_, forcing_.data(), steps,
                   HarmonicField{cos_weights_.data(), sin_weights_.data(), static_cast<int>(cos_weights_.size())});
}

double LiftedMap::operator()(double x) const {
    apply(std::span<double>(&x, 1));
    return x;
}

double LiftedMap::iterate(double x, long n) const {
    for (long i = 0; i < n; ++i) apply(std::span<double>(&x, 1));
    return x;
}

double poincare_map(double x0, const OscillatorParams& params) { return LiftedMap(params)(x0); }

double rotation_number(const OscillatorParams& params, double x0, int n_iter) {
    if (n_iter < 256) throw std::invalid_argument("rotation_number needs at least 256 iterates");
    const LiftedMap map(params);
    const double start = map.iterate(x0, kBurnIn);
    return (map.iterate(start, n_iter) - start) / n_iter;
}

Locking EntrainmentResult::locking() const {
    if (degenerate) return Locking::degenerate;
    if (entrained) return Locking::entrained;
    return g_max < 0.0 ? Locking::slower : Locking::faster;
}

EntrainmentResult entrainment_test(const OscillatorParams& params, bool refine_witness) {
    const LiftedMap map(params);
    const int q = params.q;
    const double p = params.p;

    std::vector<double> grid(kDetectionGrid);
    for (int i = 0; i < kDetectionGrid; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / kDetectionGrid;
    std::vector<double> image(grid);
    for (int j = 0; j < q; ++j) map.apply(image);

    std::vector<double> g(kDetectionGrid);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = image[i] - grid[i] - p;

    EntrainmentResult out;
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    out.g_min = *lo;
    out.g_max = *hi;
    const double sup = std::max(std::abs(out.g_min), std::abs(out.g_max));
    out.degenerate = sup < kDetectionTol;
    out.entrained = !out.degenerate && out.g_min <= 0.0 && 0.0 <= out.g_max && out.g_max - out.g_min > kDetectionTol;
    if (!out.entrained || !refine_witness) return out;

    // G is 1-periodic, so the last cell wraps to G(1) = G(0).
    auto crossing = [&](bool descending) -> std::optional<int> {
        for (int i = 0; i < kDetectionGrid; ++i) {
            const double a = g[static_cast<std::size_t>(i)];
            const double b = g[static_cast<std::size_t>((i + 1) % kDetectionGrid)];
            if (descending ? (a >= 0.0 && b < 0.0) : (a <= 0.0 && b > 0.0)) return i;
        }
        return std::nullopt;
    };
    auto cell = crossing(true);
    if (!cell) cell = crossing(false);
    if (!cell) return out;

    auto G = [&](double x) {
        double y = x;
        for (int j = 0; j < q; ++j) y = map(y);
        return y - x - p;
    };
    double a = static_cast<double>(*cell) / kDetectionGrid;
    double b = a + 1.0 / kDetectionGrid;
    double ga = g[static_cast<std::size_t>(*cell)];
    if (ga == 0.0) {
        out.witness = a;
        return out;
    }
    while (b - a > kDetectionTol) {
        const double m = 0.5 * (a + b);
        const double gm = G(m);
        if ((gm > 0.0) == (ga > 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    out.witness = 0.5 * (a + b);
    return out;
}

}  // namespace pockets
