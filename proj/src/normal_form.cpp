#include "pockets/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "pockets/trig.hpp"

namespace pockets {

using std::numbers::pi;

void TaylorFourierField::add(int k, int l, Degree d, cplx c) {
    if (std::abs(k) > order_ || std::abs(l) > order_) throw std::out_of_range("term outside field support");
    if (c == cplx{}) return;
    terms_[TermIndex{k, l, d}] += c;
}

cplx TaylorFourierField::coeff(int k, int l, Degree d) const {
    const auto it = terms_.find(TermIndex{k, l, d});
    return it == terms_.end() ? cplx{} : it->second;
}

std::optional<int> TaylorFourierField::homogeneous_grade() const {
    std::optional<int> grade;
    for (const auto& [idx, c] : terms_) {
        if (c == cplx{}) continue;
        if (grade && *grade != idx.degree.grade()) return std::nullopt;
        grade = idx.degree.grade();
    }
    return grade;
}

bool TaylorFourierField::is_real(double tol) const {
    for (const auto& [idx, c] : terms_) {
        const cplx mirror = coeff(-idx.k, -idx.l, idx.degree);
        if (std::abs(mirror - std::conj(c)) > tol * (1.0 + std::abs(c))) return false;
    }
    return true;
}

TaylorFourierField TaylorFourierField::scaled(cplx s) const {
    TaylorFourierField out(order_);
    out.truncated_ = truncated_;
    for (const auto& [idx, c] : terms_) out.terms_[idx] = s * c;
    return out;
}

TaylorFourierField& TaylorFourierField::operator+=(const TaylorFourierField& other) {
    order_ = std::max(order_, other.order_);
    truncated_ = truncated_ || other.truncated_;
    for (const auto& [idx, c] : other.terms_) terms_[idx] += c;
    return *this;
}

cplx TaylorFourierField::evaluate(double x, double y, double eta, double eps, double delta) const {
    cplx sum{};
    for (const auto& [idx, c] : terms_) {
        const double w = std::pow(eta, idx.degree.eta) * std::pow(eps, idx.degree.eps) *
                         std::pow(delta, idx.degree.delta);
        const double phase = idx.k * x + idx.l * y;
        const double r = 2.0 * (phase - std::nearbyint(phase));
        sum += c * w * cplx{cospi(r), sinpi(r)};
    }
    return sum;
}

TaylorFourierField homological_solve(const TaylorFourierField& x1, int p, int q) {
    if (x1.terms().empty()) return TaylorFourierField(x1.order());
    if (x1.homogeneous_grade() != 1) throw std::invalid_argument("homological_solve expects a field of degree 1");
    TaylorFourierField y(x1.order());
    for (const auto& [idx, c] : x1.terms()) {
        const long resonance = static_cast<long>(p) * idx.k + static_cast<long>(q) * idx.l;
        if (resonance == 0) continue;
        y.add(idx.k, idx.l, idx.degree, static_cast<double>(q) * c / cplx{0.0, 2.0 * pi * resonance});
    }
    return y;
}

TaylorFourierField lie_bracket_x(const TaylorFourierField& a, const TaylorFourierField& f, std::optional<int> order_cap) {
    const int cap = order_cap.value_or(a.order() + f.order());
    TaylorFourierField h(cap);
    for (const auto& [ia, ca] : a.terms()) {
        for (const auto& [i_f, cf] : f.terms()) {
            const int k = ia.k + i_f.k;
            const int l = ia.l + i_f.l;
            const double w = 2.0 * pi * (i_f.k - ia.k);
            if (w == 0.0) continue;
            if (std::abs(k) > cap || std::abs(l) > cap) {
                h.mark_truncated();
                continue;
            }
            h.add(k, l, ia.degree + i_f.degree, cplx{0.0, w} * ca * cf);
        }
    }
    if (a.truncated() || f.truncated()) h.mark_truncated();
    return h;
}

TaylorFourierField resonant_project(const TaylorFourierField& x, int p, int q) {
    TaylorFourierField out(x.order());
    if (x.truncated()) out.mark_truncated();
    for (const auto& [idx, c] : x.terms())
        if (static_cast<long>(p) * idx.k + static_cast<long>(q) * idx.l == 0) out.add(idx.k, idx.l, idx.degree, c);
    return out;
}

namespace {

constexpr Degree kEta{1, 0, 0};
constexpr Degree kEps{0, 1, 0};

double weight(const Degree& d, double eta, double eps) {
    return std::pow(eta, d.eta) * std::pow(eps, d.eps);
}

}  // namespace

ReducedField seasonal_normal_form(const OscillatorParams& params) {
    params.validate();
    const auto& f = params.nonlinearity;
    const auto& sf = params.forcing;
    const int order = std::max(f.order(), sf.order);

    // Degree-1 part: eta f(x) + eps g(y); mixed (k, l) terms vanish.
    TaylorFourierField x1(order);
    for (int k = -f.order(); k <= f.order(); ++k) x1.add(k, 0, kEta, f[k]);
    for (int l = -sf.order; l <= sf.order; ++l) x1.add(0, l, kEps, perturbed_coeff(l, sf));

    // With ad_Y(X0) = -X1_nonres the degree-2 resonant part is (1/2) [Y, X1].
    const TaylorFourierField y = homological_solve(x1, params.p, params.q);
    const TaylorFourierField second = resonant_project(lie_bracket_x(y, x1).scaled(0.5), params.p, params.q);
    const TaylorFourierField first = resonant_project(x1, params.p, params.q);

    ReducedField rf;
    rf.p = params.p;
    rf.q = params.q;
    rf.sigma = params.sigma;

    // On resonance k x + l y = k u, so (k, l) becomes harmonic k of u.
    int top = 1;
    for (const auto* part : {&first, &second})
        for (const auto& [idx, c] : part->terms()) top = std::max(top, std::abs(idx.k));
    std::vector<cplx> coupling(2 * static_cast<std::size_t>(top) + 1);
    auto collect = [&](const TaylorFourierField& part, double& drift) {
        for (const auto& [idx, c] : part.terms()) {
            const cplx v = c * weight(idx.degree, params.eta, params.eps);
            if (idx.k == 0)
                drift += v.real();
            else
                coupling[static_cast<std::size_t>(idx.k + top)] += v;
        }
    };
    collect(first, rf.mean_drift);
    collect(second, rf.second_order_drift);
    rf.coupling = FourierSeries1(std::move(coupling), true);
    return rf;
}

ValueRange stationary_range(const ReducedField& rf) {
    const auto& c = rf.coupling;
    bool any = false;
    for (const cplx& v : c.coefficients()) any = any || v != cplx{};
    if (!any) return {};

    constexpr int kGrid = 1024;
    int arg_min = 0, arg_max = 0;
    double vmin = c.evaluate_real(0.0), vmax = vmin;
    for (int i = 1; i < kGrid; ++i) {
        const double v = c.evaluate_real(static_cast<double>(i) / kGrid);
        if (v < vmin) vmin = v, arg_min = i;
        if (v > vmax) vmax = v, arg_max = i;
    }

    // Newton on the derivative, confined to the neighbouring grid cells.
    auto polish = [&](int index, double best, bool maximize) {
        const double u0 = static_cast<double>(index) / kGrid;
        double u = u0;
        for (int it = 0; it < 8; ++it) {
            const double d1 = c.derivative_real(u);
            const double d2 = c.second_derivative_real(u);
            if (maximize ? d2 >= 0.0 : d2 <= 0.0) break;
            const double next = u - d1 / d2;
            if (std::abs(next - u0) > 1.0 / kGrid) break;
            u = next;
        }
        const double v = c.evaluate_real(u);
        return maximize ? std::max(best, v) : std::min(best, v);
    };
    return {polish(arg_min, vmin, false), polish(arg_max, vmax, true)};
}

GeneralParams map_to_general(const OscillatorParams& params) {
    const ReducedField rf = seasonal_normal_form(params);
    const ValueRange r = stationary_range(rf);
    return {rf.drift(), 0.5 * (r.max - r.min)};
}

SigmaInterval predicted_boundaries(const OscillatorParams& params, double lambda) {
    OscillatorParams at = params;
    at.sigma = 0.0;
    at.forcing.lambda = lambda;
    const ReducedField rf = seasonal_normal_form(at);
    const ValueRange r = stationary_range(rf);
    const double d0 = rf.drift();
    return {-d0 - r.max, -d0 - r.min};
}

int pocket_count(int p, const SeasonalForcing& forcing) {
    if (p < 1) throw std::invalid_argument("pocket_count needs p >= 1");
    forcing.validate();
    auto amplitude = [&](double lambda) {
        SeasonalForcing sf = forcing;
        sf.lambda = lambda;
        return std::abs(perturbed_coeff(-p, sf));
    };

    constexpr int kGrid = 2048;
    std::vector<double> a(kGrid + 1);
    double peak = 0.0;
    for (int i = 0; i <= kGrid; ++i) {
        a[static_cast<std::size_t>(i)] = amplitude(static_cast<double>(i) / kGrid);
        peak = std::max(peak, a[static_cast<std::size_t>(i)]);
    }
    if (peak == 0.0) return 0;

    int zeros = 0;
    for (int i = 1; i < kGrid; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (!(a[u] <= a[u - 1] && a[u] < a[u + 1])) continue;
        const auto [arg, value] = boost::math::tools::brent_find_minima(
            amplitude, static_cast<double>(i - 1) / kGrid, static_cast<double>(i + 1) / kGrid,
            std::numeric_limits<double>::digits);
        if (arg > 0.0 && arg < 1.0 && value < 1e-6 * peak) ++zeros;
    }
    return zeros + 1;
}

}  // namespace pockets
