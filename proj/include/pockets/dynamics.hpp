#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pockets/forcing.hpp"
#include "pockets/fourier.hpp"

namespace pockets {

/// One point in parameter space of the seasonal oscillator
///   x' = p/q + sigma + eta f(x) + eps g(y),   y' = 1.
struct OscillatorParams {
    int p = 1;
    int q = 1;
    double sigma = 0.0;
    double eta = 0.0;
    double eps = 0.0;
    SeasonalForcing forcing{};
    FourierSeries1 nonlinearity = FourierSeries1::sine();
    int steps_per_period = 512;

    double omega() const { return static_cast<double>(p) / q + sigma; }
    void set_omega(double omega) { sigma = omega - static_cast<double>(p) / q; }

    /// Throws std::invalid_argument on any broken invariant.
    void validate() const;
};

/// Right-hand side of the lifted flow at (x, y).
std::pair<double, double> rhs(double x, double y, const OscillatorParams& params);

/// Stroboscopic map x -> x(1) of the lifted flow started at (x, 0), integrated
/// with fixed-step classical RK4. Immutable once built; safe to share between threads.
class LiftedMap {
public:
    explicit LiftedMap(OscillatorParams params);

    double operator()(double x) const;
    /// Applies the map once to every entry, in place.
    void apply(std::span<double> xs) const;
    double iterate(double x, long n) const;

    const OscillatorParams& params() const { return params_; }
    int steps() const { return params_.steps_per_period; }

private:
    OscillatorParams params_;
    double drift_ = 0.0;                 // omega + eta Re f_0
    std::vector<double> forcing_;        // eps g(j / 2N), j = 0..2N
    std::vector<double> cos_weights_;    // eta * 2 Re f_k, k = 1..Kf
    std::vector<double> sin_weights_;    // -eta * 2 Im f_k
    bool sine_only_ = false;
};

double poincare_map(double x0, const OscillatorParams& params);

/// (F^n(x1) - x1) / n with x1 = F^128(x0). Requires n_iter >= 256.
double rotation_number(const OscillatorParams& params, double x0, int n_iter);

inline constexpr int kDetectionGrid = 256;
inline constexpr double kDetectionTol = 1e-10;
inline constexpr int kBurnIn = 128;

/// Position of the p:q locking condition G = F^q - id - p relative to zero.
enum class Locking { slower, entrained, faster, degenerate };

struct EntrainmentResult {
    bool entrained = false;
    bool degenerate = false;
    std::optional<double> witness;  // zero of G, preferring an attracting crossing
    double g_min = 0.0;
    double g_max = 0.0;

    Locking locking() const;
};

/// Samples G on a uniform 256-point grid of [0, 1). Entrained iff G changes
/// sign with a spread above 1e-10; degenerate iff max |G| < 1e-10.
EntrainmentResult entrainment_test(const OscillatorParams& params, bool refine_witness = true);

}  // namespace pockets
