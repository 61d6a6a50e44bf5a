#pragma once

#include <compare>
#include <map>
#include <optional>

#include "pockets/dynamics.hpp"
#include "pockets/forcing.hpp"
#include "pockets/fourier.hpp"

namespace pockets {

/// Powers of the small parameters (eta, eps, delta) carried by a term.
/// The grading counts delta twice: grade = eta + eps + 2 delta.
struct Degree {
    int eta = 0;
    int eps = 0;
    int delta = 0;

    int grade() const { return eta + eps + 2 * delta; }
    Degree operator+(const Degree& o) const { return {eta + o.eta, eps + o.eps, delta + o.delta}; }
    auto operator<=>(const Degree&) const = default;
};

struct TermIndex {
    int k = 0;
    int l = 0;
    Degree degree;

    auto operator<=>(const TermIndex&) const = default;
};

/// x-component of a torus vector field,
///   sum c_{k,l,d} eta^a eps^b delta^c e^{2 pi i (k x + l y)} d/dx,
/// with finite support |k|, |l| <= order.
class TaylorFourierField {
public:
    explicit TaylorFourierField(int order = 0) : order_(order) {}

    int order() const { return order_; }
    /// Set when a bracket dropped terms outside the order cap.
    bool truncated() const { return truncated_; }
    void mark_truncated() { truncated_ = true; }

    /// Accumulates c into the term; throws std::out_of_range outside the support.
    void add(int k, int l, Degree d, cplx c);
    cplx coeff(int k, int l, Degree d) const;
    const std::map<TermIndex, cplx>& terms() const { return terms_; }

    /// Common grade of all terms, or nullopt for an empty or mixed field.
    std::optional<int> homogeneous_grade() const;
    bool is_real(double tol = 1e-12) const;

    TaylorFourierField scaled(cplx s) const;
    TaylorFourierField& operator+=(const TaylorFourierField& other);

    /// Pointwise value with the parameters substituted.
    cplx evaluate(double x, double y, double eta, double eps, double delta) const;

private:
    int order_;
    bool truncated_ = false;
    std::map<TermIndex, cplx> terms_;
};

/// Generator Y of the degree-1 transformation: a_{k,l} = q c_{k,l} / (2 pi i (p k + q l))
/// off resonance, 0 on resonance. Requires a field homogeneous of grade 1.
TaylorFourierField homological_solve(const TaylorFourierField& x1, int p, int q);

/// h = a df/dx - f da/dx as a coefficient convolution. Terms with an index
/// beyond `order_cap` (default a.order + f.order) are dropped and the result
/// is flagged truncated.
TaylorFourierField lie_bracket_x(const TaylorFourierField& a, const TaylorFourierField& f,
                                 std::optional<int> order_cap = std::nullopt);

/// Keeps exactly the terms with p k + q l = 0.
TaylorFourierField resonant_project(const TaylorFourierField& x, int p, int q);

/// Degree-2 normal form in the co-moving phase u = x - (p/q) y:
///   u' = sigma + mean_drift + second_order_drift + coupling(u).
struct ReducedField {
    int p = 1;
    int q = 1;
    double sigma = 0.0;
    double mean_drift = 0.0;          // resonant degree-1 part, eta f_0 + eps g_0
    double second_order_drift = 0.0;  // -(q/p) eta^2 sum_{k != 0} f_k f_{-k}
    FourierSeries1 coupling;          // zero-mean part, harmonics of q u

    double drift() const { return sigma + mean_drift + second_order_drift; }
    double evaluate(double u) const { return drift() + coupling.evaluate_real(u); }
};

ReducedField seasonal_normal_form(const OscillatorParams& params);

struct ValueRange {
    double min = 0.0;
    double max = 0.0;
};

/// Extremes of the u-dependent part: 1024-point grid, Newton-polished.
/// A stationary point exists iff -drift lies in [min, max].
ValueRange stationary_range(const ReducedField& rf);

struct GeneralParams {
    double delta = 0.0;  // total drift of the reduced field
    double mu = 0.0;     // half-width of the coupling's range
};

GeneralParams map_to_general(const OscillatorParams& params);

struct SigmaInterval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
};

/// Detuning interval where the reduced field at season `lambda` has a
/// stationary point. `params.sigma` is ignored.
SigmaInterval predicted_boundaries(const OscillatorParams& params, double lambda);

/// Zeros of lambda -> |g_{-p}(lambda)| inside (0, 1), plus one. Equals p for
/// the pure block; a perturbed forcing usually gives 1.
int pocket_count(int p, const SeasonalForcing& forcing);

}  // namespace pockets
