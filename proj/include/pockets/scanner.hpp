#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pockets/dynamics.hpp"

namespace pockets {

enum class Param { omega, sigma, eps, eta, lambda };

std::string param_name(Param param);
/// Throws std::invalid_argument for an unknown name.
Param parse_param(const std::string& name);

/// n equispaced values lo..hi (both ends included) of one parameter.
struct AxisSpec {
    Param param = Param::sigma;
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    double value(int i) const;
    /// Requires n >= 2 and lo < hi; a lambda axis is clamped to [0, 1].
    void validate();
};

/// Copy of `params` with one scanned parameter overridden.
OscillatorParams with_param(const OscillatorParams& params, Param param, double value);

struct ScanCell {
    bool entrained = false;
    bool degenerate = false;
    double rotation = 0.0;        // NaN when the scan skips rotation numbers
    std::optional<double> width;  // measured sigma-width when requested
};

struct ScanSpec {
    AxisSpec columns;  // first axis, varies fastest
    AxisSpec rows;     // second axis
    int rotation_iters = 4096;  // 0 skips rotation numbers
    bool measure_widths = false;
    int jobs = 1;
};

/// Row-major grid of cells, `rows.n` rows of `columns.n` cells.
struct ScanGrid {
    AxisSpec columns;
    AxisSpec rows;
    std::vector<ScanCell> cells;

    const ScanCell& at(int column, int row) const {
        return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(columns.n) + static_cast<std::size_t>(column)];
    }
};

/// Evaluates every cell independently; the result does not depend on `jobs`.
ScanGrid scan(ScanSpec spec, const OscillatorParams& base);
/// Same cells, evaluated in the given order (a permutation of 0..n-1), serially.
ScanGrid scan_in_order(ScanSpec spec, const OscillatorParams& base, const std::vector<std::size_t>& order);

enum class WidthStatus {
    bracketed,       // entrained interval found and both edges refined
    no_entrainment,  // no entrained detuning in the search window
    unresolved,      // slower/faster sides meet below the 1e-9 resolution
    degenerate,      // the search ran into G == 0 (unforced rational case)
};

struct WidthResult {
    double lo = 0.0;
    double hi = 0.0;  // lo > hi when empty
    WidthStatus status = WidthStatus::no_entrainment;

    bool empty() const { return status != WidthStatus::bracketed; }
    double width() const { return empty() ? 0.0 : hi - lo; }
};

inline constexpr double kEdgeTol = 1e-9;

/// Entrained detuning interval at season `lambda`, searched in [-0.5/q, 0.5/q].
WidthResult measure_width(double lambda, const OscillatorParams& base);

struct LambdaInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Maximal runs of entrained seasons at fixed omega on a 512-point grid of
/// [0, 1], with run edges refined by bisection.
std::vector<LambdaInterval> seasonal_range(double omega, const OscillatorParams& base);

/// One row per cell: <columns>,<rows>,entrained,degenerate,rotation[,width].
void write_csv(std::ostream& out, const ScanGrid& grid);
/// Binary P5: entrained 255, degenerate 128, otherwise 0; one image row per grid row.
void write_pgm(std::ostream& out, const ScanGrid& grid);

/// Shortest round-trip decimal with 17 significant digits.
std::string format_double(double value);

}  // namespace pockets
