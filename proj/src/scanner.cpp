#include "pockets/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace pockets {

std::string param_name(Param param) {
    switch (param) {
    case Param::omega: return "omega";
    case Param::sigma: return "sigma";
    case Param::eps: return "eps";
    case Param::eta: return "eta";
    case Param::lambda: return "lambda";
    }
    return "?";
}

Param parse_param(const std::string& name) {
    for (Param p : {Param::omega, Param::sigma, Param::eps, Param::eta, Param::lambda})
        if (param_name(p) == name) return p;
    throw std::invalid_argument("unknown scan parameter '" + name + "'");
}

double AxisSpec::value(int i) const {
    if (i == n - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

void AxisSpec::validate() {
    if (n < 2) throw std::invalid_argument(param_name(param) + " axis needs at least 2 points");
    if (!(lo < hi)) throw std::invalid_argument(param_name(param) + " axis needs lo < hi");
    if (param == Param::lambda) {
        lo = std::clamp(lo, 0.0, 1.0);
        hi = std::clamp(hi, 0.0, 1.0);
        if (!(lo < hi)) throw std::invalid_argument("lambda axis is empty after clamping to [0, 1]");
    }
}

OscillatorParams with_param(const OscillatorParams& params, Param param, double value) {
    OscillatorParams out = params;
    switch (param) {
    case Param::omega: out.set_omega(value); break;
    case Param::sigma: out.sigma = value; break;
    case Param::eps: out.eps = value; break;
    case Param::eta: out.eta = value; break;
    case Param::lambda: out.forcing.lambda = value; break;
    }
    return out;
}

namespace {

bool is_detuning(Param p) { return p == Param::omega || p == Param::sigma; }

ScanCell evaluate_cell(const ScanSpec& spec, const OscillatorParams& base, std::size_t index) {
    const int column = static_cast<int>(index % static_cast<std::size_t>(spec.columns.n));
    const int row = static_cast<int>(index / static_cast<std::size_t>(spec.columns.n));
    OscillatorParams params = with_param(base, spec.columns.param, spec.columns.value(column));
    params = with_param(params, spec.rows.param, spec.rows.value(row));

    ScanCell cell;
    const EntrainmentResult e = entrainment_test(params, false);
    cell.entrained = e.entrained;
    cell.degenerate = e.degenerate;
    cell.rotation = spec.rotation_iters > 0 ? rotation_number(params, 0.0, spec.rotation_iters)
                                            : std::numeric_limits<double>::quiet_NaN();
    if (spec.measure_widths) cell.width = measure_width(params.forcing.lambda, params).width();
    return cell;
}

ScanSpec checked(ScanSpec spec, const OscillatorParams& base) {
    spec.columns.validate();
    spec.rows.validate();
    if (spec.columns.param == spec.rows.param) throw std::invalid_argument("scan axes must differ");
    if (is_detuning(spec.columns.param) && is_detuning(spec.rows.param))
        throw std::invalid_argument("omega and sigma cannot both be scanned");
    if (spec.rotation_iters != 0 && spec.rotation_iters < 256)
        throw std::invalid_argument("rotation iterations must be 0 or at least 256");
    if (spec.measure_widths && (is_detuning(spec.columns.param) || is_detuning(spec.rows.param)))
        throw std::invalid_argument("width measurement sweeps the detuning itself; do not scan omega/sigma");
    if (spec.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
    base.validate();
    return spec;
}

}  // namespace

ScanGrid scan(ScanSpec spec, const OscillatorParams& base) {
    spec = checked(spec, base);
    ScanGrid grid{spec.columns, spec.rows, {}};
    const std::size_t total = static_cast<std::size_t>(spec.columns.n) * static_cast<std::size_t>(spec.rows.n);
    grid.cells.resize(total);

    // Workers pull cell indices and write disjoint slots.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) grid.cells[i] = evaluate_cell(spec, base, i);
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), total);
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    return grid;
}

ScanGrid scan_in_order(ScanSpec spec, const OscillatorParams& base, const std::vector<std::size_t>& order) {
    spec = checked(spec, base);
    ScanGrid grid{spec.columns, spec.rows, {}};
    const std::size_t total = static_cast<std::size_t>(spec.columns.n) * static_cast<std::size_t>(spec.rows.n);
    if (order.size() != total) throw std::invalid_argument("evaluation order must cover every cell");
    grid.cells.resize(total);
    std::vector<bool> seen(total, false);
    for (std::size_t i : order) {
        if (i >= total || seen[i]) throw std::invalid_argument("evaluation order must be a permutation");
        seen[i] = true;
        grid.cells[i] = evaluate_cell(spec, base, i);
    }
    return grid;
}

WidthResult measure_width(double lambda, const OscillatorParams& base) {
    OscillatorParams params = base;
    params.forcing.lambda = lambda;
    params.validate();

    auto locking = [&](double sigma) {
        params.sigma = sigma;
        return entrainment_test(params, false).locking();
    };

    // G = F^q - id - p increases with sigma, so slower / entrained / faster
    // are ordered along the detuning axis.
    double slow = -0.5 / params.q;
    double fast = 0.5 / params.q;
    const Locking at_lo = locking(slow);
    const Locking at_hi = locking(fast);
    if (at_lo == Locking::faster || at_hi == Locking::slower) return {fast, slow, WidthStatus::no_entrainment};

    std::optional<double> inside;
    if (at_lo == Locking::entrained) inside = slow;
    if (at_hi == Locking::entrained) inside = fast;
    while (!inside && fast - slow > kEdgeTol) {
        const double mid = 0.5 * (slow + fast);
        switch (locking(mid)) {
        case Locking::slower: slow = mid; break;
        case Locking::faster: fast = mid; break;
        case Locking::entrained: inside = mid; break;
        case Locking::degenerate: return {mid, mid - kEdgeTol, WidthStatus::degenerate};
        }
    }
    if (!inside) return {fast, slow, WidthStatus::unresolved};

    // Bisection on the entrained predicate between a locked and an unlocked detuning.
    auto edge = [&](double locked, double unlocked) {
        while (std::abs(unlocked - locked) > kEdgeTol) {
            const double mid = 0.5 * (locked + unlocked);
            if (locking(mid) == Locking::entrained)
                locked = mid;
            else
                unlocked = mid;
        }
        return locked;
    };
    const double lo = at_lo == Locking::entrained ? slow : edge(*inside, slow);
    const double hi = at_hi == Locking::entrained ? fast : edge(*inside, fast);
    return {lo, hi, WidthStatus::bracketed};
}

std::vector<LambdaInterval> seasonal_range(double omega, const OscillatorParams& base) {
    constexpr int kGrid = 512;
    OscillatorParams params = base;
    params.set_omega(omega);
    params.validate();

    auto entrained = [&](double lambda) {
        params.forcing.lambda = lambda;
        return entrainment_test(params, false).entrained;
    };
    auto lambda_at = [](int i) { return i == kGrid - 1 ? 1.0 : static_cast<double>(i) / (kGrid - 1); };
    auto refine = [&](double locked, double unlocked) {
        while (std::abs(unlocked - locked) > kEdgeTol) {
            const double mid = 0.5 * (locked + unlocked);
            if (entrained(mid))
                locked = mid;
            else
                unlocked = mid;
        }
        return locked;
    };

    std::vector<bool> hit(kGrid);
    for (int i = 0; i < kGrid; ++i) hit[static_cast<std::size_t>(i)] = entrained(lambda_at(i));

    std::vector<LambdaInterval> runs;
    for (int i = 0; i < kGrid;) {
        if (!hit[static_cast<std::size_t>(i)]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < kGrid && hit[static_cast<std::size_t>(j + 1)]) ++j;
        const double lo = i == 0 ? 0.0 : refine(lambda_at(i), lambda_at(i - 1));
        const double hi = j == kGrid - 1 ? 1.0 : refine(lambda_at(j), lambda_at(j + 1));
        runs.push_back({lo, hi});
        i = j + 1;
    }
    return runs;
}

std::string format_double(double value) {
    char buf[64];
    // Adding +0.0 folds -0 into 0 so tables never print "-0".
    const auto res = std::to_chars(buf, buf + sizeof buf, value + 0.0, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const ScanGrid& grid) {
    bool widths = false;
    for (const auto& c : grid.cells) widths = widths || c.width.has_value();
    out << param_name(grid.columns.param) << ',' << param_name(grid.rows.param)
        << ",entrained,degenerate,rotation" << (widths ? ",width" : "") << '\n';
    for (int r = 0; r < grid.rows.n; ++r) {
        for (int c = 0; c < grid.columns.n; ++c) {
            const ScanCell& cell = grid.at(c, r);
            out << format_double(grid.columns.value(c)) << ',' << format_double(grid.rows.value(r)) << ','
                << (cell.entrained ? 1 : 0) << ',' << (cell.degenerate ? 1 : 0) << ',' << format_double(cell.rotation);
            if (widths) out << ',' << (cell.width ? format_double(*cell.width) : std::string("nan"));
            out << '\n';
        }
    }
}

void write_pgm(std::ostream& out, const ScanGrid& grid) {
    out << "P5 " << grid.columns.n << ' ' << grid.rows.n << " 255\n";
    std::string row(static_cast<std::size_t>(grid.columns.n), '\0');
    for (int r = 0; r < grid.rows.n; ++r) {
        for (int c = 0; c < grid.columns.n; ++c) {
            const ScanCell& cell = grid.at(c, r);
            row[static_cast<std::size_t>(c)] = static_cast<char>(cell.entrained ? 255 : cell.degenerate ? 128 : 0);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace pockets
