#include "pockets/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "pockets/dynamics.hpp"
#include "pockets/forcing.hpp"
#include "pockets/normal_form.hpp"
#include "pockets/scanner.hpp"

namespace pockets::cli {

namespace {

/// User-facing argument problem; maps to exit status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
        throw UsageError("invalid number '" + text + "' for " + what);
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

/// `lo:hi:n` axis syntax.
AxisSpec parse_axis(const std::string& text, Param param) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError(param_name(param) + " axis must be lo:hi:n, got '" + text + "'");
    AxisSpec axis{param, parse_number(parts[0], param_name(param)), parse_number(parts[1], param_name(param)), 0};
    const double n = parse_number(parts[2], param_name(param) + " points");
    if (n != std::floor(n) || n < 2 || n > 1e6) throw UsageError(param_name(param) + " axis needs an integer n >= 2");
    axis.n = static_cast<int>(n);
    if (param == Param::lambda && (axis.lo < 0.0 || axis.hi > 1.0))
        throw UsageError("lambda axis must lie in [0, 1]");
    try {
        axis.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return axis;
}

/// Parameter overrides shared by the subcommands, as given on the command line.
struct RunConfig {
    std::string subcommand;
    int p = 1;
    int q = 1;
    std::string sigma;  // scalar or axis, per subcommand
    std::string omega;
    std::string lambda;
    std::string eps;
    std::string x0;
    double eta = 0.1;
    double alpha = 50.0;
    double beta = 0.0;
    int kmax = 64;
    int steps = 512;
    int iters = 4096;
    std::vector<std::string> fcoef;
    std::string smoother = "gaussian";
    int jobs = 0;
    double tol = 0.15;
    std::string output;
    std::string format = "csv";
};

FourierSeries1 parse_nonlinearity(const std::vector<std::string>& specs) {
    if (specs.empty()) return FourierSeries1::sine();
    std::map<int, cplx> terms;
    int order = 1;
    for (const auto& s : specs) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw UsageError("--fcoef expects k:re:im, got '" + s + "'");
        const double kd = parse_number(parts[0], "--fcoef index");
        if (kd != std::floor(kd) || std::abs(kd) > 1024) throw UsageError("--fcoef index must be an integer");
        int k = static_cast<int>(kd);
        cplx c{parse_number(parts[1], "--fcoef"), parse_number(parts[2], "--fcoef")};
        if (k < 0) k = -k, c = std::conj(c);
        if (k == 0 && c.imag() != 0.0) throw UsageError("--fcoef 0 must be real for a real nonlinearity");
        if (auto it = terms.find(k); it != terms.end() && it->second != c)
            throw UsageError("conflicting --fcoef values for index " + std::to_string(k));
        terms[k] = c;
        order = std::max(order, k);
    }
    FourierSeries1 f = FourierSeries1::zeros(order);
    for (const auto& [k, c] : terms) f.set(k, c);
    return f;
}

OscillatorParams base_params(const RunConfig& cfg) {
    OscillatorParams params;
    params.p = cfg.p;
    params.q = cfg.q;
    params.eta = cfg.eta;
    params.steps_per_period = cfg.steps;
    params.forcing.alpha = cfg.alpha;
    params.forcing.beta = cfg.beta;
    params.forcing.order = cfg.kmax;
    if (cfg.smoother == "gaussian")
        params.forcing.smoother = Smoother::gaussian;
    else if (cfg.smoother == "bump")
        params.forcing.smoother = Smoother::cosine_bump;
    else
        throw UsageError("--smoother must be gaussian or bump");
    params.nonlinearity = parse_nonlinearity(cfg.fcoef);
    return params;
}

void check(const OscillatorParams& params) {
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

double scalar_or(const std::string& text, double fallback, const std::string& what) {
    return text.empty() ? fallback : parse_number(text, what);
}

/// Applies --sigma / --omega given as scalars.
void apply_detuning(OscillatorParams& params, const RunConfig& cfg) {
    if (!cfg.sigma.empty() && !cfg.omega.empty()) throw UsageError("give --sigma or --omega, not both");
    if (!cfg.omega.empty()) params.set_omega(parse_number(cfg.omega, "--omega"));
    if (!cfg.sigma.empty()) params.sigma = parse_number(cfg.sigma, "--sigma");
}

void apply_scalars(OscillatorParams& params, const RunConfig& cfg) {
    params.eps = scalar_or(cfg.eps, 0.1, "--eps");
    params.forcing.lambda = scalar_or(cfg.lambda, 0.5, "--lambda");
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string row;
    for (const auto& c : cells) {
        if (!row.empty()) row += ',';
        row += c;
    }
    return row + '\n';
}

std::string params_hash(const OscillatorParams& params) {
    std::ostringstream key;
    key << params.p << ':' << params.q << ':' << format_double(params.sigma) << ':' << format_double(params.eta) << ':'
        << format_double(params.eps) << ':' << format_double(params.forcing.lambda) << ':'
        << format_double(params.forcing.alpha) << ':' << format_double(params.forcing.beta) << ':'
        << params.forcing.order << ':' << static_cast<int>(params.forcing.smoother) << ':' << params.steps_per_period;
    for (const cplx& c : params.nonlinearity.coefficients())
        key << ':' << format_double(c.real()) << ':' << format_double(c.imag());
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char ch : key.str()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
    OscillatorParams params = base_params(cfg);
    params.forcing.lambda = scalar_or(cfg.lambda, 0.5, "--lambda");
    check(params);
    out << "k,re,im,modulus\n";
    for (int k = -params.forcing.order; k <= params.forcing.order; ++k) {
        const cplx c = perturbed_coeff(k, params.forcing);
        out << csv_row({std::to_string(k), format_double(c.real()), format_double(c.imag()), format_double(std::abs(c))});
    }
    return kExitOk;
}

int cmd_map(const RunConfig& cfg, std::ostream& out) {
    OscillatorParams params = base_params(cfg);
    apply_scalars(params, cfg);
    apply_detuning(params, cfg);
    check(params);
    const AxisSpec xs = parse_axis(cfg.x0.empty() ? "0:1:17" : cfg.x0, Param::sigma);
    const LiftedMap map(params);
    out << "x0,F\n";
    for (int i = 0; i < xs.n; ++i) out << csv_row({format_double(xs.value(i)), format_double(map(xs.value(i)))});
    return kExitOk;
}

int cmd_rotation(const RunConfig& cfg, std::ostream& out) {
    OscillatorParams params = base_params(cfg);
    apply_scalars(params, cfg);
    apply_detuning(params, cfg);
    check(params);
    if (cfg.iters < 256) throw UsageError("--iters must be at least 256");
    const double lifted = rotation_number(params, scalar_or(cfg.x0, 0.0, "--x0"), cfg.iters);
    out << "params_hash,rotation,lifted_rotation\n"
        << csv_row({params_hash(params), format_double(lifted - std::floor(lifted)), format_double(lifted)});
    return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, bool pockets) {
    OscillatorParams params = base_params(cfg);
    ScanSpec spec;
    const double center = static_cast<double>(cfg.p) / cfg.q;
    char window[96];
    if (pockets) {
        if (!cfg.sigma.empty()) throw UsageError("scan-pockets scans --omega; --sigma is not accepted");
        params.eps = scalar_or(cfg.eps, 0.1, "--eps");
        std::snprintf(window, sizeof window, "%.17g:%.17g:101", center - 0.15, center + 0.05);
        spec.columns = parse_axis(cfg.omega.empty() ? window : cfg.omega, Param::omega);
        spec.rows = parse_axis(cfg.lambda.empty() ? "0:1:101" : cfg.lambda, Param::lambda);
    } else {
        params.forcing.lambda = scalar_or(cfg.lambda, 0.5, "--lambda");
        if (!cfg.sigma.empty() && !cfg.omega.empty()) throw UsageError("give --sigma or --omega, not both");
        spec.columns = cfg.omega.empty() ? parse_axis(cfg.sigma.empty() ? "-0.1:0.05:101" : cfg.sigma, Param::sigma)
                                         : parse_axis(cfg.omega, Param::omega);
        spec.rows = parse_axis(cfg.eps.empty() ? "0:0.2:41" : cfg.eps, Param::eps);
        if (spec.rows.lo < 0.0) throw UsageError("eps axis must be non-negative");
    }
    check(params);
    if (cfg.format != "csv" && cfg.format != "pgm") throw UsageError("--format must be csv or pgm");
    if (cfg.format == "csv" && cfg.iters < 256) throw UsageError("--iters must be at least 256");
    spec.rotation_iters = cfg.format == "pgm" ? 0 : cfg.iters;
    spec.jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const ScanGrid grid = scan(spec, params);
    if (cfg.format == "pgm")
        write_pgm(out, grid);
    else
        write_csv(out, grid);
    return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
    OscillatorParams params = base_params(cfg);
    params.eps = scalar_or(cfg.eps, 0.1, "--eps");
    apply_detuning(params, cfg);
    check(params);
    const AxisSpec lambdas = parse_axis(cfg.lambda.empty() ? "0:1:11" : cfg.lambda, Param::lambda);
    out << "lambda,sigma_lo,sigma_hi,mu,delta\n";
    for (int i = 0; i < lambdas.n; ++i) {
        const double lambda = lambdas.value(i);
        const SigmaInterval b = predicted_boundaries(params, lambda);
        OscillatorParams at = params;
        at.forcing.lambda = lambda;
        const GeneralParams g = map_to_general(at);
        out << csv_row({format_double(lambda), format_double(b.lo), format_double(b.hi), format_double(g.mu),
                        format_double(g.delta)});
    }
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    OscillatorParams params = base_params(cfg);
    params.eps = scalar_or(cfg.eps, 0.1, "--eps");
    check(params);
    if (!(cfg.tol >= 0.0)) throw UsageError("--tol must be non-negative");
    const AxisSpec lambdas = parse_axis(cfg.lambda.empty() ? "0.1:0.9:9" : cfg.lambda, Param::lambda);
    out << "lambda,predicted_lo,predicted_hi,predicted_width,measured_lo,measured_hi,measured_width,rel_error\n";
    double worst = 0.0;
    for (int i = 0; i < lambdas.n; ++i) {
        const double lambda = lambdas.value(i);
        const SigmaInterval predicted = predicted_boundaries(params, lambda);
        const WidthResult measured = measure_width(lambda, params);
        const double pw = predicted.width();
        const double mw = measured.width();
        double rel = 0.0;
        if (pw > 1e-12)
            rel = std::abs(mw - pw) / pw;
        else if (mw > 1e-9)
            rel = std::numeric_limits<double>::infinity();
        worst = std::max(worst, rel);
        out << csv_row({format_double(lambda), format_double(predicted.lo), format_double(predicted.hi),
                        format_double(pw), format_double(measured.lo), format_double(measured.hi), format_double(mw),
                        format_double(rel)});
    }
    if (worst > cfg.tol) {
        err << "compare: max relative width error " << format_double(worst) << " exceeds --tol "
            << format_double(cfg.tol) << '\n';
        return kExitTolerance;
    }
    return kExitOk;
}

void add_model_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--p", cfg.p, "resonance numerator p (omega = p/q + sigma)");
    sub->add_option("--q", cfg.q, "resonance denominator q");
    sub->add_option("--eta", cfg.eta, "oscillator nonlinearity strength")->capture_default_str();
    sub->add_option("--alpha", cfg.alpha, "Gaussian smoothing width")->capture_default_str();
    sub->add_option("--beta", cfg.beta, "forcing perturbation amplitude in [0,1]")->capture_default_str();
    sub->add_option("-K,--kmax", cfg.kmax, "forcing truncation order")->capture_default_str();
    sub->add_option("--steps", cfg.steps, "RK4 steps per forcing period")->capture_default_str();
    sub->add_option("--fcoef", cfg.fcoef, "nonlinearity coefficient k:re:im (repeatable; default sin)");
    sub->add_option("--smoother", cfg.smoother, "gaussian or bump")->capture_default_str();
    sub->add_option("-o,--output", cfg.output, "output file (default stdout)");
}

std::string usage_footer() {
    return "Axes use lo:hi:n (n points, both ends included). Exit status: 0 ok, 2 usage error,\n"
           "1 internal error, 3 compare tolerance exceeded.";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Seasonal phase-oscillator entrainment: forcing coefficients, Poincare maps,\n"
                 "rotation numbers, tongue/pocket scans and normal-form predictions.",
                 "pockets"};
    app.footer(usage_footer());
    app.require_subcommand(1);

    auto* coeffs = app.add_subcommand("coeffs", "smoothed seasonal forcing coefficients (k, Re, Im, modulus)");
    add_model_options(coeffs, cfg);
    coeffs->add_option("--lambda", cfg.lambda, "daylight fraction in [0,1]");

    auto* map = app.add_subcommand("map", "table of the stroboscopic map x0 -> F(x0)");
    add_model_options(map, cfg);
    for (auto* sub : {map}) {
        sub->add_option("--sigma", cfg.sigma, "detuning");
        sub->add_option("--omega", cfg.omega, "frequency (overrides p/q + sigma)");
        sub->add_option("--eps", cfg.eps, "forcing strength");
        sub->add_option("--lambda", cfg.lambda, "daylight fraction");
        sub->add_option("--x0", cfg.x0, "start points lo:hi:n (default 0:1:17)");
    }

    auto* rotation = app.add_subcommand("rotation", "rotation number of the stroboscopic map");
    add_model_options(rotation, cfg);
    rotation->add_option("--sigma", cfg.sigma, "detuning");
    rotation->add_option("--omega", cfg.omega, "frequency (overrides p/q + sigma)");
    rotation->add_option("--eps", cfg.eps, "forcing strength");
    rotation->add_option("--lambda", cfg.lambda, "daylight fraction");
    rotation->add_option("--x0", cfg.x0, "start point");
    rotation->add_option("--iters", cfg.iters, "iterates averaged after burn-in")->capture_default_str();

    auto* tongues = app.add_subcommand("scan-tongues", "entrainment over a sigma (or omega) x eps grid");
    auto* pockets = app.add_subcommand("scan-pockets", "entrainment over an omega x lambda grid");
    for (auto* sub : {tongues, pockets}) {
        add_model_options(sub, cfg);
        sub->add_option("--omega", cfg.omega, "omega axis lo:hi:n");
        sub->add_option("--lambda", cfg.lambda, "lambda axis lo:hi:n (scan-pockets) or value");
        sub->add_option("--eps", cfg.eps, "eps axis lo:hi:n (scan-tongues) or value");
        sub->add_option("--iters", cfg.iters, "rotation-number iterates per cell")->capture_default_str();
        sub->add_option("--jobs", cfg.jobs, "worker threads (default: all cores)");
        sub->add_option("--format", cfg.format, "csv or pgm")->capture_default_str();
    }
    tongues->add_option("--sigma", cfg.sigma, "sigma axis lo:hi:n");

    auto* predict = app.add_subcommand("predict", "normal-form boundaries per lambda");
    add_model_options(predict, cfg);
    predict->add_option("--sigma", cfg.sigma, "detuning used for delta");
    predict->add_option("--omega", cfg.omega, "frequency used for delta");
    predict->add_option("--eps", cfg.eps, "forcing strength");
    predict->add_option("--lambda", cfg.lambda, "lambda axis lo:hi:n (default 0:1:11)");

    auto* compare = app.add_subcommand("compare", "predicted vs measured entrainment widths");
    add_model_options(compare, cfg);
    compare->add_option("--eps", cfg.eps, "forcing strength");
    compare->add_option("--lambda", cfg.lambda, "lambda axis lo:hi:n (default 0.1:0.9:9)");
    compare->add_option("--tol", cfg.tol, "max accepted relative width error")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();

    // Opened up front so an unwritable path fails before a long scan starts;
    // results are buffered and written only on success.
    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open output file '" << cfg.output << "'\n";
            return kExitUsage;
        }
    }
    std::ostringstream buffer;
    std::ostream& sink = cfg.output.empty() ? out : buffer;
    int status = kExitOk;
    try {
        if (cfg.subcommand == "coeffs")
            status = cmd_coeffs(cfg, sink);
        else if (cfg.subcommand == "map")
            status = cmd_map(cfg, sink);
        else if (cfg.subcommand == "rotation")
            status = cmd_rotation(cfg, sink);
        else if (cfg.subcommand == "scan-tongues")
            status = cmd_scan(cfg, sink, false);
        else if (cfg.subcommand == "scan-pockets")
            status = cmd_scan(cfg, sink, true);
        else if (cfg.subcommand == "predict")
            status = cmd_predict(cfg, sink);
        else
            status = cmd_compare(cfg, sink, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }

    if (!cfg.output.empty()) {
        file << buffer.str();
        if (!file.flush()) {
            err << "error: failed writing output file '" << cfg.output << "'\n";
            return kExitUsage;
        }
    }
    return status;
}

}  // namespace pockets::cli
