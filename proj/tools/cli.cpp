#include "cli.hpp"

#include "sheetlab/csv.hpp"
#include "sheetlab/densities.hpp"
#include "sheetlab/error.hpp"
#include "sheetlab/moments.hpp"
#include "sheetlab/pde_verify.hpp"
#include "sheetlab/rng.hpp"
#include "sheetlab/samplers.hpp"
#include "sheetlab/solutions.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace sheetlab::cli {
namespace {

const std::map<std::string, Command> kCommands{
    {"density", Command::Density},       {"moments", Command::Moments},   {"solve", Command::Solve},
    {"mc-compare", Command::McCompare}, {"residual", Command::Residual}, {"equivalence", Command::Equivalence},
};

std::vector<double> parse_list(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + item + "'");
        }
        if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

Clock make_clock(const RunConfig& c) {
    if (c.kind == "btbs") return Clock::btbs();
    return Clock::isltbs(FractionalOrder::parse(c.beta));
}

InitialFunction make_f(const RunConfig& c) { return make_initial_function(c.f, c.d, c.f_c, c.f_alpha); }

bool polynomial_growth(const RunConfig& c) { return !c.bounded_only; }

QuadratureSpec make_spec(const RunConfig& c) {
    auto spec = QuadratureSpec::defaults(static_cast<std::size_t>(c.n));
    spec.inner = c.inner;
    spec.outer = c.outer;
    if (c.tolerance > 0.0) spec.tolerance = c.tolerance;
    spec.inner_rule = c.inner_rule == "closed-form" ? InnerRule::ClosedFormIfAvailable : InnerRule::GaussHermite;
    spec.polynomial_growth = polynomial_growth(c);
    return spec;
}

int nu_of(const RunConfig& c) {
    if (c.kind == "btbs") return 2;
    return FractionalOrder::parse(c.beta).nu().value_or(0);
}

Lattice make_lattice(const RunConfig& c) {
    Lattice lat{parse_axes(c.t), parse_axes(c.x)};
    if (static_cast<int>(lat.n()) != c.n) throw ConfigError("t lists " + std::to_string(lat.n()) + " axes but n = " + std::to_string(c.n));
    if (static_cast<int>(lat.d()) != c.d) throw ConfigError("x lists " + std::to_string(lat.d()) + " axes but d = " + std::to_string(c.d));
    return lat;
}

std::string fixed10(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(10) << v;
    return os.str();
}

// Artifacts are written only when an output path was given.
void with_output(const RunConfig& c, const std::function<void(std::ostream&, const std::string&)>& write) {
    if (c.output.empty()) return;
    std::ofstream os(c.output);
    if (!os) throw ConfigError("cannot open output file '" + c.output + "'");
    write(os, artifact_header(c.canonical()));
    if (!os) throw std::runtime_error("failed writing '" + c.output + "'");
}

void run_density(const RunConfig& c, std::ostream& out) {
    KernelId id;
    if (c.kernel == "bm") id.kind = KernelKind::BM;
    else if (c.kernel == "bs") id.kind = KernelKind::BS, id.n = c.n, id.d = c.d;
    else if (c.kernel == "stable") id.kind = KernelKind::StableG;
    else id.kind = KernelKind::InvSubordinator;
    if (id.kind == KernelKind::StableG || id.kind == KernelKind::InvSubordinator) id.beta = FractionalOrder::parse(c.beta);

    const auto t_axes = parse_axes(c.t);
    const auto x_axes = parse_axes(c.x);
    std::vector<double> source = c.source.empty() ? std::vector<double>(x_axes.size(), 0.0) : parse_list(c.source, ',');
    if (id.kind == KernelKind::BS) {
        std::vector<double> t, y;
        for (const auto& a : t_axes) t.push_back(a.front());
        for (const auto& a : x_axes) y.push_back(a.front());
        const auto e = evaluate_kernel(id, t, source, y);
        with_output(c, [&](std::ostream& os, const std::string& header) {
            os << header << "\nvalue\n" << format_double(e.value) << '\n';
        });
        out << fixed10(e.value) << '\n';
        return;
    }
    if (t_axes.size() != 1 || x_axes.size() != 1) throw ConfigError("this kernel takes a single t axis and a single x axis");
    std::vector<std::array<double, 3>> rows;
    for (double t : t_axes[0])
        for (double x : x_axes[0]) {
            const std::vector<double> tv{t}, xv{x};
            rows.push_back({t, x, evaluate_kernel(id, tv, std::span<const double>(source).first(std::min<std::size_t>(source.size(), 1)), xv).value});
        }
    with_output(c, [&](std::ostream& os, const std::string& header) {
        os << header << "\nt,x,value\n";
        for (const auto& r : rows) os << format_double(r[0]) << ',' << format_double(r[1]) << ',' << format_double(r[2]) << '\n';
    });
    if (rows.size() == 1) {
        out << fixed10(rows[0][2]) << '\n';
    } else {
        const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a[2] < b[2]; });
        out << "points=" << rows.size() << " min=" << format_double((*lo)[2]) << " max=" << format_double((*hi)[2]) << '\n';
    }
}

void run_moments(const RunConfig& c, std::ostream& out) {
    MomentOptions opts;
    opts.samples = c.samples;
    opts.seed = c.seed;
    const auto m = moment_E(FractionalOrder::parse(c.beta), c.k, parse_moment_route(c.route), opts);
    with_output(c, [&](std::ostream& os, const std::string& header) {
        os << header << "\nbeta,gamma,route,value,standard_error\n"
           << format_double(m.order.beta()) << ',' << format_double(m.gamma) << ',' << to_string(m.route) << ','
           << format_double(m.value) << ',' << format_double(m.standard_error) << '\n';
    });
    out << fixed10(m.value);
    if (m.route == MomentRoute::MonteCarlo) out << " se=" << format_double(m.standard_error);
    out << '\n';
}

void run_solve(const RunConfig& c, std::ostream& out) {
    const auto lat = make_lattice(c);
    const auto field = eval_field(parse_functional(c.functional, static_cast<std::size_t>(c.j - 1), nu_of(c)),
                                  make_clock(c), make_f(c), lat, make_spec(c));
    with_output(c, [&](std::ostream& os, const std::string& header) { write_solution_csv(os, field, header); });
    if (field.values.size() == 1) {
        out << fixed10(field.values[0]) << '\n';
    } else {
        const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
        out << "points=" << field.values.size() << " min=" << format_double(*lo) << " max=" << format_double(*hi) << '\n';
    }
}

void run_mc_compare(const RunConfig& c, std::ostream& out) {
    const auto lat = make_lattice(c);
    const auto clock = make_clock(c);
    const auto f = make_f(c);
    const auto spec = make_spec(c);
    const auto fn = parse_functional(c.functional, static_cast<std::size_t>(c.j - 1), nu_of(c));
    struct Row {
        std::vector<double> t, x;
        double quad, mc, se;
    };
    std::vector<Row> rows;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < lat.size(); ++k) {
        Row r{lat.t_at(k), lat.x_at(k), 0.0, 0.0, 0.0};
        r.quad = eval_functional(fn, clock, f, r.t, r.x, spec);
        const auto est = mc_expectation(clock, f, fn.weight(), fn.active, r.t, r.x, c.samples, RngStream(c.seed, k));
        r.mc = est.estimate;
        r.se = est.standard_error;
        if (r.se > 0.0) worst_z = std::max(worst_z, std::abs(r.mc - r.quad) / r.se);
        rows.push_back(std::move(r));
    }
    with_output(c, [&](std::ostream& os, const std::string& header) {
        os << header << '\n';
        for (std::size_t i = 0; i < lat.n(); ++i) os << 't' << i + 1 << ',';
        for (std::size_t i = 0; i < lat.d(); ++i) os << 'x' << i + 1 << ',';
        os << "quadrature,monte_carlo,standard_error\n";
        for (const auto& r : rows) {
            for (double v : r.t) os << format_double(v) << ',';
            for (double v : r.x) os << format_double(v) << ',';
            os << format_double(r.quad) << ',' << format_double(r.mc) << ',' << format_double(r.se) << '\n';
        }
    });
    out << "points=" << rows.size() << " max_abs_z=" << fixed10(worst_z) << '\n';
}

VerifyProblem make_problem(const RunConfig& c) {
    VerifyGrid g;
    g.t_lo = c.t_lo;
    g.t_hi = c.t_hi;
    g.tau = c.tau;
    g.x_lo = c.x_lo;
    g.x_hi = c.x_hi;
    g.h = c.h;
    g.t_points = c.t_points;
    std::vector<std::vector<double>> other;
    if (!c.other_t.empty()) {
        std::stringstream ss(c.other_t);
        std::string set;
        while (std::getline(ss, set, ';')) other.push_back(parse_list(set, ','));
    }
    auto p = VerifyProblem::make(make_clock(c), make_f(c), static_cast<std::size_t>(c.n), static_cast<std::size_t>(c.j - 1),
                                 std::move(other), g, polynomial_growth(c));
    p.keep_per_point = c.per_point;
    p.validate();
    return p;
}

ResidualFn residual_fn(const RunConfig& c) {
    if (c.command == Command::Equivalence) return &equivalence_residual;
    if (c.system == "fourth-order") return &residual_fourth_order;
    if (c.system == "half-fractional" || c.system == "fractional") return &residual_fractional;
    return &residual_order_2nu;
}

void run_residual(const RunConfig& c, std::ostream& out) {
    const auto problem = make_problem(c);
    const auto fn = residual_fn(c);
    if (c.levels > 1) {
        const auto study = refinement_study(fn, problem, c.h, c.tau, c.levels);
        with_output(c, [&](std::ostream& os, const std::string& header) {
            os << header << "\nlevel,h,tau,inf_norm,l2_norm,order\n";
            for (std::size_t l = 0; l < study.levels.size(); ++l) {
                const auto& lv = study.levels[l];
                os << l << ',' << format_double(lv.h) << ',' << format_double(lv.tau) << ',' << format_double(lv.inf_norm)
                   << ',' << format_double(lv.l2_norm) << ',' << (l ? format_double(study.orders[l - 1]) : "") << '\n';
            }
        });
        out << "levels=" << study.levels.size() << " inf_norm=" << format_double(study.levels.back().inf_norm)
            << " min_order=" << fixed10(study.min_order()) << " monotone=" << (study.monotone() ? "yes" : "no") << '\n';
        return;
    }
    const auto report = fn(problem);
    with_output(c, [&](std::ostream& os, const std::string& header) {
        if (c.per_point) write_per_point_csv(os, report, header);
        else write_report_csv(os, std::span<const ResidualReport>(&report, 1), header);
    });
    out << "system=" << to_string(report.system) << " j=" << report.active + 1
        << " inf_norm=" << format_double(report.inf_norm) << " l2_norm=" << format_double(report.l2_norm)
        << " boundary=" << (report.boundary_passed() ? "ok" : "FAILED") << '\n';
}

void add_options(CLI::App& app, RunConfig& c, std::string& command) {
    app.add_option("command", command, "density | moments | solve | mc-compare | residual | equivalence")
        ->check(CLI::IsMember({"density", "moments", "solve", "mc-compare", "residual", "equivalence"}));
    app.add_option("--kind", c.kind, "btbs | isltbs")->check(CLI::IsMember({"btbs", "isltbs"}));
    app.add_option("--beta", c.beta, "order as a rational (\"1/3\"), decimal, or integer nu");
    app.add_option("--n", c.n, "number of time parameters");
    app.add_option("--d", c.d, "spatial dimension");
    app.add_option("--j", c.j, "active time index (1-based)");
    app.add_option("--f", c.f, "constant | quadratic | quartic | gaussian | bump");
    app.add_option("--f-c", c.f_c, "constant value or bump amplitude");
    app.add_option("--f-alpha", c.f_alpha, "bump Holder exponent");
    app.add_flag("--bounded-only", c.bounded_only, "reject polynomially growing initial functions");
    app.add_option("--functional", c.functional, "u | script-u | script-v | script-u-nu");
    app.add_option("--t", c.t, "time axes: comma-separated, each a value or lo:hi:count");
    app.add_option("--x", c.x, "space axes: comma-separated, each a value or lo:hi:count");
    app.add_option("--source", c.source, "kernel source point (density)");
    app.add_option("--kernel", c.kernel, "bm | bs | stable | inv-subordinator")
        ->check(CLI::IsMember({"bm", "bs", "stable", "inv-subordinator"}));
    app.add_option("--inner", c.inner, "starting Gauss-Hermite nodes");
    app.add_option("--outer", c.outer, "Gauss-Legendre nodes per clock axis");
    app.add_option("--tol", c.tolerance, "quadrature tolerance (0 selects the default)");
    app.add_option("--inner-rule", c.inner_rule, "gauss-hermite | closed-form")
        ->check(CLI::IsMember({"gauss-hermite", "closed-form"}));
    app.add_option("--k", c.k, "moment exponent gamma");
    app.add_option("--route", c.route, "closed-form | quadrature | monte-carlo")
        ->check(CLI::IsMember({"closed-form", "quadrature", "monte-carlo"}));
    app.add_option("--samples", c.samples, "Monte-Carlo samples");
    app.add_option("--seed", c.seed, "Monte-Carlo seed");
    app.add_option("--system", c.system, "fourth-order | half-fractional | fractional | order-2nu")
        ->check(CLI::IsMember({"fourth-order", "half-fractional", "fractional", "order-2nu"}));
    app.add_option("--t-lo", c.t_lo, "residual window start in t_j");
    app.add_option("--t-hi", c.t_hi, "residual window end in t_j");
    app.add_option("--tau", c.tau, "temporal step");
    app.add_option("--x-lo", c.x_lo, "residual lattice lower x bound");
    app.add_option("--x-hi", c.x_hi, "residual lattice upper x bound");
    app.add_option("--h", c.h, "spatial step");
    app.add_option("--t-points", c.t_points, "residual t samples (0 = every grid point)");
    app.add_option("--other-t", c.other_t, "fixed times for i != j: sets separated by ';'");
    app.add_option("--levels", c.levels, "refinement levels (halving h and tau)");
    app.add_flag("--per-point", c.per_point, "write per-point residuals instead of norms");
    app.add_option("--output,-o", c.output, "CSV artifact path");
}

}  // namespace

const char* to_string(Command command) {
    for (const auto& [name, cmd] : kCommands)
        if (cmd == command) return name.c_str();
    return "unknown";
}

std::vector<std::vector<double>> parse_axes(const std::string& text) {
    std::vector<std::vector<double>> axes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find(':') == std::string::npos) {
            axes.push_back(parse_list(item, ','));
            continue;
        }
        const auto parts = parse_list(item, ':');
        if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
            throw ConfigError("axis range must be lo:hi:count, got '" + item + "'");
        axes.push_back(linspace(parts[0], parts[1], static_cast<std::size_t>(parts[2])));
    }
    if (axes.empty()) throw ConfigError("empty axis list");
    return axes;
}

void RunConfig::validate() const {
    auto need = [](bool ok, const std::string& message) {
        if (!ok) throw ConfigError(message);
    };
    need(n >= 1 && d >= 1, "n and d must be >= 1");
    need(j >= 1 && j <= n, "j must lie in 1..n");
    need(kind == "btbs" || !beta.empty(), "the isltbs clock needs --beta");
    need(samples >= 1, "samples must be >= 1");
    need(levels >= 1, "levels must be >= 1");
    if (!beta.empty()) {
        try {
            (void)FractionalOrder::parse(beta);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad --beta: ") + e.what());
        }
    }
    switch (command) {
        case Command::Moments: need(!beta.empty(), "moments needs --beta"); break;
        case Command::Density:
            need(kernel == "bm" || kernel == "bs" || !beta.empty(), "stable kernels need --beta");
            break;
        case Command::Solve:
        case Command::McCompare:
            need(functional != "script-u" || kind == "btbs", "script-u is the BTBS functional; use script-u-nu");
            need(functional != "script-u-nu" || kind == "isltbs", "script-u-nu needs the isltbs clock");
            need(functional != "script-u-nu" || nu_of(*this) >= 2, "script-u-nu needs beta = 1/nu");
            break;
        case Command::Residual:
            need(system != "fourth-order" || kind == "btbs", "the fourth-order system uses the btbs clock");
            need(system != "half-fractional" || kind == "btbs", "half-fractional uses the btbs clock; use fractional");
            need(system != "fractional" || kind == "isltbs", "fractional uses the isltbs clock");
            need(system != "order-2nu" || (kind == "isltbs" && nu_of(*this) >= 2), "order-2nu needs isltbs with beta = 1/nu");
            break;
        case Command::Equivalence:
            need(kind == "btbs" || nu_of(*this) >= 2, "equivalence on isltbs needs beta = 1/nu");
            break;
    }
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "command=" << to_string(command) << "\nkind=" << kind << "\nbeta=" << beta << "\nn=" << n << "\nd=" << d
       << "\nj=" << j << "\nf=" << f << "\nf_c=" << f_c << "\nf_alpha=" << f_alpha << "\nbounded_only=" << bounded_only
       << "\nfunctional=" << functional << "\nt=" << t << "\nx=" << x << "\nsource=" << source << "\nkernel=" << kernel
       << "\ninner=" << inner << "\nouter=" << outer << "\ntol=" << tolerance << "\ninner_rule=" << inner_rule
       << "\nk=" << k << "\nroute=" << route << "\nsamples=" << samples << "\nseed=" << seed << "\nsystem=" << system
       << "\nt_lo=" << t_lo << "\nt_hi=" << t_hi << "\ntau=" << tau << "\nx_lo=" << x_lo << "\nx_hi=" << x_hi
       << "\nh=" << h << "\nt_points=" << t_points << "\nother_t=" << other_t << "\nlevels=" << levels
       << "\nper_point=" << per_point << '\n';
    return os.str();
}

bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out) {
    CLI::App app{"sheetlab: Brownian-time and inverse-stable-time sheet computations"};
    app.set_help_flag("--help", "print this help and exit");
    app.set_config("--config", "", "flat key=value file; flags given on the command line win");
    std::string command;
    add_options(app, config, command);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return false;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    if (command.empty()) throw ConfigError("no command given");
    config.command = kCommands.at(command);
    config.validate();
    return true;
}

void run(const RunConfig& config, std::ostream& out) {
    switch (config.command) {
        case Command::Density: run_density(config, out); break;
        case Command::Moments: run_moments(config, out); break;
        case Command::Solve: run_solve(config, out); break;
        case Command::McCompare: run_mc_compare(config, out); break;
        case Command::Residual:
        case Command::Equivalence: run_residual(config, out); break;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    auto quoted = [](std::string_view s) { return csv_quote(s); };
    try {
        RunConfig config;
        if (!parse_args(argc, argv, config, out)) return 0;
        run(config, out);
        return 0;
    } catch (const ConfigError& e) {
        err << "error status=2 kind=config message=" << quoted(e.what()) << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "error status=3 kind=numerical operation=" << e.operation() << " message=" << quoted(e.what()) << '\n';
        return 3;
    } catch (const SeriesRangeError& e) {
        err << "error status=3 kind=numerical operation=series message=" << quoted(e.what()) << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error status=2 kind=config message=" << quoted(e.what()) << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "error status=2 kind=config message=" << quoted(e.what()) << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error status=1 kind=internal message=" << quoted(e.what()) << '\n';
        return 1;
    }
}

}  // namespace sheetlab::cli
