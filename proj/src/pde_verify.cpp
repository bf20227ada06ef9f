#include "sheetlab/pde_verify.hpp"

#include "sheetlab/csv.hpp"
#include "sheetlab/fractional_calculus.hpp"
#include "sheetlab/moments.hpp"
#include "sheetlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sheetlab {

std::size_t LatticeValues::size() const {
    std::size_t s = 1;
    for (auto v : shape) s *= v;
    return s;
}

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& shape) {
    std::vector<std::size_t> st(shape.size(), 1);
    for (std::size_t a = shape.size(); a-- > 1;) st[a - 1] = st[a] * shape[a];
    return st;
}

LatticeValues laplacian_once(const LatticeValues& in, double h) {
    const std::size_t d = in.shape.size();
    LatticeValues out;
    out.shape.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
        if (in.shape[a] < 3) throw std::invalid_argument("lattice margin too small for the Laplacian stencil");
        out.shape[a] = in.shape[a] - 2;
    }
    out.values.resize(out.size());
    const auto in_st = strides_of(in.shape);
    const auto out_st = strides_of(out.shape);
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        std::size_t rem = k, centre = 0;
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t i = rem / out_st[a];
            rem %= out_st[a];
            centre += (i + 1) * in_st[a];
        }
        double acc = 0.0;
        for (std::size_t a = 0; a < d; ++a)
            acc += in.values[centre + in_st[a]] - 2.0 * in.values[centre] + in.values[centre - in_st[a]];
        out.values[k] = acc * inv_h2;
    }
    return out;
}

// Spatial lattice: `base` points per axis on [x_lo, x_hi], widened by `margin` steps each side.
struct XLattice {
    std::size_t d = 1;
    std::size_t base = 0;
    double x_lo = 0.0, h = 0.0;

    std::vector<std::size_t> shape(std::size_t margin) const {
        return std::vector<std::size_t>(d, base + 2 * margin);
    }
    std::vector<double> point(std::size_t k, std::size_t margin) const {
        const std::size_t per = base + 2 * margin;
        std::vector<double> x(d);
        for (std::size_t a = d; a-- > 0;) {
            const std::size_t i = k % per;
            k /= per;
            x[a] = x_lo + (static_cast<double>(i) - static_cast<double>(margin)) * h;
        }
        return x;
    }
    std::size_t count(std::size_t margin) const {
        std::size_t c = 1;
        for (std::size_t a = 0; a < d; ++a) c *= base + 2 * margin;
        return c;
    }
};

XLattice make_x_lattice(const VerifyGrid& g, std::size_t d) {
    const double steps = (g.x_hi - g.x_lo) / g.h;
    const auto base = static_cast<std::size_t>(std::llround(steps)) + 1;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("x range must be a whole number of steps h");
    return {d, base, g.x_lo, g.h};
}

std::vector<double> full_t(std::span<const double> other, std::size_t active, double tj) {
    std::vector<double> t(other.begin(), other.end());
    t.insert(t.begin() + static_cast<std::ptrdiff_t>(active), tj);
    return t;
}

LatticeValues eval_lattice(const FieldProvider& field, const Functional& fn, const std::vector<double>& t,
                           const XLattice& lat, std::size_t margin) {
    LatticeValues out{lat.shape(margin), std::vector<double>(lat.count(margin))};
    parallel_for(out.values.size(), [&](std::size_t k) { out.values[k] = field(fn, t, lat.point(k, margin)); });
    return out;
}

// Uniform tau-grid on [0, t_hi] and the indices where residuals are evaluated.
struct TimeLine {
    TimeGrid1D grid;
    std::vector<std::size_t> eval;
};

TimeLine make_time_line(const VerifyGrid& g) {
    const auto steps = static_cast<std::size_t>(std::llround(g.t_hi / g.tau));
    TimeLine line{TimeGrid1D::uniform(g.t_hi, steps), {}};
    const double tau = g.t_hi / static_cast<double>(steps);
    const auto first = static_cast<std::size_t>(std::ceil(g.t_lo / tau - 1e-9));
    std::vector<std::size_t> all;
    for (std::size_t i = std::max<std::size_t>(first, 1); i <= steps; ++i) all.push_back(i);
    if (all.empty()) throw std::invalid_argument("no residual points in [t_lo, t_hi]");
    if (g.t_points == 0 || g.t_points >= all.size()) {
        line.eval = std::move(all);
    } else {
        for (std::size_t m = 0; m < g.t_points; ++m)
            line.eval.push_back(all[m * (all.size() - 1) / std::max<std::size_t>(g.t_points - 1, 1)]);
        line.eval.erase(std::unique(line.eval.begin(), line.eval.end()), line.eval.end());
    }
    return line;
}

// u-type field along the whole tau-line at every lattice point: values[x][t].
std::vector<std::vector<double>> eval_lines(const FieldProvider& field, const Functional& fn,
                                            std::span<const double> other, std::size_t active, const TimeGrid1D& grid,
                                            const XLattice& lat, std::size_t margin) {
    const std::size_t nx = lat.count(margin);
    std::vector<std::vector<double>> lines(nx, std::vector<double>(grid.size()));
    parallel_for(nx * grid.size(), [&](std::size_t k) {
        const std::size_t xi = k / grid.size(), ti = k % grid.size();
        lines[xi][ti] = field(fn, full_t(other, active, grid[ti]), lat.point(xi, margin));
    });
    return lines;
}

void record(ResidualReport& report, const VerifyProblem& p, const std::vector<double>& t, const std::vector<double>& x,
            double r) {
    report.add(r);
    if (p.keep_per_point) report.per_point.push_back({t, x, r});
}

double prod_except(std::span<const double> t, std::size_t j, const std::function<double(double)>& g) {
    double v = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (i != j) v *= g(t[i]);
    return v;
}

struct WeightedBoundary {
    Functional functional;
    std::string label;  // row letter for the t_j = 0 row
    std::string zero_label;
    std::function<double(std::span<const double> t)> at_tj_zero;  // multiplies f(x)
};

void check_boundaries(ResidualReport& report, const VerifyProblem& p, const XLattice& lat,
                      const std::vector<WeightedBoundary>& rows, const std::string& u_label) {
    const std::size_t nx = lat.count(0);
    const auto& other = p.other_t.front();
    auto row = [&](const std::string& name, const std::function<double(const std::vector<double>&)>& err) {
        BoundaryCheck c{name, 0.0, p.boundary_tolerance, 0};
        std::vector<double> errs(nx);
        parallel_for(nx, [&](std::size_t k) { errs[k] = err(lat.point(k, 0)); });
        for (double e : errs) c.max_abs_error = std::max(c.max_abs_error, e);
        c.points = nx;
        report.boundary.push_back(std::move(c));
    };
    const auto t_j0 = full_t(other, p.active, 0.0);
    row(u_label + " u = f at t_j = 0", [&](const std::vector<double>& x) {
        return std::abs(p.field(Functional::u(), t_j0, x) - p.f.value(x));
    });
    std::vector<double> t_i0;
    if (p.n >= 2) {
        std::vector<double> o = other;
        o.front() = 0.0;
        t_i0 = full_t(o, p.active, p.grid.t_lo);
        row(u_label + " u = f at t_i = 0, i != j", [&](const std::vector<double>& x) {
            return std::abs(p.field(Functional::u(), t_i0, x) - p.f.value(x));
        });
    }
    for (const auto& w : rows) {
        const double factor = w.at_tj_zero(t_j0);
        row(w.label + " " + w.functional.name() + " at t_j = 0", [&](const std::vector<double>& x) {
            return std::abs(p.field(w.functional, t_j0, x) - factor * p.f.value(x));
        });
        if (p.n >= 2)
            row(w.zero_label + " " + w.functional.name() + " = 0 at t_i = 0, i != j",
                [&](const std::vector<double>& x) { return std::abs(p.field(w.functional, t_i0, x)); });
    }
}

WeightedBoundary script_u_row(std::size_t j) {
    return {Functional::script_u(j), "(d)", "(c)",
            [j](std::span<const double> t) { return prod_except(t, j, [](double ti) { return ti; }); }};
}

WeightedBoundary script_v_row(const Clock& clock, std::size_t j, std::string label, std::string zero_label) {
    const double c = boundary_constant(clock);
    const double e = clock.time_exponent();
    return {Functional::script_v(j), std::move(label), std::move(zero_label), [=](std::span<const double> t) {
                return prod_except(t, j, [&](double ti) { return c * std::pow(ti, e); });
            }};
}

WeightedBoundary script_u_nu_row(const FractionalOrder& order, std::size_t j, std::string label,
                                 std::string zero_label) {
    return {Functional::script_u_nu(j, order.require_nu()), std::move(label), std::move(zero_label),
            [=](std::span<const double> t) { return profile_N(order, j, t).value; }};
}

// Starting corrections cover t^{k beta} up to t^2; the t -> 0+ limit between
// iterated passes fits as many powers of t^beta as there are corrections, at most six.
constexpr double kCorrectionMaxExponent = 2.0;
constexpr int kMaxExtrapolationTerms = 6;

CaputoOptions caputo_options(const Clock& clock) {
    return {CaputoScheme::L1, power_series_exponents(clock.time_exponent(), kCorrectionMaxExponent)};
}

std::string describe_other(const std::vector<std::vector<double>>& other) {
    std::ostringstream os;
    os << "other_t={";
    for (std::size_t k = 0; k < other.size(); ++k) {
        if (k) os << ';';
        for (std::size_t i = 0; i < other[k].size(); ++i) os << (i ? " " : "") << other[k][i];
    }
    os << '}';
    return os.str();
}

ResidualReport start_report(SystemKind kind, const VerifyProblem& p) {
    p.validate();
    ResidualReport r;
    r.system = kind;
    r.active = p.active;
    r.grid_desc = p.grid.describe() + " d=" + std::to_string(p.f.dimension()) + " n=" + std::to_string(p.n) + " " +
                  describe_other(p.other_t) + " f=" + p.f.name() + " clock=" + p.clock.name();
    return r;
}

}  // namespace

LatticeValues fd_laplacian_power(const LatticeValues& field, int k, double h) {
    if (k < 0) throw std::invalid_argument("Laplacian power must be nonnegative");
    if (!(h > 0.0)) throw std::invalid_argument("spatial step must be positive");
    if (field.size() != field.values.size()) throw std::invalid_argument("lattice shape does not match value count");
    for (auto s : field.shape)
        if (s < static_cast<std::size_t>(2 * k + 1))
            throw std::invalid_argument("lattice margin is smaller than the Laplacian power");
    LatticeValues out = field;
    for (int i = 0; i < k; ++i) out = laplacian_once(out, h);
    return out;
}

FieldProvider quadrature_provider(const Clock& clock, const InitialFunction& f, QuadratureSpec spec) {
    return [clock, f, spec](const Functional& fn, std::span<const double> t, std::span<const double> x) {
        return eval_functional(fn, clock, f, t, x, spec);
    };
}

FieldProvider oracle_provider(const Clock& clock, const InitialFunction& f) {
    return [clock, f](const Functional& fn, std::span<const double> t, std::span<const double> x) {
        return oracle_polynomial(fn, clock, f, t, x);
    };
}

std::string VerifyGrid::describe() const {
    std::ostringstream os;
    os << "t_j=[" << t_lo << "," << t_hi << "] tau=" << tau << " x=[" << x_lo << "," << x_hi << "] h=" << h;
    if (t_points) os << " t_points=" << t_points;
    return os.str();
}

void VerifyGrid::validate() const {
    if (!(tau > 0.0 && h > 0.0)) throw std::invalid_argument("grid steps must be positive");
    if (!(t_lo > 0.0 && t_hi > t_lo)) throw std::invalid_argument("residual t-range must satisfy 0 < t_lo < t_hi");
    if (!(x_hi > x_lo)) throw std::invalid_argument("x-range must be nonempty");
    if (t_lo < 4.0 * tau) throw std::invalid_argument("t_lo must leave room for the temporal stencil");
}

VerifyProblem VerifyProblem::make(const Clock& clock, const InitialFunction& f, std::size_t n, std::size_t active,
                                  std::vector<std::vector<double>> other_t, VerifyGrid grid, bool polynomial_growth) {
    f.require_admissible(polynomial_growth);
    auto spec = QuadratureSpec::defaults(n);
    spec.inner_rule = InnerRule::ClosedFormIfAvailable;
    spec.polynomial_growth = polynomial_growth;
    if (other_t.empty()) other_t.push_back(std::vector<double>(n - 1, 1.0));
    VerifyProblem p{clock, f, n, active, std::move(other_t), grid, quadrature_provider(clock, f, spec), false, 1e-5};
    p.boundary_tolerance = spec.tolerance;
    return p;
}

void VerifyProblem::validate() const {
    clock.validate();
    grid.validate();
    if (n < 1 || active >= n) throw std::invalid_argument("active index j must lie in 1..n");
    if (other_t.empty()) throw std::invalid_argument("at least one set of fixed times is required");
    for (const auto& o : other_t) {
        if (o.size() != n - 1) throw std::invalid_argument("each fixed-time set needs n-1 entries");
        for (double v : o)
            if (!(v > 0.0)) throw std::invalid_argument("fixed times must be positive");
    }
    if (!field) throw std::invalid_argument("no field provider");
}

ResidualReport residual_fourth_order(const VerifyProblem& p) {
    if (p.clock.kind != ClockKind::BTBS) throw std::invalid_argument("the fourth-order system is for BTBS");
    auto report = start_report(SystemKind::FourthOrder, p);
    if (p.f.max_k() < 1) throw std::invalid_argument("f needs an analytic Laplacian");
    const auto lat = make_x_lattice(p.grid, static_cast<std::size_t>(p.f.dimension()));
    const auto line = make_time_line(p.grid);
    const double tau = line.grid[1];
    const auto fn_u = Functional::u();
    const auto fn_U = Functional::script_u(p.active);
    const double n = static_cast<double>(p.n);
    for (const auto& other : p.other_t) {
        for (std::size_t ti : line.eval) {
            const double tj = line.grid[ti];
            const auto t = full_t(other, p.active, tj);
            const auto up = eval_lattice(p.field, fn_u, full_t(other, p.active, tj + tau), lat, 0);
            const auto um = eval_lattice(p.field, fn_u, full_t(other, p.active, tj - tau), lat, 0);
            const auto bi = fd_laplacian_power(eval_lattice(p.field, fn_U, t, lat, 2), 2, p.grid.h);
            double prod = 1.0;
            for (double v : other) prod *= v;
            const double coef = std::sqrt(prod / (std::pow(2.0, 4.0 - n) * tj * std::pow(std::numbers::pi, n)));
            for (std::size_t k = 0; k < lat.count(0); ++k) {
                const auto x = lat.point(k, 0);
                const double lhs = (up.values[k] - um.values[k]) / (2.0 * tau);
                const double rhs = coef * p.f.laplacian(x, 1) + bi.values[k] / 8.0;
                record(report, p, t, x, lhs - rhs);
            }
        }
    }
    check_boundaries(report, p, lat, {script_u_row(p.active)}, "(b)");
    report.finish();
    return report;
}

ResidualReport residual_fractional(const VerifyProblem& p) {
    const bool btbs = p.clock.kind == ClockKind::BTBS;
    auto report = start_report(btbs ? SystemKind::HalfFractional : SystemKind::BetaFractional, p);
    const double beta = btbs ? 0.5 : p.clock.order->beta();
    const double coef = btbs ? kBtbsFractionalCoefficient : kIsltbsFractionalCoefficient;
    const auto lat = make_x_lattice(p.grid, static_cast<std::size_t>(p.f.dimension()));
    const auto line = make_time_line(p.grid);
    const CaputoOperator op(line.grid, beta, caputo_options(p.clock));
    const auto fn_V = Functional::script_v(p.active);
    for (const auto& other : p.other_t) {
        auto lines = eval_lines(p.field, Functional::u(), other, p.active, line.grid, lat, 0);
        parallel_for(lines.size(), [&](std::size_t k) { lines[k] = op.apply(lines[k]); });
        for (std::size_t ti : line.eval) {
            const auto t = full_t(other, p.active, line.grid[ti]);
            const auto lap = fd_laplacian_power(eval_lattice(p.field, fn_V, t, lat, 1), 1, p.grid.h);
            for (std::size_t k = 0; k < lat.count(0); ++k)
                record(report, p, t, lat.point(k, 0), lines[k][ti] - coef * lap.values[k]);
        }
    }
    check_boundaries(report, p, lat, {script_v_row(p.clock, p.active, "(d)", "(c)")}, "(b)");
    report.extras.emplace_back("coefficient", coef);
    report.finish();
    return report;
}

ResidualReport residual_order_2nu(const VerifyProblem& p) {
    if (p.clock.kind != ClockKind::ISLTBS) throw std::invalid_argument("the 2nu-order system is for ISLTBS");
    auto report = start_report(SystemKind::Order2Nu, p);
    const auto& order = *p.clock.order;
    const int nu = order.require_nu();
    if (p.f.max_k() < nu - 1) throw std::invalid_argument("f needs analytic Laplacians up to nu-1");
    const auto lat = make_x_lattice(p.grid, static_cast<std::size_t>(p.f.dimension()));
    const auto line = make_time_line(p.grid);
    const double tau = line.grid[1];
    const auto fn_u = Functional::u();
    const auto fn_Unu = Functional::script_u_nu(p.active, nu);
    const auto m = static_cast<std::size_t>(nu);
    for (const auto& other : p.other_t) {
        for (std::size_t ti : line.eval) {
            const double tj = line.grid[ti];
            const auto t = full_t(other, p.active, tj);
            const auto up = eval_lattice(p.field, fn_u, full_t(other, p.active, tj + tau), lat, 0);
            const auto um = eval_lattice(p.field, fn_u, full_t(other, p.active, tj - tau), lat, 0);
            const auto lap = fd_laplacian_power(eval_lattice(p.field, fn_Unu, t, lat, m), nu, p.grid.h);
            std::vector<double> dm(m);
            for (int kappa = 1; kappa < nu; ++kappa)
                dm[static_cast<std::size_t>(kappa)] = profile_M(order, p.active, kappa, t).d_dtj;
            for (std::size_t k = 0; k < lat.count(0); ++k) {
                const auto x = lat.point(k, 0);
                double rhs = lap.values[k] / std::pow(2.0, nu);
                for (int kappa = 1; kappa < nu; ++kappa)
                    rhs += p.f.laplacian(x, kappa) / std::pow(2.0, kappa) * dm[static_cast<std::size_t>(kappa)];
                record(report, p, t, x, (up.values[k] - um.values[k]) / (2.0 * tau) - rhs);
            }
        }
    }
    check_boundaries(report, p, lat, {script_u_nu_row(order, p.active, "(d)", "(c)")}, "(b)");
    report.finish();
    return report;
}

ResidualReport equivalence_residual(const VerifyProblem& p) {
    const bool btbs = p.clock.kind == ClockKind::BTBS;
    auto report = start_report(btbs ? SystemKind::EquivCondBtbs : SystemKind::EquivCondIsltbs, p);
    const int nu = btbs ? 2 : p.clock.order->require_nu();
    const double beta = 1.0 / nu;
    const int passes = nu - 1;
    const double coef = btbs ? std::sqrt(8.0) : std::pow(2.0, nu - 1);
    const auto lat = make_x_lattice(p.grid, static_cast<std::size_t>(p.f.dimension()));
    const auto line = make_time_line(p.grid);
    const auto opts = caputo_options(p.clock);
    const CaputoOperator op(line.grid, beta, opts);
    const auto fn_V = Functional::script_v(p.active);
    const auto fn_W = btbs ? Functional::script_u(p.active) : Functional::script_u_nu(p.active, nu);
    const auto m = static_cast<std::size_t>(nu);
    const std::size_t n_int = lat.count(0), n_wide = lat.count(1);

    const int extrapolation_terms = std::min(static_cast<int>(opts.singular_exponents.size()), kMaxExtrapolationTerms);
    // Iterated Caputo along every line; the t -> 0+ limit replaces the undefined entry between passes.
    auto iterate = [&](std::vector<double> v, std::vector<double>* limits) {
        for (int pass = 0; pass < passes; ++pass) {
            v = op.apply(v);
            const double lim = extrapolate_to_zero(v, beta, extrapolation_terms);
            if (limits) limits->push_back(lim);
            v[0] = lim;
        }
        return v;
    };

    double commuted = 0.0;
    for (const auto& other : p.other_t) {
        auto lines = eval_lines(p.field, fn_V, other, p.active, line.grid, lat, 1);
        // Commuted order: Laplacian of V on every t first, then the iterated Caputo derivative.
        std::vector<std::vector<double>> lap_first(n_int, std::vector<double>(line.grid.size()));
        for (std::size_t ti = 0; ti < line.grid.size(); ++ti) {
            LatticeValues slice{lat.shape(1), std::vector<double>(n_wide)};
            for (std::size_t k = 0; k < n_wide; ++k) slice.values[k] = lines[k][ti];
            const auto lap = fd_laplacian_power(slice, 1, p.grid.h);
            for (std::size_t k = 0; k < n_int; ++k) lap_first[k][ti] = lap.values[k];
        }
        parallel_for(n_wide, [&](std::size_t k) { lines[k] = iterate(std::move(lines[k]), nullptr); });
        parallel_for(n_int, [&](std::size_t k) { lap_first[k] = iterate(std::move(lap_first[k]), nullptr); });

        for (std::size_t ti : line.eval) {
            const auto t = full_t(other, p.active, line.grid[ti]);
            LatticeValues slice{lat.shape(1), std::vector<double>(n_wide)};
            for (std::size_t k = 0; k < n_wide; ++k) slice.values[k] = lines[k][ti];
            const auto lhs = fd_laplacian_power(slice, 1, p.grid.h);
            const auto rhs = fd_laplacian_power(eval_lattice(p.field, fn_W, t, lat, m), nu, p.grid.h);
            for (std::size_t k = 0; k < n_int; ++k) {
                record(report, p, t, lat.point(k, 0), coef * lhs.values[k] - rhs.values[k]);
                commuted = std::max(commuted, coef * std::abs(lhs.values[k] - lap_first[k][ti]));
            }
        }
    }
    report.extras.emplace_back("commuted_order_discrepancy", commuted);
    report.extras.emplace_back("coefficient", coef);

    if (!btbs) {
        // t_j -> 0+ limits of the iterated derivatives of u against the coefficient display, in the
        // printed Gamma((nu-k)/nu) form and in the Gamma(k/nu) form the power-rule derivation gives.
        const auto& order = *p.clock.order;
        const auto& other = p.other_t.front();
        const auto ulines = eval_lines(p.field, Functional::u(), other, p.active, line.grid, lat, 0);
        std::vector<double> err_display(m, 0.0), err_derived(m, 0.0);
        for (std::size_t k = 0; k < n_int; ++k) {
            std::vector<double> limits;
            iterate(ulines[k], &limits);
            const auto x = lat.point(k, 0);
            const auto t0 = full_t(other, p.active, 0.0);
            for (int kk = 1; kk < nu; ++kk) {
                double prod = 1.0;
                for (std::size_t i = 0; i < t0.size(); ++i)
                    if (i != p.active) prod *= std::pow(t0[i], static_cast<double>(kk) / nu);
                double fact = 1.0;
                for (int i = 2; i < kk; ++i) fact *= i;
                const double common = std::pow(moment_E(order, kk).value, static_cast<double>(p.n)) *
                                      p.f.laplacian(x, kk) * prod / (nu * std::pow(2.0, kk) * fact);
                const double display = std::tgamma(static_cast<double>(nu - kk) / nu) * common;
                const double derived = std::tgamma(static_cast<double>(kk) / nu) * common;
                const auto idx = static_cast<std::size_t>(kk);
                err_display[idx] = std::max(err_display[idx], std::abs(limits[idx - 1] - display));
                err_derived[idx] = std::max(err_derived[idx], std::abs(limits[idx - 1] - derived));
            }
        }
        for (int kk = 1; kk < nu; ++kk) {
            const auto idx = static_cast<std::size_t>(kk);
            report.extras.emplace_back("u_coefficient_" + std::to_string(kk) + "_err_display", err_display[idx]);
            report.extras.emplace_back("u_coefficient_" + std::to_string(kk) + "_err_derived", err_derived[idx]);
        }
    }

    if (btbs)
        check_boundaries(report, p, lat, {script_u_row(p.active), script_v_row(p.clock, p.active, "(e)", "(d)")},
                         "(b)");
    else
        check_boundaries(report, p, lat,
                         {script_u_nu_row(*p.clock.order, p.active, "(b)", "(d)"),
                          script_v_row(p.clock, p.active, "(c)", "(d)")},
                         "(u)");
    report.finish();
    return report;
}

bool RefinementStudy::monotone(double noise) const {
    for (std::size_t l = 1; l < levels.size(); ++l)
        if (levels[l].inf_norm > levels[l - 1].inf_norm * (1.0 + noise)) return false;
    return true;
}

double RefinementStudy::min_order() const {
    if (orders.empty()) return 0.0;
    return *std::min_element(orders.begin(), orders.end());
}

RefinementStudy refinement_study(ResidualFn fn, VerifyProblem problem, double h0, double tau0, int levels) {
    if (levels < 2) throw std::invalid_argument("a refinement study needs at least two levels");
    RefinementStudy study;
    for (int l = 0; l < levels; ++l) {
        problem.grid.h = h0 / std::pow(2.0, l);
        problem.grid.tau = tau0 / std::pow(2.0, l);
        const auto r = fn(problem);
        study.levels.push_back({problem.grid.h, problem.grid.tau, r.inf_norm, r.l2_norm});
    }
    for (std::size_t l = 1; l < study.levels.size(); ++l)
        study.orders.push_back(std::log2(study.levels[l - 1].inf_norm / study.levels[l].inf_norm));
    return study;
}

}  // namespace sheetlab
