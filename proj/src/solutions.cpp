#include "sheetlab/solutions.hpp"

#include "sheetlab/csv.hpp"
#include "sheetlab/densities.hpp"
#include "sheetlab/error.hpp"
#include "sheetlab/moments.hpp"
#include "sheetlab/parallel.hpp"
#include "sheetlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace sheetlab {
namespace {

// E h(S(1)) ~ sum weights[k] h(nodes[k]) for the clock at unit time.
struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

AxisRule build_axis_rule(const Clock& clock, std::size_t n) {
    const QuadratureRule gl = gauss_legendre(n);
    AxisRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 0.5 * (gl.nodes[k] + 1.0);
        const double y = w / (1.0 - w);
        const double jac = 0.5 * gl.weights[k] / ((1.0 - w) * (1.0 - w));
        const double density = clock.kind == ClockKind::BTBS
                                   ? 2.0 * std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi)
                                   : inv_subordinator_density(clock.order->beta(), 1.0, y, 1e-12);
        rule.nodes[k] = y;
        rule.weights[k] = jac * density;
    }
    return rule;
}

std::shared_ptr<const AxisRule> axis_rule(const Clock& clock, std::size_t n) {
    static std::mutex mutex;
    static std::map<std::tuple<int, double, std::size_t>, std::shared_ptr<const AxisRule>> cache;
    const auto key = std::make_tuple(static_cast<int>(clock.kind),
                                     clock.kind == ClockKind::BTBS ? 0.0 : clock.order->beta(), n);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto rule = std::make_shared<const AxisRule>(build_axis_rule(clock, n));
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(rule)).first->second;
}

std::shared_ptr<const QuadratureRule> hermite_rule(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const QuadratureRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const QuadratureRule>(gauss_hermite_normal(n));
    return slot;
}

double hermite_tensor(const InitialFunction& f, std::span<const double> x, double variance, std::size_t nodes) {
    const auto rule = hermite_rule(nodes);
    const std::size_t d = x.size();
    const double sd = std::sqrt(variance);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> y(d);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t a = 0; a < d; ++a) {
            y[a] = x[a] + sd * rule->nodes[idx[a]];
            w *= rule->weights[idx[a]];
        }
        total += w * f.value(y);
        std::size_t a = 0;
        while (a < d && ++idx[a] == nodes) idx[a++] = 0;
        if (a == d) break;
    }
    return total;
}

double inner_mean(const InitialFunction& f, std::span<const double> x, double variance, const QuadratureSpec& spec) {
    if (variance == 0.0) return f.value(x);
    if (spec.inner_rule == InnerRule::ClosedFormIfAvailable)
        if (auto m = f.heat_mean(x, variance)) return *m;
    return hermite_tensor(f, x, variance, spec.inner);
}

void check_inputs(const Functional& functional, const Clock& clock, const InitialFunction& f,
                  std::span<const double> t, std::span<const double> x) {
    clock.validate();
    if (t.empty()) throw std::invalid_argument("time vector must be nonempty");
    for (double ti : t)
        if (!(ti >= 0.0) || !std::isfinite(ti)) throw std::invalid_argument("times must be finite and nonnegative");
    if (static_cast<int>(x.size()) != f.dimension())
        throw std::invalid_argument("x has dimension " + std::to_string(x.size()) + " but f expects " +
                                    std::to_string(f.dimension()));
    if (functional.kind != FunctionalKind::U && functional.active >= t.size())
        throw std::invalid_argument("active index j out of range");
    if (functional.kind == FunctionalKind::ScriptUNu) {
        if (clock.kind != ClockKind::ISLTBS || clock.order->nu() != functional.nu)
            throw std::invalid_argument("the U_nu functional needs an ISLTBS clock with beta = 1/nu");
    }
}

}  // namespace

Weight Functional::weight() const {
    switch (kind) {
        case FunctionalKind::U: return Weight::none();
        case FunctionalKind::ScriptU: return Weight::prod_s_sq();
        case FunctionalKind::ScriptV: return Weight::prod_s();
        case FunctionalKind::ScriptUNu: return Weight::prod_s_nu(nu);
    }
    return Weight::none();
}

std::string Functional::name() const {
    const std::string j = std::to_string(active + 1);
    switch (kind) {
        case FunctionalKind::U: return "u";
        case FunctionalKind::ScriptU: return "U" + j;
        case FunctionalKind::ScriptV: return "V" + j;
        case FunctionalKind::ScriptUNu: return "Unu" + j;
    }
    return "?";
}

Functional parse_functional(std::string_view text, std::size_t active, int nu) {
    if (text == "u" || text == "U") return Functional::u();
    if (text == "script-u" || text == "SCRIPT_U") return Functional::script_u(active);
    if (text == "script-v" || text == "SCRIPT_V") return Functional::script_v(active);
    if (text == "script-u-nu" || text == "SCRIPT_U_NU") return Functional::script_u_nu(active, nu);
    throw std::invalid_argument("unknown functional '" + std::string(text) + "'");
}

QuadratureSpec QuadratureSpec::defaults(std::size_t n) {
    QuadratureSpec spec;
    spec.tolerance = n <= 1 ? 1e-6 : 1e-5;
    return spec;
}

void QuadratureSpec::validate() const {
    if (inner < 8 || outer < 8) throw std::invalid_argument("quadrature node counts must be >= 8");
    if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
}

double gaussian_expectation(const InitialFunction& f, std::span<const double> x, double variance, std::size_t nodes,
                            double tolerance) {
    if (variance < 0.0) throw std::invalid_argument("variance must be nonnegative");
    if (static_cast<int>(x.size()) != f.dimension()) throw std::invalid_argument("x does not match f's dimension");
    if (variance == 0.0) return f.value(x);
    if (nodes < 8) throw std::invalid_argument("Gauss-Hermite rule needs at least 8 nodes");
    const double fine = hermite_tensor(f, x, variance, nodes);
    const double coarse = hermite_tensor(f, x, variance, nodes * 3 / 4);
    if (std::abs(fine - coarse) > tolerance)
        throw NumericalError("gaussian_expectation",
                             "Gauss-Hermite rule with " + std::to_string(nodes) +
                                 " nodes is undersized: estimated error " + format_double(std::abs(fine - coarse)));
    return fine;
}

double eval_functional(const Functional& functional, const Clock& clock, const InitialFunction& f,
                       std::span<const double> t, std::span<const double> x, const QuadratureSpec& spec) {
    check_inputs(functional, clock, f, t, x);
    spec.validate();
    f.require_admissible(spec.polynomial_growth);
    const std::size_t n = t.size();
    const int p = functional.weight().power();
    if (functional.kind == FunctionalKind::U)
        for (double ti : t)
            if (ti == 0.0) return f.value(x);
    const auto rule = axis_rule(clock, spec.outer);

    double mass = 0.0;
    for (double w : rule->weights) mass += w;
    if (std::abs(mass - 1.0) > spec.tolerance / 10.0)
        throw NumericalError("eval_functional", "outer rule misses clock mass " + format_double(1.0 - mass) +
                                                    " (tolerance/10 = " + format_double(spec.tolerance / 10.0) + ")");

    // Per-axis node values s and weights; t_i = 0 is a point mass at s_i = 0.
    std::vector<std::vector<double>> s(n), w(n);
    const double e = clock.time_exponent();
    for (std::size_t i = 0; i < n; ++i) {
        if (t[i] == 0.0) {
            s[i] = {0.0};
            w[i] = {p != 0 && i != functional.active ? 0.0 : 1.0};
            continue;
        }
        const double c = std::pow(t[i], e);
        s[i].resize(rule->nodes.size());
        w[i] = rule->weights;
        for (std::size_t k = 0; k < s[i].size(); ++k) {
            s[i][k] = c * rule->nodes[k];
            if (p != 0 && i != functional.active) w[i][k] *= std::pow(s[i][k], p);
        }
    }

    // With Gauss-Hermite inside, the same sum is repeated with 3/4 of the nodes and the
    // difference taken as the inner-rule error. The node count doubles until that error
    // meets half the tolerance, up to a fixed budget of points per outer node.
    const bool use_hermite = !(spec.inner_rule == InnerRule::ClosedFormIfAvailable && f.heat_mean(x, 1.0));
    const auto outer_sum = [&](std::size_t nodes, double& coarse_total) {
        std::vector<std::size_t> idx(n, 0);
        double total = 0.0;
        coarse_total = 0.0;
        while (true) {
            double v = 1.0, weight = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                v *= s[i][idx[i]];
                weight *= w[i][idx[i]];
            }
            if (weight != 0.0) {
                if (!use_hermite || v == 0.0) {
                    const double m = inner_mean(f, x, v, spec);
                    total += weight * m;
                    coarse_total += weight * m;
                } else {
                    total += weight * hermite_tensor(f, x, v, nodes);
                    coarse_total += weight * hermite_tensor(f, x, v, nodes * 3 / 4);
                }
            }
            std::size_t i = 0;
            while (i < n && ++idx[i] == s[i].size()) idx[i++] = 0;
            if (i == n) break;
        }
        return total;
    };
    // Caps on the refined rule: total tensor points, and nodes per axis.
    constexpr double kInnerBudget = 40000.0;
    constexpr std::size_t kMaxAxisNodes = 2048;
    std::size_t nodes = spec.inner;
    double coarse_total = 0.0;
    double total = outer_sum(nodes, coarse_total);
    while (use_hermite && std::abs(total - coarse_total) > spec.tolerance / 2.0) {
        if (2 * nodes > kMaxAxisNodes ||
            std::pow(2.0 * static_cast<double>(nodes), static_cast<double>(x.size())) > kInnerBudget)
            throw NumericalError("eval_functional", "Gauss-Hermite rule with " + std::to_string(nodes) +
                                                        " nodes is undersized: estimated error " +
                                                        format_double(std::abs(total - coarse_total)));
        nodes *= 2;
        total = outer_sum(nodes, coarse_total);
    }
    if (!std::isfinite(total)) throw NumericalError("eval_functional", "non-finite quadrature sum");
    return total;
}

double oracle_polynomial(const Functional& functional, const Clock& clock, const InitialFunction& f,
                         std::span<const double> t, std::span<const double> x) {
    check_inputs(functional, clock, f, t, x);
    if (f.id() != FunctionId::Quadratic && f.id() != FunctionId::Quartic)
        throw std::invalid_argument("oracle_polynomial supports only QUADRATIC and QUARTIC f");
    const int p = functional.weight().power();
    const std::size_t j = functional.kind == FunctionalKind::U ? 0 : functional.active;
    // M_q = E[S_j^q] * prod_{i != j} E[S_i^{p+q}], the weighted q-th moment of prod S_i.
    auto weighted = [&](int q) {
        double m = clock_moment(clock, t[j], q);
        for (std::size_t i = 0; i < t.size(); ++i)
            if (i != j) m *= clock_moment(clock, t[i], p + q);
        return m;
    };
    const double d = static_cast<double>(x.size());
    double r2 = 0.0, r4 = 0.0;
    for (double v : x) {
        r2 += v * v;
        r4 += v * v * v * v;
    }
    if (f.id() == FunctionId::Quadratic) return r2 * weighted(0) + d * weighted(1);
    return r4 * weighted(0) + 6.0 * r2 * weighted(1) + 3.0 * d * weighted(2);
}

std::size_t Lattice::t_count() const {
    std::size_t c = 1;
    for (const auto& a : t_axes) c *= a.size();
    return c;
}

std::size_t Lattice::x_count() const {
    std::size_t c = 1;
    for (const auto& a : x_axes) c *= a.size();
    return c;
}

namespace {

std::vector<double> unflatten(const std::vector<std::vector<double>>& axes, std::size_t k) {
    std::vector<double> out(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        out[a] = axes[a][k % axes[a].size()];
        k /= axes[a].size();
    }
    return out;
}

}  // namespace

std::vector<double> Lattice::t_at(std::size_t k) const { return unflatten(t_axes, k / x_count()); }
std::vector<double> Lattice::x_at(std::size_t k) const { return unflatten(x_axes, k % x_count()); }

void Lattice::validate() const {
    if (t_axes.empty() || x_axes.empty()) throw std::invalid_argument("lattice needs at least one t and one x axis");
    for (const auto& a : t_axes) {
        if (a.empty()) throw std::invalid_argument("empty t axis");
        for (double v : a)
            if (!(v >= 0.0)) throw std::invalid_argument("t lattice values must be nonnegative");
    }
    for (const auto& a : x_axes)
        if (a.empty()) throw std::invalid_argument("empty x axis");
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) throw std::invalid_argument("linspace needs at least one point");
    if (count == 1) return {lo};
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    v.back() = hi;
    return v;
}

SolutionField eval_field(const Functional& functional, const Clock& clock, const InitialFunction& f,
                         const Lattice& lattice, const QuadratureSpec& spec) {
    lattice.validate();
    SolutionField field{functional, clock, lattice, std::vector<double>(lattice.size())};
    parallel_for(lattice.size(), [&](std::size_t k) {
        const auto t = lattice.t_at(k);
        const auto x = lattice.x_at(k);
        field.values[k] = eval_functional(functional, clock, f, t, x, spec);
    });
    return field;
}

void write_solution_csv(std::ostream& os, const SolutionField& field, std::string_view header_comment) {
    os << header_comment << '\n';
    const auto& lat = field.lattice;
    for (std::size_t i = 0; i < lat.n(); ++i) os << 't' << i + 1 << ',';
    for (std::size_t i = 0; i < lat.d(); ++i) os << 'x' << i + 1 << ',';
    os << "value\n";
    for (std::size_t k = 0; k < lat.size(); ++k) {
        for (double v : lat.t_at(k)) os << format_double(v) << ',';
        for (double v : lat.x_at(k)) os << format_double(v) << ',';
        os << format_double(field.values[k]) << '\n';
    }
}

}  // namespace sheetlab
