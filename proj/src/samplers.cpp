#include "sheetlab/samplers.hpp"

#include "sheetlab/densities.hpp"
#include "sheetlab/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sheetlab {

double sample_stable_L1(double beta, RngStream& stream) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("stable index beta must lie in (0, 1)");
    const double u = std::numbers::pi * stream.uniform();
    const double e = stream.exponential();
    return std::pow(kanter_a(beta, u) / e, (1.0 - beta) / beta);
}

double sample_inverse_subordinator(double beta, double t, RngStream& stream) {
    if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
    const double l = sample_stable_L1(beta, stream);
    if (t == 0.0) return 0.0;
    return std::pow(t / l, beta);
}

double sample_abs_bm(double t, RngStream& stream) {
    if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
    return std::abs(std::sqrt(t) * stream.normal());
}

double sample_clock(const Clock& clock, double t, RngStream& stream) {
    return clock.kind == ClockKind::BTBS ? sample_abs_bm(t, stream)
                                         : sample_inverse_subordinator(clock.order->beta(), t, stream);
}

std::vector<double> sample_sheet_value(std::span<const double> inner_times, std::span<const double> x,
                                       RngStream& stream) {
    double variance = 1.0;
    for (double s : inner_times) variance *= s;
    std::vector<double> value(x.begin(), x.end());
    if (variance == 0.0) return value;
    const double sd = std::sqrt(variance);
    for (auto& v : value) v += sd * stream.normal();
    return value;
}

FieldSample sample_field(const Clock& clock, std::span<const double> t, std::span<const double> x,
                         RngStream& stream) {
    clock.validate();
    FieldSample out{clock, {t.begin(), t.end()}, {x.begin(), x.end()}, {}, {}};
    out.inner_times.reserve(t.size());
    for (double ti : t) out.inner_times.push_back(sample_clock(clock, ti, stream));
    out.value = sample_sheet_value(out.inner_times, x, stream);
    return out;
}

int Weight::power() const {
    switch (kind) {
        case WeightKind::None: return 0;
        case WeightKind::ProdS: return 1;
        case WeightKind::ProdSSq: return 2;
        case WeightKind::ProdSNu:
            if (nu < 2) throw std::invalid_argument("PROD_S_NU weight needs nu >= 2");
            return nu;
    }
    return 0;
}

double Weight::apply(std::span<const double> inner_times, std::size_t active) const {
    const int p = power();
    if (p == 0) return 1.0;
    if (active >= inner_times.size()) throw std::invalid_argument("active index out of range");
    double w = 1.0;
    for (std::size_t i = 0; i < inner_times.size(); ++i)
        if (i != active) w *= std::pow(inner_times[i], p);
    return w;
}

namespace {

struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
};

Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    const double n = a.count + b.count;
    const double delta = b.mean - a.mean;
    return {n, a.mean + delta * b.count / n, a.m2 + b.m2 + delta * delta * a.count * b.count / n};
}

}  // namespace

McEstimate mc_mean(std::size_t samples, const RngStream& stream, const std::function<double(RngStream&)>& draw) {
    if (samples < 1) throw std::invalid_argument("Monte-Carlo sample count must be >= 1");
    const std::size_t shards = (samples + kMcShardSize - 1) / kMcShardSize;
    std::vector<Moments> stats(shards);
    parallel_for(shards, [&](std::size_t k) {
        RngStream local = stream.derive(k);
        const std::size_t m = std::min(kMcShardSize, samples - k * kMcShardSize);
        Moments s;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = draw(local);
            s.count += 1.0;
            const double delta = v - s.mean;
            s.mean += delta / s.count;
            s.m2 += delta * (v - s.mean);
        }
        stats[k] = s;
    });
    while (stats.size() > 1) {
        std::vector<Moments> next((stats.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = 2 * i + 1 < stats.size() ? merge(stats[2 * i], stats[2 * i + 1]) : stats[2 * i];
        stats = std::move(next);
    }
    const Moments& total = stats.front();
    McEstimate out{total.mean, std::numeric_limits<double>::infinity(), samples};
    if (samples > 1) out.standard_error = std::sqrt(total.m2 / (total.count - 1.0) / total.count);
    return out;
}

McEstimate mc_expectation(const Clock& clock, const InitialFunction& f, Weight weight, std::size_t active,
                          std::span<const double> t, std::span<const double> x, std::size_t samples,
                          const RngStream& stream) {
    clock.validate();
    if (static_cast<int>(x.size()) != f.dimension()) throw std::invalid_argument("x does not match f's dimension");
    if (weight.power() != 0 && active >= t.size()) throw std::invalid_argument("active index out of range");
    const std::vector<double> tv(t.begin(), t.end()), xv(x.begin(), x.end());
    return mc_mean(samples, stream, [&](RngStream& s) {
        const FieldSample draw = sample_field(clock, tv, xv, s);
        return f.value(draw.value) * weight.apply(draw.inner_times, active);
    });
}

std::vector<double> brownian_path(double t_end, std::size_t steps, RngStream& stream) {
    if (!(t_end > 0.0) || steps == 0) throw std::invalid_argument("path needs t_end > 0 and steps >= 1");
    const double sd = std::sqrt(t_end / static_cast<double>(steps));
    std::vector<double> path(steps + 1, 0.0);
    for (std::size_t i = 1; i <= steps; ++i) path[i] = path[i - 1] + sd * stream.normal();
    return path;
}

std::vector<std::vector<double>> brownian_sheet_grid(double a, double b, std::size_t n1, std::size_t n2,
                                                     RngStream& stream) {
    if (!(a > 0.0 && b > 0.0) || n1 == 0 || n2 == 0) throw std::invalid_argument("sheet grid needs a, b > 0");
    const double sd = std::sqrt(a / static_cast<double>(n1) * b / static_cast<double>(n2));
    std::vector<std::vector<double>> w(n1 + 1, std::vector<double>(n2 + 1, 0.0));
    for (std::size_t i = 1; i <= n1; ++i)
        for (std::size_t k = 1; k <= n2; ++k)
            w[i][k] = w[i - 1][k] + w[i][k - 1] - w[i - 1][k - 1] + sd * stream.normal();
    return w;
}

}  // namespace sheetlab
