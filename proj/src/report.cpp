#include "sheetlab/report.hpp"

#include "sheetlab/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace sheetlab {

std::string_view to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::FourthOrder: return "FOURTH_ORDER";
        case SystemKind::HalfFractional: return "HALF_FRACTIONAL";
        case SystemKind::BetaFractional: return "BETA_FRACTIONAL";
        case SystemKind::Order2Nu: return "ORDER_2NU";
        case SystemKind::EquivCondBtbs: return "EQUIV_COND_BTBS";
        case SystemKind::EquivCondIsltbs: return "EQUIV_COND_ISLTBS";
        case SystemKind::DensityHigherOrder: return "DENSITY_HIGHER_ORDER";
        case SystemKind::DensityFractional: return "DENSITY_FRACTIONAL";
    }
    return "UNKNOWN";
}

void ResidualReport::add(double residual) {
    inf_norm = std::max(inf_norm, std::abs(residual));
    sum_sq_ += residual * residual;
    ++points;
}

void ResidualReport::finish() { l2_norm = points ? std::sqrt(sum_sq_ / static_cast<double>(points)) : 0.0; }

bool ResidualReport::boundary_passed() const {
    return std::all_of(boundary.begin(), boundary.end(), [](const BoundaryCheck& b) { return b.passed(); });
}

double ResidualReport::extra(std::string_view name) const {
    for (const auto& [k, v] : extras)
        if (k == name) return v;
    throw std::out_of_range("no report entry named " + std::string(name));
}

void write_report_csv(std::ostream& os, std::span<const ResidualReport> reports, std::string_view header_comment) {
    os << header_comment << '\n' << "system,j,inf_norm,l2_norm,grid_desc\n";
    for (const auto& r : reports) {
        os << to_string(r.system) << ',' << r.active + 1 << ',' << format_double(r.inf_norm) << ','
           << format_double(r.l2_norm) << ',' << csv_quote(r.grid_desc) << '\n';
    }
}

void write_per_point_csv(std::ostream& os, const ResidualReport& report, std::string_view header_comment) {
    os << header_comment << '\n';
    if (report.per_point.empty()) {
        os << "residual\n";
        return;
    }
    const auto& first = report.per_point.front();
    for (std::size_t i = 0; i < first.t.size(); ++i) os << 't' << i + 1 << ',';
    for (std::size_t i = 0; i < first.x.size(); ++i) os << 'x' << i + 1 << ',';
    os << "residual\n";
    for (const auto& p : report.per_point) {
        for (double v : p.t) os << format_double(v) << ',';
        for (double v : p.x) os << format_double(v) << ',';
        os << format_double(p.residual) << '\n';
    }
}

}  // namespace sheetlab
