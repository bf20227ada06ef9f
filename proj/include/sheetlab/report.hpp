#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sheetlab {

enum class SystemKind {
    FourthOrder,
    HalfFractional,
    BetaFractional,
    Order2Nu,
    EquivCondBtbs,
    EquivCondIsltbs,
    DensityHigherOrder,
    DensityFractional,
};

std::string_view to_string(SystemKind kind);

struct BoundaryCheck {
    std::string row;  // e.g. "(b) u = f on t_j = 0"
    double max_abs_error = 0.0;
    double tolerance = 0.0;
    std::size_t points = 0;
    bool passed() const noexcept { return max_abs_error <= tolerance; }
};

struct PointResidual {
    std::vector<double> t;
    std::vector<double> x;
    double residual = 0.0;
};

struct ResidualReport {
    SystemKind system = SystemKind::FourthOrder;
    std::size_t active = 0;  // zero-based; written as j = active + 1
    std::string grid_desc;
    double inf_norm = 0.0;
    double l2_norm = 0.0;  // root-mean-square over evaluated points
    std::size_t points = 0;
    std::vector<PointResidual> per_point;
    std::vector<BoundaryCheck> boundary;
    // Named secondary quantities (commuted-order discrepancy, coefficient checks, ...).
    std::vector<std::pair<std::string, double>> extras;

    void add(double residual);
    void finish();
    bool boundary_passed() const;
    double extra(std::string_view name) const;  // throws if absent

private:
    double sum_sq_ = 0.0;
};

void write_report_csv(std::ostream& os, std::span<const ResidualReport> reports, std::string_view header_comment);
void write_per_point_csv(std::ostream& os, const ResidualReport& report, std::string_view header_comment);

}  // namespace sheetlab
