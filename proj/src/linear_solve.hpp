#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sheetlab::detail {

class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// LU with partial pivoting for the small systems that show up in weight fitting.
class LuFactor {
public:
    explicit LuFactor(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
        const std::size_t n = lu_.rows();
        if (lu_.cols() != n) throw std::invalid_argument("LU needs a square matrix");
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
            if (lu_(p, k) == 0.0) throw std::runtime_error("singular matrix in LU factorisation");
            if (p != k) {
                for (std::size_t c = 0; c < n; ++c) std::swap(lu_(p, c), lu_(k, c));
                std::swap(perm_[p], perm_[k]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                for (std::size_t c = k + 1; c < n; ++c) lu_(i, c) -= lu_(i, k) * lu_(k, c);
            }
        }
    }

    std::vector<double> solve(const std::vector<double>& b) const {
        const std::size_t n = lu_.rows();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[perm_[i]];
            for (std::size_t c = 0; c < i; ++c) s -= lu_(i, c) * x[c];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t c = i + 1; c < n; ++c) s -= lu_(i, c) * x[c];
            x[i] = s / lu_(i, i);
        }
        return x;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

}  // namespace sheetlab::detail
