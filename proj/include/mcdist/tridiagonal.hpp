#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mcdist {

// Thomas algorithm for a Toeplitz tridiagonal system
//   sub * x[i-1] + diag * x[i] + sup * x[i+1] = rhs[i].
// The forward sweep depends only on the coefficients, so it is factored once
// and reused for every right-hand side.
class TridiagonalSolver {
public:
    TridiagonalSolver(std::size_t n, double sub, double diag, double sup)
        : sub_(sub), scaled_sup_(n), inv_pivot_(n) {
        if (n == 0) {
            throw std::invalid_argument("TridiagonalSolver: empty system");
        }
        double pivot = diag;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                pivot = diag - sub * scaled_sup_[i - 1];
            }
            if (pivot == 0.0) {
                throw std::invalid_argument("TridiagonalSolver: zero pivot");
            }
            inv_pivot_[i] = 1.0 / pivot;
            scaled_sup_[i] = sup * inv_pivot_[i];
        }
    }

    std::size_t size() const noexcept { return inv_pivot_.size(); }

    /// Overwrites rhs with the solution.
    void solve(std::span<double> rhs) const {
        const std::size_t n = size();
        if (rhs.size() != n) {
            throw std::invalid_argument("TridiagonalSolver: size mismatch");
        }
        rhs[0] *= inv_pivot_[0];
        for (std::size_t i = 1; i < n; ++i) {
            rhs[i] = (rhs[i] - sub_ * rhs[i - 1]) * inv_pivot_[i];
        }
        for (std::size_t i = n - 1; i-- > 0;) {
            rhs[i] -= scaled_sup_[i] * rhs[i + 1];
        }
    }

private:
    double sub_;
    std::vector<double> scaled_sup_;
    std::vector<double> inv_pivot_;
};

}  // namespace mcdist
