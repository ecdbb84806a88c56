#ifndef BILOCAL_LP_HPP
#define BILOCAL_LP_HPP

#include <span>
#include <vector>

#include "bilocal/scenario.hpp"

namespace bilocal {

/// maximize objective . x  subject to  A x = b, x >= 0.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;  // size num_vars
    std::vector<double> matrix;     // row-major, num_rows() x num_vars
    std::vector<double> rhs;

    int num_rows() const { return static_cast<int>(rhs.size()); }

    // Throws std::invalid_argument on dimension mismatch or non-finite input.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;  // populated when Optimal; satisfies Ax=b to 1e-9, x >= -1e-12
    double objective_value = 0.0;
};

/// Two-phase dense simplex. Pivot tolerance 1e-10; ties broken by smallest
/// index; Infeasible iff the phase-1 optimum exceeds 1e-9.
LpResult solve(const LinearProgram& lp);

/// Inner product of a Bell coefficient tensor with a correlation (or any
/// equally-shaped value table). Throws on shape mismatch.
double max_violation(const Correlation& p, std::span<const double> coeffs);
double max_violation(std::span<const double> values, std::span<const double> coeffs);

}  // namespace bilocal

#endif
