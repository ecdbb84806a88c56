#include "bilocal/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace bilocal {

namespace {

constexpr double kPivotTol = 1e-10;  // entering threshold / ratio denominator
constexpr double kTieTol = 1e-12;    // ties resolved by smallest index
constexpr double kFeasTol = 1e-9;    // phase-1 optimum above this -> Infeasible

// Dense simplex tableau: rows() x (num_cols + 1), rhs in the last column.
struct Tableau {
    int num_cols = 0;
    std::vector<std::vector<double>> rows;
    std::vector<double> obj;  // reduced-cost row, length num_cols + 1
    std::vector<int> basis;   // basic column per row
    long iterations = 0;
    bool bland = false;

    double& rhs(int i) { return rows[i][num_cols]; }

    // Entering column among [0, limit): largest reduced cost, smallest index
    // on ties; Bland's rule (first improving index) once `bland` is set.
    int pick_entering(int limit) const {
        int best = -1;
        double best_val = kPivotTol;
        for (int j = 0; j < limit; ++j) {
            const double v = obj[j];
            if (v <= kPivotTol) continue;
            if (bland) return j;
            if (v > best_val + kTieTol) {
                best = j;
                best_val = v;
            }
        }
        return best;
    }

    // Leaving row by minimum ratio; ties within kTieTol resolved by the
    // smallest basic-variable index. Returns -1 if the column is unbounded.
    int pick_leaving(int col) const {
        int best = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            const double a = rows[i][col];
            if (a <= kPivotTol) continue;
            const double ratio = std::max(rows[i][num_cols], 0.0) / a;
            if (best < 0 || ratio < best_ratio - kTieTol ||
                (ratio < best_ratio + kTieTol && basis[i] < basis[best])) {
                best = i;
                best_ratio = ratio;
            }
        }
        return best;
    }

    void pivot(int row, int col) {
        auto& prow = rows[row];
        const double piv = prow[col];
        for (double& v : prow) v /= piv;
        prow[col] = 1.0;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == row) continue;
            const double f = rows[i][col];
            if (f == 0.0) continue;
            for (int j = 0; j <= num_cols; ++j) rows[i][j] -= f * prow[j];
            rows[i][col] = 0.0;
            if (rows[i][num_cols] < 0.0 && rows[i][num_cols] > -1e-11) rows[i][num_cols] = 0.0;
        }
        const double f = obj[col];
        if (f != 0.0) {
            for (int j = 0; j <= num_cols; ++j) obj[j] -= f * prow[j];
            obj[col] = 0.0;
        }
        basis[row] = col;
    }

    // Maximize until no reduced cost exceeds the pivot tolerance.
    // Returns false if an unbounded ray is found.
    bool optimize(int entering_limit) {
        constexpr long kBlandAfter = 5000;
        constexpr long kHardCap = 200000;
        while (true) {
            const int col = pick_entering(entering_limit);
            if (col < 0) return true;
            const int row = pick_leaving(col);
            if (row < 0) return false;
            pivot(row, col);
            if (++iterations == kBlandAfter) bland = true;
            if (iterations > kHardCap) {
                throw std::runtime_error("simplex: iteration cap exceeded");
            }
        }
    }
};

}  // namespace

void LinearProgram::validate() const {
    if (num_vars < 0) throw std::invalid_argument("lp: negative variable count");
    if (static_cast<int>(objective.size()) != num_vars) {
        throw std::invalid_argument("lp: objective size mismatch");
    }
    if (matrix.size() != rhs.size() * static_cast<size_t>(num_vars)) {
        throw std::invalid_argument("lp: constraint matrix size mismatch");
    }
    for (double v : objective) {
        if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite objective");
    }
    for (double v : matrix) {
        if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite constraint");
    }
    for (double v : rhs) {
        if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite rhs");
    }
}

LpResult solve(const LinearProgram& lp) {
    lp.validate();
    const int n = lp.num_vars;
    const int m = lp.num_rows();

    Tableau t;
    t.num_cols = n + m;  // structural vars then one artificial per row
    t.rows.assign(m, std::vector<double>(n + m + 1, 0.0));
    t.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        const double sign = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) t.rows[i][j] = sign * lp.matrix[i * static_cast<size_t>(n) + j];
        t.rows[i][n + i] = 1.0;
        t.rows[i][n + m] = sign * lp.rhs[i];
        t.basis[i] = n + i;
    }

    // Phase 1: maximize minus the sum of artificials. With the artificial
    // basis, the reduced cost of structural column j is the column sum.
    t.obj.assign(n + m + 1, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t.obj[j] += t.rows[i][j];
        t.obj[n + m] += t.rows[i][n + m];
    }
    t.optimize(n);  // artificials never re-enter
    const double infeasibility = t.obj[n + m];  // remaining sum of artificials
    if (infeasibility > kFeasTol) {
        return LpResult{LpStatus::Infeasible, {}, 0.0};
    }

    // Drive leftover artificials out of the basis; rows that admit no
    // structural pivot are redundant and get dropped.
    for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
        if (t.basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j) {
            if (std::abs(t.rows[i][j]) > 1e-7) {
                col = j;
                break;
            }
        }
        if (col >= 0) {
            t.pivot(i, col);
        } else {
            t.rows.erase(t.rows.begin() + i);
            t.basis.erase(t.basis.begin() + i);
        }
    }

    // Phase 2: price the true objective against the current basis.
    t.obj.assign(n + m + 1, 0.0);
    for (int j = 0; j < n; ++j) t.obj[j] = lp.objective[j];
    for (size_t i = 0; i < t.rows.size(); ++i) {
        const double f = t.obj[t.basis[i]];
        if (f == 0.0) continue;
        for (int j = 0; j <= t.num_cols; ++j) t.obj[j] -= f * t.rows[i][j];
        t.obj[t.basis[i]] = 0.0;
    }
    t.iterations = 0;
    t.bland = false;
    if (!t.optimize(n)) {
        return LpResult{LpStatus::Unbounded, {}, 0.0};
    }

    LpResult result;
    result.status = LpStatus::Optimal;
    result.x.assign(n, 0.0);
    for (size_t i = 0; i < t.rows.size(); ++i) {
        if (t.basis[i] < n) result.x[t.basis[i]] = std::max(t.rows[i][t.num_cols], 0.0);
    }
    result.objective_value = 0.0;
    for (int j = 0; j < n; ++j) result.objective_value += lp.objective[j] * result.x[j];

    // Re-verify the constraints before reporting Optimal.
    for (int i = 0; i < m; ++i) {
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += lp.matrix[i * static_cast<size_t>(n) + j] * result.x[j];
        if (std::abs(dot - lp.rhs[i]) > kFeasTol) {
            throw std::runtime_error("simplex: solution failed constraint re-verification");
        }
    }
    return result;
}

double max_violation(std::span<const double> values, std::span<const double> coeffs) {
    if (values.size() != coeffs.size()) {
        throw std::invalid_argument("max_violation: shape mismatch");
    }
    double sum = 0.0;
    for (size_t i = 0; i < values.size(); ++i) sum += values[i] * coeffs[i];
    return sum;
}

double max_violation(const Correlation& p, std::span<const double> coeffs) {
    return max_violation(std::span<const double>(p.tensor()), coeffs);
}

}  // namespace bilocal
