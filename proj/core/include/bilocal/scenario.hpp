#ifndef BILOCAL_SCENARIO_HPP
#define BILOCAL_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bilocal {

// Tolerance for checks on exact closed-form constructions.
inline constexpr double kConstructionTol = 1e-12;
// Tolerance for statistical checks (no-signaling, marginal constancy).
inline constexpr double kStatisticalTol = 1e-9;

/// Measurement scenario of the two-source network: Alice and Charles each
/// choose one of two binary measurements, Bob performs a single fixed
/// four-outcome measurement. Bob's outcome b in {0,1,2,3} decodes to bits
/// (b0, b1) via b = 2*b0 + b1.
struct Scenario {
    int nx = 2;  // Alice inputs
    int nz = 2;  // Charles inputs
    int na = 2;  // Alice outputs
    int nc = 2;  // Charles outputs
    int nb = 4;  // Bob outputs (single fixed input)

    bool operator==(const Scenario&) const = default;

    int tensor_size() const { return nx * nz * na * nb * nc; }
    bool is_default() const { return nx == 2 && nz == 2 && na == 2 && nc == 2 && nb == 4; }

    // Throws std::invalid_argument if any cardinality is < 1.
    void validate() const;
};

/// Flat index into the correlation tensor, [x][z][a][b][c] row-major with x
/// slowest. This order is the canonical serialization used everywhere.
inline int tensor_index(const Scenario& sc, int x, int z, int a, int b, int c) {
    return (((x * sc.nz + z) * sc.na + a) * sc.nb + b) * sc.nc + c;
}

/// A tripartite conditional probability tensor P(a,b,c|x,z). Immutable after
/// construction; all operations on correlations are pure functions.
///
/// Nonnegativity and per-(x,z) normalization are enforced by from_tensor.
/// No-signaling is deliberately not an invariant; use check_nosignaling.
class Correlation {
  public:
    // Checked construction: entries >= -1e-12, each (x,z) block sums to 1
    // within 1e-12. Throws std::invalid_argument otherwise.
    static Correlation from_tensor(const Scenario& sc, std::vector<double> p);

    // Unchecked construction, for signed tensors that arise as affine
    // combinations of correlations (e.g. slice scans outside the polytope).
    static Correlation from_tensor_unchecked(const Scenario& sc, std::vector<double> p);

    const Scenario& scenario() const { return scenario_; }
    const std::vector<double>& tensor() const { return p_; }

    double at(int x, int z, int a, int b, int c) const {
        return p_[tensor_index(scenario_, x, z, a, b, c)];
    }

  private:
    Correlation(const Scenario& sc, std::vector<double> p)
        : scenario_(sc), p_(std::move(p)) {}

    Scenario scenario_;
    std::vector<double> p_;
};

/// Output/input relabeling of the default scenario. The six generators act on
/// disjoint indices, so they commute, each is an involution, and composition
/// is bitwise XOR of the flags.
struct RelabelOp {
    bool flip_a = false;   // a -> a^1 for all x
    bool flip_c = false;   // c -> c^1 for all z
    bool flip_b0 = false;  // b0 -> b0^1
    bool flip_b1 = false;  // b1 -> b1^1
    bool swap_x = false;   // x -> x^1
    bool swap_z = false;   // z -> z^1

    bool operator==(const RelabelOp&) const = default;

    RelabelOp then(const RelabelOp& o) const {
        return RelabelOp{flip_a != o.flip_a,   flip_c != o.flip_c,
                         flip_b0 != o.flip_b0, flip_b1 != o.flip_b1,
                         swap_x != o.swap_x,   swap_z != o.swap_z};
    }
};

/// Uniformly random outcomes: every entry 1/(na*nb*nc), 1/16 by default.
Correlation white_noise(const Scenario& sc = Scenario{});

/// Entrywise v*p + (1-v)*q. Throws on scenario mismatch or v outside [0,1].
Correlation mix(const Correlation& p, const Correlation& q, double v);

/// Apply a relabeling. Default scenario only.
Correlation relabel(const Correlation& p, const RelabelOp& op);

/// Alice-Charles table conditioned on one Bob outcome.
struct BobConditional {
    double prob = 0.0;               // P(b), averaged over (x,z)
    std::array<double, 16> table{};  // P_b(a,c|x,z), index [x][z][a][c]
    bool degenerate = false;         // P(b) ~ 0; table set to uniform 1/4

    double at(int x, int z, int a, int c) const { return table[((x * 2 + z) * 2 + a) * 2 + c]; }
};

/// Bob marginal and conditional table for outcome b. Requires the b-marginal
/// to be independent of (x,z) within 1e-9 (throws std::invalid_argument on
/// signaling input). A zero-probability outcome yields a uniform table with
/// the degenerate flag set.
BobConditional conditional_ac(const Correlation& p, int b);

/// True iff every single- and two-party marginal is independent of the
/// remote parties' inputs within tol.
bool check_nosignaling(const Correlation& p, double tol = kStatisticalTol);

/// JSON serialization {"scenario":{...},"p":[...]} with 17-significant-digit
/// numeric output; p flat in [x][z][a][b][c] order, x slowest.
std::string to_json(const Correlation& p);

/// Parse and validate a correlation produced by to_json. Throws
/// std::invalid_argument on malformed input.
Correlation correlation_from_json(const std::string& text);

}  // namespace bilocal

#endif
