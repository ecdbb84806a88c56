#ifndef BILOCAL_CERTIFY_HPP
#define BILOCAL_CERTIFY_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bilocal/scenario.hpp"
#include "bilocal/strategies.hpp"

namespace bilocal {

/// The two correlation functionals of the quadratic bilocality test, plus the
/// per-outcome Alice-Charles correlators they are built from:
///   E_b(xz) = sum_{a^c=b0} P_b(ac|xz) - sum_{a^c!=b0} P_b(ac|xz)
///   I       = sum_b P(b) sum_{x^z=b1} E_b(xz)
///   E       = max_b max_{x^z!=b1} 4 |P(b) E_b(xz)|
struct IEValues {
    double I = 0.0;
    double E = 0.0;
    std::array<std::array<std::array<double, 2>, 2>, 4> e_table{};  // [b][x][z]
};

/// Throws std::invalid_argument on signaling input (P(b) ill-defined).
IEValues compute_IE(const Correlation& p);

/// The quadratic inequality I <= 1 + E^2 satisfied by every bilocal
/// correlation. slack = 1 + E^2 - I; satisfied iff slack >= -1e-9.
struct InequalityCheck {
    bool satisfied = true;
    double slack = 0.0;
};
InequalityCheck check_biloc_inequality(const Correlation& p);

enum class LocalVerdict { Local, NotLocal, Unknown };

struct LocalResult {
    LocalVerdict verdict = LocalVerdict::Unknown;
    std::optional<WeightVector> certificate;  // present iff Local
    std::string diagnostics;                  // populated iff Unknown
};

/// Local-polytope membership by linear feasibility over the 64 deterministic
/// strategy weights. Solver failure surfaces as Unknown with diagnostics.
LocalResult is_local(const Correlation& p);

enum class BilocalVerdict { ProvenBilocal, ProvenNonBilocal, Unknown };

struct SearchOptions {
    int random_restarts = 32;
    int max_iters = 500;  // alternating rounds per restart
    std::uint64_t seed = 0;
};

struct BilocalSearchResult {
    BilocalVerdict verdict = BilocalVerdict::Unknown;  // never ProvenNonBilocal
    std::optional<WeightVector> certificate;           // present iff ProvenBilocal
    double best_l1 = 0.0;                              // smallest L1 distance reached
};

/// Block-coordinate descent on the product parametrization
/// q_alpha q_gamma q_{beta|alpha gamma}: with two blocks fixed, the L1-best
/// third block is a linear program. Proves bilocality when the synthesized
/// correlation comes within L1 distance 1e-7 of the target; otherwise
/// Unknown. Non-bilocality is never decided here.
BilocalSearchResult find_bilocal_decomposition(const Correlation& p,
                                               const SearchOptions& opts = {});

enum class VisibilityCriterion { Inequality, LocalLp };

/// Bisect the noise family mix(target, white noise, v) for the smallest
/// visibility at which the chosen criterion flags the correlation
/// (inequality violation, respectively non-membership in the local
/// polytope). Throws std::invalid_argument if the criterion never fires.
double critical_visibility(const Correlation& target, VisibilityCriterion criterion,
                           double tol);

/// One grid record of the two-dimensional slice
/// X*P_C + Y*Pbar_C + (1-X-Y)*P_R.
struct SlicePoint {
    double x = 0.0, y = 0.0;
    double i = 0.0, e = 0.0;  // functionals of the mixed correlation
    double slack = 0.0;       // 1 + e^2 - i
    bool local = false;       // LP membership verdict
};

struct Polyline {
    std::string name;
    std::vector<std::array<double, 2>> points;
};

struct SliceTable {
    int grid_n = 0;
    std::vector<SlicePoint> points;     // row-major, X slowest, X and Y in [-1,1]
    std::vector<Polyline> boundaries;   // four parabola arcs + local square
};

/// Scan the slice on a grid_n x grid_n grid over [-1,1]^2. Points evaluate
/// independently and are processed concurrently (threads = 0 picks the
/// hardware count). Boundary polylines carry the analytic bilocal arcs --
/// the upper parabola 2(X+Y) = 1+(X-Y)^2 and its three sign-flip images --
/// and the local-polytope square.
SliceTable export_slice(int grid_n, int threads = 0);

/// CSV with header X,Y,I,E,slack,local.
void write_slice_csv(const SliceTable& table, std::ostream& out);
/// CSV with header curve,X,Y for the boundary polylines.
void write_boundaries_csv(const SliceTable& table, std::ostream& out);

/// CHSH value of each conditional P_b(ac|xz) under the per-outcome sign
/// relabeling that the swapped Bell state calls for. Requires well-defined
/// conditionals (throws on signaling input).
std::array<double, 4> chsh_per_b(const Correlation& p);

/// CHSH functional of the swapping experiment reinterpreted as a bipartite
/// test: Charles's outcome labels Bob's effective measurement basis and a
/// frozen function of (b, c) gives Bob's effective outcome bit.
double effective_chsh(const Correlation& p);

struct SeparableDemoReport {
    double s_eff = 0.0;
    bool non_bilocal = false;  // |s_eff| > 2 + 1e-9
    Correlation correlation;
};

/// The singlet (x) separable-state experiment: Alice measures (sx+-sz)/sqrt2,
/// Charles always sz, Bob the Bell basis. Despite one source being separable,
/// the effective CHSH value reaches 2*sqrt2.
SeparableDemoReport separable_demo();

/// Everything the certifier can say about one correlation.
struct CertReport {
    IEValues ie;
    double inequality_lhs_minus_rhs = 0.0;  // I - 1 - E^2
    bool inequality_satisfied = true;
    LocalResult local;
    BilocalVerdict bilocal_verdict = BilocalVerdict::Unknown;
    std::optional<WeightVector> bilocal_certificate;
    double bilocal_search_l1 = 0.0;
    std::optional<std::array<double, 4>> chsh;  // omitted when some P(b) ~ 0
};

/// Full certification: functionals, inequality, LP membership, and -- when
/// the inequality does not already prove non-bilocality -- the decomposition
/// search. An input can never be proven bilocal and non-bilocal at once.
CertReport certify(const Correlation& p, const SearchOptions& opts = {});

std::string to_json(const CertReport& report);
std::string to_json(const SeparableDemoReport& report);

}  // namespace bilocal

#endif
