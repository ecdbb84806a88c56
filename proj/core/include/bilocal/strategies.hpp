#ifndef BILOCAL_STRATEGIES_HPP
#define BILOCAL_STRATEGIES_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>

#include "bilocal/scenario.hpp"

namespace bilocal {

inline constexpr int kNumTriples = 64;

/// One deterministic strategy triple: Alice's outputs for inputs 0 and 1,
/// Bob's fixed two-bit output, Charles's outputs for inputs 0 and 1.
struct DetTriple {
    std::uint8_t alpha0 = 0, alpha1 = 0;
    std::uint8_t beta0 = 0, beta1 = 0;
    std::uint8_t gamma0 = 0, gamma1 = 0;

    // Flat index with alpha0 slowest, matching the serialized weight order
    // (alpha0, alpha1, beta0, beta1, gamma0, gamma1).
    static DetTriple from_index(int i);
    int index() const {
        return alpha0 * 32 + alpha1 * 16 + beta0 * 8 + beta1 * 4 + gamma0 * 2 + gamma1;
    }

    int alice_output(int x) const { return x == 0 ? alpha0 : alpha1; }
    int bob_output() const { return 2 * beta0 + beta1; }
    int charles_output(int z) const { return z == 0 ? gamma0 : gamma1; }
};

/// Probability weights over the 64 deterministic strategy triples: the finite
/// hidden-variable model. Invariants: q >= 0, sum q = 1.
class WeightVector {
  public:
    // Validates q >= -tol and |sum - 1| <= tol, then clamps tiny negatives
    // and renormalizes exactly. Throws std::invalid_argument on violation.
    static WeightVector from_array(const std::array<double, kNumTriples>& q,
                                   double tol = kConstructionTol);
    static WeightVector point_mass(const DetTriple& t);
    static WeightVector uniform();

    double operator[](int i) const { return q_[i]; }
    const std::array<double, kNumTriples>& weights() const { return q_; }

    bool operator==(const WeightVector&) const = default;

  private:
    WeightVector() = default;
    std::array<double, kNumTriples> q_{};
};

struct WeightMarginals {
    std::array<double, 4> q_alpha{};        // index 2*alpha0 + alpha1
    std::array<double, 4> q_gamma{};        // index 2*gamma0 + gamma1
    std::array<double, 16> q_alphagamma{};  // index alpha*4 + gamma
};

/// P(a,b,c|x,z) = sum_t q_t [a = alpha_x][b = beta][c = gamma_z].
Correlation synthesize(const WeightVector& w);

WeightMarginals marginals(const WeightVector& w);

/// The bilocality condition on weights: max |q_{ag} - q_a q_g| <= tol.
bool is_bilocal_weights(const WeightVector& w, double tol);

/// Two-stage group averaging over strategy relabelings. Preserves
/// normalization and bilocality, keeps the synthesized I fixed and never
/// increases E; idempotent.
WeightVector depolarize(const WeightVector& w);

/// The 16-element relabeling group generated by {flip_a&flip_b0,
/// flip_c&flip_b0, swap_x&flip_b1, swap_z&flip_b1}. Averaging a synthesized
/// correlation over this group equals synthesizing the depolarized weights.
const std::array<RelabelOp, 16>& depolarization_group();

/// The four-parameter family every depolarized weight vector belongs to.
struct SymmetricParams {
    double r = 0.5;  // P(alpha0 = alpha1)
    double s = 0.5;  // P(gamma0 = gamma1)
    double t = 0.5;  // P(beta0 = 0 | alpha = 00, gamma = 00)
    double u = 0.5;  // P(beta0 = beta1 | alpha = 01, gamma = 01)

    // Slice coordinates of the synthesized correlation; they always satisfy
    // sqrt|X| + sqrt|Y| <= 1.
    double x() const { return r * s * (2.0 * t - 1.0); }
    double y() const { return (1.0 - r) * (1.0 - s) * (2.0 * u - 1.0); }
};

struct ExtractedParams {
    SymmetricParams params;
    bool t_degenerate = false;  // conditioning event for t has zero weight
    bool u_degenerate = false;
};

/// Read (r,s,t,u) off a depolarized weight vector. Degenerate conditionals
/// are reported as 1/2 plus a flag. Throws std::invalid_argument if the
/// input is not in the image of depolarize (symmetry check at 1e-10).
ExtractedParams extract_symmetric_params(const WeightVector& w);

/// The product weights q_alpha * q_gamma * q_{beta|alpha gamma} determined by
/// (r,s,t,u); bilocal by construction and a fixed point of depolarize.
/// Throws std::invalid_argument if a parameter is outside [0,1].
WeightVector build_symmetric_weights(const SymmetricParams& p);

/// The 8-term uniform strategy mixtures behind the perfectly-correlated
/// points P_C and its twisted variant; (P_C + Pbar_C)/2 reproduces the
/// optimal-settings quantum point.
WeightVector pc_weights();
WeightVector pcbar_weights();

/// Uniform product sample of the bilocal parametrization: q_alpha and
/// q_gamma on the 3-simplex, q_{beta|alpha gamma} on the 3-simplex
/// independently per (alpha, gamma).
WeightVector random_product_weights(std::mt19937_64& rng);

/// JSON flat 64-array in index order (17-significant-digit output).
std::string to_json(const WeightVector& w);
WeightVector weights_from_json(const std::string& text);

}  // namespace bilocal

#endif
