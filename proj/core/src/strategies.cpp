#include "bilocal/strategies.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "json_format.hpp"

namespace bilocal {

DetTriple DetTriple::from_index(int i) {
    if (i < 0 || i >= kNumTriples) throw std::invalid_argument("DetTriple: index out of range");
    DetTriple t;
    t.alpha0 = static_cast<std::uint8_t>((i >> 5) & 1);
    t.alpha1 = static_cast<std::uint8_t>((i >> 4) & 1);
    t.beta0 = static_cast<std::uint8_t>((i >> 3) & 1);
    t.beta1 = static_cast<std::uint8_t>((i >> 2) & 1);
    t.gamma0 = static_cast<std::uint8_t>((i >> 1) & 1);
    t.gamma1 = static_cast<std::uint8_t>(i & 1);
    return t;
}

WeightVector WeightVector::from_array(const std::array<double, kNumTriples>& q, double tol) {
    double sum = 0.0;
    for (double v : q) {
        if (!std::isfinite(v)) throw std::invalid_argument("weights: non-finite entry");
        if (v < -tol) throw std::invalid_argument("weights: negative entry beyond tolerance");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("weights: sum must be 1");
    WeightVector w;
    double clamped_sum = 0.0;
    for (int i = 0; i < kNumTriples; ++i) {
        w.q_[i] = std::max(q[i], 0.0);
        clamped_sum += w.q_[i];
    }
    for (double& v : w.q_) v /= clamped_sum;
    return w;
}

WeightVector WeightVector::point_mass(const DetTriple& t) {
    std::array<double, kNumTriples> q{};
    q[t.index()] = 1.0;
    return from_array(q);
}

WeightVector WeightVector::uniform() {
    std::array<double, kNumTriples> q;
    q.fill(1.0 / kNumTriples);
    return from_array(q);
}

Correlation synthesize(const WeightVector& w) {
    const Scenario sc;
    std::vector<double> p(sc.tensor_size(), 0.0);
    for (int i = 0; i < kNumTriples; ++i) {
        const double q = w[i];
        if (q == 0.0) continue;
        const DetTriple t = DetTriple::from_index(i);
        const int b = t.bob_output();
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                p[tensor_index(sc, x, z, t.alice_output(x), b, t.charles_output(z))] += q;
            }
    }
    return Correlation::from_tensor(sc, std::move(p));
}

WeightMarginals marginals(const WeightVector& w) {
    WeightMarginals m;
    for (int i = 0; i < kNumTriples; ++i) {
        const DetTriple t = DetTriple::from_index(i);
        const int ia = 2 * t.alpha0 + t.alpha1;
        const int ig = 2 * t.gamma0 + t.gamma1;
        m.q_alpha[ia] += w[i];
        m.q_gamma[ig] += w[i];
        m.q_alphagamma[ia * 4 + ig] += w[i];
    }
    return m;
}

bool is_bilocal_weights(const WeightVector& w, double tol) {
    const WeightMarginals m = marginals(w);
    for (int ia = 0; ia < 4; ++ia)
        for (int ig = 0; ig < 4; ++ig) {
            if (std::abs(m.q_alphagamma[ia * 4 + ig] - m.q_alpha[ia] * m.q_gamma[ig]) > tol) {
                return false;
            }
        }
    return true;
}

namespace {

int widx(int a0, int a1, int b0, int b1, int g0, int g1) {
    return a0 * 32 + a1 * 16 + b0 * 8 + b1 * 4 + g0 * 2 + g1;
}

}  // namespace

WeightVector depolarize(const WeightVector& w) {
    const auto& q = w.weights();
    // First stage: average over simultaneous output flips
    //   (a, b0), (c, b0), and (a, c).
    std::array<double, kNumTriples> q1;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1)
                    for (int g0 = 0; g0 < 2; ++g0)
                        for (int g1 = 0; g1 < 2; ++g1) {
                            q1[widx(a0, a1, b0, b1, g0, g1)] =
                                (q[widx(a0, a1, b0, b1, g0, g1)] +
                                 q[widx(a0, a1, 1 - b0, b1, 1 - g0, 1 - g1)] +
                                 q[widx(1 - a0, 1 - a1, 1 - b0, b1, g0, g1)] +
                                 q[widx(1 - a0, 1 - a1, b0, b1, 1 - g0, 1 - g1)]) /
                                4.0;
                        }
    // Second stage: average over simultaneous input swaps
    //   (x, b1), (z, b1), and (x, z).
    std::array<double, kNumTriples> q2;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1)
                    for (int g0 = 0; g0 < 2; ++g0)
                        for (int g1 = 0; g1 < 2; ++g1) {
                            q2[widx(a0, a1, b0, b1, g0, g1)] =
                                (q1[widx(a0, a1, b0, b1, g0, g1)] +
                                 q1[widx(a0, a1, b0, 1 - b1, g1, g0)] +
                                 q1[widx(a1, a0, b0, 1 - b1, g0, g1)] +
                                 q1[widx(a1, a0, b0, b1, g1, g0)]) /
                                4.0;
                        }
    return WeightVector::from_array(q2);
}

const std::array<RelabelOp, 16>& depolarization_group() {
    static const std::array<RelabelOp, 16> group = [] {
        const std::array<RelabelOp, 4> gens{
            RelabelOp{.flip_a = true, .flip_b0 = true},
            RelabelOp{.flip_c = true, .flip_b0 = true},
            RelabelOp{.flip_b1 = true, .swap_x = true},
            RelabelOp{.flip_b1 = true, .swap_z = true},
        };
        std::array<RelabelOp, 16> g{};
        for (int mask = 0; mask < 16; ++mask) {
            RelabelOp op;
            for (int i = 0; i < 4; ++i) {
                if (mask & (1 << i)) op = op.then(gens[i]);
            }
            g[mask] = op;
        }
        return g;
    }();
    return group;
}

ExtractedParams extract_symmetric_params(const WeightVector& w) {
    const auto& q = w.weights();
    const auto& qd = depolarize(w).weights();
    for (int i = 0; i < kNumTriples; ++i) {
        if (std::abs(q[i] - qd[i]) > 1e-10) {
            throw std::invalid_argument("extract_symmetric_params: weights are not depolarized");
        }
    }

    ExtractedParams out;
    double r = 0.0, s = 0.0;
    for (int i = 0; i < kNumTriples; ++i) {
        const DetTriple t = DetTriple::from_index(i);
        if (t.alpha0 == t.alpha1) r += q[i];
        if (t.gamma0 == t.gamma1) s += q[i];
    }
    out.params.r = r;
    out.params.s = s;

    double t_den = 0.0, t_num = 0.0;
    for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
            const double v = q[widx(0, 0, b0, b1, 0, 0)];
            t_den += v;
            if (b0 == 0) t_num += v;
        }
    if (t_den < kConstructionTol) {
        out.params.t = 0.5;
        out.t_degenerate = true;
    } else {
        out.params.t = t_num / t_den;
    }

    double u_den = 0.0, u_num = 0.0;
    for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
            const double v = q[widx(0, 1, b0, b1, 0, 1)];
            u_den += v;
            if (b0 == b1) u_num += v;
        }
    if (u_den < kConstructionTol) {
        out.params.u = 0.5;
        out.u_degenerate = true;
    } else {
        out.params.u = u_num / u_den;
    }
    return out;
}

WeightVector build_symmetric_weights(const SymmetricParams& p) {
    for (double v : {p.r, p.s, p.t, p.u}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("build_symmetric_weights: parameter outside [0,1]");
        }
    }
    std::array<double, kNumTriples> q;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1) {
            const double qa = (a0 == a1 ? p.r : 1.0 - p.r) / 2.0;
            for (int g0 = 0; g0 < 2; ++g0)
                for (int g1 = 0; g1 < 2; ++g1) {
                    const double qg = (g0 == g1 ? p.s : 1.0 - p.s) / 2.0;
                    for (int b0 = 0; b0 < 2; ++b0)
                        for (int b1 = 0; b1 < 2; ++b1) {
                            double qb;
                            if (a0 == a1 && g0 == g1) {
                                qb = ((a0 ^ g0) == b0 ? p.t : 1.0 - p.t) / 2.0;
                            } else if (a0 != a1 && g0 != g1) {
                                qb = ((a0 ^ g0) == (b0 ^ b1) ? p.u : 1.0 - p.u) / 2.0;
                            } else {
                                qb = 0.25;
                            }
                            q[widx(a0, a1, b0, b1, g0, g1)] = qa * qg * qb;
                        }
                }
        }
    return WeightVector::from_array(q);
}

WeightVector pc_weights() {
    // (1/8) sum over (alpha, beta0, beta1) of
    //   P_{alpha alpha} P_{beta0 beta1} P_{(alpha^beta0)(alpha^beta0)}.
    std::array<double, kNumTriples> q{};
    for (int al = 0; al < 2; ++al)
        for (int b0 = 0; b0 < 2; ++b0)
            for (int b1 = 0; b1 < 2; ++b1) {
                q[widx(al, al, b0, b1, al ^ b0, al ^ b0)] += 1.0 / 8.0;
            }
    return WeightVector::from_array(q);
}

WeightVector pcbar_weights() {
    // The twisted variant: Alice plays (alpha^beta1)(alpha^beta1^1), Charles
    // plays (alpha^beta0)(alpha^beta0^1).
    std::array<double, kNumTriples> q{};
    for (int al = 0; al < 2; ++al)
        for (int b0 = 0; b0 < 2; ++b0)
            for (int b1 = 0; b1 < 2; ++b1) {
                const int a0 = al ^ b1;
                const int g0 = al ^ b0;
                q[widx(a0, a0 ^ 1, b0, b1, g0, g0 ^ 1)] += 1.0 / 8.0;
            }
    return WeightVector::from_array(q);
}

namespace {

// Uniform draw from the probability simplex (Dirichlet(1,...,1)).
std::array<double, 4> random_simplex4(std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::array<double, 4> v;
    double sum = 0.0;
    for (double& x : v) {
        x = expo(rng);
        sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
}

}  // namespace

WeightVector random_product_weights(std::mt19937_64& rng) {
    const std::array<double, 4> qa = random_simplex4(rng);
    const std::array<double, 4> qg = random_simplex4(rng);
    std::array<double, kNumTriples> q{};
    for (int ia = 0; ia < 4; ++ia)
        for (int ig = 0; ig < 4; ++ig) {
            const std::array<double, 4> qb = random_simplex4(rng);
            for (int ib = 0; ib < 4; ++ib) {
                q[widx(ia >> 1, ia & 1, ib >> 1, ib & 1, ig >> 1, ig & 1)] =
                    qa[ia] * qg[ig] * qb[ib];
            }
        }
    return WeightVector::from_array(q);
}

std::string to_json(const WeightVector& w) {
    std::string out;
    detail::append_flat_array(out, w.weights());
    return out;
}

WeightVector weights_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("weights JSON parse error: ") + e.what());
    }
    if (!j.is_array() || j.size() != kNumTriples) {
        throw std::invalid_argument("weights JSON: expected a flat 64-array");
    }
    std::array<double, kNumTriples> q;
    for (int i = 0; i < kNumTriples; ++i) {
        if (!j[i].is_number()) throw std::invalid_argument("weights JSON: non-numeric entry");
        q[i] = j[i].get<double>();
    }
    return WeightVector::from_array(q);
}

}  // namespace bilocal
