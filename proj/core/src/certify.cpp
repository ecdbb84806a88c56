#include "bilocal/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "bilocal/lp.hpp"
#include "bilocal/quantum.hpp"
#include "json_format.hpp"

namespace bilocal {

namespace {

constexpr double kDecompositionTol = 1e-7;  // L1 distance proving a decomposition
constexpr double kVerdictSlack = 1e-9;

void require_default(const Correlation& p, const char* where) {
    if (!p.scenario().is_default()) {
        throw std::invalid_argument(std::string(where) + ": default scenario required");
    }
}

}  // namespace

IEValues compute_IE(const Correlation& p) {
    require_default(p, "compute_IE");
    if (!check_nosignaling(p)) {
        throw std::invalid_argument("compute_IE: signaling input, P(b) is ill-defined");
    }

    // F_b(xz) = P(b) E_b(xz) is linear in the tensor, so everything is
    // evaluated through it and stays finite for P(b) = 0.
    double f[4][2][2];
    double pb[4] = {0, 0, 0, 0};
    for (int b = 0; b < 4; ++b) {
        const int b0 = b >> 1;
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                double sum = 0.0, total = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) {
                        const double v = p.at(x, z, a, b, c);
                        sum += ((a ^ c) == b0 ? v : -v);
                        total += v;
                    }
                f[b][x][z] = sum;
                pb[b] += 0.25 * total;
            }
    }

    IEValues out;
    for (int b = 0; b < 4; ++b) {
        const int b1 = b & 1;
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                if ((x ^ z) == b1) {
                    out.I += f[b][x][z];
                } else {
                    out.E = std::max(out.E, 4.0 * std::abs(f[b][x][z]));
                }
                out.e_table[b][x][z] = pb[b] > kConstructionTol ? f[b][x][z] / pb[b] : 0.0;
            }
    }
    return out;
}

InequalityCheck check_biloc_inequality(const Correlation& p) {
    const IEValues ie = compute_IE(p);
    InequalityCheck out;
    out.slack = 1.0 + ie.E * ie.E - ie.I;
    out.satisfied = out.slack >= -kVerdictSlack;
    return out;
}

namespace {

// M[entry][triple]: the 0/1 synthesis matrix of the 64 deterministic
// strategies, shared by the membership LP and the decomposition search.
const std::vector<std::array<double, kNumTriples>>& strategy_matrix() {
    static const auto matrix = [] {
        const Scenario sc;
        std::vector<std::array<double, kNumTriples>> m(sc.tensor_size());
        for (int i = 0; i < kNumTriples; ++i) {
            const DetTriple t = DetTriple::from_index(i);
            for (int x = 0; x < 2; ++x)
                for (int z = 0; z < 2; ++z) {
                    m[tensor_index(sc, x, z, t.alice_output(x), t.bob_output(),
                                   t.charles_output(z))][i] = 1.0;
                }
        }
        return m;
    }();
    return matrix;
}

}  // namespace

LocalResult is_local(const Correlation& p) {
    require_default(p, "is_local");
    const auto& m = strategy_matrix();
    const int entries = static_cast<int>(p.tensor().size());

    LinearProgram lp;
    lp.num_vars = kNumTriples;
    lp.objective.assign(kNumTriples, 0.0);
    lp.matrix.reserve(static_cast<size_t>(entries + 1) * kNumTriples);
    lp.rhs.reserve(entries + 1);
    for (int e = 0; e < entries; ++e) {
        lp.matrix.insert(lp.matrix.end(), m[e].begin(), m[e].end());
        lp.rhs.push_back(p.tensor()[e]);
    }
    lp.matrix.insert(lp.matrix.end(), kNumTriples, 1.0);
    lp.rhs.push_back(1.0);

    LocalResult out;
    try {
        const LpResult res = solve(lp);
        if (res.status == LpStatus::Optimal) {
            std::array<double, kNumTriples> q{};
            std::copy(res.x.begin(), res.x.end(), q.begin());
            out.verdict = LocalVerdict::Local;
            out.certificate = WeightVector::from_array(q, 1e-8);
        } else {
            out.verdict = LocalVerdict::NotLocal;
        }
    } catch (const std::exception& e) {
        out.verdict = LocalVerdict::Unknown;
        out.diagnostics = e.what();
    }
    return out;
}

namespace {

// ----- alternating decomposition search -------------------------------------

// The bilocal product parametrization q_alpha q_gamma q_{beta|alpha gamma}.
struct ProductState {
    std::array<double, 4> qa{};
    std::array<double, 4> qc{};
    std::array<std::array<double, 4>, 16> qb{};  // [alpha*4+gamma][beta]

    static ProductState uniform() {
        ProductState s;
        s.qa.fill(0.25);
        s.qc.fill(0.25);
        for (auto& block : s.qb) block.fill(0.25);
        return s;
    }
};

std::array<double, 64> synth_product(const ProductState& s) {
    const Scenario sc;
    std::array<double, 64> p{};
    for (int ia = 0; ia < 4; ++ia) {
        if (s.qa[ia] == 0.0) continue;
        const int a0 = ia >> 1, a1 = ia & 1;
        for (int ig = 0; ig < 4; ++ig) {
            const double w2 = s.qa[ia] * s.qc[ig];
            if (w2 == 0.0) continue;
            const int g0 = ig >> 1, g1 = ig & 1;
            for (int ib = 0; ib < 4; ++ib) {
                const double w = w2 * s.qb[ia * 4 + ig][ib];
                if (w == 0.0) continue;
                for (int x = 0; x < 2; ++x)
                    for (int z = 0; z < 2; ++z) {
                        p[tensor_index(sc, x, z, x == 0 ? a0 : a1, ib, z == 0 ? g0 : g1)] += w;
                    }
            }
        }
    }
    return p;
}

double l1_distance(const std::array<double, 64>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (int i = 0; i < 64; ++i) d += std::abs(a[i] - b[i]);
    return d;
}

void renormalize(std::span<double> block) {
    double sum = 0.0;
    for (double& v : block) {
        v = std::max(v, 0.0);
        sum += v;
    }
    if (sum <= 0.0) {
        for (double& v : block) v = 1.0 / block.size();
    } else {
        for (double& v : block) v /= sum;
    }
}

// Minimize the L1 synthesis error over one block with the others fixed:
// an LP in the block variables plus per-entry split slacks u, v.
//   coeff(e, k) qblock_k - u_e + v_e = target_e,   block rows sum to 1.
bool solve_block(const std::vector<double>& target,
                 const std::vector<std::array<double, 64>>& coeff_rows, int block_vars,
                 std::span<const std::pair<int, int>> norm_groups, std::span<double> out) {
    const int entries = 64;
    LinearProgram lp;
    lp.num_vars = block_vars + 2 * entries;
    lp.objective.assign(lp.num_vars, 0.0);
    for (int j = block_vars; j < lp.num_vars; ++j) lp.objective[j] = -1.0;

    const int num_rows = entries + static_cast<int>(norm_groups.size());
    lp.matrix.assign(static_cast<size_t>(num_rows) * lp.num_vars, 0.0);
    lp.rhs.assign(num_rows, 0.0);
    for (int e = 0; e < entries; ++e) {
        double* row = lp.matrix.data() + static_cast<size_t>(e) * lp.num_vars;
        for (int k = 0; k < block_vars; ++k) row[k] = coeff_rows[e][k];
        row[block_vars + e] = -1.0;
        row[block_vars + entries + e] = 1.0;
        lp.rhs[e] = target[e];
    }
    for (size_t g = 0; g < norm_groups.size(); ++g) {
        double* row = lp.matrix.data() + static_cast<size_t>(entries + g) * lp.num_vars;
        for (int k = norm_groups[g].first; k < norm_groups[g].second; ++k) row[k] = 1.0;
        lp.rhs[entries + g] = 1.0;
    }

    try {
        const LpResult res = solve(lp);
        if (res.status != LpStatus::Optimal) return false;
        for (int k = 0; k < block_vars; ++k) out[k] = res.x[k];
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

bool update_alpha(ProductState& s, const std::vector<double>& target) {
    const Scenario sc;
    std::vector<std::array<double, 64>> coeff(64);
    for (int ia = 0; ia < 4; ++ia) {
        const int a0 = ia >> 1, a1 = ia & 1;
        for (int ig = 0; ig < 4; ++ig) {
            const int g0 = ig >> 1, g1 = ig & 1;
            for (int ib = 0; ib < 4; ++ib) {
                const double w = s.qc[ig] * s.qb[ia * 4 + ig][ib];
                if (w == 0.0) continue;
                for (int x = 0; x < 2; ++x)
                    for (int z = 0; z < 2; ++z) {
                        coeff[tensor_index(sc, x, z, x == 0 ? a0 : a1, ib,
                                           z == 0 ? g0 : g1)][ia] += w;
                    }
            }
        }
    }
    const std::pair<int, int> groups[] = {{0, 4}};
    if (!solve_block(target, coeff, 4, groups, s.qa)) return false;
    renormalize(s.qa);
    return true;
}

bool update_gamma(ProductState& s, const std::vector<double>& target) {
    const Scenario sc;
    std::vector<std::array<double, 64>> coeff(64);
    for (int ia = 0; ia < 4; ++ia) {
        const int a0 = ia >> 1, a1 = ia & 1;
        for (int ig = 0; ig < 4; ++ig) {
            const int g0 = ig >> 1, g1 = ig & 1;
            for (int ib = 0; ib < 4; ++ib) {
                const double w = s.qa[ia] * s.qb[ia * 4 + ig][ib];
                if (w == 0.0) continue;
                for (int x = 0; x < 2; ++x)
                    for (int z = 0; z < 2; ++z) {
                        coeff[tensor_index(sc, x, z, x == 0 ? a0 : a1, ib,
                                           z == 0 ? g0 : g1)][ig] += w;
                    }
            }
        }
    }
    const std::pair<int, int> groups[] = {{0, 4}};
    if (!solve_block(target, coeff, 4, groups, s.qc)) return false;
    renormalize(s.qc);
    return true;
}

bool update_beta(ProductState& s, const std::vector<double>& target) {
    const Scenario sc;
    std::vector<std::array<double, 64>> coeff(64);
    for (int ia = 0; ia < 4; ++ia) {
        const int a0 = ia >> 1, a1 = ia & 1;
        for (int ig = 0; ig < 4; ++ig) {
            const double w = s.qa[ia] * s.qc[ig];
            const int g0 = ig >> 1, g1 = ig & 1;
            for (int ib = 0; ib < 4; ++ib) {
                for (int x = 0; x < 2; ++x)
                    for (int z = 0; z < 2; ++z) {
                        coeff[tensor_index(sc, x, z, x == 0 ? a0 : a1, ib, z == 0 ? g0 : g1)]
                             [(ia * 4 + ig) * 4 + ib] += w;
                    }
            }
        }
    }
    std::array<std::pair<int, int>, 16> groups;
    for (int g = 0; g < 16; ++g) groups[g] = {4 * g, 4 * g + 4};
    std::array<double, 64> flat;
    for (int g = 0; g < 16; ++g)
        for (int ib = 0; ib < 4; ++ib) flat[4 * g + ib] = s.qb[g][ib];
    if (!solve_block(target, coeff, 64, groups, flat)) return false;
    for (int g = 0; g < 16; ++g) {
        for (int ib = 0; ib < 4; ++ib) s.qb[g][ib] = flat[4 * g + ib];
        renormalize(s.qb[g]);
    }
    return true;
}

ProductState state_from_params(SymmetricParams p) {
    p.r = std::clamp(p.r, 0.0, 1.0);
    p.s = std::clamp(p.s, 0.0, 1.0);
    p.t = std::clamp(p.t, 0.0, 1.0);
    p.u = std::clamp(p.u, 0.0, 1.0);
    ProductState s;
    for (int ia = 0; ia < 4; ++ia) {
        s.qa[ia] = ((ia >> 1) == (ia & 1) ? p.r : 1.0 - p.r) / 2.0;
    }
    for (int ig = 0; ig < 4; ++ig) {
        s.qc[ig] = ((ig >> 1) == (ig & 1) ? p.s : 1.0 - p.s) / 2.0;
    }
    for (int ia = 0; ia < 4; ++ia)
        for (int ig = 0; ig < 4; ++ig) {
            const int a0 = ia >> 1, a1 = ia & 1, g0 = ig >> 1, g1 = ig & 1;
            for (int ib = 0; ib < 4; ++ib) {
                const int b0 = ib >> 1, b1 = ib & 1;
                double qb;
                if (a0 == a1 && g0 == g1) {
                    qb = ((a0 ^ g0) == b0 ? p.t : 1.0 - p.t) / 2.0;
                } else if (a0 != a1 && g0 != g1) {
                    qb = ((a0 ^ g0) == (b0 ^ b1) ? p.u : 1.0 - p.u) / 2.0;
                } else {
                    qb = 0.25;
                }
                s.qb[ia * 4 + ig][ib] = qb;
            }
        }
    return s;
}

// Closed-form candidates: if the target happens to lie in the depolarized
// slice, its (I, E) pin down X and Y up to a sign, and any r with
// sqrt|X| <= r <= 1 - sqrt|Y| realizes the point with r = s.
void append_symmetric_seeds(const Correlation& target, std::vector<ProductState>& seeds) {
    IEValues ie;
    try {
        ie = compute_IE(target);
    } catch (const std::exception&) {
        return;
    }
    const double half_i = 0.5 * ie.I;
    for (const double sign : {1.0, -1.0}) {
        const double x = 0.5 * (half_i + sign * ie.E);
        const double y = 0.5 * (half_i - sign * ie.E);
        const double sx = std::sqrt(std::abs(x)), sy = std::sqrt(std::abs(y));
        if (sx + sy > 1.0 + kVerdictSlack) continue;
        std::vector<double> r_choices{0.5 * (sx + 1.0 - sy)};
        if (std::abs(x) <= 0.25 && std::abs(y) <= 0.25) r_choices.push_back(0.5);
        for (const double r : r_choices) {
            SymmetricParams p;
            p.r = r;
            p.s = r;
            p.t = r > kConstructionTol ? 0.5 * (1.0 + x / (r * r)) : 0.5;
            p.u = r < 1.0 - kConstructionTol ? 0.5 * (1.0 + y / ((1.0 - r) * (1.0 - r))) : 0.5;
            seeds.push_back(state_from_params(p));
        }
    }
}

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

BilocalSearchResult find_bilocal_decomposition(const Correlation& p, const SearchOptions& opts) {
    require_default(p, "find_bilocal_decomposition");
    const std::vector<double>& target = p.tensor();

    std::vector<ProductState> seeds;
    append_symmetric_seeds(p, seeds);
    seeds.push_back(ProductState::uniform());
    for (int ia = 0; ia < 4; ++ia)
        for (int ig = 0; ig < 4; ++ig) {
            ProductState s = ProductState::uniform();
            s.qa.fill(0.0);
            s.qa[ia] = 1.0;
            s.qc.fill(0.0);
            s.qc[ig] = 1.0;
            seeds.push_back(s);
        }
    std::mt19937_64 rng(opts.seed);
    for (int k = 0; k < opts.random_restarts; ++k) {
        ProductState s;
        s.qa = random_simplex4(rng);
        s.qc = random_simplex4(rng);
        for (auto& block : s.qb) block = random_simplex4(rng);
        seeds.push_back(s);
    }

    BilocalSearchResult out;
    out.best_l1 = std::numeric_limits<double>::infinity();

    auto finish = [&](const ProductState& s, double l1) {
        std::array<double, kNumTriples> q{};
        for (int ia = 0; ia < 4; ++ia)
            for (int ig = 0; ig < 4; ++ig)
                for (int ib = 0; ib < 4; ++ib) {
                    const DetTriple t{static_cast<std::uint8_t>(ia >> 1),
                                      static_cast<std::uint8_t>(ia & 1),
                                      static_cast<std::uint8_t>(ib >> 1),
                                      static_cast<std::uint8_t>(ib & 1),
                                      static_cast<std::uint8_t>(ig >> 1),
                                      static_cast<std::uint8_t>(ig & 1)};
                    q[t.index()] = s.qa[ia] * s.qc[ig] * s.qb[ia * 4 + ig][ib];
                }
        out.verdict = BilocalVerdict::ProvenBilocal;
        out.certificate = WeightVector::from_array(q, 1e-8);
        out.best_l1 = l1;
    };

    for (const ProductState& seed : seeds) {
        ProductState s = seed;
        double l1 = l1_distance(synth_product(s), target);
        out.best_l1 = std::min(out.best_l1, l1);
        if (l1 < kDecompositionTol) {
            finish(s, l1);
            return out;
        }
        int stalled = 0;
        for (int iter = 0; iter < opts.max_iters; ++iter) {
            const bool ok = update_alpha(s, target) && update_gamma(s, target) &&
                            update_beta(s, target);
            if (!ok) break;
            const double next = l1_distance(synth_product(s), target);
            out.best_l1 = std::min(out.best_l1, next);
            if (next < kDecompositionTol) {
                finish(s, next);
                return out;
            }
            stalled = l1 - next < 1e-13 ? stalled + 1 : 0;
            l1 = next;
            if (stalled >= 2) break;
        }
    }
    out.verdict = BilocalVerdict::Unknown;
    return out;
}

double critical_visibility(const Correlation& target, VisibilityCriterion criterion,
                           double tol) {
    require_default(target, "critical_visibility");
    if (!(tol > 0.0)) throw std::invalid_argument("critical_visibility: tol must be positive");
    const Correlation noise = white_noise(target.scenario());

    auto flagged = [&](double v) {
        const Correlation m = mix(target, noise, v);
        if (criterion == VisibilityCriterion::Inequality) {
            return !check_biloc_inequality(m).satisfied;
        }
        const LocalResult lr = is_local(m);
        if (lr.verdict == LocalVerdict::Unknown) {
            throw std::runtime_error("critical_visibility: LP verdict unavailable: " +
                                     lr.diagnostics);
        }
        return lr.verdict == LocalVerdict::NotLocal;
    };

    if (flagged(0.0)) {
        throw std::invalid_argument("critical_visibility: criterion already fires at v=0");
    }
    if (!flagged(1.0)) {
        throw std::invalid_argument("critical_visibility: criterion constant along the family");
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 0.25 * tol) {
        const double mid = 0.5 * (lo + hi);
        (flagged(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

SliceTable export_slice(int grid_n, int threads) {
    if (grid_n < 2) throw std::invalid_argument("export_slice: grid_n must be >= 2");
    const Scenario sc;
    const std::vector<double> pc = synthesize(pc_weights()).tensor();
    const std::vector<double> pcbar = synthesize(pcbar_weights()).tensor();
    const std::vector<double> pr = white_noise(sc).tensor();

    SliceTable table;
    table.grid_n = grid_n;
    table.points.resize(static_cast<size_t>(grid_n) * grid_n);

    auto coordinate = [&](int k) { return -1.0 + 2.0 * k / (grid_n - 1); };

    auto evaluate = [&](size_t flat) {
        const int ix = static_cast<int>(flat) / grid_n;
        const int iy = static_cast<int>(flat) % grid_n;
        const double x = coordinate(ix), y = coordinate(iy);
        std::vector<double> tensor(pc.size());
        for (size_t e = 0; e < tensor.size(); ++e) {
            tensor[e] = x * pc[e] + y * pcbar[e] + (1.0 - x - y) * pr[e];
        }
        const Correlation corr = Correlation::from_tensor_unchecked(sc, std::move(tensor));
        const IEValues ie = compute_IE(corr);
        SlicePoint& pt = table.points[flat];
        pt.x = x;
        pt.y = y;
        pt.i = ie.I;
        pt.e = ie.E;
        pt.slack = 1.0 + ie.E * ie.E - ie.I;
        pt.local = is_local(corr).verdict == LocalVerdict::Local;
    };

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, 64));
    if (nthreads == 1) {
        for (size_t k = 0; k < table.points.size(); ++k) evaluate(k);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) {
            pool.emplace_back([&] {
                while (true) {
                    const size_t k = next.fetch_add(1);
                    if (k >= table.points.size()) return;
                    evaluate(k);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }

    // Upper parabola 2(X+Y) = 1 + (X-Y)^2, parametrized by d = X - Y, and its
    // three sign-flip images.
    auto arc = [&](const char* name, double sign_x, double sign_y) {
        Polyline line;
        line.name = name;
        line.points.reserve(grid_n);
        for (int k = 0; k < grid_n; ++k) {
            const double d = coordinate(k);
            const double sum = 0.5 * (1.0 + d * d);
            line.points.push_back({sign_x * 0.5 * (sum + d), sign_y * 0.5 * (sum - d)});
        }
        return line;
    };
    table.boundaries.push_back(arc("parabola_upper", 1.0, 1.0));
    table.boundaries.push_back(arc("parabola_right", 1.0, -1.0));
    table.boundaries.push_back(arc("parabola_lower", -1.0, -1.0));
    table.boundaries.push_back(arc("parabola_left", -1.0, 1.0));
    Polyline square;
    square.name = "local_square";
    square.points = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}};
    table.boundaries.push_back(square);
    return table;
}

void write_slice_csv(const SliceTable& table, std::ostream& out) {
    out << "X,Y,I,E,slack,local\n";
    for (const SlicePoint& pt : table.points) {
        out << detail::fmt17(pt.x) << ',' << detail::fmt17(pt.y) << ',' << detail::fmt17(pt.i)
            << ',' << detail::fmt17(pt.e) << ',' << detail::fmt17(pt.slack) << ','
            << (pt.local ? 1 : 0) << '\n';
    }
}

void write_boundaries_csv(const SliceTable& table, std::ostream& out) {
    out << "curve,X,Y\n";
    for (const Polyline& line : table.boundaries) {
        for (const auto& pt : line.points) {
            out << line.name << ',' << detail::fmt17(pt[0]) << ',' << detail::fmt17(pt[1])
                << '\n';
        }
    }
}

namespace {

// Per-outcome CHSH sign patterns: the swapped Bell state fixes which input
// and output relabeling of the standard CHSH expression reaches 2*sqrt2.
constexpr int kChshSigns[4][2][2] = {
    {{+1, +1}, {+1, -1}},  // b = 00, Phi+
    {{+1, +1}, {-1, +1}},  // b = 01, Psi+
    {{-1, -1}, {-1, +1}},  // b = 10, Psi-
    {{-1, -1}, {+1, -1}},  // b = 11, Phi-
};

}  // namespace

std::array<double, 4> chsh_per_b(const Correlation& p) {
    require_default(p, "chsh_per_b");
    std::array<double, 4> out{};
    for (int b = 0; b < 4; ++b) {
        const BobConditional cond = conditional_ac(p, b);
        double s = 0.0;
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                double corr = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) {
                        corr += ((a ^ c) ? -1.0 : 1.0) * cond.at(x, z, a, c);
                    }
                s += kChshSigns[b][x][z] * corr;
            }
        out[b] = s;
    }
    return out;
}

namespace {

// Effective bipartite reading of the swapping experiment: Charles's outcome c
// names Bob's effective basis, and the effective outcome bit of the Bell
// result is b0^b1 in the z basis (c = 0) and b0 in the x basis (c = 1).
constexpr int kEffectiveBit[2][4] = {
    {0, 1, 1, 0},  // c = 0
    {0, 0, 1, 1},  // c = 1
};
constexpr double kEffectiveSigns[2][2] = {{-1.0, -1.0}, {+1.0, -1.0}};  // [x][c]

}  // namespace

double effective_chsh(const Correlation& p) {
    require_default(p, "effective_chsh");
    double s = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int c = 0; c < 2; ++c) {
            double num = 0.0, den = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 4; ++b) {
                    const double v = p.at(x, 0, a, b, c);
                    num += ((a ^ kEffectiveBit[c][b]) ? -1.0 : 1.0) * v;
                    den += v;
                }
            if (den > kConstructionTol) s += kEffectiveSigns[x][c] * num / den;
        }
    return s;
}

SeparableDemoReport separable_demo() {
    Correlation corr =
        born_correlations(singlet(), separable_mix(), optimal_settings(), z_settings());
    const double s_eff = effective_chsh(corr);
    return SeparableDemoReport{s_eff, std::abs(s_eff) > 2.0 + kVerdictSlack, std::move(corr)};
}

CertReport certify(const Correlation& p, const SearchOptions& opts) {
    CertReport report{.ie = compute_IE(p)};
    report.inequality_lhs_minus_rhs = report.ie.I - 1.0 - report.ie.E * report.ie.E;
    report.inequality_satisfied = report.inequality_lhs_minus_rhs <= kVerdictSlack;
    report.local = is_local(p);

    if (!report.inequality_satisfied) {
        report.bilocal_verdict = BilocalVerdict::ProvenNonBilocal;
    } else {
        const BilocalSearchResult search = find_bilocal_decomposition(p, opts);
        report.bilocal_verdict = search.verdict;
        report.bilocal_certificate = search.certificate;
        report.bilocal_search_l1 = search.best_l1;
    }

    bool conditionals_defined = true;
    for (int b = 0; b < 4 && conditionals_defined; ++b) {
        if (conditional_ac(p, b).degenerate) conditionals_defined = false;
    }
    if (conditionals_defined) report.chsh = chsh_per_b(p);
    return report;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

const char* verdict_name(LocalVerdict v) {
    switch (v) {
        case LocalVerdict::Local: return "local";
        case LocalVerdict::NotLocal: return "not_local";
        default: return "unknown";
    }
}

const char* verdict_name(BilocalVerdict v) {
    switch (v) {
        case BilocalVerdict::ProvenBilocal: return "proven_bilocal";
        case BilocalVerdict::ProvenNonBilocal: return "proven_nonbilocal";
        default: return "unknown";
    }
}

}  // namespace

std::string to_json(const CertReport& r) {
    using detail::fmt17;
    std::string out = "{";
    out += "\"I\":" + fmt17(r.ie.I) + ",\"E\":" + fmt17(r.ie.E) + ",\"e_table\":[";
    for (int b = 0; b < 4; ++b) {
        if (b) out += ',';
        out += '[';
        for (int x = 0; x < 2; ++x) {
            if (x) out += ',';
            out += '[' + fmt17(r.ie.e_table[b][x][0]) + ',' + fmt17(r.ie.e_table[b][x][1]) + ']';
        }
        out += ']';
    }
    out += "],\"lhs_minus_rhs\":" + fmt17(r.inequality_lhs_minus_rhs);
    out += ",\"inequality_satisfied\":";
    out += r.inequality_satisfied ? "true" : "false";

    out += ",\"local\":{\"verdict\":\"";
    out += verdict_name(r.local.verdict);
    out += '"';
    if (r.local.certificate) {
        out += ",\"certificate\":";
        detail::append_flat_array(out, r.local.certificate->weights());
    }
    if (!r.local.diagnostics.empty()) {
        out += ",\"diagnostics\":\"" + json_escape(r.local.diagnostics) + '"';
    }
    out += '}';

    out += ",\"bilocal\":{\"verdict\":\"";
    out += verdict_name(r.bilocal_verdict);
    out += '"';
    if (r.bilocal_certificate) {
        out += ",\"certificate\":";
        detail::append_flat_array(out, r.bilocal_certificate->weights());
    }
    if (r.bilocal_verdict != BilocalVerdict::ProvenNonBilocal) {
        out += ",\"search_l1\":" + fmt17(r.bilocal_search_l1);
    }
    out += '}';

    if (r.chsh) {
        out += ",\"chsh_per_b\":[" + fmt17((*r.chsh)[0]) + ',' + fmt17((*r.chsh)[1]) + ',' +
               fmt17((*r.chsh)[2]) + ',' + fmt17((*r.chsh)[3]) + ']';
    }
    out += '}';
    return out;
}

std::string to_json(const SeparableDemoReport& r) {
    std::string out = "{\"s_eff\":" + detail::fmt17(r.s_eff) + ",\"non_bilocal\":";
    out += r.non_bilocal ? "true" : "false";
    out += '}';
    return out;
}

}  // namespace bilocal
