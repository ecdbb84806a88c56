#include "bilocal/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "json_format.hpp"

namespace bilocal {

void Scenario::validate() const {
    if (nx < 1 || nz < 1 || na < 1 || nc < 1 || nb < 1) {
        throw std::invalid_argument("scenario: all cardinalities must be >= 1");
    }
}

Correlation Correlation::from_tensor(const Scenario& sc, std::vector<double> p) {
    sc.validate();
    if (static_cast<int>(p.size()) != sc.tensor_size()) {
        throw std::invalid_argument("correlation: tensor size does not match scenario");
    }
    for (double v : p) {
        if (!std::isfinite(v)) throw std::invalid_argument("correlation: non-finite entry");
        if (v < -kConstructionTol) {
            throw std::invalid_argument("correlation: negative entry beyond tolerance");
        }
    }
    const int block = sc.na * sc.nb * sc.nc;
    for (int xz = 0; xz < sc.nx * sc.nz; ++xz) {
        double sum = 0.0;
        for (int k = 0; k < block; ++k) sum += p[xz * block + k];
        if (std::abs(sum - 1.0) > kConstructionTol) {
            throw std::invalid_argument("correlation: block not normalized");
        }
    }
    return Correlation(sc, std::move(p));
}

Correlation Correlation::from_tensor_unchecked(const Scenario& sc, std::vector<double> p) {
    sc.validate();
    if (static_cast<int>(p.size()) != sc.tensor_size()) {
        throw std::invalid_argument("correlation: tensor size does not match scenario");
    }
    return Correlation(sc, std::move(p));
}

Correlation white_noise(const Scenario& sc) {
    sc.validate();
    const double value = 1.0 / (sc.na * sc.nb * sc.nc);
    return Correlation::from_tensor(sc, std::vector<double>(sc.tensor_size(), value));
}

Correlation mix(const Correlation& p, const Correlation& q, double v) {
    if (p.scenario() != q.scenario()) {
        throw std::invalid_argument("mix: scenario mismatch");
    }
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("mix: visibility must lie in [0,1]");
    }
    std::vector<double> out(p.tensor().size());
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = v * p.tensor()[i] + (1.0 - v) * q.tensor()[i];
    }
    return Correlation::from_tensor(p.scenario(), std::move(out));
}

Correlation relabel(const Correlation& p, const RelabelOp& op) {
    const Scenario& sc = p.scenario();
    if (!sc.is_default()) {
        throw std::invalid_argument("relabel: default scenario required");
    }
    std::vector<double> out(p.tensor().size());
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 4; ++b)
                    for (int c = 0; c < 2; ++c) {
                        const int b0 = b >> 1, b1 = b & 1;
                        const int src_b = 2 * (b0 ^ op.flip_b0) + (b1 ^ op.flip_b1);
                        out[tensor_index(sc, x, z, a, b, c)] =
                            p.at(x ^ op.swap_x, z ^ op.swap_z, a ^ op.flip_a, src_b,
                                 c ^ op.flip_c);
                    }
    return Correlation::from_tensor_unchecked(sc, std::move(out));
}

BobConditional conditional_ac(const Correlation& p, int b) {
    const Scenario& sc = p.scenario();
    if (b < 0 || b >= sc.nb) throw std::invalid_argument("conditional_ac: bad outcome index");
    if (sc.na != 2 || sc.nc != 2 || sc.nx != 2 || sc.nz != 2) {
        throw std::invalid_argument("conditional_ac: default scenario required");
    }

    double block_prob[2][2];
    double lo = 1.0, hi = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
            double sum = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) sum += p.at(x, z, a, b, c);
            block_prob[x][z] = sum;
            lo = std::min(lo, sum);
            hi = std::max(hi, sum);
        }
    if (hi - lo > kStatisticalTol) {
        throw std::invalid_argument("conditional_ac: Bob marginal depends on (x,z)");
    }

    BobConditional result;
    result.prob = 0.25 * (block_prob[0][0] + block_prob[0][1] + block_prob[1][0] +
                          block_prob[1][1]);
    if (result.prob < kConstructionTol) {
        result.degenerate = true;
        result.table.fill(0.25);
        return result;
    }
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) {
                    result.table[((x * 2 + z) * 2 + a) * 2 + c] =
                        p.at(x, z, a, b, c) / block_prob[x][z];
                }
    return result;
}

namespace {

// Max spread of a marginal across the settings of remote parties.
template <typename Value>
double spread(const std::vector<Value>& values) {
    Value lo = values.front(), hi = values.front();
    for (const Value& v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

}  // namespace

bool check_nosignaling(const Correlation& p, double tol) {
    const Scenario& sc = p.scenario();
    auto sum_bc = [&](int x, int z, int a) {
        double s = 0.0;
        for (int b = 0; b < sc.nb; ++b)
            for (int c = 0; c < sc.nc; ++c) s += p.at(x, z, a, b, c);
        return s;
    };
    auto sum_ab = [&](int x, int z, int c) {
        double s = 0.0;
        for (int a = 0; a < sc.na; ++a)
            for (int b = 0; b < sc.nb; ++b) s += p.at(x, z, a, b, c);
        return s;
    };
    auto sum_ac = [&](int x, int z, int b) {
        double s = 0.0;
        for (int a = 0; a < sc.na; ++a)
            for (int c = 0; c < sc.nc; ++c) s += p.at(x, z, a, b, c);
        return s;
    };
    auto sum_c = [&](int x, int z, int a, int b) {
        double s = 0.0;
        for (int c = 0; c < sc.nc; ++c) s += p.at(x, z, a, b, c);
        return s;
    };
    auto sum_a = [&](int x, int z, int b, int c) {
        double s = 0.0;
        for (int a = 0; a < sc.na; ++a) s += p.at(x, z, a, b, c);
        return s;
    };

    // P(a,b|x) must not depend on z (this covers the P(a|x) marginal too).
    for (int x = 0; x < sc.nx; ++x)
        for (int a = 0; a < sc.na; ++a)
            for (int b = 0; b < sc.nb; ++b) {
                std::vector<double> vals;
                for (int z = 0; z < sc.nz; ++z) vals.push_back(sum_c(x, z, a, b));
                if (spread(vals) > tol) return false;
            }
    // P(b,c|z) must not depend on x.
    for (int z = 0; z < sc.nz; ++z)
        for (int b = 0; b < sc.nb; ++b)
            for (int c = 0; c < sc.nc; ++c) {
                std::vector<double> vals;
                for (int x = 0; x < sc.nx; ++x) vals.push_back(sum_a(x, z, b, c));
                if (spread(vals) > tol) return false;
            }
    // P(a|x) must not depend on z, P(c|z) not on x, P(b) on neither.
    for (int x = 0; x < sc.nx; ++x)
        for (int a = 0; a < sc.na; ++a) {
            std::vector<double> vals;
            for (int z = 0; z < sc.nz; ++z) vals.push_back(sum_bc(x, z, a));
            if (spread(vals) > tol) return false;
        }
    for (int z = 0; z < sc.nz; ++z)
        for (int c = 0; c < sc.nc; ++c) {
            std::vector<double> vals;
            for (int x = 0; x < sc.nx; ++x) vals.push_back(sum_ab(x, z, c));
            if (spread(vals) > tol) return false;
        }
    for (int b = 0; b < sc.nb; ++b) {
        std::vector<double> vals;
        for (int x = 0; x < sc.nx; ++x)
            for (int z = 0; z < sc.nz; ++z) vals.push_back(sum_ac(x, z, b));
        if (spread(vals) > tol) return false;
    }
    return true;
}

std::string to_json(const Correlation& p) {
    const Scenario& sc = p.scenario();
    std::string out = "{\"scenario\":{\"nx\":" + std::to_string(sc.nx) +
                      ",\"nz\":" + std::to_string(sc.nz) + ",\"na\":" + std::to_string(sc.na) +
                      ",\"nc\":" + std::to_string(sc.nc) + ",\"nb\":" + std::to_string(sc.nb) +
                      "},\"p\":";
    detail::append_flat_array(out, p.tensor());
    out += '}';
    return out;
}

Correlation correlation_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("correlation JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("scenario") || !j.contains("p")) {
        throw std::invalid_argument("correlation JSON: expected {\"scenario\":...,\"p\":[...]}");
    }
    const auto& js = j["scenario"];
    Scenario sc;
    try {
        sc.nx = js.at("nx").get<int>();
        sc.nz = js.at("nz").get<int>();
        sc.na = js.at("na").get<int>();
        sc.nc = js.at("nc").get<int>();
        sc.nb = js.at("nb").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("correlation JSON scenario: ") + e.what());
    }
    if (!j["p"].is_array()) throw std::invalid_argument("correlation JSON: p must be an array");
    std::vector<double> p;
    p.reserve(j["p"].size());
    for (const auto& v : j["p"]) {
        if (!v.is_number()) throw std::invalid_argument("correlation JSON: non-numeric entry");
        p.push_back(v.get<double>());
    }
    return Correlation::from_tensor(sc, std::move(p));
}

}  // namespace bilocal
