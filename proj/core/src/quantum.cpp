#include "bilocal/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bilocal {

CMat CMat::identity(int n) {
    CMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::operator+(const CMat& o) const {
    CMat r(n_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

CMat CMat::operator-(const CMat& o) const {
    CMat r(n_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

CMat CMat::operator*(const CMat& o) const {
    CMat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            const cdouble aik = (*this)(i, k);
            if (aik == cdouble{}) continue;
            for (int j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

CMat CMat::operator*(cdouble s) const {
    CMat r(n_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

CMat CMat::adjoint() const {
    CMat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

cdouble CMat::trace() const {
    cdouble t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

bool CMat::is_hermitian(double tol) const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j <= i; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        }
    return true;
}

std::vector<double> CMat::hermitian_eigenvalues() const {
    // Real-symmetric embedding: eigenvalues of [[Re,-Im],[Im,Re]] are those
    // of the Hermitian matrix, each doubled.
    const int m = 2 * n_;
    std::vector<double> s(static_cast<size_t>(m) * m, 0.0);
    auto at = [&](int i, int j) -> double& { return s[static_cast<size_t>(i) * m + j]; };
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const cdouble v = (*this)(i, j);
            at(i, j) = v.real();
            at(i + n_, j + n_) = v.real();
            at(i, j + n_) = -v.imag();
            at(i + n_, j) = v.imag();
        }

    // Cyclic Jacobi sweeps.
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-18) continue;
                const double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < m; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - sn * akq;
                    at(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - sn * aqk;
                    at(q, k) = sn * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(m);
    for (int i = 0; i < m; ++i) eig[i] = at(i, i);
    std::sort(eig.begin(), eig.end());
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = 0.5 * (eig[2 * i] + eig[2 * i + 1]);  // duplicate pairs
    return out;
}

CMat kron(const CMat& a, const CMat& b) {
    const int na = a.dim(), nb = b.dim();
    CMat r(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cdouble aij = a(i, j);
            if (aij == cdouble{}) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return r;
}

Observable Observable::from_bloch(const std::array<double, 3>& n) {
    const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(norm - 1.0) > kConstructionTol) {
        throw std::invalid_argument("observable: Bloch vector must be unit length");
    }
    return Observable{n};
}

CMat Observable::matrix() const {
    CMat m(2);
    m(0, 0) = bloch[2];
    m(1, 1) = -bloch[2];
    m(0, 1) = cdouble(bloch[0], -bloch[1]);
    m(1, 0) = cdouble(bloch[0], bloch[1]);
    return m;
}

CMat Observable::projector(int outcome) const {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return (CMat::identity(2) + matrix() * cdouble(sign)) * cdouble(0.5);
}

TwoQubitState TwoQubitState::from_matrix(const CMat& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("state: 4x4 matrix required");
    if (!rho.is_hermitian(kConstructionTol)) {
        throw std::invalid_argument("state: matrix is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > kConstructionTol) {
        throw std::invalid_argument("state: trace must be 1");
    }
    const auto eig = rho.hermitian_eigenvalues();
    if (eig.front() < -1e-10) {
        throw std::invalid_argument("state: matrix is not positive semidefinite");
    }
    return TwoQubitState(rho);
}

TwoQubitState TwoQubitState::pure(const std::array<cdouble, 4>& psi) {
    double norm2 = 0.0;
    for (const cdouble& v : psi) norm2 += std::norm(v);
    if (std::abs(norm2 - 1.0) > kConstructionTol) {
        throw std::invalid_argument("state: vector must be normalized");
    }
    CMat rho(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    return TwoQubitState(rho);
}

double TwoQubitState::purity() const { return (rho_ * rho_).trace().real(); }

TwoQubitState singlet() {
    const double r = 1.0 / std::numbers::sqrt2;
    return TwoQubitState::pure({0.0, r, -r, 0.0});
}

TwoQubitState separable_mix() {
    const double r = 1.0 / std::numbers::sqrt2;
    // |+z,+z> and |+x,-z> in the basis |00>,|01>,|10>,|11>.
    const std::array<cdouble, 4> v1{1.0, 0.0, 0.0, 0.0};
    const std::array<cdouble, 4> v2{0.0, r, 0.0, r};
    CMat rho(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            rho(i, j) = 0.5 * (v1[i] * std::conj(v1[j]) + v2[i] * std::conj(v2[j]));
        }
    return TwoQubitState::from_matrix(rho);
}

TwoQubitState maximally_mixed() {
    return TwoQubitState::from_matrix(CMat::identity(4) * cdouble(0.25));
}

CMat partial_transpose_second(const CMat& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("partial transpose: 4x4 matrix required");
    CMat out(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp) {
                    out(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
                }
    return out;
}

BellBasis::BellBasis() {
    const double r = 1.0 / std::numbers::sqrt2;
    const std::array<std::array<cdouble, 4>, 4> kets{{
        {r, 0.0, 0.0, r},   // Phi+
        {0.0, r, r, 0.0},   // Psi+
        {0.0, r, -r, 0.0},  // Psi-
        {r, 0.0, 0.0, -r},  // Phi-
    }};
    for (int b = 0; b < 4; ++b) {
        CMat proj(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) proj(i, j) = kets[b][i] * std::conj(kets[b][j]);
        projectors_[b] = proj;
    }
}

const BellBasis& BellBasis::standard() {
    static const BellBasis basis;
    return basis;
}

Correlation born_correlations(const TwoQubitState& s1, const TwoQubitState& s2,
                              const std::array<Observable, 2>& alice,
                              const std::array<Observable, 2>& charles) {
    const Scenario sc;
    const CMat rho = kron(s1.matrix(), s2.matrix());  // factor order (A, B1, B2, C)
    const BellBasis& bell = BellBasis::standard();

    std::vector<double> p(sc.tensor_size());
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            const CMat pa = alice[x].projector(a);
            for (int b = 0; b < 4; ++b) {
                const CMat pab = kron(pa, bell.projector(b));
                for (int z = 0; z < 2; ++z)
                    for (int c = 0; c < 2; ++c) {
                        const CMat m = kron(pab, charles[z].projector(c));
                        p[tensor_index(sc, x, z, a, b, c)] = (m * rho).trace().real();
                    }
            }
        }

    Correlation result = Correlation::from_tensor(sc, std::move(p));
    if (!check_nosignaling(result, kConstructionTol)) {
        throw std::logic_error("born_correlations: output failed the no-signaling check");
    }
    return result;
}

std::array<Observable, 2> optimal_settings() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {Observable::from_bloch({r, 0.0, r}), Observable::from_bloch({r, 0.0, -r})};
}

std::array<Observable, 2> chsh_alice_settings() {
    return {Observable::from_bloch({1.0, 0.0, 0.0}), Observable::from_bloch({0.0, 0.0, 1.0})};
}

std::array<Observable, 2> chsh_charles_settings() { return optimal_settings(); }

std::array<Observable, 2> z_settings() {
    return {Observable::from_bloch({0.0, 0.0, 1.0}), Observable::from_bloch({0.0, 0.0, 1.0})};
}

}  // namespace bilocal
