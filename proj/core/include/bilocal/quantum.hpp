#ifndef BILOCAL_QUANTUM_HPP
#define BILOCAL_QUANTUM_HPP

#include <array>
#include <complex>
#include <vector>

#include "bilocal/scenario.hpp"

namespace bilocal {

using cdouble = std::complex<double>;

/// Dense square complex matrix, row-major. Dimensions here never exceed 16,
/// so everything is kept simple and allocation-friendly.
class CMat {
  public:
    CMat() = default;
    explicit CMat(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

    static CMat identity(int n);

    int dim() const { return n_; }
    cdouble& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const cdouble& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    CMat operator+(const CMat& o) const;
    CMat operator-(const CMat& o) const;
    CMat operator*(const CMat& o) const;
    CMat operator*(cdouble s) const;

    CMat adjoint() const;
    cdouble trace() const;
    bool is_hermitian(double tol) const;

    /// Eigenvalues of a Hermitian matrix, ascending. Computed by cyclic
    /// Jacobi on the real-symmetric 2n x 2n embedding [[Re,-Im],[Im,Re]].
    std::vector<double> hermitian_eigenvalues() const;

  private:
    int n_ = 0;
    std::vector<cdouble> a_;
};

CMat kron(const CMat& a, const CMat& b);

/// Projective +-1 qubit observable n.sigma given by a unit Bloch vector.
/// Outcome bit 0 corresponds to eigenvalue +1, bit 1 to eigenvalue -1.
struct Observable {
    std::array<double, 3> bloch{0.0, 0.0, 1.0};

    // Throws std::invalid_argument unless |bloch| = 1 within 1e-12.
    static Observable from_bloch(const std::array<double, 3>& n);

    CMat matrix() const;               // n.sigma
    CMat projector(int outcome) const; // (I + (-1)^outcome n.sigma)/2
};

/// Two-qubit density matrix in the basis |00>,|01>,|10>,|11>.
class TwoQubitState {
  public:
    // Validates Hermiticity (1e-12), unit trace (1e-12) and eigenvalues
    // >= -1e-10; throws std::invalid_argument otherwise.
    static TwoQubitState from_matrix(const CMat& rho);
    static TwoQubitState pure(const std::array<cdouble, 4>& psi);

    const CMat& matrix() const { return rho_; }
    double purity() const;

  private:
    explicit TwoQubitState(CMat rho) : rho_(std::move(rho)) {}
    CMat rho_;
};

/// |Psi-> = (|01> - |10>)/sqrt(2).
TwoQubitState singlet();

/// The separable two-qubit mixture (|+z,+z><+z,+z| + |+x,-z><+x,-z|)/2;
/// first factor goes to Bob, second to Charles.
TwoQubitState separable_mix();

TwoQubitState maximally_mixed();

/// Partial transpose over the second qubit, a separability witness input.
CMat partial_transpose_second(const CMat& rho);

/// The four Bell projectors in outcome order b = 0,1,2,3 for
/// Phi+ = (|00>+|11>)/sqrt2, Psi+ = (|01>+|10>)/sqrt2,
/// Psi- = (|01>-|10>)/sqrt2, Phi- = (|00>-|11>)/sqrt2.
struct BellBasis {
    static const BellBasis& standard();
    const CMat& projector(int b) const { return projectors_[b]; }

  private:
    BellBasis();
    std::array<CMat, 4> projectors_;
};

/// Born-rule correlation of the swapping network: source s1 feeds (Alice, Bob),
/// source s2 feeds (Bob, Charles); Bob projects his two qubits onto the Bell
/// basis. Global factor order is (A, B1, B2, C), so
///   P(a,b,c|x,z) = Tr[(A_{a|x} (x) Pi_b (x) C_{c|z}) (s1 (x) s2)].
/// The result is normalized and no-signaling within 1e-12.
Correlation born_correlations(const TwoQubitState& s1, const TwoQubitState& s2,
                              const std::array<Observable, 2>& alice,
                              const std::array<Observable, 2>& charles);

// Measurement presets used throughout: the settings with the best noise
// resistance, the CHSH-optimal ones, and the fixed z basis.
std::array<Observable, 2> optimal_settings();       // (sx+sz)/sqrt2, (sx-sz)/sqrt2
std::array<Observable, 2> chsh_alice_settings();    // sx, sz
std::array<Observable, 2> chsh_charles_settings();  // same as optimal_settings
std::array<Observable, 2> z_settings();             // sz for both inputs

}  // namespace bilocal

#endif
