#pragma once

// Floating-point mirror of the exact constructions: same representation and
// intertwiner formulas over std::complex<double>, with tolerance-based
// verification.  Useful beyond the exact ring cap and for continuous
// character families (eigenvalues off the unit circle), and as an
// independent cross-check of the exact path.

#include <Eigen/Dense>
#include <complex>

#include "qti/torus_rep.hpp"

namespace qti::flt {

using cplx = std::complex<double>;
using qt::FSign;
using qt::MappingClass;

struct FloatCharacter {
    cplx lambda1{1.0, 0.0}, lambda2{1.0, 0.0};  // any nonzero values
    FSign sign = FSign::Plus;
    long long r1 = 0, r2 = 0;

    static FloatCharacter from(const rep::TorusCharacter& chi);
};

struct FloatRep {
    long long n = 0;
    cplx u{0.0}, v{0.0};
    Eigen::MatrixXcd X, Y;
};

// rho(X) e_i = u q^i e_i, rho(Y) e_i = v e_{i+1}, with the branch lift
// u = -lambda1^{±1/n} q^{r1} (principal root).
FloatRep build_rho_f(long long n, const FloatCharacter& chi);

// q^{-ab/2} X^a Y^b.
Eigen::MatrixXcd evaluate_theta_f(const FloatRep& rho, long long a, long long b);

struct FloatIntertwiner {
    MappingClass A = MappingClass::identity();
    FSign sign = FSign::Plus;
    long long n = 0, m = 0, nprime = 0, k0 = 0;
    Eigen::MatrixXcd lambda;  // unnormalized
    cplx trace_unnormalized{0.0};
    bool minus_index_flipped = false;
};

// Same weight-system and entry formulas as the exact builder; the base-index
// condition is matched to tolerance and must have exactly one solution.
FloatIntertwiner build_intertwiner_f(const MappingClass& A, FSign sign, const FloatRep& rho,
                                     double tol = 1e-9);

// Max residual of lambda rho(W) - rho(F_A W) lambda over the four generator
// checks, relative to the matrix scale.
double intertwining_residual_f(const FloatIntertwiner& it, const FloatRep& rho);

}  // namespace qti::flt
