#pragma once

// The quantum torus C[X^{±1}, Y^{±1}]_{q^{1/2}} in the theta basis
//   theta_{(a,b)} = q^{-ab/2} X^a Y^b,
// its product rule
//   theta_u * theta_v = q^{det(u,v)/2} theta_{u+v},
// the Frohman-Gelca image of torus links, and the automorphisms F_{A,±}
// induced by mapping classes A of the torus.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qti/cyclotomic.hpp"

namespace qti::qt {

using cyc::CycInt;
using cyc::CycScalar;
using cyc::QRing;

// ---------------------------------------------------------------------------
// Mapping classes: SL(2,Z) matrices [[a,b],[c,d]] acting on lattice row
// vectors, (i,j) |-> (i,j)A = (i*a + j*c, i*b + j*d).

struct MappingClass {
    long long a, b, c, d;

    MappingClass(long long a_, long long b_, long long c_, long long d_)
        : a(a_), b(b_), c(c_), d(d_) {
        require(a * d - b * c == 1, Err::InvalidArgument,
                "mapping class must have determinant 1, got " + str());
    }

    static MappingClass identity() { return {1, 0, 0, 1}; }

    MappingClass operator*(const MappingClass& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    std::pair<long long, long long> row_image(long long i, long long j) const {
        return {i * a + j * c, i * b + j * d};
    }

    long long trace() const { return a + d; }
    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
    bool is_minus_identity() const { return a == -1 && b == 0 && c == 0 && d == -1; }

    // Finite order in SL(2,Z) <=> |trace| <= 1, or A = ±I.
    bool is_periodic() const {
        long long t = trace();
        return t == 0 || t == 1 || t == -1 || is_identity() || is_minus_identity();
    }

    // Order of a periodic class (1, 2, 3, 4 or 6); throws NotPeriodic otherwise.
    long long order() const;

    bool operator==(const MappingClass& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }

    std::string str() const {
        return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) +
               "," + std::to_string(d) + "]]";
    }
};

enum class FSign { Plus, Minus };

inline const char* fsign_name(FSign s) { return s == FSign::Plus ? "plus" : "minus"; }

// ---------------------------------------------------------------------------
// Theta monomials and elements.

struct ThetaMonomial {
    CycScalar scalar;
    long long a, b;
};

// theta_u * theta_v = q^{(u1*v2 - u2*v1)/2} theta_{u+v}, scalars multiply.
ThetaMonomial theta_mul(const QRing& ring, const ThetaMonomial& m1, const ThetaMonomial& m2);

// Finite linear combination of theta monomials with CycInt coefficients.
class QTElement {
  public:
    explicit QTElement(const QRing& ring) : ring_(ring) {}

    static QTElement theta(const QRing& ring, long long a, long long b);
    static QTElement monomial(const QRing& ring, const ThetaMonomial& m);

    const QRing& ring() const { return ring_; }
    const std::map<std::pair<long long, long long>, CycInt>& terms() const { return terms_; }

    void add_term(long long a, long long b, const CycInt& coeff);

    QTElement operator+(const QTElement& o) const;
    QTElement operator-(const QTElement& o) const;
    QTElement operator*(const QTElement& o) const;  // theta_mul bilinearly
    QTElement operator*(const CycInt& c) const;
    QTElement operator-() const;

    // theta_{(a,b)}^{-1} = theta_{(-a,-b)} for single monomials.
    QTElement inverse_monomial() const;

    bool is_zero() const;
    bool operator==(const QTElement& o) const { return (*this - o).is_zero(); }

  private:
    QRing ring_;
    std::map<std::pair<long long, long long>, CycInt> terms_;
};

// Frohman-Gelca image of the (a,b) torus link:
//   primitive (a,b):  theta_{(a,b)} + theta_{(-a,-b)};
//   (a,b) = k*(a',b') with k = gcd: T_k(theta_{(a',b')} + theta_{(-a',-b')}).
// Computed via the Chebyshev route; collapses to theta_{(a,b)} + theta_{(-a,-b)}.
QTElement fg_image(const QRing& ring, long long a, long long b);

// The automorphism F_{A,+}: theta_v -> theta_{vA}, or F_{A,-}: theta_v -> theta_{-vA},
// applied coefficient-wise.  Composition is contravariant on the plus branch:
// F_{A,+} o F_{B,+} = F_{BA,+}, since ((vB)A) = v(BA).
QTElement apply_FA(const MappingClass& A, FSign sign, const QTElement& x);

// Parity fact used by the classical-shadow scalar: ab + a + b == gcd(a,b) mod 2.
bool gcd_parity_check(long long a, long long b);

}  // namespace qti::qt
