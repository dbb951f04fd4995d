#pragma once

// Matrix types over cyclotomic scalars.
//
// ScaledPermMatrix: sparse rows of unit entries.  Every matrix built by the
// representation and intertwiner constructions lives here: rho(X), rho(Y) and
// monomial images are generalized permutations (one unit per row and column),
// intertwiners have n' units per row.  Products that would leave the class
// (two contributions colliding in one cell) throw; dense work belongs in
// CycMatrix.
//
// CycMatrix: dense matrix of CycInt, used for sums of monomial matrices
// (skein element images, Chebyshev evaluations) and exact scalar-identity
// tests.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qti/cyclotomic.hpp"

namespace qti::mat {

using cyc::BigInt;
using cyc::CycInt;
using cyc::CycScalar;

class ScaledPermMatrix {
  public:
    ScaledPermMatrix(long long n, long long order) : n_(n), order_(order), rows_(n) {
        require(n >= 1, Err::TooSmall, "matrix dimension must be positive");
    }

    static ScaledPermMatrix identity(long long n, long long order);
    static ScaledPermMatrix diagonal(long long order, const std::vector<CycScalar>& d);

    long long n() const { return n_; }
    long long order() const { return order_; }
    const std::vector<std::pair<long long, CycScalar>>& row(long long i) const {
        return rows_[static_cast<size_t>(i)];
    }

    void set(long long i, long long j, const CycScalar& s);
    CycScalar at(long long i, long long j) const;
    long long nnz() const;

    ScaledPermMatrix operator*(const ScaledPermMatrix& o) const;
    ScaledPermMatrix scaled(const CycScalar& s) const;

    // Exactly one nonzero entry in every row and every column.
    bool is_gen_perm() const;
    ScaledPermMatrix inverse() const;      // requires is_gen_perm
    ScaledPermMatrix pow(long long k) const;  // negative k requires is_gen_perm

    CycInt trace() const;
    std::vector<CycInt> apply(const std::vector<CycInt>& v) const;

    bool operator==(const ScaledPermMatrix& o) const;

    Eigen::MatrixXcd to_complex() const;

  private:
    long long n_;
    long long order_;
    std::vector<std::vector<std::pair<long long, CycScalar>>> rows_;  // sorted by column
};

class CycMatrix {
  public:
    CycMatrix(long long n, long long order)
        : n_(n), order_(order), e_(static_cast<size_t>(n * n), CycInt(order)) {
        require(n >= 1, Err::TooSmall, "matrix dimension must be positive");
    }

    static CycMatrix identity(long long n, long long order);
    static CycMatrix from_sparse(const ScaledPermMatrix& s);

    long long n() const { return n_; }
    long long order() const { return order_; }

    CycInt& at(long long i, long long j) { return e_[static_cast<size_t>(i * n_ + j)]; }
    const CycInt& at(long long i, long long j) const {
        return e_[static_cast<size_t>(i * n_ + j)];
    }

    CycMatrix operator+(const CycMatrix& o) const;
    CycMatrix operator-(const CycMatrix& o) const;
    CycMatrix operator*(const CycMatrix& o) const;
    CycMatrix operator*(const CycInt& c) const;

    // this += coeff * s, with s sparse.
    void accumulate(const CycInt& coeff, const ScaledPermMatrix& s);

    CycMatrix mul_sparse_right(const ScaledPermMatrix& s) const;  // this * s
    CycMatrix mul_sparse_left(const ScaledPermMatrix& s) const;   // s * this

    CycInt trace() const;
    std::vector<CycInt> apply(const std::vector<CycInt>& v) const;

    bool is_zero() const;
    bool operator==(const CycMatrix& o) const;

    // If the matrix is c * Id, returns c in canonical form.
    std::optional<CycInt> scalar_of_identity() const;

    Eigen::MatrixXcd to_complex() const;

  private:
    long long n_;
    long long order_;
    std::vector<CycInt> e_;
};

// Exact rank over Q of a list of integer vectors (fraction-free elimination).
long long integer_rank(std::vector<std::vector<BigInt>> rows);

}  // namespace qti::mat
