#include "qti/matrices.hpp"

#include <algorithm>

namespace qti::mat {

// ---------------------------------------------------------------------------
// ScaledPermMatrix

ScaledPermMatrix ScaledPermMatrix::identity(long long n, long long order) {
    ScaledPermMatrix m(n, order);
    for (long long i = 0; i < n; ++i) m.set(i, i, CycScalar::unit(cyc::RootOfUnity(order, 0)));
    return m;
}

ScaledPermMatrix ScaledPermMatrix::diagonal(long long order, const std::vector<CycScalar>& d) {
    ScaledPermMatrix m(static_cast<long long>(d.size()), order);
    for (size_t i = 0; i < d.size(); ++i) m.set(static_cast<long long>(i), static_cast<long long>(i), d[i]);
    return m;
}

void ScaledPermMatrix::set(long long i, long long j, const CycScalar& s) {
    require(i >= 0 && i < n_ && j >= 0 && j < n_, Err::InvalidArgument, "matrix index out of range");
    require(s.zero || s.order() == order_, Err::OrderMismatch,
            "entry order does not match matrix order");
    auto& r = rows_[static_cast<size_t>(i)];
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const auto& p, long long col) { return p.first < col; });
    if (it != r.end() && it->first == j) {
        if (s.zero)
            r.erase(it);
        else
            it->second = s;
    } else if (!s.zero) {
        r.insert(it, {j, s});
    }
}

CycScalar ScaledPermMatrix::at(long long i, long long j) const {
    const auto& r = rows_[static_cast<size_t>(i)];
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const auto& p, long long col) { return p.first < col; });
    if (it != r.end() && it->first == j) return it->second;
    return CycScalar::zero_of(order_);
}

long long ScaledPermMatrix::nnz() const {
    long long c = 0;
    for (const auto& r : rows_) c += static_cast<long long>(r.size());
    return c;
}

ScaledPermMatrix ScaledPermMatrix::operator*(const ScaledPermMatrix& o) const {
    require(n_ == o.n_ && order_ == o.order_, Err::OrderMismatch,
            "matrix shape/order mismatch in product");
    ScaledPermMatrix out(n_, order_);
    for (long long i = 0; i < n_; ++i) {
        auto& r = out.rows_[static_cast<size_t>(i)];
        for (const auto& [k, s] : rows_[static_cast<size_t>(i)]) {
            for (const auto& [j, t] : o.rows_[static_cast<size_t>(k)]) {
                auto it = std::lower_bound(r.begin(), r.end(), j,
                                           [](const auto& p, long long col) { return p.first < col; });
                require(it == r.end() || it->first != j, Err::InvalidArgument,
                        "product leaves the scaled-permutation class (cell collision)");
                r.insert(it, {j, s * t});
            }
        }
    }
    return out;
}

ScaledPermMatrix ScaledPermMatrix::scaled(const CycScalar& s) const {
    ScaledPermMatrix out(n_, order_);
    if (s.zero) return out;
    for (long long i = 0; i < n_; ++i)
        for (const auto& [j, t] : rows_[static_cast<size_t>(i)]) out.set(i, j, t * s);
    return out;
}

bool ScaledPermMatrix::is_gen_perm() const {
    std::vector<char> col_seen(static_cast<size_t>(n_), 0);
    for (const auto& r : rows_) {
        if (r.size() != 1) return false;
        if (col_seen[static_cast<size_t>(r[0].first)]) return false;
        col_seen[static_cast<size_t>(r[0].first)] = 1;
    }
    return true;
}

ScaledPermMatrix ScaledPermMatrix::inverse() const {
    require(is_gen_perm(), Err::InvalidArgument, "inverse requires a generalized permutation");
    ScaledPermMatrix out(n_, order_);
    for (long long i = 0; i < n_; ++i) {
        const auto& [j, s] = rows_[static_cast<size_t>(i)][0];
        out.set(j, i, s.inverse());
    }
    return out;
}

ScaledPermMatrix ScaledPermMatrix::pow(long long k) const {
    if (k < 0) return inverse().pow(-k);
    ScaledPermMatrix acc = identity(n_, order_);
    ScaledPermMatrix base = *this;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return acc;
}

CycInt ScaledPermMatrix::trace() const {
    CycInt t(order_);
    for (long long i = 0; i < n_; ++i) {
        CycScalar s = at(i, i);
        if (!s.zero) t.add_term(s.root.exponent, 1);
    }
    return t;
}

std::vector<CycInt> ScaledPermMatrix::apply(const std::vector<CycInt>& v) const {
    require(static_cast<long long>(v.size()) == n_, Err::InvalidArgument, "vector length mismatch");
    std::vector<CycInt> out(static_cast<size_t>(n_), CycInt(order_));
    for (long long i = 0; i < n_; ++i)
        for (const auto& [j, s] : rows_[static_cast<size_t>(i)])
            out[static_cast<size_t>(i)] += v[static_cast<size_t>(j)] * s;
    return out;
}

bool ScaledPermMatrix::operator==(const ScaledPermMatrix& o) const {
    if (n_ != o.n_ || order_ != o.order_) return false;
    for (long long i = 0; i < n_; ++i) {
        const auto& a = rows_[static_cast<size_t>(i)];
        const auto& b = o.rows_[static_cast<size_t>(i)];
        if (a.size() != b.size()) return false;
        for (size_t k = 0; k < a.size(); ++k)
            if (a[k].first != b[k].first || !(a[k].second == b[k].second)) return false;
    }
    return true;
}

Eigen::MatrixXcd ScaledPermMatrix::to_complex() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_, n_);
    for (long long i = 0; i < n_; ++i)
        for (const auto& [j, s] : rows_[static_cast<size_t>(i)]) m(i, j) = s.to_complex();
    return m;
}

// ---------------------------------------------------------------------------
// CycMatrix

CycMatrix CycMatrix::identity(long long n, long long order) {
    CycMatrix m(n, order);
    for (long long i = 0; i < n; ++i) m.at(i, i) = CycInt::one(order);
    return m;
}

CycMatrix CycMatrix::from_sparse(const ScaledPermMatrix& s) {
    CycMatrix m(s.n(), s.order());
    for (long long i = 0; i < s.n(); ++i)
        for (const auto& [j, v] : s.row(i)) m.at(i, j) = CycInt::from_scalar(v);
    return m;
}

CycMatrix CycMatrix::operator+(const CycMatrix& o) const {
    require(n_ == o.n_ && order_ == o.order_, Err::OrderMismatch, "matrix shape/order mismatch");
    CycMatrix m(n_, order_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] + o.e_[i];
    return m;
}

CycMatrix CycMatrix::operator-(const CycMatrix& o) const {
    require(n_ == o.n_ && order_ == o.order_, Err::OrderMismatch, "matrix shape/order mismatch");
    CycMatrix m(n_, order_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] - o.e_[i];
    return m;
}

CycMatrix CycMatrix::operator*(const CycMatrix& o) const {
    require(n_ == o.n_ && order_ == o.order_, Err::OrderMismatch, "matrix shape/order mismatch");
    CycMatrix out(n_, order_);
    const size_t N = static_cast<size_t>(order_);
    // Row-at-a-time accumulation into flat coefficient buffers keyed by
    // exponent; avoids map churn when entries grow dense in the exponents.
    std::vector<std::vector<BigInt>> buf(static_cast<size_t>(n_), std::vector<BigInt>(N));
    for (long long i = 0; i < n_; ++i) {
        for (auto& col : buf)
            for (auto& c : col) c = 0;
        for (long long k = 0; k < n_; ++k) {
            const CycInt& a = at(i, k);
            if (a.empty()) continue;
            for (long long j = 0; j < n_; ++j) {
                const CycInt& b = o.at(k, j);
                if (b.empty()) continue;
                auto& target = buf[static_cast<size_t>(j)];
                for (const auto& [e1, c1] : a.terms())
                    for (const auto& [e2, c2] : b.terms()) {
                        long long e = e1 + e2;
                        if (e >= order_) e -= order_;
                        target[static_cast<size_t>(e)] += c1 * c2;
                    }
            }
        }
        for (long long j = 0; j < n_; ++j) {
            CycInt cell(order_);
            auto& col = buf[static_cast<size_t>(j)];
            for (size_t e = 0; e < N; ++e)
                if (col[e] != 0) cell.add_term(static_cast<long long>(e), col[e]);
            out.at(i, j) = std::move(cell);
        }
    }
    return out;
}

CycMatrix CycMatrix::operator*(const CycInt& c) const {
    CycMatrix m(n_, order_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] * c;
    return m;
}

void CycMatrix::accumulate(const CycInt& coeff, const ScaledPermMatrix& s) {
    require(n_ == s.n() && order_ == s.order(), Err::OrderMismatch, "matrix shape/order mismatch");
    for (long long i = 0; i < n_; ++i)
        for (const auto& [j, v] : s.row(i)) at(i, j) += coeff * v;
}

CycMatrix CycMatrix::mul_sparse_right(const ScaledPermMatrix& s) const {
    require(n_ == s.n() && order_ == s.order(), Err::OrderMismatch, "matrix shape/order mismatch");
    CycMatrix out(n_, order_);
    for (long long k = 0; k < n_; ++k)
        for (const auto& [j, v] : s.row(k))
            for (long long i = 0; i < n_; ++i) {
                const CycInt& a = at(i, k);
                if (!a.empty()) out.at(i, j) += a * v;
            }
    return out;
}

CycMatrix CycMatrix::mul_sparse_left(const ScaledPermMatrix& s) const {
    require(n_ == s.n() && order_ == s.order(), Err::OrderMismatch, "matrix shape/order mismatch");
    CycMatrix out(n_, order_);
    for (long long i = 0; i < n_; ++i)
        for (const auto& [k, v] : s.row(i))
            for (long long j = 0; j < n_; ++j) {
                const CycInt& b = at(k, j);
                if (!b.empty()) out.at(i, j) += b * v;
            }
    return out;
}

CycInt CycMatrix::trace() const {
    CycInt t(order_);
    for (long long i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

std::vector<CycInt> CycMatrix::apply(const std::vector<CycInt>& v) const {
    require(static_cast<long long>(v.size()) == n_, Err::InvalidArgument, "vector length mismatch");
    std::vector<CycInt> out(static_cast<size_t>(n_), CycInt(order_));
    for (long long i = 0; i < n_; ++i)
        for (long long j = 0; j < n_; ++j) {
            const CycInt& a = at(i, j);
            if (!a.empty()) out[static_cast<size_t>(i)] += a * v[static_cast<size_t>(j)];
        }
    return out;
}

bool CycMatrix::is_zero() const {
    for (const auto& c : e_)
        if (!c.is_zero()) return false;
    return true;
}

bool CycMatrix::operator==(const CycMatrix& o) const {
    if (n_ != o.n_) return false;
    for (size_t i = 0; i < e_.size(); ++i)
        if (!(e_[i] == o.e_[i])) return false;
    return true;
}

std::optional<CycInt> CycMatrix::scalar_of_identity() const {
    CycInt d0 = at(0, 0).reduce();
    for (long long i = 0; i < n_; ++i)
        for (long long j = 0; j < n_; ++j) {
            if (i == j) {
                if (!(at(i, j) == d0)) return std::nullopt;
            } else if (!at(i, j).is_zero()) {
                return std::nullopt;
            }
        }
    return d0;
}

Eigen::MatrixXcd CycMatrix::to_complex() const {
    Eigen::MatrixXcd m(n_, n_);
    for (long long i = 0; i < n_; ++i)
        for (long long j = 0; j < n_; ++j) m(i, j) = at(i, j).eval_complex();
    return m;
}

// ---------------------------------------------------------------------------

long long integer_rank(std::vector<std::vector<BigInt>> rows) {
    if (rows.empty()) return 0;
    const size_t cols = rows[0].size();
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows.size(); ++c) {
        size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            BigInt f1 = rows[rank][c], f2 = rows[r][c];
            for (size_t j = c; j < cols; ++j) rows[r][j] = rows[r][j] * f1 - rows[rank][j] * f2;
        }
        ++rank;
    }
    return static_cast<long long>(rank);
}

}  // namespace qti::mat
