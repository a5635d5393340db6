#pragma once

// Exact linear algebra over the integers: Smith and Hermite normal forms,
// integer system solving, and finitely presented abelian groups with the
// homomorphisms between them.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zlincat {

using Int = mpz_class;
using IntVector = std::vector<Int>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

inline IntVector zero_vector(std::size_t n) { return IntVector(n, Int(0)); }

inline IntVector unit_vector(std::size_t n, std::size_t i) {
  IntVector v = zero_vector(n);
  v[i] = 1;
  return v;
}

inline bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return sgn(x) == 0; });
}

inline IntVector operator+(IntVector a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline IntVector operator-(IntVector a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector difference: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline IntVector operator*(const Int& k, IntVector v) {
  for (auto& x : v) x *= k;
  return v;
}

inline void axpy(IntVector& y, const Int& k, const IntVector& x) {
  if (sgn(k) == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += k * x[i];
}

inline std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionError("IntMatrix: ragged initializer");
      for (long x : row) data_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw DimensionError("IntMatrix::from_rows: row length mismatch");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows) {
    IntMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].size() != rows) throw DimensionError("IntMatrix::from_columns: column length mismatch");
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }
  IntVector col(std::size_t c) const {
    IntVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  IntVector apply(const IntVector& x) const {
    if (x.size() != cols_) throw DimensionError("IntMatrix::apply: dimension mismatch");
    IntVector y = zero_vector(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (sgn(x[c]) != 0) y[r] += (*this)(r, c) * x[c];
    return y;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return sgn(x) == 0; });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) swap((*this)(r, a), (*this)(r, b));
  }
  // row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& k) {
    if (sgn(k) == 0) return;
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
  }
  // col[dst] += k * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& k) {
    if (sgn(k) == 0) return;
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
  }
  void negate_col(std::size_t c) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
  }

  void append_row(const IntVector& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw DimensionError("IntMatrix::append_row: length mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("IntMatrix product: inner dimension mismatch");
    IntMatrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Int& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
      }
    return p;
  }
  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("IntMatrix sum: shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("IntMatrix difference: shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < rows_; ++r) os << (r ? "," : "") << to_string(row(r));
    os << ']';
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Horizontal concatenation [A | B].
inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack: row count mismatch");
  IntMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
  }
  return m;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Int determinant(IntMatrix a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return Int(1);
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return Int(0);
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form

/// U*A*V = D with U, V unimodular and d1 | d2 | ... on the diagonal of D.
/// The inverses of U and V are carried along because kernels and
/// presentations need them.
struct SnfDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix U_inv;
  IntMatrix V_inv;
  std::size_t rank = 0;

  std::vector<Int> diagonal() const {
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

struct SnfState {
  IntMatrix D, U, Uinv, V, Vinv;

  void swap_rows(std::size_t a, std::size_t b) {
    D.swap_rows(a, b);
    U.swap_rows(a, b);
    Uinv.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    D.swap_cols(a, b);
    V.swap_cols(a, b);
    Vinv.swap_rows(a, b);
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const Int& k) {
    D.add_row_multiple(dst, src, k);
    U.add_row_multiple(dst, src, k);
    Uinv.add_col_multiple(src, dst, -k);
  }
  // col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const Int& k) {
    D.add_col_multiple(dst, src, k);
    V.add_col_multiple(dst, src, k);
    Vinv.add_row_multiple(src, dst, -k);
  }
  void negate_row(std::size_t r) {
    D.negate_row(r);
    U.negate_row(r);
    Uinv.negate_col(r);
  }
};

}  // namespace detail

/// Smith normal form with least-absolute-value pivoting.
inline SnfDecomposition snf(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  detail::SnfState s{a, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n),
                     IntMatrix::identity(n)};
  IntMatrix& D = s.D;
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // least nonzero |entry| in the trailing block
    std::size_t pr = m, pc = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (sgn(D(i, j)) != 0 && (pr == m || cmpabs(D(i, j), D(pr, pc)) < 0)) {
          pr = i;
          pc = j;
        }
    if (pr == m) break;
    s.swap_rows(t, pr);
    s.swap_cols(t, pc);

    for (;;) {
      bool clean = true;
      Int q;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(D(i, t)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        s.add_row(i, t, -q);
        if (sgn(D(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(D(t, j)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        s.add_col(j, t, -q);
        if (sgn(D(t, j)) != 0) clean = false;
      }
      if (!clean) {
        // a remainder smaller than the pivot survived; promote it
        std::size_t br = t, bc = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(D(i, t)) != 0 && cmpabs(D(i, t), D(br, bc)) < 0) {
            br = i;
            bc = t;
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(D(t, j)) != 0 && cmpabs(D(t, j), D(br, bc)) < 0) {
            br = t;
            bc = j;
          }
        s.swap_rows(t, br);
        s.swap_cols(t, bc);
        continue;
      }
      // divisibility of the trailing block by the pivot
      std::size_t bad_row = m;
      for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            bad_row = i;
            break;
          }
      if (bad_row == m) break;
      s.add_row(t, bad_row, Int(1));
    }
    if (sgn(D(t, t)) < 0) s.negate_row(t);
  }
  return SnfDecomposition{std::move(s.U), std::move(s.D), std::move(s.V), std::move(s.Uinv), std::move(s.Vinv),
                          t};
}

/// Basis of the integer kernel {x : A x = 0}, as columns.
inline std::vector<IntVector> integer_kernel(const IntMatrix& a) {
  const SnfDecomposition d = snf(a);
  std::vector<IntVector> basis;
  for (std::size_t j = d.rank; j < a.cols(); ++j) basis.push_back(d.V.col(j));
  return basis;
}

/// Reusable integer solver for A x = b with many right-hand sides.
class IntegerSolver {
 public:
  explicit IntegerSolver(IntMatrix a) : a_(std::move(a)), snf_(snf(a_)) {}

  std::optional<IntVector> solve(const IntVector& b) const {
    if (b.size() != a_.rows()) throw DimensionError("solve_z: right-hand side has wrong length");
    const IntVector ub = snf_.U.apply(b);
    IntVector y = zero_vector(a_.cols());
    for (std::size_t i = 0; i < ub.size(); ++i) {
      if (i < snf_.rank) {
        const Int& d = snf_.D(i, i);
        if (!mpz_divisible_p(ub[i].get_mpz_t(), d.get_mpz_t())) return std::nullopt;
        mpz_divexact(y[i].get_mpz_t(), ub[i].get_mpz_t(), d.get_mpz_t());
      } else if (sgn(ub[i]) != 0) {
        return std::nullopt;
      }
    }
    return snf_.V.apply(y);
  }

  const IntMatrix& matrix() const { return a_; }

 private:
  IntMatrix a_;
  SnfDecomposition snf_;
};

/// Some integer x with A x = b, or nothing when no integer solution exists.
inline std::optional<IntVector> solve_z(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows()) throw DimensionError("solve_z: right-hand side has wrong length");
  return IntegerSolver(a).solve(b);
}

// ---------------------------------------------------------------------------
// Hermite normal form (row lattice)

struct HermiteForm {
  IntMatrix basis;  // nonzero rows, echelon, positive pivots, reduced above pivots
  std::vector<std::size_t> pivots;
};

inline HermiteForm hermite(const IntMatrix& a) {
  IntMatrix h = a;
  const std::size_t m = h.rows(), n = h.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (sgn(h(i, c)) != 0 && (best == m || cmpabs(h(i, c), h(best, c)) < 0)) best = i;
      if (best == m) break;
      h.swap_rows(r, best);
      bool done = true;
      Int q;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (sgn(h(i, c)) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
        h.add_row_multiple(i, r, -q);
        if (sgn(h(i, c)) != 0) done = false;
      }
      if (done) break;
    }
    if (sgn(h(r, c)) == 0) continue;
    if (sgn(h(r, c)) < 0) h.negate_row(r);
    Int q;
    for (std::size_t i = 0; i < r; ++i) {
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      h.add_row_multiple(i, r, -q);
    }
    pivots.push_back(c);
    ++r;
  }
  IntMatrix basis(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) basis(i, j) = h(i, j);
  return HermiteForm{std::move(basis), std::move(pivots)};
}

// ---------------------------------------------------------------------------
// Finitely presented abelian groups

struct GroupInvariants {
  std::size_t rank = 0;
  std::vector<Int> divisors;  // nontrivial torsion coefficients, each dividing the next

  friend bool operator==(const GroupInvariants&, const GroupInvariants&) = default;

  std::string str() const {
    std::ostringstream os;
    os << "Z^" << rank;
    for (const auto& d : divisors) os << " + Z/" << d.get_str();
    return os.str();
  }
};

/// Z^ngens modulo the row lattice of `relations`.
class FpAbelianGroup {
 public:
  FpAbelianGroup() : FpAbelianGroup(0) {}
  explicit FpAbelianGroup(std::size_t ngens) : FpAbelianGroup(ngens, IntMatrix(0, ngens)) {}
  FpAbelianGroup(std::size_t ngens, IntMatrix relations) {
    if (relations.cols() != ngens && !(relations.rows() == 0))
      throw DimensionError("FpAbelianGroup: relation matrix must have one column per generator");
    if (relations.rows() == 0) relations = IntMatrix(0, ngens);
    auto d = std::make_shared<Data>();
    d->ngens = ngens;
    d->relations = std::move(relations);
    d->hermite = hermite(d->relations);
    const SnfDecomposition s = snf(d->relations);
    d->invariants.rank = ngens - s.rank;
    for (std::size_t i = 0; i < s.rank; ++i)
      if (s.D(i, i) != 1) d->invariants.divisors.push_back(s.D(i, i));
    data_ = std::move(d);
  }

  static FpAbelianGroup free(std::size_t n) { return FpAbelianGroup(n); }
  static FpAbelianGroup cyclic(const Int& order) {
    IntMatrix r(1, 1);
    r(0, 0) = order;
    return FpAbelianGroup(1, r);
  }
  static FpAbelianGroup trivial() { return FpAbelianGroup(0); }

  std::size_t ngens() const { return data_->ngens; }
  const IntMatrix& relations() const { return data_->relations; }
  const HermiteForm& relation_hermite() const { return data_->hermite; }
  const GroupInvariants& invariants() const { return data_->invariants; }

  bool is_trivial() const { return invariants().rank == 0 && invariants().divisors.empty(); }
  bool is_finite() const { return invariants().rank == 0; }
  Int order() const {
    if (!is_finite()) throw std::domain_error("FpAbelianGroup::order: group is infinite");
    Int o = 1;
    for (const auto& d : invariants().divisors) o *= d;
    return o;
  }

  /// Canonical representative: residue against the Hermite basis of the
  /// relation lattice.
  IntVector reduce(IntVector v) const {
    if (v.size() != ngens()) throw DimensionError("FpAbelianGroup::reduce: wrong element length");
    const HermiteForm& h = data_->hermite;
    Int q;
    for (std::size_t i = 0; i < h.pivots.size(); ++i) {
      const std::size_t p = h.pivots[i];
      if (sgn(v[p]) == 0) continue;
      mpz_fdiv_q(q.get_mpz_t(), v[p].get_mpz_t(), h.basis(i, p).get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t c = p; c < ngens(); ++c) v[c] -= q * h.basis(i, c);
    }
    return v;
  }

  bool is_zero_element(const IntVector& v) const { return zlincat::is_zero(reduce(v)); }
  bool equal_elements(const IntVector& a, const IntVector& b) const { return is_zero_element(a - b); }

  IntVector generator(std::size_t i) const { return reduce(unit_vector(ngens(), i)); }

  /// Same generators and the same relation lattice.
  bool same_presentation(const FpAbelianGroup& other) const {
    return ngens() == other.ngens() && data_->hermite.basis == other.data_->hermite.basis;
  }

  std::string str() const { return invariants().str(); }

 private:
  struct Data {
    std::size_t ngens = 0;
    IntMatrix relations;
    HermiteForm hermite;
    GroupInvariants invariants;
  };
  std::shared_ptr<const Data> data_;
};

inline GroupInvariants invariants(const FpAbelianGroup& g) { return g.invariants(); }

/// Direct sum of a list of groups, generators concatenated in order.
inline FpAbelianGroup direct_sum(const std::vector<FpAbelianGroup>& parts) {
  std::size_t n = 0, k = 0;
  for (const auto& g : parts) {
    n += g.ngens();
    k += g.relations().rows();
  }
  IntMatrix rel(k, n);
  std::size_t col = 0, row = 0;
  for (const auto& g : parts) {
    for (std::size_t r = 0; r < g.relations().rows(); ++r, ++row)
      for (std::size_t c = 0; c < g.ngens(); ++c) rel(row, col + c) = g.relations()(r, c);
    col += g.ngens();
  }
  return FpAbelianGroup(n, std::move(rel));
}

// ---------------------------------------------------------------------------
// Homomorphisms

class IllDefinedMapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Homomorphism given on generators: column j is the image of generator j.
struct AbHom {
  FpAbelianGroup src;
  FpAbelianGroup tgt;
  IntMatrix matrix;  // tgt.ngens x src.ngens

  AbHom() = default;
  AbHom(FpAbelianGroup s, FpAbelianGroup t, IntMatrix m) : src(std::move(s)), tgt(std::move(t)), matrix(std::move(m)) {
    if (matrix.rows() != tgt.ngens() || matrix.cols() != src.ngens())
      throw DimensionError("AbHom: matrix shape does not match generator counts");
  }

  static AbHom identity(const FpAbelianGroup& g) { return AbHom(g, g, IntMatrix::identity(g.ngens())); }
  static AbHom zero(const FpAbelianGroup& s, const FpAbelianGroup& t) {
    return AbHom(s, t, IntMatrix(t.ngens(), s.ngens()));
  }

  IntVector apply(const IntVector& x) const { return tgt.reduce(matrix.apply(x)); }

  /// Every relation of the source lands in the relation lattice of the target.
  bool is_well_defined() const {
    for (std::size_t r = 0; r < src.relations().rows(); ++r)
      if (!tgt.is_zero_element(matrix.apply(src.relations().row(r)))) return false;
    return true;
  }

  bool is_zero() const {
    for (std::size_t j = 0; j < src.ngens(); ++j)
      if (!tgt.is_zero_element(matrix.col(j))) return false;
    return true;
  }

  /// Equal as maps (columns agree modulo target relations).
  bool equals(const AbHom& other) const {
    if (!src.same_presentation(other.src) || !tgt.same_presentation(other.tgt)) return false;
    for (std::size_t j = 0; j < src.ngens(); ++j)
      if (!tgt.equal_elements(matrix.col(j), other.matrix.col(j))) return false;
    return true;
  }
};

/// g after f.
inline AbHom compose(const AbHom& g, const AbHom& f) {
  if (f.tgt.ngens() != g.src.ngens()) throw DimensionError("compose: AbHom maps are not composable");
  return AbHom(f.src, g.tgt, g.matrix * f.matrix);
}

/// Answers "is v in the subgroup generated by these elements?" inside a
/// group, by solving against the image lattice plus the relation lattice.
class SubgroupMembership {
 public:
  SubgroupMembership(const FpAbelianGroup& ambient, const std::vector<IntVector>& generators)
      : ngenerators_(generators.size()), solver_(build(ambient, generators)) {}

  /// Coefficients c with sum c_i g_i = v in the ambient group, if any.
  std::optional<IntVector> coefficients(const IntVector& v) const {
    auto sol = solver_.solve(v);
    if (!sol) return std::nullopt;
    sol->resize(ngenerators_);
    return sol;
  }
  bool contains(const IntVector& v) const { return solver_.solve(v).has_value(); }

 private:
  static IntMatrix build(const FpAbelianGroup& ambient, const std::vector<IntVector>& generators) {
    const IntMatrix gens = IntMatrix::from_columns(generators, ambient.ngens());
    return hstack(gens, ambient.relations().transpose());
  }
  std::size_t ngenerators_;
  IntegerSolver solver_;
};

struct Kernel {
  FpAbelianGroup group;
  AbHom inclusion;
};

/// Re-present Z^s / rows(relations) on a minimal generating set.  Returns the
/// new group and the change of generators as an s x s' matrix whose columns
/// express the new generators in the old ones.
inline std::pair<FpAbelianGroup, IntMatrix> simplify_presentation(std::size_t s, const IntMatrix& relations) {
  const SnfDecomposition d = snf(relations.rows() ? relations : IntMatrix(0, s));
  std::vector<IntVector> new_gens;
  std::vector<Int> orders;
  for (std::size_t i = 0; i < s; ++i) {
    Int di = (i < d.rank) ? d.D(i, i) : Int(0);
    if (di == 1) continue;
    new_gens.push_back(d.V_inv.row(i));
    orders.push_back(di);
  }
  IntMatrix rel(0, new_gens.size());
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (sgn(orders[i]) != 0) {
      IntVector row = zero_vector(new_gens.size());
      row[i] = orders[i];
      rel.append_row(row);
    }
  return {FpAbelianGroup(new_gens.size(), std::move(rel)), IntMatrix::from_columns(new_gens, s)};
}

/// Kernel of h as a subgroup of h.src: the preimage of the target relation
/// lattice, reduced modulo the source relations and re-presented on a
/// minimal generating set.
inline Kernel kernel(const AbHom& h) {
  if (!h.is_well_defined()) throw IllDefinedMapError("kernel: map is not well defined");
  const std::size_t n = h.src.ngens();
  // preimage lattice K = { x : M x in L_tgt }
  const IntMatrix combined = hstack(h.matrix, h.tgt.relations().transpose());
  std::vector<IntVector> preimage;
  for (const auto& v : integer_kernel(combined)) preimage.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  // full source lattice always lies in K when the target has no generators
  const HermiteForm kh = hermite(IntMatrix::from_rows(preimage, n));
  const IntMatrix& basis = kh.basis;  // s x n, rows independent
  const std::size_t s = basis.rows();

  // relations: the source relation lattice written in the K basis
  IntMatrix rel(0, s);
  if (s > 0) {
    const IntegerSolver solver(basis.transpose());
    for (std::size_t r = 0; r < h.src.relations().rows(); ++r) {
      auto c = solver.solve(h.src.relations().row(r));
      if (!c) throw std::logic_error("kernel: source relation outside preimage lattice");
      rel.append_row(*c);
    }
  }
  auto [group, change] = simplify_presentation(s, rel);
  std::vector<IntVector> gens;
  for (std::size_t j = 0; j < change.cols(); ++j) {
    IntVector elem = zero_vector(n);
    for (std::size_t i = 0; i < s; ++i) axpy(elem, change(i, j), basis.row(i));
    gens.push_back(h.src.reduce(elem));
  }
  AbHom incl(group, h.src, IntMatrix::from_columns(gens, n));
  return Kernel{std::move(group), std::move(incl)};
}

/// Subgroup of `ambient` generated by the given elements, presented on
/// exactly those generators; the inclusion sends generator i to element i.
inline Kernel subgroup(const FpAbelianGroup& ambient, const std::vector<IntVector>& generators) {
  const std::size_t s = generators.size();
  const IntMatrix gens = IntMatrix::from_columns(generators, ambient.ngens());
  IntMatrix rel(0, s);
  if (s > 0) {
    const IntMatrix combined = hstack(gens, ambient.relations().transpose());
    for (const auto& v : integer_kernel(combined)) rel.append_row(IntVector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(s)));
  }
  FpAbelianGroup g(s, std::move(rel));
  AbHom incl(g, ambient, gens);
  return Kernel{std::move(g), std::move(incl)};
}

inline Kernel image(const AbHom& h) {
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < h.src.ngens(); ++j) cols.push_back(h.matrix.col(j));
  return subgroup(h.tgt, cols);
}

/// Cokernel of h with the canonical projection from h.tgt.
struct Cokernel {
  FpAbelianGroup group;
  AbHom projection;
};

inline Cokernel cokernel(const AbHom& h) {
  IntMatrix rel = h.tgt.relations();
  if (rel.rows() == 0) rel = IntMatrix(0, h.tgt.ngens());
  for (std::size_t j = 0; j < h.src.ngens(); ++j) rel.append_row(h.matrix.col(j));
  FpAbelianGroup g(h.tgt.ngens(), std::move(rel));
  AbHom proj(h.tgt, g, IntMatrix::identity(h.tgt.ngens()));
  return Cokernel{std::move(g), std::move(proj)};
}

/// Lift h : A -> G through an injective incl : S -> G, if h lands in its image.
inline std::optional<AbHom> factor_through(const AbHom& h, const AbHom& incl) {
  if (h.tgt.ngens() != incl.tgt.ngens()) throw DimensionError("factor_through: targets differ");
  std::vector<IntVector> gens;
  for (std::size_t j = 0; j < incl.src.ngens(); ++j) gens.push_back(incl.matrix.col(j));
  const SubgroupMembership member(incl.tgt, gens);
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < h.src.ngens(); ++j) {
    auto c = member.coefficients(h.matrix.col(j));
    if (!c) return std::nullopt;
    cols.push_back(incl.src.reduce(*c));
  }
  return AbHom(h.src, incl.src, IntMatrix::from_columns(cols, incl.src.ngens()));
}

/// Two lists of elements generate the same subgroup of `ambient`.
inline bool same_subgroup(const FpAbelianGroup& ambient, const std::vector<IntVector>& a,
                          const std::vector<IntVector>& b) {
  const SubgroupMembership in_a(ambient, a), in_b(ambient, b);
  return std::all_of(b.begin(), b.end(), [&](const IntVector& v) { return in_a.contains(v); }) &&
         std::all_of(a.begin(), a.end(), [&](const IntVector& v) { return in_b.contains(v); });
}

inline bool is_injective(const AbHom& h) { return kernel(h).group.is_trivial(); }

inline bool is_surjective(const AbHom& h) {
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < h.src.ngens(); ++j) cols.push_back(h.matrix.col(j));
  const SubgroupMembership member(h.tgt, cols);
  for (std::size_t i = 0; i < h.tgt.ngens(); ++i)
    if (!member.contains(unit_vector(h.tgt.ngens(), i))) return false;
  return true;
}

inline bool is_isomorphism(const AbHom& h) { return h.is_well_defined() && is_injective(h) && is_surjective(h); }

class ComposabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exactness of A --f--> B --g--> C at B: g∘f = 0 and every kernel
/// generator of g lies in the image of f.
inline bool is_exact_at(const AbHom& f, const AbHom& g) {
  if (!f.tgt.same_presentation(g.src)) throw ComposabilityError("is_exact_at: f.tgt differs from g.src");
  if (!compose(g, f).is_zero()) return false;
  const Kernel k = kernel(g);
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < f.src.ngens(); ++j) cols.push_back(f.matrix.col(j));
  const SubgroupMembership in_image(f.tgt, cols);
  for (std::size_t j = 0; j < k.group.ngens(); ++j)
    if (!in_image.contains(k.inclusion.matrix.col(j))) return false;
  return true;
}

}  // namespace zlincat
