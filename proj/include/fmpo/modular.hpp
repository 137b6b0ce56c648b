#pragma once

// Exact integer and Z_q linear algebra: diagonalization by unimodular row
// and column operations, integer diagonal forms, and abelian group
// bookkeeping.

#include <cstdint>
#include <string>
#include <vector>

namespace fmpo {

using i64 = std::int64_t;

i64 mod(i64 a, i64 q);
i64 gcd64(i64 a, i64 b);
// Returns g = gcd(a, b) and x, y with a x + b y = g.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);

class IMat {
 public:
  IMat() = default;
  IMat(int rows, int cols) : r_(rows), c_(cols), d_(static_cast<std::size_t>(rows) * cols, 0) {}
  static IMat identity(int n);

  int rows() const { return r_; }
  int cols() const { return c_; }
  i64& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * c_ + j]; }
  i64 operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * c_ + j]; }
  i64* row(int i) { return d_.data() + static_cast<std::size_t>(i) * c_; }
  const i64* row(int i) const { return d_.data() + static_cast<std::size_t>(i) * c_; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<i64> d_;
};

IMat mul_mod(const IMat& a, const IMat& b, i64 q);

// P A Q = diag(d) (mod q) with P, Q invertible over Z_q. The last
// `aug_cols` columns of the input are carried along under the row operations
// only (so they come back as P B), which is how linear systems are solved.
// P itself is not formed.
struct ZqDiagonal {
  std::vector<i64> diag;  // length min(rows, cols - aug_cols); entries in [0, q)
  IMat Q, Qinv;           // (cols - aug_cols) square
  IMat aug;               // rows x aug_cols
};
ZqDiagonal diagonalize_mod(IMat a, i64 q, int aug_cols = 0);

// Solves A x = b given the diagonal form of A with b carried as column k
// of aug. Returns false if D y = P b has no solution.
bool solve_diagonal(const ZqDiagonal& d, int k, i64 q, std::vector<i64>& x);

// Integer diagonalization U A V = diag (U, V unimodular; only U is kept).
// Rows rank..rows-1 of U span the integer left kernel of A. Throws
// ConsistencyError on int64 overflow.
struct IntegerDiagonal {
  std::vector<i64> diag;
  IMat U;
  int rank = 0;
};
IntegerDiagonal diagonalize_integer(const IMat& a);

// Invariant factors (each dividing the next, trivial factors dropped) of
// the finite abelian group Z_{n_1} x ... x Z_{n_k}.
std::vector<i64> invariant_factors(const std::vector<i64>& cyclic_orders);

// Text form: "trivial", "Z2", "Z2^3", "Z4 x Z12", ...
std::string abelian_group_name(const std::vector<i64>& invariant_factors);

}  // namespace fmpo
