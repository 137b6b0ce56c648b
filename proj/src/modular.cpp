#include "fmpo/modular.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <utility>

#include "fmpo/errors.hpp"

namespace fmpo {

i64 mod(i64 a, i64 q) {
  i64 r = a % q;
  return r < 0 ? r + q : r;
}

i64 gcd64(i64 a, i64 b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const i64 t = a / b;
    std::tie(a, b) = std::make_pair(b, a - t * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - t * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - t * y1);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

IMat IMat::identity(int n) {
  IMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IMat mul_mod(const IMat& a, const IMat& b, i64 q) {
  if (a.cols() != b.rows()) throw InputError("matrix shape mismatch");
  IMat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const i64 x = a(i, k);
      if (!x) continue;
      const i64* br = b.row(k);
      i64* cr = c.row(i);
      for (int j = 0; j < b.cols(); ++j) cr[j] = (cr[j] + x * br[j]) % q;
    }
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j) c(i, j) = mod(c(i, j), q);
  return c;
}

namespace {

i64 inv_mod(i64 a, i64 m) {
  i64 x, y;
  const i64 g = ext_gcd(mod(a, m), m, x, y);
  if (g != 1) throw ConsistencyError("element not invertible");
  return mod(x, m);
}

// k with k * a == b (mod q), assuming gcd(a, q) divides b.
i64 quotient_mod(i64 a, i64 b, i64 q) {
  const i64 g = gcd64(a, q);
  const i64 m = q / g;
  if (m == 1) return 0;
  return mod((b / g) % m * inv_mod(a / g, m), m);
}

bool divides_mod(i64 a, i64 b, i64 q) { return b % gcd64(a, q) == 0; }

// row_dst = row_dst - k * row_src over the given length
void axpy(i64* dst, const i64* src, i64 k, int n, i64 q) {
  if (!k) return;
  for (int j = 0; j < n; ++j)
    if (src[j]) dst[j] = mod(dst[j] - k * src[j], q);
}

// (r1, r2) <- (x r1 + y r2, u r1 + v r2)
void combine(i64* r1, i64* r2, i64 x, i64 y, i64 u, i64 v, int n, i64 q) {
  for (int j = 0; j < n; ++j) {
    const i64 a = r1[j], b = r2[j];
    if (!a && !b) continue;
    r1[j] = mod(mod(x * a, q) + mod(y * b, q), q);
    r2[j] = mod(mod(u * a, q) + mod(v * b, q), q);
  }
}

}  // namespace

ZqDiagonal diagonalize_mod(IMat a, i64 q, int aug_cols) {
  const int R = a.rows(), C = a.cols() - aug_cols;
  const int CA = a.cols();
  if (C < 0) throw InputError("more augmented columns than columns");
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < CA; ++j) a(i, j) = mod(a(i, j), q);
  // QT holds Q transposed so that column operations on Q are row operations.
  IMat QT = IMat::identity(C), Qinv = IMat::identity(C);
  auto col_swap = [&](int s, int t) {
    if (s == t) return;
    for (int i = 0; i < R; ++i) std::swap(a(i, s), a(i, t));
    std::swap_ranges(QT.row(s), QT.row(s) + C, QT.row(t));
    std::swap_ranges(Qinv.row(s), Qinv.row(s) + C, Qinv.row(t));
  };
  // col_j -= k col_t
  auto col_sub = [&](int j, int t, i64 k, int from_row) {
    for (int i = from_row; i < R; ++i)
      if (a(i, t)) a(i, j) = mod(a(i, j) - k * a(i, t), q);
    axpy(QT.row(j), QT.row(t), k, C, q);
    axpy(Qinv.row(t), Qinv.row(j), mod(-k, q), C, q);  // row_t += k row_j
  };
  // (col_t, col_j) <- (x col_t + y col_j, -b' col_t + a' col_j)
  auto col_combine = [&](int t, int j, i64 x, i64 y, i64 ap, i64 bp, int from_row) {
    for (int i = from_row; i < R; ++i) {
      const i64 u = a(i, t), v = a(i, j);
      if (!u && !v) continue;
      a(i, t) = mod(mod(x * u, q) + mod(y * v, q), q);
      a(i, j) = mod(mod(-bp * u, q) + mod(ap * v, q), q);
    }
    combine(QT.row(t), QT.row(j), x, y, mod(-bp, q), ap, C, q);
    // inverse: rows (t, j) <- (a' r_t + b' r_j, -y r_t + x r_j)
    combine(Qinv.row(t), Qinv.row(j), ap, bp, mod(-y, q), mod(x, q), C, q);
  };

  const int n = std::min(R, C);
  std::vector<i64> diag(n, 0);
  for (int t = 0; t < n; ++t) {
    // pivot: entry generating the largest ideal
    int pi = -1, pj = -1;
    i64 best = q + 1;
    for (int i = t; i < R && best > 1; ++i) {
      const i64* r = a.row(i);
      for (int j = t; j < C; ++j)
        if (r[j]) {
          const i64 g = gcd64(r[j], q);
          if (g < best) {
            best = g;
            pi = i;
            pj = j;
            if (g == 1) break;
          }
        }
    }
    if (pi < 0) break;
    if (pi != t) std::swap_ranges(a.row(pi), a.row(pi) + CA, a.row(t));
    col_swap(pj, t);

    for (bool dirty = true; dirty;) {
      dirty = false;
      for (int i = t + 1; i < R; ++i) {
        const i64 b = a(i, t);
        if (!b) continue;
        const i64 p = a(t, t);
        if (divides_mod(p, b, q)) {
          axpy(a.row(i) + t, a.row(t) + t, quotient_mod(p, b, q), CA - t, q);
        } else {
          i64 x, y;
          const i64 g = ext_gcd(p, b, x, y);
          combine(a.row(t) + t, a.row(i) + t, mod(x, q), mod(y, q), mod(-(b / g), q), mod(p / g, q), CA - t, q);
        }
      }
      for (int j = t + 1; j < C; ++j) {
        const i64 b = a(t, j);
        if (!b) continue;
        const i64 p = a(t, t);
        if (divides_mod(p, b, q)) {
          // only row t changes in the matrix: rows below have a(i, t) = 0
          col_sub(j, t, quotient_mod(p, b, q), t);
        } else {
          i64 x, y;
          const i64 g = ext_gcd(p, b, x, y);
          col_combine(t, j, mod(x, q), mod(y, q), p / g, b / g, t);
          dirty = true;
        }
      }
    }
    diag[t] = a(t, t);
  }

  ZqDiagonal out;
  out.diag = std::move(diag);
  out.Q = IMat(C, C);
  for (int i = 0; i < C; ++i)
    for (int j = 0; j < C; ++j) out.Q(i, j) = QT(j, i);
  out.Qinv = std::move(Qinv);
  out.aug = IMat(R, aug_cols);
  for (int i = 0; i < R; ++i)
    for (int k = 0; k < aug_cols; ++k) out.aug(i, k) = a(i, C + k);
  return out;
}

bool solve_diagonal(const ZqDiagonal& d, int k, i64 q, std::vector<i64>& x) {
  const int C = d.Q.rows(), R = d.aug.rows(), n = static_cast<int>(d.diag.size());
  std::vector<i64> y(C, 0);
  for (int i = 0; i < R; ++i) {
    const i64 b = d.aug(i, k);
    if (i >= n) {
      if (b) return false;
      continue;
    }
    if (!divides_mod(d.diag[i], b, q)) return false;
    y[i] = d.diag[i] ? quotient_mod(d.diag[i], b, q) : 0;
  }
  x.assign(C, 0);
  for (int i = 0; i < C; ++i) {
    i64 s = 0;
    for (int j = 0; j < C; ++j) s = (s + d.Q(i, j) * y[j]) % q;
    x[i] = mod(s, q);
  }
  return true;
}

namespace {

i64 checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ConsistencyError("integer overflow in exact linear algebra");
  return static_cast<i64>(v);
}

}  // namespace

IntegerDiagonal diagonalize_integer(const IMat& input) {
  IMat a = input;
  const int R = a.rows(), C = a.cols();
  IMat U = IMat::identity(R);
  auto row_op = [&](int dst, int src, i64 k) {  // row_dst -= k row_src
    for (int j = 0; j < C; ++j) a(dst, j) = checked(static_cast<__int128>(a(dst, j)) - static_cast<__int128>(k) * a(src, j));
    for (int j = 0; j < R; ++j) U(dst, j) = checked(static_cast<__int128>(U(dst, j)) - static_cast<__int128>(k) * U(src, j));
  };
  auto row_combine = [&](int r1, int r2, i64 x, i64 y, i64 u, i64 v) {
    auto apply = [&](IMat& m, int n) {
      for (int j = 0; j < n; ++j) {
        const __int128 p = m(r1, j), s = m(r2, j);
        m(r1, j) = checked(x * p + y * s);
        m(r2, j) = checked(u * p + v * s);
      }
    };
    apply(a, C);
    apply(U, R);
  };
  auto col_op = [&](int dst, int src, i64 k) {
    for (int i = 0; i < R; ++i) a(i, dst) = checked(static_cast<__int128>(a(i, dst)) - static_cast<__int128>(k) * a(i, src));
  };
  auto col_combine = [&](int c1, int c2, i64 x, i64 y, i64 u, i64 v) {
    for (int i = 0; i < R; ++i) {
      const __int128 p = a(i, c1), s = a(i, c2);
      a(i, c1) = checked(x * p + y * s);
      a(i, c2) = checked(u * p + v * s);
    }
  };

  const int n = std::min(R, C);
  IntegerDiagonal out;
  int t = 0;
  for (; t < n; ++t) {
    int pi = -1, pj = -1;
    i64 best = 0;
    for (int i = t; i < R; ++i)
      for (int j = t; j < C; ++j)
        if (a(i, j) && (pi < 0 || std::llabs(a(i, j)) < best)) {
          best = std::llabs(a(i, j));
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    if (pi != t) {
      for (int j = 0; j < C; ++j) std::swap(a(pi, j), a(t, j));
      for (int j = 0; j < R; ++j) std::swap(U(pi, j), U(t, j));
    }
    if (pj != t)
      for (int i = 0; i < R; ++i) std::swap(a(i, pj), a(i, t));
    for (bool dirty = true; dirty;) {
      dirty = false;
      for (int i = t + 1; i < R; ++i) {
        const i64 b = a(i, t), p = a(t, t);
        if (!b) continue;
        if (b % p == 0) {
          row_op(i, t, b / p);
        } else {
          i64 x, y;
          const i64 g = ext_gcd(p, b, x, y);
          row_combine(t, i, x, y, -(b / g), p / g);
        }
      }
      for (int j = t + 1; j < C; ++j) {
        const i64 b = a(t, j), p = a(t, t);
        if (!b) continue;
        if (b % p == 0) {
          col_op(j, t, b / p);
        } else {
          i64 x, y;
          const i64 g = ext_gcd(p, b, x, y);
          col_combine(t, j, x, y, -(b / g), p / g);
          dirty = true;
        }
      }
    }
    out.diag.push_back(std::llabs(a(t, t)));
  }
  out.rank = t;
  out.diag.resize(n, 0);
  out.U = std::move(U);
  return out;
}

std::vector<i64> invariant_factors(const std::vector<i64>& cyclic_orders) {
  std::map<i64, std::vector<i64>> by_prime;  // prime -> prime powers
  for (i64 n : cyclic_orders) {
    if (n <= 0) throw InputError("cyclic order must be positive");
    for (i64 p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      i64 pk = 1;
      while (n % p == 0) {
        n /= p;
        pk *= p;
      }
      by_prime[p].push_back(pk);
    }
    if (n > 1) by_prime[n].push_back(n);
  }
  std::size_t len = 0;
  for (auto& [p, v] : by_prime) {
    std::sort(v.begin(), v.end(), std::greater<>());
    len = std::max(len, v.size());
  }
  std::vector<i64> out(len, 1);
  for (auto& [p, v] : by_prime)
    for (std::size_t k = 0; k < v.size(); ++k) out[k] *= v[k];
  std::reverse(out.begin(), out.end());
  return out;
}

std::string abelian_group_name(const std::vector<i64>& factors) {
  std::string s;
  for (i64 f : factors) {
    if (f == 1) continue;
    if (!s.empty()) s += " x ";
    s += "Z" + std::to_string(f);
  }
  return s.empty() ? "trivial" : s;
}

}  // namespace fmpo
