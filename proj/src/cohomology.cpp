#include "fmpo/cohomology.hpp"

#include <numeric>
#include <random>

#include "fmpo/errors.hpp"

namespace fmpo {

CochainIndex::CochainIndex(const FiniteGroup& g, int degree) : n_(g.order()), deg_(degree) {
  pos_.assign(n_, -1);
  for (int a = 0; a < n_; ++a)
    if (a != g.identity()) {
      pos_[a] = static_cast<int>(nonid_.size());
      nonid_.push_back(a);
    }
  size_ = 1;
  for (int k = 0; k < deg_; ++k) size_ *= static_cast<int>(nonid_.size());
  if (deg_ == 0) size_ = 0;  // normalized 0-cochains vanish
}

int CochainIndex::index(const int* args) const {
  int idx = 0;
  const int m = static_cast<int>(nonid_.size());
  for (int k = 0; k < deg_; ++k) {
    const int p = pos_[args[k]];
    if (p < 0) return -1;
    idx = idx * m + p;
  }
  return idx;
}

void CochainIndex::args(int idx, int* out) const {
  const int m = static_cast<int>(nonid_.size());
  for (int k = deg_ - 1; k >= 0; --k) {
    out[k] = nonid_[idx % m];
    idx /= m;
  }
}

std::size_t CochainIndex::full_size() const {
  std::size_t s = 1;
  for (int k = 0; k < deg_; ++k) s *= static_cast<std::size_t>(n_);
  return s;
}

std::size_t CochainIndex::full_index(const int* args) const {
  std::size_t f = 0;
  for (int k = 0; k < deg_; ++k) f = f * n_ + args[k];
  return f;
}

void check_cochain_size(const FiniteGroup& g, const Cochain& f, int degree) {
  std::size_t s = 1;
  for (int k = 0; k < degree; ++k) s *= static_cast<std::size_t>(g.order());
  if (f.size() != s)
    throw InputError("cochain of degree " + std::to_string(degree) + " needs " + std::to_string(s) +
                     " values, got " + std::to_string(f.size()));
}

Cochain coboundary(const FiniteGroup& g, const Cochain& f, int d, i64 q) {
  check_cochain_size(g, f, d);
  const int n = g.order();
  std::size_t total = 1;
  for (int k = 0; k <= d; ++k) total *= n;
  Cochain out(total, 0);
  std::vector<int> a(d + 1), b(d);
  auto at = [&](const std::vector<int>& args) {
    std::size_t x = 0;
    for (int v : args) x = x * n + v;
    return f[x];
  };
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t r = t;
    for (int k = d; k >= 0; --k) {
      a[k] = static_cast<int>(r % n);
      r /= n;
    }
    i64 s = 0;
    for (int k = 0; k < d; ++k) b[k] = a[k + 1];
    s += at(b);
    for (int i = 1; i <= d; ++i) {
      int w = 0;
      for (int k = 0; k <= d; ++k) {
        if (k == i) continue;
        b[w++] = (k == i - 1) ? g.mul(a[i - 1], a[i]) : a[k];
      }
      s += (i % 2 ? -1 : 1) * at(b);
    }
    for (int k = 0; k < d; ++k) b[k] = a[k];
    s += ((d + 1) % 2 ? -1 : 1) * at(b);
    out[t] = mod(s, q);
  }
  return out;
}

bool is_normalized(const FiniteGroup& g, const Cochain& f, int degree) {
  check_cochain_size(g, f, degree);
  const int n = g.order();
  std::vector<int> a(degree);
  for (std::size_t t = 0; t < f.size(); ++t) {
    std::size_t r = t;
    bool has_id = false;
    for (int k = degree - 1; k >= 0; --k) {
      a[k] = static_cast<int>(r % n);
      r /= n;
      has_id = has_id || a[k] == g.identity();
    }
    if (has_id && f[t] != 0) return false;
  }
  return true;
}

namespace {

using SparseRows = std::vector<std::vector<std::pair<int, i64>>>;

// Normalized coboundary map C^d -> C^{d+1}, one sparse row per (d+1)-tuple.
SparseRows coboundary_matrix(const FiniteGroup& g, int d) {
  CochainIndex src(g, d), dst(g, d + 1);
  SparseRows rows(dst.size());
  std::vector<int> a(d + 1), b(std::max(d, 1));
  for (int r = 0; r < dst.size(); ++r) {
    dst.args(r, a.data());
    auto add = [&](int coeff) {
      const int c = src.index(b.data());
      if (c < 0) return;
      for (auto& e : rows[r])
        if (e.first == c) {
          e.second += coeff;
          return;
        }
      rows[r].push_back({c, coeff});
    };
    if (d == 0) continue;
    for (int k = 0; k < d; ++k) b[k] = a[k + 1];
    add(1);
    for (int i = 1; i <= d; ++i) {
      int w = 0;
      for (int k = 0; k <= d; ++k) {
        if (k == i) continue;
        b[w++] = (k == i - 1) ? g.mul(a[i - 1], a[i]) : a[k];
      }
      add(i % 2 ? -1 : 1);
    }
    for (int k = 0; k < d; ++k) b[k] = a[k];
    add((d + 1) % 2 ? -1 : 1);
  }
  return rows;
}

std::vector<i64> apply_sparse(const SparseRows& A, const std::vector<i64>& x, i64 q) {
  std::vector<i64> y(A.size(), 0);
  for (std::size_t r = 0; r < A.size(); ++r) {
    i64 s = 0;
    for (auto [c, v] : A[r]) s += v * x[c];
    y[r] = q ? mod(s, q) : s;
  }
  return y;
}

struct KernelData {
  ZqDiagonal diag;
  std::vector<int> keep;           // column coordinates i with g_i > 1
  std::vector<i64> g;              // g_i for kept coordinates
  std::vector<std::vector<i64>> gens;  // kernel generators (q/g_i) Q e_i
  std::vector<std::optional<std::vector<i64>>> solutions;
};

// Diagonalizes the sparse map A (cols unknowns) over Z_q, compressing rows
// randomly when there are many more rows than columns. The kernel is
// verified against the full map.
KernelData diagonalize_map(const SparseRows& A, int cols, i64 q, const std::vector<std::vector<i64>>& rhs,
                           const CohomologyOptions& opt) {
  const int R = static_cast<int>(A.size());
  const int naug = static_cast<int>(rhs.size());
  std::mt19937_64 rng(opt.seed);
  for (int attempt = 0; attempt < 6; ++attempt) {
    const bool compress = R > cols + opt.extra_rows + attempt * 10;
    const int m = compress ? cols + opt.extra_rows + attempt * 10 : R;
    IMat M(m, cols + naug);
    if (!compress) {
      for (int r = 0; r < R; ++r)
        for (auto [c, v] : A[r]) M(r, c) = mod(M(r, c) + v, q);
      for (int k = 0; k < naug; ++k)
        for (int r = 0; r < R; ++r) M(r, cols + k) = mod(rhs[k][r], q);
    } else {
      std::uniform_int_distribution<i64> ud(0, q - 1);
      std::vector<i64> col(m);
      for (int r = 0; r < R; ++r) {
        for (auto& x : col) x = ud(rng);
        for (auto [c, v] : A[r]) {
          const i64 w = mod(v, q);
          if (!w) continue;
          for (int i = 0; i < m; ++i) M(i, c) = (M(i, c) + w * col[i]) % q;
        }
        for (int k = 0; k < naug; ++k) {
          const i64 w = mod(rhs[k][r], q);
          if (!w) continue;
          for (int i = 0; i < m; ++i) M(i, cols + k) = (M(i, cols + k) + w * col[i]) % q;
        }
      }
    }
    KernelData kd;
    kd.diag = diagonalize_mod(std::move(M), q, naug);
    const int n = static_cast<int>(kd.diag.diag.size());
    bool ok = true;
    for (int i = 0; i < cols && ok; ++i) {
      const i64 gi = i < n ? gcd64(kd.diag.diag[i], q) : q;
      if (gi == 1) continue;
      std::vector<i64> v(cols);
      for (int r = 0; r < cols; ++r) v[r] = mod(kd.diag.Q(r, i) * (q / gi), q);
      if (compress) {
        for (i64 x : apply_sparse(A, v, q))
          if (x) {
            ok = false;
            break;
          }
      }
      kd.keep.push_back(i);
      kd.g.push_back(gi);
      kd.gens.push_back(std::move(v));
    }
    if (!ok) continue;
    for (int k = 0; k < naug; ++k) {
      std::vector<i64> x;
      if (solve_diagonal(kd.diag, k, q, x)) {
        const auto y = apply_sparse(A, x, q);
        bool good = true;
        for (int r = 0; r < R && good; ++r) good = y[r] == mod(rhs[k][r], q);
        if (good) {
          kd.solutions.emplace_back(std::move(x));
          continue;
        }
      }
      kd.solutions.emplace_back(std::nullopt);
    }
    return kd;
  }
  throw ConsistencyError("random row compression failed to reproduce the kernel");
}

std::vector<i64> to_compressed(const CochainIndex& idx, const Cochain& f) {
  std::vector<i64> v(idx.size());
  std::vector<int> a(std::max(idx.degree(), 1));
  for (int i = 0; i < idx.size(); ++i) {
    idx.args(i, a.data());
    v[i] = f[idx.full_index(a.data())];
  }
  return v;
}

Cochain to_full(const CochainIndex& idx, const std::vector<i64>& v) {
  Cochain f(idx.full_size(), 0);
  std::vector<int> a(std::max(idx.degree(), 1));
  for (int i = 0; i < idx.size(); ++i) {
    idx.args(i, a.data());
    f[idx.full_index(a.data())] = v[i];
  }
  return f;
}

}  // namespace

Cohomology::Cohomology(const FiniteGroup& g, int degree, i64 q, bool u1, const CohomologyOptions& opt,
                       const std::vector<Cochain>& rhs)
    : group_(g), deg_(degree), q_(q), u1_(u1), opt_(opt), idx_(g, degree) {
  if (degree < 1) throw InputError("cohomology degree must be >= 1");
  if (q < 2) throw InputError("coefficient modulus must be >= 2");
  const CochainIndex up(g, degree + 1);
  std::vector<std::vector<i64>> rhs_c;
  for (const auto& b : rhs) {
    check_cochain_size(g, b, degree + 1);
    if (!is_normalized(g, b, degree + 1)) throw InputError("right-hand side is not normalized");
    rhs_c.push_back(to_compressed(up, b));
  }

  // cocycles
  const SparseRows dA = coboundary_matrix(g, degree);
  KernelData z = diagonalize_map(dA, idx_.size(), q, rhs_c, opt);
  zdiag_ = std::move(z.diag);
  zkeep_ = z.keep;
  zg_ = z.g;
  for (auto& s : z.solutions) particular_.push_back(s ? std::optional<Cochain>(to_full(idx_, *s)) : std::nullopt);

  // coboundaries, in compressed C^degree coordinates
  std::vector<std::vector<i64>> bgen;
  if (degree >= 2) {
    const CochainIndex lower(g, degree - 1);
    const SparseRows dB = coboundary_matrix(g, degree - 1);
    for (int j = 0; j < lower.size(); ++j) {
      std::vector<i64> e(lower.size(), 0);
      e[j] = 1;
      bgen.push_back(apply_sparse(dB, e, q));
    }
    if (u1) {
      CohomologyOptions o2 = opt;
      o2.seed = opt.seed + 7;
      KernelData k = diagonalize_map(dB, lower.size(), q, {}, o2);
      for (const auto& kv : k.gens) {
        std::vector<i64> img = apply_sparse(dB, kv, 0);
        for (auto& x : img) {
          if (mod(x, q) != 0) throw ConsistencyError("kernel lift is not a cocycle mod q");
          x = mod(x / q, q);
        }
        bgen.push_back(std::move(img));
      }
    }
  }

  // quotient Z / B in the kept coordinates
  const int rz = static_cast<int>(zkeep_.size());
  IMat rel(rz + static_cast<int>(bgen.size()), rz);
  for (int i = 0; i < rz; ++i) rel(i, i) = zg_[i] % q;
  for (std::size_t b = 0; b < bgen.size(); ++b) {
    const auto t = z_coordinates(to_full(idx_, bgen[b]));
    for (int i = 0; i < rz; ++i) rel(rz + static_cast<int>(b), i) = t[i];
  }
  ZqDiagonal qd = diagonalize_mod(rel, q);
  q2_ = qd.Q;
  // Q2^{-1}: solve Q2^T x = e_j for every j
  q2inv_ = IMat(rz, rz);
  {
    IMat aug(rz, 2 * rz);
    for (int i = 0; i < rz; ++i) {
      for (int j = 0; j < rz; ++j) aug(i, j) = q2_(j, i);
      aug(i, rz + i) = 1;
    }
    ZqDiagonal s = diagonalize_mod(aug, q, rz);
    for (int j = 0; j < rz; ++j) {
      std::vector<i64> x;
      if (!solve_diagonal(s, j, q, x)) throw ConsistencyError("basis change is not invertible");
      for (int i = 0; i < rz; ++i) q2inv_(j, i) = x[i];
    }
  }
  for (int j = 0; j < rz; ++j) {
    const i64 h = j < static_cast<int>(qd.diag.size()) ? gcd64(qd.diag[j], q) : q;
    if (h > 1) {
      qkeep_.push_back(j);
      orders_.push_back(h);
    }
  }
  for (std::size_t j = 0; j < qkeep_.size(); ++j) {
    std::vector<i64> coords(qkeep_.size(), 0);
    coords[j] = 1;
    generators_.push_back(representative(coords));
  }
}

std::vector<i64> Cohomology::z_coordinates(const Cochain& f) const {
  const std::vector<i64> v = to_compressed(idx_, f);
  const int C = idx_.size();
  std::vector<i64> t(zkeep_.size(), 0);
  std::vector<char> kept(C, 0);
  for (int i : zkeep_) kept[i] = 1;
  std::size_t w = 0;
  for (int i = 0; i < C; ++i) {
    i64 y = 0;
    for (int j = 0; j < C; ++j) y = (y + zdiag_.Qinv(i, j) * mod(v[j], q_)) % q_;
    if (!kept[i]) {
      if (y != 0) throw InputError("cochain is not a cocycle");
      continue;
    }
    const i64 step = q_ / zg_[w];
    if (y % step != 0) throw InputError("cochain is not a cocycle");
    t[w++] = y / step;
  }
  return t;
}

bool Cohomology::is_cocycle(const Cochain& f) const {
  check_cochain_size(group_, f, deg_);
  if (!is_normalized(group_, f, deg_)) return false;
  for (i64 x : coboundary(group_, f, deg_, q_))
    if (x) return false;
  return true;
}

std::vector<i64> Cohomology::class_of(const Cochain& f) const {
  if (!is_cocycle(f)) throw InputError("not a normalized cocycle");
  const auto t = z_coordinates(f);
  std::vector<i64> c(qkeep_.size());
  for (std::size_t j = 0; j < qkeep_.size(); ++j) {
    i64 s = 0;
    for (std::size_t i = 0; i < t.size(); ++i) s = (s + t[i] * q2_(static_cast<int>(i), qkeep_[j])) % q_;
    c[j] = mod(s, orders_[j]);
  }
  return c;
}

Cochain Cohomology::representative(const std::vector<i64>& coords) const {
  if (coords.size() != qkeep_.size()) throw InputError("class coordinate count mismatch");
  const int rz = static_cast<int>(zkeep_.size());
  // t = sum_j coords_j * (row qkeep_j of Q2^{-1})
  std::vector<i64> t(rz, 0);
  for (std::size_t j = 0; j < qkeep_.size(); ++j)
    for (int i = 0; i < rz; ++i) t[i] = mod(t[i] + coords[j] * q2inv_(qkeep_[j], i), q_);
  const int C = idx_.size();
  std::vector<i64> v(C, 0);
  for (int w = 0; w < rz; ++w) {
    const int i = zkeep_[w];
    const i64 step = (q_ / zg_[w]) * t[w] % q_;
    if (!step) continue;
    for (int r = 0; r < C; ++r) v[r] = mod(v[r] + zdiag_.Q(r, i) * step, q_);
  }
  return to_full(idx_, v);
}

std::vector<i64> Cohomology::invariant_factors() const { return fmpo::invariant_factors(orders_); }

std::string Cohomology::name() const { return abelian_group_name(invariant_factors()); }

i64 Cohomology::size() const {
  i64 s = 1;
  for (i64 h : orders_) s *= h;
  return s;
}

Cohomology h1_z2(const FiniteGroup& g) { return Cohomology(g, 1, 2, false); }
Cohomology h2_z2(const FiniteGroup& g) { return Cohomology(g, 2, 2, false); }
Cohomology h3_u1(const FiniteGroup& g, int modulus_factor) {
  return Cohomology(g, 3, static_cast<i64>(modulus_factor) * g.order(), true);
}

}  // namespace fmpo
