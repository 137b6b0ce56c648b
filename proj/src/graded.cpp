#include "fmpo/graded.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fmpo {

GradedSpace::GradedSpace(int even_dim, int odd_dim) : even_(even_dim), odd_(odd_dim) {
  if (even_dim < 0 || odd_dim < 0 || even_dim + odd_dim < 1)
    throw InputError("graded space needs non-negative sector dimensions with total >= 1, got (" +
                     std::to_string(even_dim) + "," + std::to_string(odd_dim) + ")");
}

GradedTensor::GradedTensor(std::vector<GradedSpace> legs, int parity)
    : legs_(std::move(legs)), parity_(parity & 1) {
  init_strides();
}

GradedTensor::GradedTensor(std::vector<GradedSpace> legs, int parity,
                           std::vector<complex> coefficients)
    : legs_(std::move(legs)), parity_(parity & 1) {
  init_strides();
  if (coefficients.size() != data_.size())
    throw InputError("coefficient count " + std::to_string(coefficients.size()) +
                     " does not match tensor size " + std::to_string(data_.size()));
  data_ = std::move(coefficients);
  for (std::size_t f = 0; f < data_.size(); ++f)
    if (data_[f] != complex{} && index_parity(f) != parity_)
      throw InputError("nonzero coefficient at flat index " + std::to_string(f) +
                       " violates tensor parity " + std::to_string(parity_));
}

GradedTensor GradedTensor::projected(std::vector<GradedSpace> legs, int parity,
                                     std::vector<complex> coefficients) {
  GradedTensor t(std::move(legs), parity);
  if (coefficients.size() != t.data_.size())
    throw InputError("coefficient count does not match tensor size");
  for (std::size_t f = 0; f < t.data_.size(); ++f)
    if (t.index_parity(f) == t.parity_) t.data_[f] = coefficients[f];
  return t;
}

void GradedTensor::init_strides() {
  strides_.assign(legs_.size(), 1);
  std::size_t total = 1;
  for (int k = static_cast<int>(legs_.size()) - 1; k >= 0; --k) {
    strides_[k] = total;
    total *= static_cast<std::size_t>(legs_[k].dim());
  }
  data_.assign(total, complex{});
}

std::size_t GradedTensor::flat_index(std::span<const int> idx) const {
  if (idx.size() != legs_.size()) throw InputError("multi-index rank mismatch");
  std::size_t f = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= legs_[k].dim()) throw InputError("index out of range");
    f += strides_[k] * static_cast<std::size_t>(idx[k]);
  }
  return f;
}

void GradedTensor::unflatten(std::size_t flat, std::span<int> idx) const {
  for (std::size_t k = 0; k < legs_.size(); ++k) {
    idx[k] = static_cast<int>(flat / strides_[k]);
    flat %= strides_[k];
  }
}

int GradedTensor::index_parity(std::size_t flat) const {
  int p = 0;
  for (std::size_t k = 0; k < legs_.size(); ++k) {
    p += legs_[k].parity(static_cast<int>(flat / strides_[k]));
    flat %= strides_[k];
  }
  return p & 1;
}

complex GradedTensor::at(std::initializer_list<int> idx) const {
  return at(std::span<const int>(idx.begin(), idx.size()));
}

void GradedTensor::set(std::span<const int> idx, complex value) {
  std::size_t f = flat_index(idx);
  if (value != complex{} && index_parity(f) != parity_)
    throw InputError("coefficient in forbidden parity sector");
  data_[f] = value;
}

void GradedTensor::set(std::initializer_list<int> idx, complex value) {
  set(std::span<const int>(idx.begin(), idx.size()), value);
}

double GradedTensor::homogeneity_violation() const {
  double worst = 0.0;
  for (std::size_t f = 0; f < data_.size(); ++f)
    if (index_parity(f) != parity_) worst = std::max(worst, std::abs(data_[f]));
  return worst;
}

GradedTensor& GradedTensor::operator*=(complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

GradedTensor& GradedTensor::operator+=(const GradedTensor& other) {
  if (other.legs_ != legs_) throw InputError("adding tensors with different legs");
  if (other.parity_ != parity_) throw InputError("adding tensors of different parity");
  for (std::size_t f = 0; f < data_.size(); ++f) data_[f] += other.data_[f];
  return *this;
}

GradedTensor operator-(const GradedTensor& a, const GradedTensor& b) {
  if (a.legs() != b.legs()) throw InputError("subtracting tensors with different legs");
  GradedTensor r(a.legs(), a.parity());
  for (std::size_t f = 0; f < a.size(); ++f) r.raw(f) = a[f] - b[f];
  return r;
}

double max_abs_diff(const GradedTensor& a, const GradedTensor& b) {
  if (a.legs() != b.legs()) throw InputError("comparing tensors with different legs");
  double worst = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) worst = std::max(worst, std::abs(a[f] - b[f]));
  return worst;
}

double max_abs(const GradedTensor& t) {
  double worst = 0.0;
  for (auto x : t.coefficients()) worst = std::max(worst, std::abs(x));
  return worst;
}

std::vector<int> inverse_permutation(std::span<const int> perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = static_cast<int>(k);
  return inv;
}

namespace {

void check_permutation(std::span<const int> perm, int rank) {
  if (static_cast<int>(perm.size()) != rank)
    throw InputError("permutation length " + std::to_string(perm.size()) +
                     " does not match tensor rank " + std::to_string(rank));
  std::vector<char> seen(rank, 0);
  for (int p : perm) {
    if (p < 0 || p >= rank || seen[p]) throw InputError("not a permutation of the tensor legs");
    seen[p] = 1;
  }
}

}  // namespace

GradedTensor permute_legs(const GradedTensor& t, std::span<const int> perm) {
  const int n = t.rank();
  check_permutation(perm, n);
  std::vector<GradedSpace> legs(n);
  for (int k = 0; k < n; ++k) legs[k] = t.leg(perm[k]);
  GradedTensor out(legs, t.parity());

  // position of input leg q in the output
  std::vector<int> pos = inverse_permutation(perm);
  std::vector<std::size_t> out_stride_of_input(n);
  {
    std::size_t s = 1;
    std::vector<std::size_t> ostr(n);
    for (int k = n - 1; k >= 0; --k) {
      ostr[k] = s;
      s *= static_cast<std::size_t>(legs[k].dim());
    }
    for (int q = 0; q < n; ++q) out_stride_of_input[q] = ostr[pos[q]];
  }

  std::vector<int> idx(n, 0);
  std::vector<int> odd;
  odd.reserve(n);
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflatten(f, idx);
    const complex v = t[f];
    if (v == complex{}) continue;
    std::size_t g = 0;
    odd.clear();
    for (int q = 0; q < n; ++q) {
      g += out_stride_of_input[q] * static_cast<std::size_t>(idx[q]);
      if (t.leg(q).parity(idx[q])) odd.push_back(pos[q]);
    }
    // inversions among the odd legs: input order is increasing q, output
    // order is pos[q]
    int inversions = 0;
    for (std::size_t x = 0; x < odd.size(); ++x)
      for (std::size_t y = x + 1; y < odd.size(); ++y)
        if (odd[x] > odd[y]) ++inversions;
    out.raw(g) = (inversions & 1) ? -v : v;
  }
  return out;
}

GradedTensor contract(const GradedTensor& a, const GradedTensor& b,
                      std::span<const std::pair<int, int>> pairs) {
  const int na = a.rank(), nb = b.rank(), m = static_cast<int>(pairs.size());
  std::vector<char> used_a(na, 0), used_b(nb, 0);
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= na || y < 0 || y >= nb) throw InputError("contraction leg out of range");
    if (used_a[x] || used_b[y]) throw InputError("duplicate leg in contraction pairs");
    used_a[x] = used_b[y] = 1;
    if (!(a.leg(x) == b.leg(y))) throw InputError("contracted legs carry different graded spaces");
  }

  std::vector<int> pa, pb;
  for (int k = 0; k < na; ++k)
    if (!used_a[k]) pa.push_back(k);
  const int fa = static_cast<int>(pa.size());
  for (int k = m - 1; k >= 0; --k) pa.push_back(pairs[k].first);
  for (int k = 0; k < m; ++k) pb.push_back(pairs[k].second);
  for (int k = 0; k < nb; ++k)
    if (!used_b[k]) pb.push_back(k);
  const int fb = nb - m;

  GradedTensor A = permute_legs(a, pa);
  GradedTensor B = permute_legs(b, pb);

  std::size_t rows = 1, inner = 1, cols = 1;
  for (int k = 0; k < fa; ++k) rows *= A.leg(k).dim();
  for (int k = fa; k < na; ++k) inner *= A.leg(k).dim();
  for (int k = m; k < nb; ++k) cols *= B.leg(k).dim();

  // A's contracted block is ordered (pair m-1, ..., pair 0); B's is
  // (pair 0, ..., pair m-1). Map A's inner flat index to B's (storage
  // relabelling only, the signs are already in A and B).
  std::vector<std::size_t> inner_map(inner);
  {
    std::vector<int> dims(m);
    for (int k = 0; k < m; ++k) dims[k] = B.leg(k).dim();  // pair k
    std::vector<int> digits(m, 0);
    for (std::size_t f = 0; f < inner; ++f) {
      // decode f in A-order: most significant digit is pair m-1
      std::size_t r = f;
      for (int k = 0; k < m; ++k) {  // k = pair index, least significant first
        digits[k] = static_cast<int>(r % dims[k]);
        r /= dims[k];
      }
      std::size_t g = 0;
      for (int k = 0; k < m; ++k) g = g * dims[k] + digits[k];
      inner_map[f] = g;
    }
  }

  std::vector<GradedSpace> legs;
  for (int k = 0; k < fa; ++k) legs.push_back(A.leg(k));
  for (int k = m; k < nb; ++k) legs.push_back(B.leg(k));
  if (legs.empty()) legs.push_back(GradedSpace(1, 0));  // scalar result
  GradedTensor out(legs, a.parity() + b.parity());

  const auto& ad = A.coefficients();
  const auto& bd = B.coefficients();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < inner; ++k) {
      const complex av = ad[r * inner + k];
      if (av == complex{}) continue;
      const std::size_t kb = inner_map[k];
      const complex* brow = bd.data() + kb * cols;
      for (std::size_t c = 0; c < cols; ++c) out.raw(r * cols + c) += av * brow[c];
    }
  (void)fb;
  return out;
}

GradedTensor tensor_product(const GradedTensor& a, const GradedTensor& b) {
  std::vector<GradedSpace> legs = a.legs();
  legs.insert(legs.end(), b.legs().begin(), b.legs().end());
  GradedTensor out(legs, a.parity() + b.parity());
  const std::size_t nbsz = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == complex{}) continue;
    for (std::size_t j = 0; j < nbsz; ++j) out.raw(i * nbsz + j) = a[i] * b[j];
  }
  return out;
}

complex supertrace(const GradedTensor& m) {
  if (m.rank() != 2 || !(m.leg(0) == m.leg(1)))
    throw InputError("supertrace needs a two-leg tensor on a single graded space");
  complex s{};
  const int d = m.leg(0).dim();
  for (int i = 0; i < d; ++i) {
    const complex v = m.at({i, i});
    s += m.leg(0).parity(i) ? -v : v;
  }
  return s;
}

GradedTensor parity_matrix(const GradedSpace& s) {
  GradedTensor t({s, s}, 0);
  for (int i = 0; i < s.dim(); ++i) t.set({i, i}, s.parity(i) ? -1.0 : 1.0);
  return t;
}

GradedTensor identity_matrix(const GradedSpace& s) {
  GradedTensor t({s, s}, 0);
  for (int i = 0; i < s.dim(); ++i) t.set({i, i}, 1.0);
  return t;
}

GradedTensor apply_parity(const GradedTensor& t, int leg) {
  if (leg < 0 || leg >= t.rank()) throw InputError("leg out of range");
  GradedTensor out = t;
  std::vector<int> idx(t.rank());
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflatten(f, idx);
    if (t.leg(leg).parity(idx[leg])) out.raw(f) = -t[f];
  }
  return out;
}

}  // namespace fmpo
