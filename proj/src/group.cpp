#include "fmpo/group.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "fmpo/errors.hpp"

namespace fmpo {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> names,
                         std::string label)
    : label_(std::move(label)) {
  n_ = static_cast<int>(table.size());
  if (n_ < 1) throw InputError("group table is empty");
  table_.assign(static_cast<std::size_t>(n_) * n_, 0);
  for (int a = 0; a < n_; ++a) {
    if (static_cast<int>(table[a].size()) != n_) throw InputError("group table is not square");
    for (int b = 0; b < n_; ++b) {
      const int c = table[a][b];
      if (c < 0 || c >= n_) throw InputError("group table entry out of range");
      table_[static_cast<std::size_t>(a) * n_ + b] = c;
    }
  }
  identity_ = -1;
  for (int e = 0; e < n_ && identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw InputError("group table has no identity element");
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw InputError("group table is not associative at (" + std::to_string(a) + "," +
                           std::to_string(b) + "," + std::to_string(c) + ")");
  inverse_.assign(n_, -1);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) inverse_[a] = b;
    if (inverse_[a] < 0) throw InputError("element " + std::to_string(a) + " has no inverse");
  }
  if (names.empty())
    for (int a = 0; a < n_; ++a) names.push_back(std::to_string(a));
  if (static_cast<int>(names.size()) != n_) throw InputError("group names do not match the order");
  names_ = std::move(names);
}

std::vector<std::vector<int>> FiniteGroup::table() const {
  std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) t[a][b] = mul(a, b);
  return t;
}

namespace {

FiniteGroup cyclic(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    names.push_back(std::to_string(a));
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return FiniteGroup(t, names, "Z" + std::to_string(n));
}

// Closure of a set of permutations; identity listed first.
template <std::size_t K>
FiniteGroup permutation_group(const std::vector<std::array<int, K>>& gens, const std::string& label) {
  std::array<int, K> id;
  for (std::size_t i = 0; i < K; ++i) id[i] = static_cast<int>(i);
  std::vector<std::array<int, K>> elems{id};
  auto compose = [](const std::array<int, K>& p, const std::array<int, K>& q) {
    std::array<int, K> r;  // (p q)(i) = p(q(i))
    for (std::size_t i = 0; i < K; ++i) r[i] = p[q[i]];
    return r;
  };
  for (std::size_t k = 0; k < elems.size(); ++k)
    for (const auto& g : gens) {
      auto c = compose(elems[k], g);
      if (std::find(elems.begin(), elems.end(), c) == elems.end()) elems.push_back(c);
    }
  std::sort(elems.begin() + 1, elems.end());
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    std::string s = "(";
    for (std::size_t i = 0; i < K; ++i) s += std::to_string(elems[a][i]);
    names.push_back(s + ")");
    for (int b = 0; b < n; ++b)
      t[a][b] = static_cast<int>(std::find(elems.begin(), elems.end(), compose(elems[a], elems[b])) - elems.begin());
  }
  return FiniteGroup(t, names, label);
}

FiniteGroup quaternion() {
  // elements (sign, unit) with unit in {1, i, j, k}
  const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sign_mul[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  const char* unit_names[4] = {"1", "i", "j", "k"};
  std::vector<std::string> names;
  for (int a = 0; a < 8; ++a) {
    names.push_back(std::string(a / 4 ? "-" : "") + unit_names[a % 4]);
    for (int b = 0; b < 8; ++b) {
      const int s = (a / 4 + b / 4 + sign_mul[a % 4][b % 4]) % 2;
      t[a][b] = 4 * s + unit_mul[a % 4][b % 4];
    }
  }
  return FiniteGroup(t, names, "Q8");
}

}  // namespace

FiniteGroup FiniteGroup::builtin(const std::string& name) {
  if (name == "Z1" || name == "trivial") return FiniteGroup();
  if (name == "Z2") return cyclic(2);
  if (name == "Z3") return cyclic(3);
  if (name == "Z4") return cyclic(4);
  if (name == "Z2xZ2") {
    std::vector<std::vector<int>> t(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) t[a][b] = a ^ b;
    return FiniteGroup(t, {"(0,0)", "(1,0)", "(0,1)", "(1,1)"}, "Z2xZ2");
  }
  if (name == "S3") return permutation_group<3>({{1, 0, 2}, {1, 2, 0}}, "S3");
  if (name == "A4") return permutation_group<4>({{1, 2, 0, 3}, {1, 0, 3, 2}}, "A4");
  if (name == "Q8") return quaternion();
  throw InputError("unknown builtin group '" + name + "'");
}

std::vector<std::string> FiniteGroup::builtin_names() {
  return {"Z1", "Z2", "Z3", "Z4", "Z2xZ2", "S3", "Q8", "A4"};
}

}  // namespace fmpo
