#include "fmpo/supercohomology.hpp"

#include <map>
#include <random>

#include "fmpo/errors.hpp"

namespace fmpo {

namespace {

std::size_t flat(int n, std::initializer_list<int> args) {
  std::size_t f = 0;
  for (int a : args) f = f * n + a;
  return f;
}

std::string tuple_text(const FiniteGroup& g, std::initializer_list<int> args) {
  std::string s = "(";
  for (int a : args) {
    if (s.size() > 1) s += ",";
    s += g.names()[a];
  }
  return s + ")";
}

}  // namespace

SptLabel SptLabel::trivial(const FiniteGroup& g, i64 q) {
  SptLabel x;
  x.group = g;
  const std::size_t n = g.order();
  x.f.assign(n, 0);
  x.Z.assign(n * n, 0);
  x.alpha.assign(n * n * n, 0);
  x.q = q;
  return x;
}

Cochain super_obstruction_term(const FiniteGroup& g, const Cochain& Z, i64 q) {
  check_cochain_size(g, Z, 2);
  if (q % 2) throw InputError("phase modulus must be even");
  const int n = g.order();
  Cochain out(static_cast<std::size_t>(n) * n * n * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          out[flat(n, {a, b, c, d})] = (Z[flat(n, {a, b})] & Z[flat(n, {c, d})] & 1) ? q / 2 : 0;
  return out;
}

LabelDiagnostics verify_super_label(const SptLabel& x) {
  LabelDiagnostics d;
  const FiniteGroup& g = x.group;
  const int n = g.order();
  check_cochain_size(g, x.f, 1);
  check_cochain_size(g, x.Z, 2);
  check_cochain_size(g, x.alpha, 3);
  for (int a = 0; a < n && d.f_homomorphism; ++a)
    for (int b = 0; b < n && d.f_homomorphism; ++b)
      if (mod(x.f[g.mul(a, b)] - x.f[a] - x.f[b], 2) != 0 || x.f[a] < 0 || x.f[a] > 1) {
        d.f_homomorphism = false;
        d.messages.push_back("f is not a homomorphism to Z2 at " + tuple_text(g, {a, b}));
      }
  for (std::size_t k = 0; k < x.Z.size(); ++k)
    if (x.Z[k] < 0 || x.Z[k] > 1) {
      d.Z_normalized = false;
      d.messages.push_back("Z has a value outside {0,1}");
      break;
    }
  if (d.Z_normalized && !is_normalized(g, x.Z, 2)) {
    d.Z_normalized = false;
    d.messages.push_back("Z is not normalized");
  }
  for (int a = 0; a < n && d.Z_cocycle; ++a)
    for (int b = 0; b < n && d.Z_cocycle; ++b)
      for (int c = 0; c < n && d.Z_cocycle; ++c) {
        const i64 lhs = x.Z[flat(n, {b, c})] + x.Z[flat(n, {a, g.mul(b, c)})];
        const i64 rhs = x.Z[flat(n, {a, b})] + x.Z[flat(n, {g.mul(a, b), c})];
        if (mod(lhs - rhs, 2) != 0) {
          d.Z_cocycle = false;
          d.messages.push_back("Z fails the 2-cocycle identity at (g,h,k) = " + tuple_text(g, {a, b, c}));
        }
      }
  if (!is_normalized(g, x.alpha, 3)) {
    d.alpha_normalized = false;
    d.messages.push_back("alpha is not normalized");
  }
  if (x.q % 2) {
    d.alpha_super_cocycle = false;
    d.messages.push_back("phase modulus must be even");
    return d;
  }
  const Cochain da = coboundary(g, x.alpha, 3, x.q);
  Cochain Zb = x.Z;
  for (auto& v : Zb) v &= 1;
  const Cochain rhs = super_obstruction_term(g, Zb, x.q);
  for (int a = 0; a < n && d.alpha_super_cocycle; ++a)
    for (int b = 0; b < n && d.alpha_super_cocycle; ++b)
      for (int c = 0; c < n && d.alpha_super_cocycle; ++c)
        for (int e = 0; e < n && d.alpha_super_cocycle; ++e) {
          const std::size_t k = flat(n, {a, b, c, e});
          if (da[k] != rhs[k]) {
            d.alpha_super_cocycle = false;
            d.messages.push_back("alpha fails the super 3-cocycle equation at (g,h,k,l) = " +
                                 tuple_text(g, {a, b, c, e}));
          }
        }
  return d;
}

SptLabel with_modulus(const SptLabel& x, i64 q) {
  if (q == x.q) return x;
  if (q % x.q != 0) throw InputError("cannot lift phase modulus " + std::to_string(x.q) + " to " + std::to_string(q));
  SptLabel y = x;
  for (auto& v : y.alpha) v = mod(v, x.q) * (q / x.q);
  y.q = q;
  return y;
}

SptLabel stack(const SptLabel& x0, const SptLabel& y0) {
  if (!(x0.group == y0.group)) throw InputError("stacking labels of different groups");
  const i64 q = std::max(x0.q, y0.q) % std::min(x0.q, y0.q) == 0 ? std::max(x0.q, y0.q)
                                                                   : x0.q * y0.q / gcd64(x0.q, y0.q);
  const SptLabel x = with_modulus(x0, q), y = with_modulus(y0, q);
  const FiniteGroup& g = x.group;
  const int n = g.order();
  SptLabel out = x;
  for (int a = 0; a < n; ++a) out.f[a] = mod(x.f[a] + y.f[a], 2);
  for (std::size_t k = 0; k < out.Z.size(); ++k) out.Z[k] = mod(x.Z[k] + y.Z[k], 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const i64 s = x.Z[flat(n, {g.mul(a, b), c})] * y.Z[flat(n, {a, b})] +
                      x.Z[flat(n, {a, g.mul(b, c)})] * y.Z[flat(n, {b, c})];
        const std::size_t k = flat(n, {a, b, c});
        out.alpha[k] = mod(x.alpha[k] + y.alpha[k] + (s % 2) * (q / 2), q);
      }
  return out;
}

SuperCocycleSolutions solve_super_cocycle(const FiniteGroup& g, const Cochain& Z, int modulus_factor) {
  SptLabel probe = SptLabel::trivial(g, 2);
  probe.Z = Z;
  const LabelDiagnostics d = verify_super_label(probe);
  if (!d.Z_normalized || !d.Z_cocycle) throw InputError("Z is not a normalized 2-cocycle");
  SuperCocycleSolutions out;
  out.q = static_cast<i64>(modulus_factor) * g.order();
  if (out.q % 2) throw InputError("phase modulus must be even");
  Cohomology h3(g, 3, out.q, true, {}, {super_obstruction_term(g, Z, out.q)});
  const auto& p = h3.particular_solution(0);
  if (!p) {
    out.obstructed = true;
    return out;
  }
  out.particular = *p;
  const auto& ord = h3.orders();
  std::vector<i64> c(ord.size(), 0);
  for (;;) {
    Cochain a = h3.representative(c);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = mod(a[k] + out.particular[k], out.q);
    out.classes.push_back(std::move(a));
    std::size_t j = 0;
    while (j < ord.size() && ++c[j] == ord[j]) c[j++] = 0;
    if (j == ord.size()) break;
  }
  return out;
}

SupercohomologyGroup::SupercohomologyGroup(const FiniteGroup& g, int modulus_factor, const CohomologyOptions& opt)
    : group_(g), factor_(modulus_factor), q_(static_cast<i64>(modulus_factor) * g.order()) {
  if (q_ % 2) throw InputError("phase modulus must be even");
  h2_ = std::make_shared<Cohomology>(g, 2, 2, false, opt);
  std::vector<std::vector<i64>> zclasses;
  {
    std::vector<i64> c(h2_->orders().size(), 0);
    for (;;) {
      zclasses.push_back(c);
      std::size_t j = 0;
      while (j < c.size() && ++c[j] == h2_->orders()[j]) c[j++] = 0;
      if (j == c.size()) break;
    }
  }
  std::vector<Cochain> rhs;
  for (const auto& zc : zclasses) rhs.push_back(super_obstruction_term(g, canonical_z(zc), q_));
  h3_ = std::make_shared<Cohomology>(g, 3, q_, true, opt, rhs);
  for (std::size_t k = 0; k < zclasses.size(); ++k) {
    const auto& p = h3_->particular_solution(static_cast<int>(k));
    if (!p) {
      obstructed_.push_back(zclasses[k]);
      continue;
    }
    admissible_.push_back(zclasses[k]);
    // the trivial Z class gets the zero solution so that element 0 is the unit
    particular_.push_back(k == 0 ? Cochain(p->size(), 0) : *p);
  }
  const auto& ord = h3_->orders();
  for (std::size_t z = 0; z < admissible_.size(); ++z) {
    std::vector<i64> c(ord.size(), 0);
    for (;;) {
      elements_.push_back({static_cast<int>(z), c});
      std::size_t j = 0;
      while (j < ord.size() && ++c[j] == ord[j]) c[j++] = 0;
      if (j == ord.size()) break;
    }
  }

  // group structure from element orders
  std::map<i64, std::vector<int>> order_count;  // prime -> counts of elements with order | p^k
  std::vector<int> orders(elements_.size());
  for (int k = 0; k < size(); ++k) orders[k] = element_order(k);
  i64 N = size();
  std::vector<i64> cyclic;
  for (i64 p = 2; N > 1; ++p) {
    if (N % p) continue;
    int e = 0;
    while (N % p == 0) {
      N /= p;
      ++e;
    }
    // c_k = log_p #{x : ord(x) | p^k}
    std::vector<int> c(e + 1, 0);
    for (int k = 1; k <= e; ++k) {
      i64 pk = 1;
      for (int t = 0; t < k; ++t) pk *= p;
      i64 cnt = 0;
      for (int o : orders)
        if (pk % o == 0) ++cnt;
      int lg = 0;
      while (cnt > 1) {
        if (cnt % p) throw ConsistencyError("element order statistics are not those of an abelian group");
        cnt /= p;
        ++lg;
      }
      c[k] = lg;
    }
    // number of cyclic p-factors of order >= p^k is c_k - c_{k-1}
    for (int k = 1; k <= e; ++k) {
      const int ge_k = c[k] - c[k - 1];
      const int ge_k1 = k < e ? c[k + 1] - c[k] : 0;
      i64 pk = 1;
      for (int t = 0; t < k; ++t) pk *= p;
      for (int r = 0; r < ge_k - ge_k1; ++r) cyclic.push_back(pk);
    }
  }
  invariant_factors_ = fmpo::invariant_factors(cyclic);
  i64 prod = 1;
  for (i64 f : invariant_factors_) prod *= f;
  if (prod != size()) throw ConsistencyError("supercohomology group order does not match its element count");
}

Cochain SupercohomologyGroup::canonical_z(const std::vector<i64>& zc) const {
  Cochain z = h2_->representative(zc);
  for (auto& v : z) v = mod(v, 2);
  return z;
}

SptLabel SupercohomologyGroup::representative(int k) const {
  const Element& e = elements_.at(k);
  SptLabel x = SptLabel::trivial(group_, q_);
  x.Z = canonical_z(admissible_[e.zslot]);
  Cochain a = h3_->representative(e.acoords);
  for (std::size_t t = 0; t < a.size(); ++t) x.alpha[t] = mod(a[t] + particular_[e.zslot][t], q_);
  return x;
}

int SupercohomologyGroup::class_of(const SptLabel& x0) const {
  if (!(x0.group == group_)) throw InputError("label belongs to a different group");
  for (i64 v : x0.f)
    if (mod(v, 2)) throw InputError("supercohomology classes need f = 0");
  SptLabel x;
  if (x0.q == q_) {
    x = x0;
  } else if (q_ % x0.q == 0) {
    x = with_modulus(x0, q_);
  } else if (x0.q % q_ == 0) {
    x = x0;
    for (auto& v : x.alpha) {
      if (mod(v, x0.q) % (x0.q / q_)) throw InputError("alpha is not representable at the group modulus");
      v = mod(v, x0.q) / (x0.q / q_);
    }
    x.q = q_;
  } else {
    throw InputError("incompatible phase modulus");
  }
  Cochain zb = x.Z;
  for (auto& v : zb) v = mod(v, 2);
  const std::vector<i64> zc = h2_->class_of(zb);
  if (canonical_z(zc) != zb)
    throw InputError("Z differs from the canonical representative of its class by a coboundary");
  int zslot = -1;
  for (std::size_t k = 0; k < admissible_.size(); ++k)
    if (admissible_[k] == zc) zslot = static_cast<int>(k);
  if (zslot < 0) throw InputError("Z class is obstructed; no alpha solves the super 3-cocycle equation");
  Cochain a = x.alpha;
  for (std::size_t t = 0; t < a.size(); ++t) a[t] = mod(a[t] - particular_[zslot][t], q_);
  if (!h3_->is_cocycle(a)) throw InputError("alpha does not solve the super 3-cocycle equation for this Z");
  const std::vector<i64> ac = h3_->class_of(a);
  const auto& ord = h3_->orders();
  int idx = 0;
  for (std::size_t j = ord.size(); j-- > 0;) idx = idx * static_cast<int>(ord[j]) + static_cast<int>(ac[j]);
  return zslot * static_cast<int>(h3_->size()) + idx;
}

int SupercohomologyGroup::product(int a, int b) const { return class_of(stack(representative(a), representative(b))); }

int SupercohomologyGroup::element_order(int k) const {
  if (k == 0) return 1;
  const SptLabel x = representative(k);
  SptLabel p = x;
  for (int o = 1; o <= size(); ++o) {
    if (class_of(p) == 0) return o;
    p = stack(p, x);
  }
  throw ConsistencyError("element order exceeds the group size");
}

int SupercohomologyGroup::well_definedness_violations(int trials, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, size() - 1);
  std::uniform_int_distribution<i64> val(0, q_ - 1);
  const int n = group_.order();
  int bad = 0;
  for (int t = 0; t < trials; ++t) {
    const int a = pick(rng), b = pick(rng);
    SptLabel x = representative(a), y = representative(b);
    for (SptLabel* lab : {&x, &y}) {
      Cochain beta(static_cast<std::size_t>(n) * n, 0);
      for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
          if (g != group_.identity() && h != group_.identity()) beta[flat(n, {g, h})] = val(rng);
      const Cochain db = coboundary(group_, beta, 2, q_);
      for (std::size_t k = 0; k < db.size(); ++k) lab->alpha[k] = mod(lab->alpha[k] + db[k], q_);
    }
    if (class_of(stack(x, y)) != product(a, b)) ++bad;
  }
  return bad;
}

SupercohomologyGroup build_supercohomology(const FiniteGroup& g, int modulus_factor, int trials, std::uint64_t seed) {
  int factor = modulus_factor;
  for (int attempt = 0; attempt < 3; ++attempt, factor *= 2) {
    SupercohomologyGroup sg(g, factor);
    if (sg.well_definedness_violations(trials, seed) == 0) return sg;
  }
  throw ConsistencyError("stacking is not well defined on classes at any tried modulus");
}

}  // namespace fmpo
