#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fmpo/graded.hpp"
#include "support.hpp"

using namespace fmpo;
using fmpo::testing::random_space;
using fmpo::testing::random_tensor;

namespace {

// Sign of reordering a word of basis vectors: count pairs of odd vectors
// whose relative order flips. order[k] = original position of the vector
// that ends up at slot k.
int koszul_sign(const std::vector<int>& parity, const std::vector<int>& order) {
  int s = 0;
  for (std::size_t x = 0; x < order.size(); ++x)
    for (std::size_t y = x + 1; y < order.size(); ++y)
      if (order[x] > order[y] && parity[order[x]] && parity[order[y]]) ++s;
  return s % 2 ? -1 : 1;
}

// Reference contraction: enumerate every pair of entries, reorder the word
// (a legs, b legs) to (free a, paired a reversed, paired b, free b) and sum.
GradedTensor contract_oracle(const GradedTensor& a, const GradedTensor& b,
                             const std::vector<std::pair<int, int>>& pairs) {
  const int ra = a.rank(), rb = b.rank();
  std::vector<int> pa, pb, fa, fb;
  for (const auto& [x, y] : pairs) pa.push_back(x), pb.push_back(y);
  for (int k = 0; k < ra; ++k)
    if (std::find(pa.begin(), pa.end(), k) == pa.end()) fa.push_back(k);
  for (int k = 0; k < rb; ++k)
    if (std::find(pb.begin(), pb.end(), k) == pb.end()) fb.push_back(k);
  std::vector<GradedSpace> legs;
  for (int k : fa) legs.push_back(a.leg(k));
  for (int k : fb) legs.push_back(b.leg(k));
  if (legs.empty()) legs.push_back(GradedSpace(1, 0));
  GradedTensor out(legs, (a.parity() + b.parity()) % 2);
  std::vector<int> order;
  for (int k : fa) order.push_back(k);
  for (auto it = pa.rbegin(); it != pa.rend(); ++it) order.push_back(*it);
  for (int k : pb) order.push_back(ra + k);
  for (int k : fb) order.push_back(ra + k);
  std::vector<int> ia(ra), ib(rb), io;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a[x] == complex{}) continue;
    a.unflatten(x, ia);
    for (std::size_t y = 0; y < b.size(); ++y) {
      if (b[y] == complex{}) continue;
      b.unflatten(y, ib);
      bool match = true;
      for (const auto& [p, q] : pairs) match = match && ia[p] == ib[q];
      if (!match) continue;
      std::vector<int> par;
      for (int k = 0; k < ra; ++k) par.push_back(a.leg(k).parity(ia[k]));
      for (int k = 0; k < rb; ++k) par.push_back(b.leg(k).parity(ib[k]));
      io.clear();
      for (int k : fa) io.push_back(ia[k]);
      for (int k : fb) io.push_back(ib[k]);
      if (io.empty()) io.push_back(0);
      const complex v = out.at(io) + static_cast<double>(koszul_sign(par, order)) * a[x] * b[y];
      out.raw(out.flat_index(io)) = v;
    }
  }
  return out;
}

std::vector<int> random_perm(std::mt19937_64& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST(GradedSpace, RejectsNegativeDimensions) {
  EXPECT_THROW(GradedSpace(-1, 2), InputError);
  EXPECT_EQ(GradedSpace(2, 1).parity(2), 1);
  EXPECT_EQ(GradedSpace(2, 1).parity(1), 0);
}

TEST(GradedTensor, CheckedConstructorRejectsForbiddenSector) {
  const GradedSpace s(1, 1);
  EXPECT_THROW(GradedTensor({s, s}, 0, {1, 1, 0, 1}), InputError);
  EXPECT_NO_THROW(GradedTensor({s, s}, 1, {0, 1, 1, 0}));
  EXPECT_THROW(GradedTensor({s, s}, 0, {1, 0, 0}), InputError);
}

TEST(GradedTensor, SwapOfTwoOddVectorsIsMinusOne) {
  const GradedSpace s(0, 1);
  GradedTensor t({s, s}, 0, {1.0});
  const int p[] = {1, 0};
  EXPECT_EQ(permute_legs(t, p).at({0, 0}), complex(-1.0));
}

TEST(GradedTensor, PermutationSignMatchesInversionCount) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<GradedSpace> legs;
    for (int k = 0; k < n; ++k) legs.push_back(random_space(rng, 2));
    const int parity = static_cast<int>(rng() % 2);
    const GradedTensor t = random_tensor(rng, legs, parity);
    const auto perm = random_perm(rng, n);
    const GradedTensor u = permute_legs(t, perm);
    std::vector<int> idx(n), jdx(n);
    for (std::size_t x = 0; x < t.size(); ++x) {
      t.unflatten(x, idx);
      std::vector<int> par(n);
      for (int k = 0; k < n; ++k) par[k] = legs[k].parity(idx[k]);
      for (int k = 0; k < n; ++k) jdx[k] = idx[perm[k]];
      ASSERT_EQ(u.at(jdx), static_cast<double>(koszul_sign(par, perm)) * t[x]);
    }
  }
}

TEST(GradedTensor, PermutationSignIsAHomomorphism) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    std::vector<GradedSpace> legs;
    for (int k = 0; k < n; ++k) legs.push_back(random_space(rng, 2));
    const GradedTensor t = random_tensor(rng, legs, static_cast<int>(rng() % 2));
    const auto p = random_perm(rng, n), q = random_perm(rng, n);
    std::vector<int> pq(n);  // apply p then q
    for (int k = 0; k < n; ++k) pq[k] = p[q[k]];
    // exact equality: signs only, no arithmetic
    ASSERT_EQ(max_abs_diff(permute_legs(permute_legs(t, p), q), permute_legs(t, pq)), 0.0);
    ASSERT_EQ(max_abs_diff(permute_legs(permute_legs(t, p), inverse_permutation(p)), t), 0.0);
  }
}

TEST(GradedTensor, ContractionMatchesReference) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    const int ra = 1 + static_cast<int>(rng() % 3), rb = 1 + static_cast<int>(rng() % 3);
    const int np = 1 + static_cast<int>(rng() % std::min(ra, rb));
    std::vector<GradedSpace> la, lb;
    for (int k = 0; k < ra; ++k) la.push_back(random_space(rng, 2));
    for (int k = 0; k < rb; ++k) lb.push_back(random_space(rng, 2));
    const auto pa = random_perm(rng, ra), pb = random_perm(rng, rb);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < np; ++k) {
      lb[pb[k]] = la[pa[k]];
      pairs.emplace_back(pa[k], pb[k]);
    }
    const GradedTensor a = random_tensor(rng, la, static_cast<int>(rng() % 2));
    const GradedTensor b = random_tensor(rng, lb, static_cast<int>(rng() % 2));
    ASSERT_LT(max_abs_diff(contract(a, b, pairs), contract_oracle(a, b, pairs)), 1e-12);
  }
}

// 1000 random three-tensor networks: (AB)C and A(BC) agree.
TEST(GradedTensor, ContractionOrderIndependence) {
  std::mt19937_64 rng(14);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // A: (a0, x, y)  B: (x, b0, z)  C: (z, y, c0)
    const GradedSpace x = random_space(rng, 2), y = random_space(rng, 2), z = random_space(rng, 2);
    const GradedSpace a0 = random_space(rng, 2), b0 = random_space(rng, 2), c0 = random_space(rng, 2);
    const GradedTensor A = random_tensor(rng, {a0, x, y}, static_cast<int>(rng() % 2));
    const GradedTensor B = random_tensor(rng, {x, b0, z}, static_cast<int>(rng() % 2));
    const GradedTensor C = random_tensor(rng, {z, y, c0}, static_cast<int>(rng() % 2));
    // (AB): legs a0 y b0 z ; then with C: pairs (y:1 - C1), (z:3 - C0)
    const std::pair<int, int> ab[] = {{1, 0}};
    const std::pair<int, int> ab_c[] = {{3, 0}, {1, 1}};
    const GradedTensor left = contract(contract(A, B, ab), C, ab_c);  // a0 b0 c0
    // (BC): B (x b0 z), C (z y c0) -> x b0 y c0
    const std::pair<int, int> bc[] = {{2, 0}};
    const std::pair<int, int> a_bc[] = {{2, 2}, {1, 0}};
    const GradedTensor right = contract(A, contract(B, C, bc), a_bc);  // a0 b0 c0
    ASSERT_LT(max_abs_diff(left, right), 1e-12) << "trial " << trial;
    ASSERT_EQ(left.homogeneity_violation(), 0.0);
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(GradedTensor, HomogeneityPreservedByAllOperations) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const GradedSpace s = random_space(rng, 3), u = random_space(rng, 3);
    const GradedTensor a = random_tensor(rng, {s, u}, 1), b = random_tensor(rng, {u, s}, 0);
    const std::pair<int, int> p[] = {{1, 0}};
    const int perm[] = {1, 0};
    EXPECT_EQ(contract(a, b, p).homogeneity_violation(), 0.0);
    EXPECT_EQ(contract(a, b, p).parity(), 1);
    EXPECT_EQ(permute_legs(a, perm).homogeneity_violation(), 0.0);
    EXPECT_EQ(tensor_product(a, b).homogeneity_violation(), 0.0);
    EXPECT_EQ(tensor_product(a, b).parity(), 1);
    EXPECT_EQ(apply_parity(a, 0).homogeneity_violation(), 0.0);
    GradedTensor c = a;
    c += a;
    c *= complex(0, 2);
    EXPECT_EQ(c.homogeneity_violation(), 0.0);
  }
}

TEST(GradedTensor, SupertraceOfParityMatrixIsTotalDimension) {
  const GradedSpace s(3, 2);
  EXPECT_EQ(supertrace(parity_matrix(s)), complex(5.0));
  EXPECT_EQ(supertrace(identity_matrix(s)), complex(1.0));
}

TEST(GradedTensor, FullContractionGivesScalarLeg) {
  const GradedSpace s(1, 1);
  const GradedTensor a({s}, 1, {0, 2}), b({s}, 1, {0, 3});
  const std::pair<int, int> p[] = {{0, 0}};
  const GradedTensor c = contract(a, b, p);
  ASSERT_EQ(c.rank(), 1);
  EXPECT_EQ(c.leg(0), GradedSpace(1, 0));
  EXPECT_EQ(c.at({0}), complex(6.0));
}
