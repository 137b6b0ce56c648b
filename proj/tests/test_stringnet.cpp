#include <gtest/gtest.h>

#include <chrono>

#include "fmpo/category_io.hpp"
#include "fmpo/stringnet.hpp"
#include "fmpo/tensor_io.hpp"
#include "support.hpp"

using namespace fmpo;

namespace {

const std::vector<std::string> kShipped = {"trivial.json", "z2_bosonic_trivial.json", "z2_double_semion.json",
                                           "guwen_z2.json", "fibonacci.json"};

FusionCategoryData load(const std::string& name) {
  return parse_category(read_file(fmpo::testing::data_path(name)));
}

template <class F>
double timed(F&& f, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const double r = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

TEST(EdgeSpace, EvenFirstAndOnlyAllowedTriples) {
  const FusionCategoryData d = load("guwen_z2.json");
  const EdgeSpace e = edge_space(d.table.rules);
  ASSERT_EQ(static_cast<int>(e.basis.size()), e.space.dim());
  bool seen_odd = false;
  for (std::size_t k = 0; k < e.basis.size(); ++k) {
    const auto& [x, y, z, mu] = e.basis[k];
    EXPECT_GT(d.table.rules.mult(x, y, z), mu);
    const int p = d.table.rules.dpar(x, y, z, mu);
    EXPECT_EQ(e.space.parity(static_cast<int>(k)), p);
    if (p) seen_odd = true;
    else EXPECT_FALSE(seen_odd);
    EXPECT_EQ(e.index.at(e.basis[k]), static_cast<int>(k));
  }
  EXPECT_TRUE(seen_odd);
}

TEST(VertexTensor, EntriesAreFSymbols) {
  for (const auto& name : kShipped) {
    const FusionCategoryData d = load(name);
    const EdgeSpace e = edge_space(d.table.rules);
    const GradedTensor t = build_vertex_tensor(d);
    std::vector<int> idx(4);
    for (std::size_t x = 0; x < t.size(); ++x) {
      t.unflatten(x, idx);
      const auto& L = e.basis[idx[0]];
      const auto& M = e.basis[idx[1]];
      const auto& D = e.basis[idx[2]];
      const auto& A = e.basis[idx[3]];
      // lambda=(b,l,k), mu=(a,k,e), delta=(f,l,e), alpha=(a,b,f)
      const bool glued = L[2] == M[1] && D[1] == L[1] && D[2] == M[2] && A[0] == M[0] && A[1] == L[0] && A[2] == D[0];
      const complex want = glued ? d.table.get(A[0], A[1], L[1], M[2], A[2], L[2], A[3], D[3], L[3], M[3]) : complex{};
      ASSERT_LT(std::abs(t[x] - want), 1e-14) << name;
    }
  }
}

TEST(VertexTensor, PepsAndFusionVertexCarrySameNumbers) {
  const FusionCategoryData d = load("fibonacci.json");
  const GradedTensor a = build_fpeps_tensor(d), b = build_fusion_vertex(d);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(max_abs_diff(a, b), 0.0);
}

TEST(Identities, AllShippedDataWithinOneMinute) {
  for (const auto& name : kShipped) {
    const FusionCategoryData d = load(name);
    double s = 0;
    EXPECT_LT(timed([&] { return verify_zipper_sn(d); }, s), 1e-10) << name;
    EXPECT_LT(s, 60.0);
    EXPECT_LT(timed([&] { return verify_fmove(d); }, s), 1e-10) << name;
    EXPECT_LT(s, 60.0);
    EXPECT_LT(timed([&] { return verify_pulling_through(d); }, s), 1e-10) << name;
    EXPECT_LT(s, 60.0);
  }
}

TEST(Identities, CorruptedDataFailsTensorIdentities) {
  const FusionCategoryData d = load("guwen_z2_corrupted.json");
  const double worst = std::max({verify_zipper_sn(d), verify_fmove(d), verify_pulling_through(d)});
  EXPECT_GT(worst, 1e-2);
}

TEST(Identities, SizeCapRaisesInputError) {
  const FusionCategoryData d = load("fibonacci.json");
  EXPECT_THROW(verify_fmove(d, 16), InputError);
}

TEST(GroupLaw, GuWenGeneratorSquaresToMinusIdentityBlock) {
  const MultiplicationCheck m = fmpo_multiplication_check(load("guwen_z2.json"), 3);
  EXPECT_LT(m.residual, 1e-10);
  const complex s = m.scalars.at({1, 1});
  EXPECT_LT(std::abs(s + 1.0), 1e-10);
  EXPECT_LT(std::abs(m.scalars.at({0, 1}) - 1.0), 1e-10);
}

TEST(GroupLaw, BosonicBlocksMultiplyAsTheGroup) {
  for (const std::string name : {"z2_bosonic_trivial.json", "z2_double_semion.json"}) {
    const MultiplicationCheck m = fmpo_multiplication_check(load(name), 3);
    EXPECT_LT(m.residual, 1e-10) << name;
    for (const auto& [k, s] : m.scalars) EXPECT_GT(std::abs(s), 1e-6) << name;
  }
}

TEST(GroupCategory, FromSupercocycleReproducesShippedData) {
  const std::string dir = FMPO_DATA_DIR;
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"label_guwen_z2.json", "guwen_z2.json"},
      {"label_trivial_z2.json", "z2_bosonic_trivial.json"},
      {"label_double_semion.json", "z2_double_semion.json"}};
  for (const auto& [label, cat] : pairs) {
    const SptLabel x = parse_label(read_file(dir + "/" + label), dir);
    const FusionCategoryData d = group_category_from_supercocycle(x);
    EXPECT_LT(pentagon_residual(d.table), 1e-10) << label;
    EXPECT_TRUE(gauge_equivalent(d.table, load(cat).table).equivalent) << label;
  }
}

TEST(GroupCategory, RejectsNonzeroFAndInvalidLabel) {
  const FiniteGroup g = FiniteGroup::builtin("Z2");
  SptLabel x = SptLabel::trivial(g, 4);
  x.f[1] = 1;
  EXPECT_THROW(group_category_from_supercocycle(x), InputError);
  SptLabel y = SptLabel::trivial(g, 4);
  y.Z[3] = 1;  // needs odd alpha(1,1,1)
  EXPECT_THROW(group_category_from_supercocycle(y), InputError);
}
