#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "fmpo/category_io.hpp"
#include "fmpo/fusion.hpp"
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

// Pentagon for multiplicity-free tables, scalar form. s(a,b,c) is the parity
// of the (single) vertex in V_ab^c.
double pentagon_oracle(const AssociatorTable& t) {
  const FusionRules& r = t.rules;
  const int n = r.num_labels;
  auto F = [&](int a, int b, int c, int d, int e, int f) { return t.get(a, b, c, d, e, f, 0, 0, 0, 0); };
  auto s = [&](int a, int b, int c) { return r.dpar(a, b, c, 0); };
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f)
              for (int g = 0; g < n; ++g)
                for (int k = 0; k < n; ++k)
                  for (int l = 0; l < n; ++l) {
                    if (!r.mult(a, b, f) || !r.mult(f, c, g) || !r.mult(g, d, e) || !r.mult(c, d, l) ||
                        !r.mult(b, l, k) || !r.mult(a, k, e))
                      continue;
                    complex lhs = F(f, c, d, e, g, l) * F(a, b, l, e, f, k);
                    if (s(c, d, l) && s(a, b, f)) lhs = -lhs;
                    complex rhs{};
                    for (int h = 0; h < n; ++h)
                      if (r.mult(b, c, h) && r.mult(a, h, g) && r.mult(h, d, k))
                        rhs += F(a, b, c, g, f, h) * F(a, h, d, e, g, k) * F(b, c, d, k, h, l);
                    worst = std::max(worst, std::abs(lhs - rhs));
                  }
  return worst;
}

bool multiplicity_free(const FusionRules& r) {
  for (const auto& [k, v] : r.N)
    if (v > 1) return false;
  return true;
}

// Fibonacci in the standard symmetric gauge.
AssociatorTable fibonacci_reference(const FusionRules& rules) {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  AssociatorTable t;
  t.rules = rules;
  for (const FKey& k : t.admissible_keys()) t.F[k] = 1.0;
  t.F[{1, 1, 1, 1, 0, 0, 0, 0, 0, 0}] = 1 / phi;
  t.F[{1, 1, 1, 1, 0, 1, 0, 0, 0, 0}] = 1 / std::sqrt(phi);
  t.F[{1, 1, 1, 1, 1, 0, 0, 0, 0, 0}] = 1 / std::sqrt(phi);
  t.F[{1, 1, 1, 1, 1, 1, 0, 0, 0, 0}] = -1 / phi;
  return t;
}

GaugeMatrices random_gauge(const FusionRules& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ph(0, 2 * M_PI), mag(0.5, 2.0);
  GaugeMatrices g;
  for (const auto& [k, v] : r.N) {
    if (k[0] == 0 || k[1] == 0) continue;  // keep the gauge normalized
    g[k] = Mat::Constant(1, 1, std::polar(mag(rng), ph(rng)));
  }
  return g;
}

}  // namespace

TEST(Pentagon, ShippedDataSatisfyPentagon) {
  for (const auto& name : kShipped) {
    const FusionCategoryData d = load(name);
    EXPECT_LT(pentagon_residual(d.table), 1e-10) << name;
    ASSERT_TRUE(multiplicity_free(d.table.rules));
    EXPECT_LT(pentagon_oracle(d.table), 1e-10) << name;
    EXPECT_TRUE(validate_table(d.table).empty()) << name;
  }
}

TEST(Pentagon, CorruptionIsDetected) {
  EXPECT_GT(pentagon_residual(load("guwen_z2_corrupted.json").table), 1e-2);
  for (const auto& name : kShipped) {
    FusionCategoryData d = load(name);
    const int top = d.table.rules.num_labels - 1;
    FKey target{};
    for (const FKey& k : d.table.admissible_keys())
      if (k[0] == top && k[1] == top && k[2] == top) target = k;
    d.table.F[target] *= 2.0;
    EXPECT_GT(pentagon_residual(d.table), 1e-2) << name;
    EXPECT_GT(pentagon_oracle(d.table), 1e-2) << name;
  }
}

TEST(Pentagon, ConjugateGuWenSolvesPentagonButIsNotGaugeEquivalent) {
  const FusionCategoryData d = load("guwen_z2.json");
  const complex f = d.table.get(1, 1, 1, 1, 0, 0, 0, 0, 0, 0);
  EXPECT_LT(std::abs(std::abs(f.imag()) - 1), 1e-12);
  EXPECT_LT(std::abs(f.real()), 1e-12);
  AssociatorTable conj = d.table;
  for (auto& [k, v] : conj.F) v = std::conj(v);
  EXPECT_LT(pentagon_residual(conj), 1e-10);
  EXPECT_FALSE(gauge_equivalent(d.table, conj).equivalent);
  EXPECT_TRUE(gauge_equivalent(d.table, d.table).equivalent);
}

TEST(Pentagon, DoubleSemionSign) {
  const FusionCategoryData d = load("z2_double_semion.json");
  EXPECT_LT(std::abs(d.table.get(1, 1, 1, 1, 0, 0, 0, 0, 0, 0) + 1.0), 1e-12);
  EXPECT_FALSE(gauge_equivalent(d.table, load("z2_bosonic_trivial.json").table).equivalent);
}

TEST(Gauge, RandomGaugePreservesPentagonAndEquivalence) {
  std::mt19937_64 rng(31);
  for (const auto& name : kShipped) {
    const FusionCategoryData d = load(name);
    const AssociatorTable g = gauge_transform(d.table, random_gauge(d.table.rules, rng));
    EXPECT_LT(pentagon_residual(g), 1e-10) << name;
    EXPECT_TRUE(gauge_equivalent(g, d.table).equivalent) << name;
  }
}

TEST(Gauge, RejectsOddOrSingularGauge) {
  const FusionCategoryData d = load("fibonacci.json");
  GaugeMatrices g;
  g[{1, 1, 0}] = Mat::Zero(1, 1);
  EXPECT_THROW(gauge_transform(d.table, g), InputError);
  g[{1, 1, 0}] = Mat::Identity(2, 2);
  EXPECT_THROW(gauge_transform(d.table, g), InputError);
}

TEST(Fibonacci, MatchesGoldenRatioSolution) {
  const FusionCategoryData d = load("fibonacci.json");
  EXPECT_LT(pentagon_oracle(fibonacci_reference(d.table.rules)), 1e-12);
  EXPECT_TRUE(gauge_equivalent(d.table, fibonacci_reference(d.table.rules)).equivalent);
  EXPECT_LT(unitarity_residual(d.table), 1e-10);
  const FMatrix m = f_matrix(d.table, 1, 1, 1, 1);
  ASSERT_EQ(m.m.rows(), 2);
  EXPECT_NEAR(std::abs(m.m(0, 0)), 2 / (1 + std::sqrt(5.0)), 1e-10);
}

TEST(Fibonacci, BlocksFuseAsTauTauIsOnePlusTau) {
  const FusionCategoryData d = load("fibonacci.json");
  const std::vector<FmpoSiteTensor> lib{build_fmpo_tensor(d, 0), build_fmpo_tensor(d, 1)};
  const FusionRuleFit fit = fusion_rules(lib[1], lib[1], lib, 3);
  EXPECT_EQ(fit.rounded, (std::vector<int>{1, 1}));
  EXPECT_LT(fit.residual, 1e-8);
  const FusionRuleFit unit = fusion_rules(lib[0], lib[1], lib, 3);
  EXPECT_EQ(unit.rounded, (std::vector<int>{0, 1}));
}

TEST(Unitarity, ShippedDataAreUnitary) {
  for (const auto& name : kShipped) {
    const FusionCategoryData d = load(name);
    ASSERT_TRUE(d.unitary) << name;
    EXPECT_LT(unitarity_residual(d.table), 1e-10) << name;
  }
}

TEST(Validate, ForbiddenChannelIsReported) {
  FusionCategoryData d = load("z2_bosonic_trivial.json");
  d.table.F[{1, 1, 1, 0, 0, 0, 0, 0, 0, 0}] = 1.0;
  EXPECT_FALSE(validate_table(d.table).empty());
}

TEST(RoundTrip, ZippersRecoverInputUpToGauge) {
  for (const auto& name : kShipped) {
    const auto t0 = std::chrono::steady_clock::now();
    const FusionCategoryData d = load(name);
    std::vector<FmpoSiteTensor> blocks;
    for (int a = 0; a < d.table.rules.num_labels; ++a) blocks.push_back(build_fmpo_tensor(d, a));
    const ZipperData z = solve_all_zippers(blocks);
    const AssociatorTable F = compute_f_symbols(z);
    EXPECT_LT(fmove_residual(z, F), 1e-8) << name;
    EXPECT_LT(pentagon_residual(F), 1e-8) << name;
    const GaugeComparison g = gauge_equivalent(F, d.table, 1e-8);
    EXPECT_TRUE(g.equivalent) << name << ": " << g.reason;
    EXPECT_LT(std::max(g.magnitude_residual, g.phase_residual), 1e-8) << name;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    RecordProperty(name, std::to_string(secs));
  }
}

TEST(RoundTrip, IndependentOfZipperBasisPhases) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> ph(0, 2 * M_PI);
  for (const std::string name : {"guwen_z2.json", "fibonacci.json"}) {
    const FusionCategoryData d = load(name);
    std::vector<FmpoSiteTensor> blocks;
    for (int a = 0; a < d.table.rules.num_labels; ++a) blocks.push_back(build_fmpo_tensor(d, a));
    ZipperData z = solve_all_zippers(blocks);
    const AssociatorTable F0 = compute_f_symbols(z);
    for (auto& [k, set] : z.X)
      for (Mat& x : set.X) x *= std::polar(1.0, ph(rng));
    const AssociatorTable F1 = compute_f_symbols(z);
    EXPECT_LT(fmove_residual(z, F1), 1e-8) << name;
    EXPECT_TRUE(gauge_equivalent(F0, F1).equivalent) << name;
    EXPECT_TRUE(gauge_equivalent(F1, d.table).equivalent) << name;
  }
}

TEST(RoundTrip, ZipperFusionRulesAreTheTransposedTable) {
  const FusionCategoryData d = load("guwen_z2.json");
  std::vector<FmpoSiteTensor> blocks;
  for (int a = 0; a < 2; ++a) blocks.push_back(build_fmpo_tensor(d, a));
  const FusionRules r = fusion_rules_from_zippers(solve_all_zippers(blocks));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) EXPECT_EQ(r.mult(a, b, c), d.table.rules.mult(b, a, c));
}
