#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fmpo/fmpo.h"

namespace {

std::string data(const std::string& name) { return std::string(FMPO_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Cl1 block: B^{00} = 1, B^{01} = theta on a (1|1) bond.
const char* kCl1 = R"({"virtual": {"even": 1, "odd": 1}, "physical": {"even": 1, "odd": 1},
  "closure": "supertrace",
  "coefficients": [[1,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],
                   [0,0],[1,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0]]})";

}  // namespace

TEST(CApi, VersionAndDefaults) {
  EXPECT_NE(std::string(fmpo_version()), "");
  const fmpo_options o = fmpo_options_default();
  EXPECT_EQ(o.tolerance, 1e-10);
  EXPECT_EQ(o.phase_modulus_factor, 2);
}

TEST(CApi, NullHandlesAndBadJson) {
  fmpo_tensor* t = nullptr;
  EXPECT_EQ(fmpo_tensor_from_json(nullptr, &t), FMPO_ERR_NULL);
  EXPECT_EQ(fmpo_tensor_from_json("{", &t), FMPO_ERR_INPUT);
  EXPECT_EQ(t, nullptr);
  EXPECT_NE(std::string(fmpo_last_error()), "");
  int r = 0;
  EXPECT_EQ(fmpo_tensor_rank(nullptr, &r), FMPO_ERR_NULL);
}

TEST(CApi, TensorPermuteTwiceIsIdentity) {
  const char* js = R"({"legs": [{"even": 1, "odd": 1}, {"even": 1, "odd": 1}], "parity": 0,
    "coefficients": [[1,0],[0,0],[0,0],[2,0]]})";
  fmpo_tensor *t = nullptr, *p = nullptr, *q = nullptr;
  ASSERT_EQ(fmpo_tensor_from_json(js, &t), FMPO_OK);
  const int perm[2] = {1, 0};
  ASSERT_EQ(fmpo_tensor_permute(t, perm, 2, &p), FMPO_OK);
  ASSERT_EQ(fmpo_tensor_permute(p, perm, 2, &q), FMPO_OK);
  double diff = 1;
  ASSERT_EQ(fmpo_tensor_max_abs_diff(t, q, &diff), FMPO_OK);
  EXPECT_EQ(diff, 0.0);
  // the odd-odd entry changes sign under the swap
  ASSERT_EQ(fmpo_tensor_max_abs_diff(t, p, &diff), FMPO_OK);
  EXPECT_EQ(diff, 4.0);
  const int bad[2] = {0, 0};
  fmpo_tensor* r = nullptr;
  EXPECT_EQ(fmpo_tensor_permute(t, bad, 2, &r), FMPO_ERR_INPUT);
  char* out = nullptr;
  ASSERT_EQ(fmpo_tensor_to_json(q, &out), FMPO_OK);
  EXPECT_NE(std::string(out).find("coefficients"), std::string::npos);
  fmpo_string_free(out);
  fmpo_tensor_free(t);
  fmpo_tensor_free(p);
  fmpo_tensor_free(q);
}

TEST(CApi, MultiplyMatchesProductOfClosures) {
  fmpo_mpo *a = nullptr, *b = nullptr;
  ASSERT_EQ(fmpo_mpo_from_json(kCl1, &a), FMPO_OK);
  ASSERT_EQ(fmpo_mpo_multiply(a, a, &b), FMPO_OK);
  int D = 0;
  ASSERT_EQ(fmpo_mpo_bond_dim(b, &D), FMPO_OK);
  EXPECT_EQ(D, 4);
  for (int L = 1; L <= 2; ++L) {
    std::size_t n = 0;
    ASSERT_EQ(fmpo_mpo_close(a, L, 4096, &n, nullptr), FMPO_OK);
    std::vector<double> va(2 * n * n), vb(2 * n * n);
    ASSERT_EQ(fmpo_mpo_close(a, L, 4096, &n, va.data()), FMPO_OK);
    ASSERT_EQ(fmpo_mpo_close(b, L, 4096, &n, vb.data()), FMPO_OK);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        double re = 0, im = 0;
        for (std::size_t j = 0; j < n; ++j) {
          const double ar = va[2 * (i * n + j)], ai = va[2 * (i * n + j) + 1];
          const double br = va[2 * (j * n + k)], bi = va[2 * (j * n + k) + 1];
          re += ar * br - ai * bi;
          im += ar * bi + ai * br;
        }
        EXPECT_NEAR(vb[2 * (i * n + k)], re, 1e-12);
        EXPECT_NEAR(vb[2 * (i * n + k) + 1], im, 1e-12);
      }
  }
  int nb = 0, types[4] = {};
  ASSERT_EQ(fmpo_mpo_block_types(a, 1, &nb, types, 4), FMPO_OK);
  ASSERT_EQ(nb, 1);
  EXPECT_EQ(types[0], 1);
  fmpo_mpo_free(a);
  fmpo_mpo_free(b);
}

TEST(CApi, CategoryResiduals) {
  fmpo_category* c = nullptr;
  ASSERT_EQ(fmpo_category_from_json(slurp(data("guwen_z2.json")).c_str(), &c), FMPO_OK);
  int n = 0;
  ASSERT_EQ(fmpo_category_num_labels(c, &n), FMPO_OK);
  EXPECT_EQ(n, 2);
  double pent = 1, sn[3] = {1, 1, 1};
  ASSERT_EQ(fmpo_category_pentagon_residual(c, &pent), FMPO_OK);
  EXPECT_LT(pent, 1e-10);
  ASSERT_EQ(fmpo_category_stringnet_residuals(c, sn), FMPO_OK);
  for (double v : sn) EXPECT_LT(v, 1e-10);
  fmpo_mpo* m = nullptr;
  EXPECT_EQ(fmpo_category_block(c, 5, &m), FMPO_ERR_INPUT);
  ASSERT_EQ(fmpo_category_block(c, 1, &m), FMPO_OK);
  fmpo_mpo_free(m);
  fmpo_category_free(c);
}

TEST(CApi, CommandsReportExitCodes) {
  const fmpo_options o = fmpo_options_default();
  fmpo_report* r = fmpo_cmd_spt_classify("Z2", &o);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(fmpo_report_exit_code(r), 0);
  EXPECT_TRUE(fmpo_report_pass(r));
  EXPECT_NE(std::string(fmpo_report_json(r)).find("Z4"), std::string::npos);
  fmpo_report_free(r);

  r = fmpo_cmd_pentagon(data("guwen_z2_corrupted.json").c_str(), &o);
  EXPECT_EQ(fmpo_report_exit_code(r), 1);
  fmpo_report_free(r);

  r = fmpo_cmd_spt_classify("Z9", &o);
  EXPECT_EQ(fmpo_report_exit_code(r), 2);
  EXPECT_NE(std::string(fmpo_report_text(r)), "");
  fmpo_report_free(r);
}
