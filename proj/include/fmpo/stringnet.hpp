#pragma once

// String-net fMPO and fPEPS tensors built from F-symbols, and the tensor
// identities they satisfy.
//
// Every virtual/physical index lives on the edge space E spanned by
// |x, y, z, mu> with N_{xy}^z > 0 and mu a degeneracy label; only mu
// carries parity. The basic four-leg tensor with legs
//   [lambda=(b,l,k), mu=(a,k,e), delta=(f,l,e), alpha=(a,b,f)]
// has coefficient [F^{abl}_e]^{k lambda mu}_{f alpha delta}.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fmpo/fusion.hpp"
#include "fmpo/supercohomology.hpp"

namespace fmpo {

struct EdgeSpace {
  std::vector<std::array<int, 4>> basis;  // (x, y, z, mu), even-first
  std::map<std::array<int, 4>, int> index;
  GradedSpace space;
};

EdgeSpace edge_space(const FusionRules& r);

// The basic tensor on E x E x E x E.
GradedTensor build_vertex_tensor(const FusionCategoryData& data);

// fMPO site tensor of block a: legs (mu, lambda, delta, alpha) with both
// virtual legs restricted to edges whose first label is a.
FmpoSiteTensor build_fmpo_tensor(const FusionCategoryData& data, int a);

// fPEPS tensor with legs [nu=(c,d,l), lambda=(b,l,k), rho=(h,d,k), sigma=(b,c,h)]
// and coefficient [F^{bcd}_k]^{l nu lambda}_{h sigma rho}; nu is the physical leg.
GradedTensor build_fpeps_tensor(const FusionCategoryData& data);

// Fusion-vertex tensor with legs [sigma, psi, beta, alpha] and coefficient
// [F^{abc}_g]^{h sigma psi}_{f alpha beta}.
GradedTensor build_fusion_vertex(const FusionCategoryData& data);

double verify_zipper_sn(const FusionCategoryData& data, std::size_t max_dense = 1u << 26);
double verify_fmove(const FusionCategoryData& data, std::size_t max_dense = 1u << 26);
double verify_pulling_through(const FusionCategoryData& data, std::size_t max_dense = 1u << 26);

// Objects = group elements, N_{gh}^{gh} = 1, |mu| = Z(g,h), and
// [F^{g h k}_{ghk}]^{hk}_{gh} = exp(2 pi i alpha(g,h,k) / q). Requires f = 0.
FusionCategoryData group_category_from_supercocycle(const SptLabel& x);

struct MultiplicationCheck {
  double residual = 0.0;  // worst relative deviation from proportionality
  std::map<std::array<int, 2>, complex> scalars;  // O_g O_h = s O_{gh}
};
// Group-like data only (every product has a single outcome).
MultiplicationCheck fmpo_multiplication_check(const FusionCategoryData& data, int L_max,
                                              std::size_t max_dense_dim = 4096);

}  // namespace fmpo
