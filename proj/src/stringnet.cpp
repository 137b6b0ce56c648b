#include "fmpo/stringnet.hpp"

#include <cmath>
#include <numbers>

namespace fmpo {

EdgeSpace edge_space(const FusionRules& r) {
  EdgeSpace E;
  int ne = 0;
  for (int want = 0; want < 2; ++want)
    for (const auto& [k, n] : r.N)
      for (int mu = 0; mu < n; ++mu)
        if (r.dpar(k[0], k[1], k[2], mu) == want) {
          E.index[{k[0], k[1], k[2], mu}] = static_cast<int>(E.basis.size());
          E.basis.push_back({k[0], k[1], k[2], mu});
          if (want == 0) ++ne;
        }
  if (E.basis.empty()) throw InputError("fusion rules have no admissible channel");
  E.space = GradedSpace(ne, static_cast<int>(E.basis.size()) - ne);
  return E;
}

GradedTensor build_vertex_tensor(const FusionCategoryData& data) {
  const AssociatorTable& t = data.table;
  const EdgeSpace E = edge_space(t.rules);
  const GradedSpace& S = E.space;
  GradedTensor T({S, S, S, S}, 0);
  for (const auto& [a, b, f, al] : E.basis)
    for (const auto& lam : E.basis) {
      if (lam[0] != b) continue;
      const int l = lam[1], k = lam[2];
      for (const auto& mu : E.basis) {
        if (mu[0] != a || mu[1] != k) continue;
        const int e = mu[2];
        auto it = E.index.find({f, l, e, 0});
        if (it == E.index.end()) continue;
        for (int de = 0; de < t.rules.mult(f, l, e); ++de) {
          const complex v = t.get(a, b, l, e, f, k, al, de, lam[3], mu[3]);
          if (v == complex{}) continue;
          T.set({E.index.at(lam), E.index.at(mu), E.index.at({f, l, e, de}), E.index.at({a, b, f, al})}, v);
        }
      }
    }
  return T;
}

FmpoSiteTensor build_fmpo_tensor(const FusionCategoryData& data, int a) {
  const EdgeSpace E = edge_space(data.table.rules);
  if (a < 0 || a >= data.table.rules.num_labels) throw InputError("block label out of range");
  const int perm[] = {1, 0, 2, 3};  // (lambda, mu, delta, alpha) -> (mu, lambda, delta, alpha)
  const GradedTensor T = permute_legs(build_vertex_tensor(data), perm);
  std::vector<int> sub;
  int ne = 0;
  for (std::size_t x = 0; x < E.basis.size(); ++x)
    if (E.basis[x][0] == a) {
      sub.push_back(static_cast<int>(x));
      if (!E.space.parity(static_cast<int>(x))) ++ne;
    }
  if (sub.empty()) throw InputError("block has no edges");
  const GradedSpace V(ne, static_cast<int>(sub.size()) - ne);
  const int d = E.space.dim();
  GradedTensor out({V, E.space, E.space, V}, 0);
  for (int x = 0; x < V.dim(); ++x)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int y = 0; y < V.dim(); ++y) {
          const complex v = T.at({sub[x], i, j, sub[y]});
          if (v != complex{}) out.set({x, i, j, y}, v);
        }
  return FmpoSiteTensor(std::move(out));
}

GradedTensor build_fpeps_tensor(const FusionCategoryData& data) {
  // [F^{bcd}_k]^{l nu lambda}_{h sigma rho} is the vertex tensor with
  // (a,b,l,e,f,k) -> (b,c,d,k,h,l); its legs land in the order
  // [nu, lambda, rho, sigma].
  return build_vertex_tensor(data);
}

GradedTensor build_fusion_vertex(const FusionCategoryData& data) {
  // [F^{abc}_g]^{h sigma psi}_{f alpha beta}: same relabelling, legs
  // [sigma, psi, beta, alpha].
  return build_vertex_tensor(data);
}

namespace {

// Both sides of the graded identity
//   sum_delta A[lam,mu,delta,alpha] B[nu,delta,gamma,beta]
//     = sum C[nu,lam,rho,sigma] D[rho,mu,gamma,psi] X[sigma,psi,beta,alpha]
// compared in the leg order (lam, mu, alpha, nu, gamma, beta).
double graded_identity(const GradedTensor& A, const GradedTensor& B, const GradedTensor& C, const GradedTensor& D,
                       const GradedTensor& X, std::size_t max_dense) {
  std::size_t sz = 1;
  for (int k = 0; k < 6; ++k) sz *= static_cast<std::size_t>(A.leg(0).dim());
  if (sz > max_dense) throw InputError("string-net check exceeds the dense size cap");
  const std::pair<int, int> p1[] = {{2, 1}};
  const GradedTensor lhs = contract(A, B, p1);  // lam mu alpha nu gamma beta
  const std::pair<int, int> p2[] = {{2, 0}};
  const GradedTensor r1 = contract(C, D, p2);  // nu lam sigma mu gamma psi
  const std::pair<int, int> p3[] = {{2, 0}, {5, 1}};
  const GradedTensor r2 = contract(r1, X, p3);  // nu lam mu gamma beta alpha
  const int perm[] = {1, 2, 5, 0, 3, 4};
  return max_abs_diff(lhs, permute_legs(r2, perm));
}

}  // namespace

double verify_zipper_sn(const FusionCategoryData& data, std::size_t max_dense) {
  const GradedTensor T = build_vertex_tensor(data);
  const GradedTensor X = build_fusion_vertex(data);
  // two fMPO tensors zipped into one through the fusion tensor
  return graded_identity(T, T, T, T, X, max_dense);
}

double verify_fmove(const FusionCategoryData& data, std::size_t max_dense) {
  const GradedTensor X = build_fusion_vertex(data);
  return graded_identity(X, X, X, X, X, max_dense);
}

double verify_pulling_through(const FusionCategoryData& data, std::size_t max_dense) {
  const GradedTensor T = build_vertex_tensor(data);
  const GradedTensor P = build_fpeps_tensor(data);
  // fMPO tensors pulled through the fPEPS vertex
  return graded_identity(T, T, P, T, T, max_dense);
}

FusionCategoryData group_category_from_supercocycle(const SptLabel& x) {
  const LabelDiagnostics diag = verify_super_label(x);
  if (!diag.ok()) {
    std::string msg = "label fails verification:";
    for (const auto& m : diag.messages) msg += " " + m + ";";
    throw InputError(msg);
  }
  for (i64 v : x.f)
    if (v) throw InputError("labels with nontrivial f have no group-like fusion category here");
  const FiniteGroup& g = x.group;
  const int n = g.order();
  FusionCategoryData data;
  data.names = g.names();
  data.label_parity.assign(n, 0);
  data.unitary = true;
  AssociatorTable& t = data.table;
  t.rules.num_labels = n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      t.rules.N[{a, b, g.mul(a, b)}] = 1;
      t.rules.deg_parity[{a, b, g.mul(a, b), 0}] = static_cast<int>(x.Z[static_cast<std::size_t>(a) * n + b]);
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int e = g.mul(a, b), f = g.mul(b, c), d = g.mul(e, c);
        const double ph = 2 * std::numbers::pi * static_cast<double>(x.alpha[(static_cast<std::size_t>(a) * n + b) * n + c]) / x.q;
        t.F[{a, b, c, d, e, f, 0, 0, 0, 0}] = std::polar(1.0, ph);
      }
  return data;
}

MultiplicationCheck fmpo_multiplication_check(const FusionCategoryData& data, int L_max, std::size_t max_dense_dim) {
  const FusionRules& r = data.table.rules;
  const int n = r.num_labels;
  std::vector<Fmpo> O;
  for (int a = 0; a < n; ++a) O.push_back(Fmpo::with_supertrace(build_fmpo_tensor(data, a)));
  MultiplicationCheck out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto oc = r.outcomes(a, b);
      if (oc.size() != 1 || r.mult(a, b, oc[0]) != 1)
        throw InputError("multiplication check needs group-like fusion rules");
      const Fmpo prod = multiply(O[a], O[b]);
      complex s{};
      bool have = false;
      for (int L = 1; L <= L_max; ++L) {
        const Mat lhs = close_to_operator(prod, L, max_dense_dim).m;
        const Mat rhs = close_to_operator(O[oc[0]], L, max_dense_dim).m;
        if (!have) {
          const complex den = rhs.cwiseAbs2().sum();
          if (std::abs(den) == 0.0) throw ConsistencyError("closed fMPO vanishes");
          s = (rhs.adjoint() * lhs).trace() / den;
          have = true;
        }
        const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
        out.residual = std::max(out.residual, (lhs - s * rhs).cwiseAbs().maxCoeff() / scale);
      }
      out.scalars[{a, b}] = s;
    }
  return out;
}

}  // namespace fmpo
