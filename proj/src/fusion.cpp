#include "fmpo/fusion.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "fmpo/modular.hpp"

namespace fmpo {

int FusionRules::mult(int a, int b, int c) const {
  auto it = N.find({a, b, c});
  return it == N.end() ? 0 : it->second;
}

int FusionRules::dpar(int a, int b, int c, int mu) const {
  auto it = deg_parity.find({a, b, c, mu});
  return it == deg_parity.end() ? 0 : it->second;
}

std::vector<int> FusionRules::outcomes(int a, int b) const {
  std::vector<int> out;
  for (int c = 0; c < num_labels; ++c)
    if (mult(a, b, c) > 0) out.push_back(c);
  return out;
}

complex AssociatorTable::get(const FKey& k) const {
  auto it = F.find(k);
  return it == F.end() ? complex{} : it->second;
}

std::vector<FKey> AssociatorTable::admissible_keys() const {
  std::vector<FKey> keys;
  const int n = rules.num_labels;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e : rules.outcomes(a, b))
            for (int f : rules.outcomes(b, c))
              for (int al = 0; al < rules.mult(a, b, e); ++al)
                for (int be = 0; be < rules.mult(e, c, d); ++be)
                  for (int mu = 0; mu < rules.mult(b, c, f); ++mu)
                    for (int nu = 0; nu < rules.mult(a, f, d); ++nu) keys.push_back({a, b, c, d, e, f, al, be, mu, nu});
  return keys;
}

FMatrix f_matrix(const AssociatorTable& t, int a, int b, int c, int d) {
  const FusionRules& r = t.rules;
  FMatrix fm;
  for (int e : r.outcomes(a, b))
    for (int al = 0; al < r.mult(a, b, e); ++al)
      for (int be = 0; be < r.mult(e, c, d); ++be) fm.rows.push_back({e, al, be});
  for (int f : r.outcomes(b, c))
    for (int mu = 0; mu < r.mult(b, c, f); ++mu)
      for (int nu = 0; nu < r.mult(a, f, d); ++nu) fm.cols.push_back({f, mu, nu});
  fm.m = Mat::Zero(fm.rows.size(), fm.cols.size());
  for (std::size_t i = 0; i < fm.rows.size(); ++i)
    for (std::size_t j = 0; j < fm.cols.size(); ++j) {
      const auto& [e, al, be] = fm.rows[i];
      const auto& [f, mu, nu] = fm.cols[j];
      fm.m(i, j) = t.get(a, b, c, d, e, f, al, be, mu, nu);
    }
  return fm;
}

std::vector<std::string> validate_table(const AssociatorTable& t, double tol) {
  std::vector<std::string> problems;
  const FusionRules& r = t.rules;
  const int n = r.num_labels;
  auto key_text = [](const FKey& k) {
    std::string s = "(";
    for (int i = 0; i < 10; ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + ")";
  };
  for (const auto& [k, v] : t.F) {
    for (int i = 0; i < 6; ++i)
      if (k[i] < 0 || k[i] >= n) {
        problems.push_back("F entry " + key_text(k) + " uses an unknown label");
        goto next;
      }
    {
      const auto [a, b, c, d, e, f, al, be, mu, nu] = k;
      if (al >= r.mult(a, b, e) || be >= r.mult(e, c, d) || mu >= r.mult(b, c, f) || nu >= r.mult(a, f, d) ||
          al < 0 || be < 0 || mu < 0 || nu < 0) {
        if (std::abs(v) > 0) problems.push_back("F entry " + key_text(k) + " sits on a forbidden fusion channel");
        continue;
      }
      const int p = r.dpar(a, b, e, al) + r.dpar(e, c, d, be) + r.dpar(b, c, f, mu) + r.dpar(a, f, d, nu);
      if ((p & 1) && std::abs(v) > tol) problems.push_back("F entry " + key_text(k) + " is Z2-odd");
    }
  next:;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const FMatrix fm = f_matrix(t, a, b, c, d);
          if (fm.rows.empty() && fm.cols.empty()) continue;
          const std::string tag = "F^{" + std::to_string(a) + std::to_string(b) + std::to_string(c) + "}_" + std::to_string(d);
          if (fm.rows.size() != fm.cols.size()) {
            problems.push_back(tag + " is not square: fusion spaces of the two trees differ");
            continue;
          }
          if (numerical_rank(fm.m, tol) < static_cast<int>(fm.rows.size()))
            problems.push_back(tag + " is singular (missing entries?)");
        }
  return problems;
}

std::vector<complex> pentagon_equations(const AssociatorTable& t) {
  const FusionRules& r = t.rules;
  const int n = r.num_labels;
  std::vector<complex> out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int f : r.outcomes(a, b))
            for (int g : r.outcomes(f, c))
              for (int e : r.outcomes(g, d))
                for (int l : r.outcomes(c, d))
                  for (int k : r.outcomes(b, l)) {
                    if (!r.mult(a, k, e)) continue;
                    for (int al = 0; al < r.mult(a, b, f); ++al)
                      for (int be = 0; be < r.mult(f, c, g); ++be)
                        for (int ga = 0; ga < r.mult(g, d, e); ++ga)
                          for (int la = 0; la < r.mult(b, l, k); ++la)
                            for (int mu = 0; mu < r.mult(a, k, e); ++mu)
                              for (int nu = 0; nu < r.mult(c, d, l); ++nu) {
                                complex lhs{};
                                const bool odd = r.dpar(c, d, l, nu) & r.dpar(a, b, f, al) & 1;
                                for (int de = 0; de < r.mult(f, l, e); ++de)
                                  lhs += t.get(f, c, d, e, g, l, be, ga, nu, de) * t.get(a, b, l, e, f, k, al, de, la, mu);
                                if (odd) lhs = -lhs;
                                complex rhs{};
                                for (int h : r.outcomes(b, c))
                                  for (int si = 0; si < r.mult(b, c, h); ++si)
                                    for (int ps = 0; ps < r.mult(a, h, g); ++ps)
                                      for (int rh = 0; rh < r.mult(h, d, k); ++rh)
                                        rhs += t.get(a, b, c, g, f, h, al, be, si, ps) * t.get(a, h, d, e, g, k, ps, ga, rh, mu) *
                                               t.get(b, c, d, k, h, l, si, rh, nu, la);
                                out.push_back(lhs - rhs);
                              }
                  }
  return out;
}

double pentagon_residual(const AssociatorTable& t) {
  double worst = 0.0;
  for (const complex& v : pentagon_equations(t)) worst = std::max(worst, std::abs(v));
  return worst;
}

double unitarity_residual(const AssociatorTable& t) {
  const int n = t.rules.num_labels;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const FMatrix fm = f_matrix(t, a, b, c, d);
          if (fm.rows.empty() || fm.rows.size() != fm.cols.size()) continue;
          Eigen::FullPivLU<Mat> lu(fm.m);
          if (!lu.isInvertible()) return INFINITY;
          worst = std::max(worst, (lu.inverse() - fm.m.adjoint()).cwiseAbs().maxCoeff());
        }
  return worst;
}

AssociatorTable gauge_transform(const AssociatorTable& t, const GaugeMatrices& g) {
  const FusionRules& r = t.rules;
  std::map<std::array<int, 3>, Mat> G, Gi;
  for (const auto& [k, m] : g) {
    const int dim = r.mult(k[0], k[1], k[2]);
    if (m.rows() != dim || m.cols() != dim)
      throw InputError("gauge matrix for V_{" + std::to_string(k[0]) + std::to_string(k[1]) + "}^" +
                       std::to_string(k[2]) + " has the wrong size");
    for (int x = 0; x < dim; ++x)
      for (int y = 0; y < dim; ++y)
        if (r.dpar(k[0], k[1], k[2], x) != r.dpar(k[0], k[1], k[2], y) && std::abs(m(x, y)) > 0)
          throw InputError("gauge matrix is not Z2-even");
    Eigen::FullPivLU<Mat> lu(m);
    if (!lu.isInvertible()) throw InputError("gauge matrix is singular");
    G[k] = m;
    Gi[k] = lu.inverse();
  }
  auto get = [&](std::map<std::array<int, 3>, Mat>& M, int a, int b, int c) -> Mat {
    auto it = M.find({a, b, c});
    if (it != M.end()) return it->second;
    return Mat::Identity(r.mult(a, b, c), r.mult(a, b, c));
  };
  AssociatorTable out;
  out.rules = r;
  const int n = r.num_labels;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e : r.outcomes(a, b))
            for (int f : r.outcomes(b, c)) {
              const int ne = r.mult(a, b, e), nd = r.mult(e, c, d), nf = r.mult(b, c, f), nn = r.mult(a, f, d);
              if (!nd || !nn) continue;
              const Mat g1 = get(G, a, b, e), g2 = get(G, e, c, d), h1 = get(Gi, b, c, f), h2 = get(Gi, a, f, d);
              for (int al = 0; al < ne; ++al)
                for (int be = 0; be < nd; ++be)
                  for (int mu = 0; mu < nf; ++mu)
                    for (int nu = 0; nu < nn; ++nu) {
                      complex v{};
                      for (int a2 = 0; a2 < ne; ++a2)
                        for (int b2 = 0; b2 < nd; ++b2)
                          for (int m2 = 0; m2 < nf; ++m2)
                            for (int n2 = 0; n2 < nn; ++n2)
                              v += g1(al, a2) * g2(be, b2) * t.get(a, b, c, d, e, f, a2, b2, m2, n2) * h1(m2, mu) *
                                   h2(n2, nu);
                      if (v != complex{}) out.F[{a, b, c, d, e, f, al, be, mu, nu}] = v;
                    }
            }
  return out;
}

GaugeComparison gauge_equivalent(const AssociatorTable& A, const AssociatorTable& B, double tol) {
  GaugeComparison out;
  if (A.rules.num_labels != B.rules.num_labels || A.rules.N != B.rules.N) {
    out.reason = "fusion rules differ";
    return out;
  }
  for (const auto& [k, n] : A.rules.N) {
    if (n > 1) throw InputError("gauge comparison is implemented for multiplicity-free data only");
    if (A.rules.dpar(k[0], k[1], k[2], 0) != B.rules.dpar(k[0], k[1], k[2], 0)) {
      out.reason = "degeneracy parities differ";
      return out;
    }
  }
  std::map<std::array<int, 3>, int> var;
  for (const auto& [k, n] : A.rules.N) var.emplace(k, static_cast<int>(var.size()));
  std::vector<std::vector<std::pair<int, int>>> inc;
  std::vector<double> logmag, phase;
  for (const FKey& k : A.admissible_keys()) {
    const complex va = A.get(k), vb = B.get(k);
    const bool za = std::abs(va) < tol, zb = std::abs(vb) < tol;
    if (za && zb) continue;
    if (za != zb) {
      out.reason = "zero patterns differ";
      return out;
    }
    const auto [a, b, c, d, e, f, al, be, mu, nu] = k;
    std::map<int, int> coeff;
    coeff[var.at({a, b, e})] += 1;
    coeff[var.at({e, c, d})] += 1;
    coeff[var.at({b, c, f})] -= 1;
    coeff[var.at({a, f, d})] -= 1;
    std::vector<std::pair<int, int>> row;
    for (auto [v, cnum] : coeff)
      if (cnum) row.push_back({v, cnum});
    inc.push_back(row);
    const complex ratio = vb / va;
    logmag.push_back(std::log(std::abs(ratio)));
    phase.push_back(std::arg(ratio) / (2 * std::numbers::pi));
  }
  const int m = static_cast<int>(inc.size()), nv = static_cast<int>(var.size());
  if (m == 0) {
    out.equivalent = true;
    return out;
  }
  Eigen::MatrixXd Ar = Eigen::MatrixXd::Zero(m, nv);
  IMat Ai(m, nv);
  for (int i = 0; i < m; ++i)
    for (auto [v, cnum] : inc[i]) {
      Ar(i, v) = cnum;
      Ai(i, v) = cnum;
    }
  const Eigen::VectorXd lm = Eigen::Map<Eigen::VectorXd>(logmag.data(), m);
  const Eigen::VectorXd x = Ar.completeOrthogonalDecomposition().solve(lm);
  out.magnitude_residual = (Ar * x - lm).cwiseAbs().maxCoeff();
  const IntegerDiagonal sd = diagonalize_integer(Ai);
  for (int rrow = sd.rank; rrow < m; ++rrow) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += static_cast<double>(sd.U(rrow, i)) * phase[i];
    out.phase_residual = std::max(out.phase_residual, std::abs(s - std::round(s)));
  }
  out.equivalent = out.magnitude_residual < tol && out.phase_residual < tol;
  if (!out.equivalent) out.reason = "ratio table is not a gauge coboundary";
  return out;
}

// ---------------------------------------------------------------- zipper

FusionTensorSet solve_zipper(const FmpoSiteTensor& a, const FmpoSiteTensor& b, const FmpoSiteTensor& c,
                             double sv_tol) {
  if (!(a.physical_space() == b.physical_space()) || !(a.physical_space() == c.physical_space()))
    throw InputError("zipper: physical spaces differ");
  const Fmpo prod = multiply(Fmpo::with_supertrace(a), Fmpo::with_supertrace(b));
  const FmpoSiteTensor& C = prod.site;
  FusionTensorSet out;
  out.product_space = C.virtual_space();
  out.target_space = c.virtual_space();
  const GradedSpace& P = a.physical_space();
  const int d = P.dim(), Dab = out.product_space.dim(), Dc = out.target_space.dim();
  std::vector<Mat> Cb = C.blocks(), Bc = c.blocks();
  for (int mu = 0; mu < 2; ++mu) {
    std::vector<std::pair<int, int>> mask;
    for (int r = 0; r < Dab; ++r)
      for (int s = 0; s < Dc; ++s)
        if (((out.product_space.parity(r) + out.target_space.parity(s)) & 1) == mu) mask.push_back({r, s});
    if (mask.empty()) continue;
    std::vector<int> active;
    for (int ik = 0; ik < d * d; ++ik)
      if (Cb[ik].cwiseAbs().maxCoeff() > 0 || Bc[ik].cwiseAbs().maxCoeff() > 0) active.push_back(ik);
    Mat M = Mat::Zero(static_cast<Eigen::Index>(active.size()) * Dab * Dc, mask.size());
    for (std::size_t t = 0; t < active.size(); ++t) {
      const int ik = active[t], i = ik / d, k = ik % d;
      const double s = (mu * (P.parity(i) + P.parity(k))) & 1 ? -1.0 : 1.0;
      const Eigen::Index off = static_cast<Eigen::Index>(t) * Dab * Dc;
      for (std::size_t n = 0; n < mask.size(); ++n) {
        const auto [r, col] = mask[n];
        // C E_{r,col}: column col gets C[:, r]
        for (int r2 = 0; r2 < Dab; ++r2) M(off + r2 * Dc + col, n) += Cb[ik](r2, r);
        // - s E_{r,col} B: row r gets -s B[col, :]
        for (int c2 = 0; c2 < Dc; ++c2) M(off + r * Dc + c2, n) -= s * Bc[ik](col, c2);
      }
    }
    const Mat ns = nullspace(M, sv_tol);
    for (Eigen::Index v = 0; v < ns.cols(); ++v) {
      Mat X = Mat::Zero(Dab, Dc);
      for (std::size_t n = 0; n < mask.size(); ++n) X(mask[n].first, mask[n].second) = ns(n, v);
      // zipper residual
      for (int ik = 0; ik < d * d; ++ik) {
        const int i = ik / d, k = ik % d;
        const double s = (mu * (P.parity(i) + P.parity(k))) & 1 ? -1.0 : 1.0;
        const double res = (Cb[ik] * X - s * X * Bc[ik]).cwiseAbs().maxCoeff();
        out.residual = std::max(out.residual, res);
      }
      out.X.push_back(std::move(X));
      out.parity.push_back(mu);
    }
  }
  return out;
}

ZipperData solve_all_zippers(const std::vector<FmpoSiteTensor>& blocks, double sv_tol) {
  ZipperData z;
  z.blocks = blocks;
  const int n = static_cast<int>(blocks.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<Mat> cols;
      for (int c = 0; c < n; ++c) {
        FusionTensorSet s = solve_zipper(blocks[a], blocks[b], blocks[c], sv_tol);
        if (s.X.empty()) continue;
        for (const auto& x : s.X) cols.push_back(x);
        z.X.emplace(std::array<int, 3>{a, b, c}, std::move(s));
      }
      if (cols.empty()) continue;
      // support: P = sum X X^{-1} must act as the identity on the product
      Eigen::Index total = 0;
      for (const auto& x : cols) total += x.cols();
      Mat Xall(cols[0].rows(), total);
      Eigen::Index off = 0;
      for (const auto& x : cols) {
        Xall.middleCols(off, x.cols()) = x;
        off += x.cols();
      }
      const Mat W = pinv(Xall, 1e-10);
      const std::string tag = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
      if ((W * Xall - Mat::Identity(total, total)).cwiseAbs().maxCoeff() > 1e-8) {
        z.warnings.push_back("fusion tensors for " + tag + " are not jointly invertible");
        continue;
      }
      const Mat Pp = Xall * W;
      const Fmpo prod = multiply(Fmpo::with_supertrace(blocks[a]), Fmpo::with_supertrace(blocks[b]));
      double dev = 0.0;
      for (const Mat& C : prod.site.blocks()) dev = std::max({dev, (Pp * C - C).cwiseAbs().maxCoeff(), (C * Pp - C).cwiseAbs().maxCoeff()});
      if (dev > 1e-8)
        z.warnings.push_back("sum of X X^-1 for " + tag + " is not the identity on the product support (deviation " +
                             std::to_string(dev) + ")");
    }
  return z;
}

FusionRules fusion_rules_from_zippers(const ZipperData& z) {
  FusionRules r;
  r.num_labels = static_cast<int>(z.blocks.size());
  for (const auto& [k, s] : z.X) {
    r.N[k] = static_cast<int>(s.X.size());
    for (std::size_t m = 0; m < s.X.size(); ++m) r.deg_parity[{k[0], k[1], k[2], static_cast<int>(m)}] = s.parity[m];
  }
  return r;
}

namespace {

// Fusion tensors and duals in the sign convention of the explicit stacked
// tensor (row (x,y) rescaled by (-1)^{|x||y|} relative to multiply()).
struct Prepared {
  std::map<std::array<int, 4>, Mat> X, W;  // (a,b,c,mu)
  std::map<std::array<int, 2>, std::vector<int>> pos;
};

Prepared prepare(const ZipperData& z) {
  Prepared p;
  const int n = static_cast<int>(z.blocks.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const GradedSpace& va = z.blocks[a].virtual_space();
      const GradedSpace& vb = z.blocks[b].virtual_space();
      const std::vector<int> pos = fused_positions(va, vb);
      p.pos[{a, b}] = pos;
      std::vector<double> sign(pos.size());
      for (int x = 0; x < va.dim(); ++x)
        for (int y = 0; y < vb.dim(); ++y) sign[pos[x * vb.dim() + y]] = (va.parity(x) & vb.parity(y)) ? -1.0 : 1.0;
      std::vector<std::array<int, 4>> keys;
      std::vector<Mat> cols;
      for (int c = 0; c < n; ++c) {
        auto it = z.X.find({a, b, c});
        if (it == z.X.end()) continue;
        for (std::size_t m = 0; m < it->second.X.size(); ++m) {
          Mat x = it->second.X[m];
          for (Eigen::Index r = 0; r < x.rows(); ++r) x.row(r) *= sign[r];
          keys.push_back({a, b, c, static_cast<int>(m)});
          cols.push_back(x);
          p.X[keys.back()] = x;
        }
      }
      if (cols.empty()) continue;
      Eigen::Index total = 0;
      for (const auto& x : cols) total += x.cols();
      Mat Xall(cols[0].rows(), total);
      Eigen::Index off = 0;
      for (const auto& x : cols) {
        Xall.middleCols(off, x.cols()) = x;
        off += x.cols();
      }
      const Mat Wall = pinv(Xall, 1e-10);
      if ((Wall * Xall - Mat::Identity(total, total)).cwiseAbs().maxCoeff() > 1e-8)
        throw ConsistencyError("fusion tensors for (" + std::to_string(a) + "," + std::to_string(b) +
                               ") are singular; pseudo-inverse fallback rejected");
      off = 0;
      for (std::size_t k = 0; k < keys.size(); ++k) {
        p.W[keys[k]] = Wall.middleRows(off, cols[k].cols());
        off += cols[k].cols();
      }
    }
  return p;
}

// (X_ab^e (x) 1_c) X_ec^d in the natural (x,y,z) basis.
Mat left_tree(const ZipperData& z, const Prepared& p, int a, int b, int c, int e, int d, int al, int be) {
  const int Da = z.blocks[a].bond_dim(), Db = z.blocks[b].bond_dim(), Dc = z.blocks[c].bond_dim();
  const int De = z.blocks[e].bond_dim(), Dd = z.blocks[d].bond_dim();
  const Mat& Xab = p.X.at({a, b, e, al});
  const Mat& Xec = p.X.at({e, c, d, be});
  const auto& pab = p.pos.at({a, b});
  const auto& pec = p.pos.at({e, c});
  Mat Y = Mat::Zero(Da * Db * Dc, Dd);
  for (int x = 0; x < Da; ++x)
    for (int y = 0; y < Db; ++y)
      for (int zz = 0; zz < Dc; ++zz)
        for (int ep = 0; ep < De; ++ep) {
          const complex w = Xab(pab[x * Db + y], ep);
          if (w == complex{}) continue;
          Y.row((x * Db + y) * Dc + zz) += w * Xec.row(pec[ep * Dc + zz]);
        }
  return Y;
}

// (1_a (x) X_bc^f) X_af^d in the natural basis, with the Koszul sign of
// moving X_bc^f past the a leg.
Mat right_tree(const ZipperData& z, const Prepared& p, int a, int b, int c, int f, int d, int mu, int nu) {
  const GradedSpace& va = z.blocks[a].virtual_space();
  const int Da = va.dim(), Db = z.blocks[b].bond_dim(), Dc = z.blocks[c].bond_dim();
  const int Df = z.blocks[f].bond_dim(), Dd = z.blocks[d].bond_dim();
  const int pmu = z.X.at({b, c, f}).parity[mu];
  const auto& pbc = p.pos.at({b, c});
  const auto& paf = p.pos.at({a, f});
  const Mat& Xbc = p.X.at({b, c, f, mu});
  const Mat& Xaf = p.X.at({a, f, d, nu});
  Mat R = Mat::Zero(Da * Db * Dc, Dd);
  for (int x = 0; x < Da; ++x) {
    const double s = (pmu & va.parity(x)) ? -1.0 : 1.0;
    for (int y = 0; y < Db; ++y)
      for (int zz = 0; zz < Dc; ++zz)
        for (int fp = 0; fp < Df; ++fp) {
          const complex w = Xbc(pbc[y * Dc + zz], fp);
          if (w == complex{}) continue;
          R.row((x * Db + y) * Dc + zz) += s * w * Xaf.row(paf[x * Df + fp]);
        }
  }
  return R;
}

// Dual of left_tree: (X_ec^d)^{-1} ((X_ab^e)^{-1} (x) 1_c).
Mat left_dual(const ZipperData& z, const Prepared& p, int a, int b, int c, int e, int d, int al, int be) {
  const int Da = z.blocks[a].bond_dim(), Db = z.blocks[b].bond_dim(), Dc = z.blocks[c].bond_dim();
  const int De = z.blocks[e].bond_dim(), Dd = z.blocks[d].bond_dim();
  const Mat& Wab = p.W.at({a, b, e, al});
  const Mat& Wec = p.W.at({e, c, d, be});
  const auto& pab = p.pos.at({a, b});
  const auto& pec = p.pos.at({e, c});
  Mat R = Mat::Zero(Dd, Da * Db * Dc);
  for (int x = 0; x < Da; ++x)
    for (int y = 0; y < Db; ++y)
      for (int zz = 0; zz < Dc; ++zz)
        for (int ep = 0; ep < De; ++ep) {
          const complex w = Wab(ep, pab[x * Db + y]);
          if (w == complex{}) continue;
          R.col((x * Db + y) * Dc + zz) += w * Wec.col(pec[ep * Dc + zz]);
        }
  return R;
}

// Channels of the fMPO product a.b as seen by the zipper solutions.
int zmult(const ZipperData& z, int a, int b, int c) {
  auto it = z.X.find({a, b, c});
  return it == z.X.end() ? 0 : static_cast<int>(it->second.X.size());
}

}  // namespace

// Fusion of fMPOs a.b realizes the category channel V_{ba}: the right tree
// a(bc) through e, expanded on the left trees (ab)c through f, gives
// [F^{cba}_d]^{f mu nu}_{e sigma rho} with sigma from X_bc^e, rho from
// X_ae^d, mu from X_ab^f and nu from X_fc^d.
AssociatorTable compute_f_symbols(const ZipperData& z, double drop_tol) {
  const Prepared p = prepare(z);
  AssociatorTable t;
  const FusionRules zr = fusion_rules_from_zippers(z);
  t.rules.num_labels = zr.num_labels;
  for (const auto& [k, n] : zr.N) t.rules.N[{k[1], k[0], k[2]}] = n;
  for (const auto& [k, par] : zr.deg_parity) t.rules.deg_parity[{k[1], k[0], k[2], k[3]}] = par;
  const int n = zr.num_labels;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double dim = z.blocks[d].bond_dim();
          for (int e = 0; e < n; ++e)
            for (int si = 0; si < zmult(z, b, c, e); ++si)
              for (int rh = 0; rh < zmult(z, a, e, d); ++rh) {
                const Mat Y = right_tree(z, p, a, b, c, e, d, si, rh);
                for (int f = 0; f < n; ++f)
                  for (int mu = 0; mu < zmult(z, a, b, f); ++mu)
                    for (int nu = 0; nu < zmult(z, f, c, d); ++nu) {
                      const complex v = (left_dual(z, p, a, b, c, f, d, mu, nu) * Y).trace() / dim;
                      if (std::abs(v) > drop_tol) t.F[{c, b, a, d, e, f, si, rh, mu, nu}] = v;
                    }
              }
        }
  return t;
}

double fmove_residual(const ZipperData& z, const AssociatorTable& F) {
  const Prepared p = prepare(z);
  const int n = static_cast<int>(z.blocks.size());
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e)
            for (int si = 0; si < zmult(z, b, c, e); ++si)
              for (int rh = 0; rh < zmult(z, a, e, d); ++rh) {
                Mat diff = right_tree(z, p, a, b, c, e, d, si, rh);
                for (int f = 0; f < n; ++f)
                  for (int mu = 0; mu < zmult(z, a, b, f); ++mu)
                    for (int nu = 0; nu < zmult(z, f, c, d); ++nu) {
                      const complex v = F.get(c, b, a, d, e, f, si, rh, mu, nu);
                      if (v != complex{}) diff -= v * left_tree(z, p, a, b, c, f, d, mu, nu);
                    }
                worst = std::max(worst, diff.cwiseAbs().maxCoeff());
              }
  return worst;
}

FusionRuleFit fusion_rules(const FmpoSiteTensor& a, const FmpoSiteTensor& b, const std::vector<FmpoSiteTensor>& library,
                           int L_max, double tol, std::size_t max_dense_dim) {
  auto traced = [](const FmpoSiteTensor& s) {
    return Fmpo::with_boundary(s, identity_matrix(s.virtual_space()));
  };
  FusionRuleFit fit;
  for (int graded = 0; graded < 2; ++graded) {
    const Fmpo prod = graded ? multiply(Fmpo::with_supertrace(a), Fmpo::with_supertrace(b))
                             : multiply(traced(a), traced(b));
    std::vector<Vec> cols(library.size());
    Vec rhs;
    for (int L = 1; L <= L_max; ++L) {
      const Mat o = close_to_operator(prod, L, max_dense_dim).m;
      const Eigen::Index off = rhs.size();
      rhs.conservativeResize(off + o.size());
      rhs.segment(off, o.size()) = Eigen::Map<const Vec>(o.data(), o.size());
      for (std::size_t k = 0; k < library.size(); ++k) {
        const Fmpo lk = graded ? Fmpo::with_supertrace(library[k]) : traced(library[k]);
        const Mat ok = close_to_operator(lk, L, max_dense_dim).m;
        cols[k].conservativeResize(off + ok.size());
        cols[k].segment(off, ok.size()) = Eigen::Map<const Vec>(ok.data(), ok.size());
      }
    }
    Mat A(rhs.size(), static_cast<Eigen::Index>(library.size()));
    for (std::size_t k = 0; k < library.size(); ++k) A.col(k) = cols[k];
    const Vec x = A.completeOrthogonalDecomposition().solve(rhs);
    const double res = (A * x - rhs).cwiseAbs().maxCoeff();
    fit.residual = std::max(fit.residual, res / std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    std::vector<double>& dst = graded ? fit.graded : fit.multiplicity;
    for (Eigen::Index k = 0; k < x.size(); ++k) dst.push_back(x(k).real());
  }
  for (double v : fit.multiplicity) fit.rounded.push_back(static_cast<int>(std::lround(v)));
  if (fit.residual > tol) throw ConsistencyError("product contains blocks outside the supplied library (fit residual " + std::to_string(fit.residual) + ")");
  return fit;
}

}  // namespace fmpo
