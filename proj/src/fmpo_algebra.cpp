#include "fmpo/fmpo_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

namespace fmpo {

FmpoSiteTensor::FmpoSiteTensor(GradedTensor t) : tensor_(std::move(t)) {
  if (tensor_.rank() != 4) throw InputError("fMPO site tensor needs four legs (alpha, i, j, beta)");
  if (!(tensor_.leg(0) == tensor_.leg(3)))
    throw InputError("fMPO site tensor: left and right virtual spaces differ");
  if (!(tensor_.leg(1) == tensor_.leg(2)))
    throw InputError("fMPO site tensor: physical out and in spaces differ");
  if (tensor_.parity() != 0) throw InputError("fMPO site tensor must be Z2-even");
}

FmpoSiteTensor FmpoSiteTensor::from_blocks(const GradedSpace& virt, const GradedSpace& phys,
                                           const std::vector<Mat>& blocks) {
  const int D = virt.dim(), d = phys.dim();
  if (static_cast<int>(blocks.size()) != d * d) throw InputError("expected phys_dim^2 blocks");
  GradedTensor t({virt, phys, phys, virt}, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Mat& b = blocks[i * d + j];
      if (b.rows() != D || b.cols() != D) throw InputError("block has wrong shape");
      for (int a = 0; a < D; ++a)
        for (int c = 0; c < D; ++c) t.set({a, i, j, c}, b(a, c));
    }
  return FmpoSiteTensor(std::move(t));
}

Mat FmpoSiteTensor::block(int i, int j) const {
  const int D = bond_dim();
  Mat b(D, D);
  for (int a = 0; a < D; ++a)
    for (int c = 0; c < D; ++c) b(a, c) = tensor_.at({a, i, j, c});
  return b;
}

std::vector<Mat> FmpoSiteTensor::blocks() const {
  const int d = phys_dim();
  std::vector<Mat> out;
  out.reserve(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.push_back(block(i, j));
  return out;
}

Fmpo Fmpo::with_supertrace(FmpoSiteTensor s) {
  Fmpo m;
  m.site = std::move(s);
  m.closure = Closure::Supertrace;
  return m;
}

Fmpo Fmpo::with_boundary(FmpoSiteTensor s, GradedTensor delta) {
  if (delta.rank() != 2 || !(delta.leg(0) == s.virtual_space()) || !(delta.leg(1) == s.virtual_space()))
    throw InputError("boundary matrix must act on the virtual space of the site tensor");
  Fmpo m;
  m.site = std::move(s);
  m.closure = Closure::Boundary;
  m.delta = std::move(delta);
  return m;
}

Mat Fmpo::boundary_matrix() const {
  if (closure == Closure::Supertrace) return to_matrix(parity_matrix(site.virtual_space()));
  return to_matrix(delta);
}

DenseOperator close_to_operator(const Fmpo& m, int L, std::size_t max_dense_dim) {
  if (L < 1) throw InputError("chain length must be >= 1");
  const int d = m.site.phys_dim();
  std::size_t total = 1;
  for (int s = 0; s < L; ++s) {
    total *= static_cast<std::size_t>(d);
    if (total > max_dense_dim)
      throw InputError("dense dimension " + std::to_string(d) + "^" + std::to_string(L) +
                       " exceeds the cap " + std::to_string(max_dense_dim));
  }
  const auto& P = m.site.physical_space();
  std::vector<Mat> B = m.site.blocks();
  std::vector<char> nonzero(B.size());
  for (std::size_t k = 0; k < B.size(); ++k) nonzero[k] = B[k].cwiseAbs().maxCoeff() > 0.0;

  DenseOperator out;
  out.parity = m.parity();
  out.m = Mat::Zero(total, total);

  std::function<void(int, const Mat&, std::size_t, std::size_t, int, int)> rec =
      [&](int s, const Mat& M, std::size_t I, std::size_t J, int sign, int jpar) {
        if (s == L) {
          out.m(I, J) = sign ? -M.trace() : M.trace();
          return;
        }
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            if (!nonzero[i * d + j]) continue;
            const int flip = ((P.parity(i) + P.parity(j)) * jpar) & 1;
            rec(s + 1, M * B[i * d + j], I * d + i, J * d + j, sign ^ flip, jpar ^ P.parity(j));
          }
      };
  rec(0, m.boundary_matrix(), 0, 0, 0, 0);
  return out;
}

namespace {

// Even-first ordering of the product basis (x, y) of two graded spaces.
struct FusedIndex {
  GradedSpace space;
  std::vector<int> pos;  // x * dim_b + y -> fused index
};

FusedIndex fuse(const GradedSpace& a, const GradedSpace& b) {
  FusedIndex f;
  f.pos.assign(static_cast<std::size_t>(a.dim()) * b.dim(), -1);
  int n = 0, ne = 0;
  for (int want = 0; want < 2; ++want)
    for (int x = 0; x < a.dim(); ++x)
      for (int y = 0; y < b.dim(); ++y)
        if (((a.parity(x) + b.parity(y)) & 1) == want) {
          f.pos[x * b.dim() + y] = n++;
          if (want == 0) ++ne;
        }
  f.space = GradedSpace(ne, n - ne);
  return f;
}

}  // namespace

std::vector<int> fused_positions(const GradedSpace& a, const GradedSpace& b) { return fuse(a, b).pos; }
GradedSpace fused_space(const GradedSpace& a, const GradedSpace& b) { return fuse(a, b).space; }

Fmpo multiply(const Fmpo& a, const Fmpo& b) {
  if (!(a.site.physical_space() == b.site.physical_space()))
    throw InputError("multiply: physical spaces differ");
  const GradedSpace& va = a.site.virtual_space();
  const GradedSpace& vb = b.site.virtual_space();
  const int Da = va.dim(), Db = vb.dim(), d = a.site.phys_dim();
  const FusedIndex F = fuse(va, vb);

  // A (a,i,j,b) against B (g,j,k,d): result (a,i,b,g,k,d) -> (a,g,i,k,d,b)
  const std::pair<int, int> pr[] = {{2, 1}};
  GradedTensor t = contract(a.site.tensor(), b.site.tensor(), pr);
  const int perm[] = {0, 3, 1, 4, 5, 2};
  t = permute_legs(t, perm);

  GradedTensor c({F.space, a.site.physical_space(), a.site.physical_space(), F.space}, 0);
  for (int al = 0; al < Da; ++al)
    for (int ga = 0; ga < Db; ++ga)
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
          for (int de = 0; de < Db; ++de)
            for (int be = 0; be < Da; ++be) {
              const complex v = t.at({al, ga, i, k, de, be});
              if (v == complex{}) continue;
              c.set({F.pos[al * Db + ga], i, k, F.pos[be * Db + de]}, v);
            }

  Fmpo out;
  out.site = FmpoSiteTensor(std::move(c));
  if (a.closure == Closure::Supertrace && b.closure == Closure::Supertrace) {
    out.closure = Closure::Supertrace;
    return out;
  }
  // Delta_{(a'g'),(ag)} = Da_{a'a} Db_{g'g} (-1)^{|g|(|a|+|a'|)}
  const Mat A = a.boundary_matrix(), Bm = b.boundary_matrix();
  GradedTensor delta({F.space, F.space}, a.parity() + b.parity());
  for (int a1 = 0; a1 < Da; ++a1)
    for (int a0 = 0; a0 < Da; ++a0) {
      if (A(a1, a0) == complex{}) continue;
      for (int g1 = 0; g1 < Db; ++g1)
        for (int g0 = 0; g0 < Db; ++g0) {
          complex v = A(a1, a0) * Bm(g1, g0);
          if (v == complex{}) continue;
          if ((vb.parity(g0) * (va.parity(a0) + va.parity(a1))) & 1) v = -v;
          delta.set({F.pos[a1 * Db + g1], F.pos[a0 * Db + g0]}, v);
        }
    }
  out.closure = Closure::Boundary;
  out.delta = std::move(delta);
  return out;
}

Fmpo direct_sum(const std::vector<Fmpo>& parts) {
  if (parts.empty()) throw InputError("direct sum of no fMPOs");
  const GradedSpace phys = parts[0].site.physical_space();
  bool all_super = true;
  int parity = -1;
  int ne = 0, no = 0;
  for (const auto& p : parts) {
    if (!(p.site.physical_space() == phys)) throw InputError("direct sum: physical spaces differ");
    if (p.closure != Closure::Supertrace) all_super = false;
    if (parity >= 0 && p.parity() != parity) throw InputError("direct sum: boundary parities differ");
    parity = p.parity();
    ne += p.site.virtual_space().even_dim();
    no += p.site.virtual_space().odd_dim();
  }
  const GradedSpace virt(ne, no);
  // position of each part's basis vector in the sum
  std::vector<std::vector<int>> pos(parts.size());
  int oe = 0, oo = ne;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const GradedSpace& v = parts[p].site.virtual_space();
    for (int x = 0; x < v.dim(); ++x) pos[p].push_back(v.parity(x) ? oo++ : oe++);
  }
  const int d = phys.dim();
  GradedTensor t({virt, phys, phys, virt}, 0);
  GradedTensor delta({virt, virt}, parity);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& s = parts[p].site;
    const int D = s.bond_dim();
    for (int a = 0; a < D; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int b = 0; b < D; ++b) {
            const complex v = s.tensor().at({a, i, j, b});
            if (v != complex{}) t.set({pos[p][a], i, j, pos[p][b]}, v);
          }
    const Mat bm = parts[p].boundary_matrix();
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b)
        if (bm(a, b) != complex{}) delta.set({pos[p][a], pos[p][b]}, bm(a, b));
  }
  FmpoSiteTensor site(std::move(t));
  if (all_super) return Fmpo::with_supertrace(std::move(site));
  return Fmpo::with_boundary(std::move(site), std::move(delta));
}

Fmpo gauge_conjugate(const Fmpo& m, const Mat& g) {
  const GradedSpace& v = m.site.virtual_space();
  if (g.rows() != v.dim() || g.cols() != v.dim()) throw InputError("gauge matrix has wrong shape");
  for (int a = 0; a < v.dim(); ++a)
    for (int b = 0; b < v.dim(); ++b)
      if (v.parity(a) != v.parity(b) && g(a, b) != complex{})
        throw InputError("gauge matrix must be Z2-even");
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw InputError("gauge matrix is singular");
  const Mat gi = lu.inverse();
  std::vector<Mat> bl = m.site.blocks();
  for (auto& b : bl) b = g * b * gi;
  FmpoSiteTensor s = FmpoSiteTensor::from_blocks(v, m.site.physical_space(), bl);
  if (m.closure == Closure::Supertrace) return Fmpo::with_supertrace(std::move(s));
  return Fmpo::with_boundary(std::move(s), from_matrix(g * to_matrix(m.delta) * gi, v, v, m.delta.parity()));
}

Mat generated_algebra(const std::vector<Mat>& gens, double tol) {
  if (gens.empty()) return Mat(0, 0);
  const Eigen::Index D = gens[0].rows();
  const Eigen::Index n = D * D;
  double scale = 0.0;
  for (const auto& g : gens) scale = std::max(scale, g.norm());
  std::vector<Vec> basis;
  auto add = [&](const Mat& m) {
    Vec v = Eigen::Map<const Vec>(m.data(), n);
    const double norm0 = v.norm();
    if (norm0 <= tol * std::max(1.0, scale)) return;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) v -= q * q.dot(v);
    if (v.norm() > tol * norm0 && v.norm() > tol) basis.push_back(v / v.norm());
  };
  for (const auto& g : gens) add(g);
  for (std::size_t k = 0; k < basis.size() && basis.size() < static_cast<std::size_t>(n); ++k) {
    const Mat Ak = Eigen::Map<const Mat>(basis[k].data(), D, D);
    for (const auto& g : gens) add(Ak * g);
  }
  Mat out(n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(k) = basis[k];
  return out;
}

namespace {

struct Orbit {
  Mat Q;  // central idempotent (sum over the parity orbit)
  int size = 1;
};

std::vector<Orbit> central_orbits(const std::vector<Mat>& all_blocks, const GradedSpace& virt,
                                  const DecomposeOptions& opt) {
  const Eigen::Index D = virt.dim();
  std::vector<Mat> gens;
  double scale = 0.0;
  for (const auto& b : all_blocks) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  for (const auto& b : all_blocks)
    if (b.cwiseAbs().maxCoeff() > opt.tol * std::max(1.0, scale)) gens.push_back(b / std::max(1.0, scale));
  if (gens.empty()) throw ConsistencyError("site tensor vanishes; no algebra to decompose");

  const Mat A = generated_algebra(gens, opt.tol);
  const Eigen::Index r = A.cols();
  auto elem = [&](const Vec& c) -> Mat {
    Vec v = A * c;
    return Eigen::Map<const Mat>(v.data(), D, D);
  };
  std::vector<Mat> Ak(r);
  for (Eigen::Index k = 0; k < r; ++k) Ak[k] = Eigen::Map<const Mat>(A.col(k).data(), D, D);

  // trace form
  Mat T(r, r);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index l = 0; l < r; ++l) T(k, l) = (Ak[k] * Ak[l]).trace();
  if (numerical_rank(T, opt.tol) < r)
    throw ConsistencyError("generated algebra is not semisimple (degenerate trace form, dim " +
                           std::to_string(r) + ")");

  // centre and unit
  Mat comm(static_cast<Eigen::Index>(gens.size()) * D * D, r);
  Mat unit_sys(2 * static_cast<Eigen::Index>(gens.size()) * D * D, r);
  Vec unit_rhs(unit_sys.rows());
  for (Eigen::Index k = 0; k < r; ++k)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const Mat c = Ak[k] * gens[g] - gens[g] * Ak[k];
      comm.block(g * D * D, k, D * D, 1) = Eigen::Map<const Vec>(c.data(), D * D);
      const Mat l = Ak[k] * gens[g], rr = gens[g] * Ak[k];
      unit_sys.block(2 * g * D * D, k, D * D, 1) = Eigen::Map<const Vec>(l.data(), D * D);
      unit_sys.block((2 * g + 1) * D * D, k, D * D, 1) = Eigen::Map<const Vec>(rr.data(), D * D);
    }
  for (std::size_t g = 0; g < gens.size(); ++g) {
    unit_rhs.segment(2 * g * D * D, D * D) = Eigen::Map<const Vec>(gens[g].data(), D * D);
    unit_rhs.segment((2 * g + 1) * D * D, D * D) = Eigen::Map<const Vec>(gens[g].data(), D * D);
  }
  const Mat centre = nullspace(comm, opt.tol);
  const Vec ec = unit_sys.completeOrthogonalDecomposition().solve(unit_rhs);
  const Mat e = elem(ec);
  if ((unit_sys * ec - unit_rhs).cwiseAbs().maxCoeff() > 1e-6)
    throw ConsistencyError("generated algebra has no unit");

  const Mat Lam = to_matrix(parity_matrix(virt));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vec rc(centre.cols());
    for (Eigen::Index k = 0; k < rc.size(); ++k) rc(k) = complex(nd(rng), nd(rng));
    Mat z = elem(centre * rc);
    z = z / std::max(1e-300, z.norm()) * std::sqrt(static_cast<double>(D));
    Eigen::ComplexEigenSolver<Mat> es(z);
    const Vec ev = es.eigenvalues();
    const Mat V = es.eigenvectors();
    Eigen::FullPivLU<Mat> lu(V);
    if (!lu.isInvertible()) continue;
    const Mat Vi = lu.inverse();

    // cluster eigenvalues
    std::vector<int> cl(D, -1);
    std::vector<complex> centres;
    const double ctol = 1e-6;
    for (Eigen::Index k = 0; k < D; ++k) {
      for (std::size_t c = 0; c < centres.size(); ++c)
        if (std::abs(ev(k) - centres[c]) < ctol * std::sqrt(static_cast<double>(D))) {
          cl[k] = static_cast<int>(c);
          break;
        }
      if (cl[k] < 0) {
        cl[k] = static_cast<int>(centres.size());
        centres.push_back(ev(k));
      }
    }
    std::vector<Mat> P;
    Mat sum = Mat::Zero(D, D);
    bool ok = true;
    for (std::size_t c = 0; c < centres.size(); ++c) {
      if (std::abs(centres[c]) < 1e-6) continue;  // complement of the unit
      Mat p = Mat::Zero(D, D);
      for (Eigen::Index k = 0; k < D; ++k)
        if (cl[k] == static_cast<int>(c)) p += V.col(k) * Vi.row(k);
      if ((p * p - p).cwiseAbs().maxCoeff() > 1e-6) ok = false;
      P.push_back(p);
      sum += p;
    }
    if (!ok || (sum - e).cwiseAbs().maxCoeff() > 1e-6) continue;

    // orbits under parity conjugation
    std::vector<int> partner(P.size(), -1);
    for (std::size_t k = 0; k < P.size(); ++k) {
      const Mat c = Lam * P[k] * Lam;
      for (std::size_t l = 0; l < P.size(); ++l)
        if ((c - P[l]).cwiseAbs().maxCoeff() < 1e-6) partner[k] = static_cast<int>(l);
      if (partner[k] < 0) ok = false;
    }
    if (!ok) continue;
    std::vector<Orbit> orbits;
    std::vector<char> done(P.size(), 0);
    for (std::size_t k = 0; k < P.size(); ++k) {
      if (done[k]) continue;
      Orbit o;
      o.Q = P[k];
      done[k] = 1;
      if (partner[k] != static_cast<int>(k)) {
        o.Q += P[partner[k]];
        o.size = 2;
        done[partner[k]] = 1;
      }
      orbits.push_back(std::move(o));
    }
    return orbits;
  }
  throw ConsistencyError("could not isolate central idempotents of the generated algebra");
}

}  // namespace

std::vector<GradedAlgebraBlock> decompose_blocks(const Fmpo& m, const DecomposeOptions& opt) {
  const GradedSpace& virt = m.site.virtual_space();
  const int ne = virt.even_dim(), D = virt.dim();
  const std::vector<Mat> B = m.site.blocks();
  std::vector<Orbit> orbits = central_orbits(B, virt, opt);
  const Mat delta = m.boundary_matrix();

  std::vector<GradedAlgebraBlock> out;
  for (const auto& o : orbits) {
    // Q is even, so its range splits into parity sectors
    const Mat Ue = range_basis(o.Q.block(0, 0, ne, ne), 1e-8);
    const Mat Uo = range_basis(o.Q.block(ne, ne, D - ne, D - ne), 1e-8);
    const int be = static_cast<int>(Ue.cols()), bo = static_cast<int>(Uo.cols());
    Mat U = Mat::Zero(D, be + bo);
    U.block(0, 0, ne, be) = Ue;
    U.block(ne, be, D - ne, bo) = Uo;
    const Mat W = U.adjoint() * o.Q;
    const GradedSpace sub(be, bo);
    std::vector<Mat> bl;
    for (const auto& b : B) {
      Mat x = W * b * U;
      x = (x.array().abs() < 1e-13).select(Mat::Zero(x.rows(), x.cols()), x);
      bl.push_back(x);
    }
    // drop the residual forbidden-parity noise left by floating point
    GradedTensor t({sub, m.site.physical_space(), m.site.physical_space(), sub}, 0);
    const int d = m.site.phys_dim();
    std::vector<complex> coeffs(t.size());
    for (int a = 0; a < sub.dim(); ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int b = 0; b < sub.dim(); ++b)
            coeffs[((static_cast<std::size_t>(a) * d + i) * d + j) * sub.dim() + b] = bl[i * d + j](a, b);
    FmpoSiteTensor site(GradedTensor::projected(t.legs(), 0, std::move(coeffs)));
    GradedAlgebraBlock blk;
    if (m.closure == Closure::Supertrace)
      blk.fmpo = Fmpo::with_supertrace(std::move(site));
    else
      blk.fmpo = Fmpo::with_boundary(std::move(site), from_matrix(W * delta * U, sub, sub, m.delta.parity()));
    blk.type = o.size == 2 ? AlgebraType::Odd : AlgebraType::Even;
    blk.embed = U;
    blk.project = W;
    out.push_back(std::move(blk));
  }
  return out;
}

AlgebraType classify_block_type(const FmpoSiteTensor& s, const DecomposeOptions& opt) {
  std::vector<Orbit> orbits = central_orbits(s.blocks(), s.virtual_space(), opt);
  if (orbits.size() != 1)
    throw ConsistencyError("algebra is not graded-simple: " + std::to_string(orbits.size()) +
                           " graded components");
  return orbits[0].size == 2 ? AlgebraType::Odd : AlgebraType::Even;
}

std::optional<Mat> odd_central_element(const FmpoSiteTensor& s, double tol) {
  const Mat basis = generated_algebra(s.blocks(), tol);
  const Eigen::Index D = s.bond_dim(), n = basis.cols();
  if (n == 0) return std::nullopt;
  std::vector<Mat> A(n);
  for (Eigen::Index k = 0; k < n; ++k) A[k] = Eigen::Map<const Mat>(basis.col(k).data(), D, D);
  Mat comm(n * D * D, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) {
      const Mat c = A[k] * A[l] - A[l] * A[k];
      comm.block(l * D * D, k, D * D, 1) = Eigen::Map<const Vec>(c.data(), D * D);
    }
  // the centre is stable under parity conjugation, so odd parts of central
  // elements are central
  const Mat centre = nullspace(comm, tol);
  const Mat lam = to_matrix(parity_matrix(s.virtual_space()));
  Mat best;
  double best_norm = 0.0;
  for (Eigen::Index c = 0; c < centre.cols(); ++c) {
    Mat z = Mat::Zero(D, D);
    for (Eigen::Index k = 0; k < n; ++k) z += centre(k, c) * A[k];
    const Mat odd = (z - lam * z * lam) / 2.0;
    if (odd.norm() > best_norm) {
      best_norm = odd.norm();
      best = odd;
    }
  }
  if (best_norm < 1e-6) return std::nullopt;
  return best / best_norm * std::sqrt(static_cast<double>(D));
}

bool projector_check(const Fmpo& m, int L_max, double tol, std::size_t max_dense_dim) {
  for (int L = 1; L <= L_max; ++L) {
    const Mat o = close_to_operator(m, L, max_dense_dim).m;
    if ((o * o - o).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace fmpo
