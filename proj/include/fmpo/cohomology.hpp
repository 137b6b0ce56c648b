#pragma once

// Group cohomology of finite groups with trivial action, via normalized bar
// cochains and exact Z_q linear algebra.
//
// Cochains are stored as flat arrays over G^d (index g_1 n^{d-1} + ... + g_d)
// with values in Z_q. Normalized means the value vanishes whenever some
// argument is the identity.

#include <cstdint>
#include <optional>
#include <vector>

#include "fmpo/group.hpp"
#include "fmpo/modular.hpp"

namespace fmpo {

using Cochain = std::vector<i64>;

// Enumerates normalized coordinates: tuples of non-identity elements.
class CochainIndex {
 public:
  CochainIndex(const FiniteGroup& g, int degree);
  int degree() const { return deg_; }
  int size() const { return size_; }
  // -1 if some argument is the identity
  int index(const int* args) const;
  void args(int idx, int* out) const;
  std::size_t full_size() const;
  std::size_t full_index(const int* args) const;

 private:
  int n_, deg_, size_;
  std::vector<int> nonid_, pos_;
};

Cochain coboundary(const FiniteGroup& g, const Cochain& f, int degree, i64 q);
bool is_normalized(const FiniteGroup& g, const Cochain& f, int degree);
// Value arrays over G^d for degree d; throws InputError on size mismatch.
void check_cochain_size(const FiniteGroup& g, const Cochain& f, int degree);

struct CohomologyOptions {
  std::uint64_t seed = 2024;
  int extra_rows = 30;  // oversampling of the random row compression
};

// H^d(G, Z_q) with trivial action, or, with u1 set, the q-torsion model of
// H^d(G, U(1)) where phases are exp(2 pi i v / q) and coboundaries include
// every U(1)-valued (d-1)-cochain whose coboundary lands in Z_q.
class Cohomology {
 public:
  // rhs: optional normalized (degree+1)-cochains b for which d(x) = b is
  // solved alongside (see particular_solution).
  Cohomology(const FiniteGroup& g, int degree, i64 q, bool u1, const CohomologyOptions& opt = {},
             const std::vector<Cochain>& rhs = {});

  int degree() const { return deg_; }
  i64 modulus() const { return q_; }
  // cyclic orders h_j (> 1) of the decomposition, matching coordinates()
  const std::vector<i64>& orders() const { return orders_; }
  std::vector<i64> invariant_factors() const;
  std::string name() const;
  i64 size() const;
  // one normalized cocycle per cyclic factor
  const std::vector<Cochain>& generators() const { return generators_; }

  bool is_cocycle(const Cochain& f) const;
  // Coordinates of the class of a normalized cocycle (entry j mod orders()[j]).
  std::vector<i64> class_of(const Cochain& f) const;
  Cochain representative(const std::vector<i64>& coords) const;

  // Normalized x with d(x) = rhs[k], or nullopt when none exists.
  const std::optional<Cochain>& particular_solution(int k) const { return particular_.at(k); }

 private:
  FiniteGroup group_;
  int deg_;
  i64 q_;
  bool u1_;
  CohomologyOptions opt_;
  CochainIndex idx_;
  // cocycle module Z = ker d_deg in Q-coordinates
  ZqDiagonal zdiag_;
  std::vector<int> zkeep_;   // columns i with g_i > 1
  std::vector<i64> zg_;      // g_i for kept columns
  // quotient by coboundaries
  IMat q2_, q2inv_;
  std::vector<int> qkeep_;
  std::vector<i64> orders_;
  std::vector<Cochain> generators_;
  std::vector<std::optional<Cochain>> particular_;

  std::vector<i64> z_coordinates(const Cochain& f) const;
};

// Convenience wrappers.
Cohomology h1_z2(const FiniteGroup& g);
Cohomology h2_z2(const FiniteGroup& g);
Cohomology h3_u1(const FiniteGroup& g, int modulus_factor = 2);

}  // namespace fmpo
