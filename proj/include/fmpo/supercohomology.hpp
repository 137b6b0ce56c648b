#pragma once

// Fermionic SPT labels (f, Z, alpha) for finite groups, the super 3-cocycle
// equation, stacking, and the supercohomology group.
//
// f and Z are Z2-valued cochains stored as 0/1 values. alpha is a phase
// cochain exp(2 pi i alpha / q) with exponents in Z_q.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fmpo/cohomology.hpp"

namespace fmpo {

struct SptLabel {
  FiniteGroup group;
  Cochain f;      // over G
  Cochain Z;      // over G^2
  Cochain alpha;  // over G^3, exponents mod q
  i64 q = 2;

  static SptLabel trivial(const FiniteGroup& g, i64 q);
};

struct LabelDiagnostics {
  bool f_homomorphism = true;
  bool Z_normalized = true;
  bool Z_cocycle = true;
  bool alpha_normalized = true;
  bool alpha_super_cocycle = true;
  std::vector<std::string> messages;  // one per violation, naming the arguments
  bool ok() const {
    return f_homomorphism && Z_normalized && Z_cocycle && alpha_normalized && alpha_super_cocycle;
  }
};

LabelDiagnostics verify_super_label(const SptLabel& x);

// (q/2) Z(g,h) Z(k,l): the inhomogeneous term of the super 3-cocycle
// equation in exponent form.
Cochain super_obstruction_term(const FiniteGroup& g, const Cochain& Z, i64 q);

// f'' = f + f', Z'' = Z + Z',
// alpha'' = alpha + alpha' + (q/2)(Z(gh,k) Z'(g,h) + Z(g,hk) Z'(h,k)).
// Labels with different moduli are lifted to the larger one first.
SptLabel stack(const SptLabel& x, const SptLabel& y);

// Lifts exponents to a modulus that is a multiple of the current one.
SptLabel with_modulus(const SptLabel& x, i64 q);

struct SuperCocycleSolutions {
  bool obstructed = false;
  i64 q = 2;
  Cochain particular;            // one solution
  std::vector<Cochain> classes;  // one representative per class (particular + H^3 class)
};

SuperCocycleSolutions solve_super_cocycle(const FiniteGroup& g, const Cochain& Z, int modulus_factor = 2);

class SupercohomologyGroup {
 public:
  explicit SupercohomologyGroup(const FiniteGroup& g, int modulus_factor = 2,
                                const CohomologyOptions& opt = {});

  const FiniteGroup& group() const { return group_; }
  i64 modulus() const { return q_; }
  int modulus_factor() const { return factor_; }
  const Cohomology& h2() const { return *h2_; }
  const Cohomology& h3() const { return *h3_; }

  int size() const { return static_cast<int>(elements_.size()); }
  // Z-classes (coordinates in h2()) that admit a solution.
  const std::vector<std::vector<i64>>& admissible_z_classes() const { return admissible_; }
  const std::vector<std::vector<i64>>& obstructed_z_classes() const { return obstructed_; }

  // Canonical label of element k (f = 0).
  SptLabel representative(int k) const;
  // Index of the class of a label with f = 0 whose Z equals the canonical
  // representative of its class. InputError otherwise.
  int class_of(const SptLabel& x) const;
  int product(int a, int b) const;
  int identity() const { return 0; }
  int element_order(int k) const;

  std::vector<i64> invariant_factors() const { return invariant_factors_; }
  std::string name() const { return abelian_group_name(invariant_factors_); }

  // Stacking is well defined on classes: random ordinary coboundary shifts
  // of alpha never change the class of a product. Returns the number of
  // violating trials.
  int well_definedness_violations(int trials, std::uint64_t seed) const;

 private:
  FiniteGroup group_;
  int factor_;
  i64 q_;
  std::shared_ptr<Cohomology> h2_, h3_;
  std::vector<std::vector<i64>> admissible_, obstructed_;
  std::vector<Cochain> particular_;  // per admissible Z class
  struct Element {
    int zslot;                 // index into admissible_
    std::vector<i64> acoords;  // coordinates in h3()
  };
  std::vector<Element> elements_;
  std::vector<i64> invariant_factors_;

  Cochain canonical_z(const std::vector<i64>& zc) const;
};

// Alternative: build at modulus_factor, and escalate (x2) when the
// well-definedness check fails.
SupercohomologyGroup build_supercohomology(const FiniteGroup& g, int modulus_factor = 2, int trials = 8,
                                           std::uint64_t seed = 99);

}  // namespace fmpo
