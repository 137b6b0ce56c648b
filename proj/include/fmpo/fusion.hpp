#pragma once

// Fusion data, F-symbols and the fermionic pentagon equation; zipper
// solutions for fMPO blocks and F-symbol extraction from them.
//
// F-symbol key (a,b,c,d,e,f,alpha,beta,mu,nu) stands for
// [F^{abc}_d]^{f mu nu}_{e alpha beta} with alpha in V_{ab}^e, beta in
// V_{ec}^d, mu in V_{bc}^f and nu in V_{af}^d.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fmpo/fmpo_algebra.hpp"

namespace fmpo {

using FKey = std::array<int, 10>;

struct FusionRules {
  int num_labels = 1;
  std::map<std::array<int, 3>, int> N;              // (a,b,c) -> N_{ab}^c, absent = 0
  std::map<std::array<int, 4>, int> deg_parity;     // (a,b,c,mu) -> |mu|

  int mult(int a, int b, int c) const;
  int dpar(int a, int b, int c, int mu) const;
  // all c with N_{ab}^c > 0
  std::vector<int> outcomes(int a, int b) const;
};

struct AssociatorTable {
  FusionRules rules;
  std::map<FKey, complex> F;

  complex get(const FKey& k) const;
  complex get(int a, int b, int c, int d, int e, int f, int al, int be, int mu, int nu) const {
    return get(FKey{a, b, c, d, e, f, al, be, mu, nu});
  }
  // Admissible keys: all four fusion channels allowed.
  std::vector<FKey> admissible_keys() const;
};

struct FusionCategoryData {
  std::vector<std::string> names;
  std::vector<int> label_parity;  // parity of the object class (informational)
  AssociatorTable table;
  bool unitary = false;
};

// Structural problems: entries on forbidden channels, odd entries (degeneracy
// parities not matching), singular F matrices. Empty when valid.
std::vector<std::string> validate_table(const AssociatorTable& t, double tol = 1e-10);

// F matrix [F^{abc}_d] with rows (e, alpha, beta) and columns (f, mu, nu).
struct FMatrix {
  std::vector<std::array<int, 3>> rows, cols;
  Mat m;
};
FMatrix f_matrix(const AssociatorTable& t, int a, int b, int c, int d);

// LHS - RHS of every pentagon equation, in a fixed enumeration order.
std::vector<complex> pentagon_equations(const AssociatorTable& t);
double pentagon_residual(const AssociatorTable& t);

// Largest |(F^{-1}) - conj(F)| entry over all F matrices (inverse taken as
// the matrix inverse with rows (f,mu,nu) and columns (e,alpha,beta)).
double unitarity_residual(const AssociatorTable& t);

// Even invertible matrices per fusion space V_{ab}^c, indexed (a,b,c).
using GaugeMatrices = std::map<std::array<int, 3>, Mat>;
AssociatorTable gauge_transform(const AssociatorTable& t, const GaugeMatrices& g);

struct GaugeComparison {
  bool equivalent = false;
  double magnitude_residual = 0.0;  // least-squares residual on log|ratio|
  double phase_residual = 0.0;      // worst obstruction y . arg(ratio) / 2 pi distance to Z
  std::string reason;
};
// Multiplicity-free tables only.
GaugeComparison gauge_equivalent(const AssociatorTable& a, const AssociatorTable& b, double tol = 1e-6);

// ---- zipper and extraction ----

struct FusionTensorSet {
  GradedSpace product_space;  // virtual space of multiply(a, b)
  GradedSpace target_space;   // virtual space of c
  std::vector<Mat> X;         // product_space x target_space
  std::vector<int> parity;    // |mu|
  double residual = 0.0;      // worst zipper residual over the returned X
};

// Solves C^{ik} X = (-1)^{|mu|(|i|+|k|)} X B_c^{ik} with C the stacked tensor
// of multiply(a, b), separately for |mu| = 0 and 1.
FusionTensorSet solve_zipper(const FmpoSiteTensor& a, const FmpoSiteTensor& b, const FmpoSiteTensor& c,
                             double sv_tol = 1e-8);

struct ZipperData {
  std::vector<FmpoSiteTensor> blocks;
  std::map<std::array<int, 3>, FusionTensorSet> X;  // only channels with solutions
  std::vector<std::string> warnings;                // support-assumption diagnostics
};

ZipperData solve_all_zippers(const std::vector<FmpoSiteTensor>& blocks, double sv_tol = 1e-8);

// N_{ab}^c counts solutions for the fMPO product a.b (fMPO order).
FusionRules fusion_rules_from_zippers(const ZipperData& z);

// The fMPO product a.b carries the category channel V_{ba}, so the returned
// table has rules transposed relative to fusion_rules_from_zippers:
//   [F^{cba}_d]^{f mu nu}_{e sigma rho}
//     = tr((X_fc^d)^-1 (X_ab^f (x) 1)^-1 (1 (x) X_bc^e) X_ae^d) / dim(d).
AssociatorTable compute_f_symbols(const ZipperData& z, double drop_tol = 1e-12);

// Worst deviation in (1 (x) X_bc^e) X_ae^d = sum F (X_ab^f (x) 1) X_fc^d.
double fmove_residual(const ZipperData& z, const AssociatorTable& F);

struct FusionRuleFit {
  std::vector<double> multiplicity;   // fitted N_{ab}^c per library block (trace closure)
  std::vector<double> graded;         // fitted n_even - n_odd (supertrace closure)
  std::vector<int> rounded;
  double residual = 0.0;
};
// Fits the closed operators of a x b, L = 1..L_max, against the library.
// Throws ConsistencyError if the product leaves the library.
FusionRuleFit fusion_rules(const FmpoSiteTensor& a, const FmpoSiteTensor& b,
                           const std::vector<FmpoSiteTensor>& library, int L_max = 3, double tol = 1e-8,
                           std::size_t max_dense_dim = 4096);

}  // namespace fmpo
