#pragma once

// Z2-graded vector spaces and dense homogeneous tensors.
//
// Basis convention (global): on a space with (even_dim, odd_dim), indices
// 0..even_dim-1 are even and even_dim..dim-1 are odd. Every file format and
// every module relies on this ordering.
//
// A GradedTensor with legs (V_1, ..., V_n) is the element
//   sum_{i_1..i_n} t_{i_1..i_n} |i_1>|i_2>...|i_n>
// of the graded tensor product, with legs in the listed order. All fermionic
// signs in the library come from permute_legs; contract and tensor_product
// only ever reorder legs through it.

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fmpo/errors.hpp"

namespace fmpo {

using complex = std::complex<double>;

class GradedSpace {
 public:
  GradedSpace() = default;
  GradedSpace(int even_dim, int odd_dim);

  int even_dim() const { return even_; }
  int odd_dim() const { return odd_; }
  int dim() const { return even_ + odd_; }
  /// |i| under the even-sector-first convention.
  int parity(int i) const { return i >= even_ ? 1 : 0; }

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;

 private:
  int even_ = 1;
  int odd_ = 0;
};

class GradedTensor {
 public:
  GradedTensor() = default;
  /// Zero tensor of the given parity.
  GradedTensor(std::vector<GradedSpace> legs, int parity);
  /// Coefficients in row-major order over the legs. Entries in the forbidden
  /// parity sector must be exactly zero; otherwise InputError.
  GradedTensor(std::vector<GradedSpace> legs, int parity, std::vector<complex> coefficients);

  /// Same as the checked constructor, but forbidden-sector entries are zeroed
  /// instead of rejected.
  static GradedTensor projected(std::vector<GradedSpace> legs, int parity,
                                std::vector<complex> coefficients);

  int rank() const { return static_cast<int>(legs_.size()); }
  int parity() const { return parity_; }
  const std::vector<GradedSpace>& legs() const { return legs_; }
  const GradedSpace& leg(int k) const { return legs_.at(k); }
  std::size_t size() const { return data_.size(); }
  const std::vector<complex>& coefficients() const { return data_; }

  std::size_t flat_index(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;
  /// Sum of the basis parities of a multi-index (mod 2).
  int index_parity(std::size_t flat) const;

  complex operator[](std::size_t flat) const { return data_[flat]; }
  complex at(std::span<const int> idx) const { return data_[flat_index(idx)]; }
  complex at(std::initializer_list<int> idx) const;
  /// Writes one coefficient. A nonzero value in the forbidden parity sector
  /// throws InputError.
  void set(std::span<const int> idx, complex value);
  void set(std::initializer_list<int> idx, complex value);
  /// Unchecked access for builders that respect homogeneity themselves.
  complex& raw(std::size_t flat) { return data_[flat]; }

  /// Largest |coefficient| sitting in a forbidden parity sector.
  double homogeneity_violation() const;

  GradedTensor& operator*=(complex s);
  GradedTensor& operator+=(const GradedTensor& other);

 private:
  std::vector<GradedSpace> legs_;
  int parity_ = 0;
  std::vector<complex> data_;
  std::vector<std::size_t> strides_;

  void init_strides();
};

GradedTensor operator-(const GradedTensor& a, const GradedTensor& b);
double max_abs_diff(const GradedTensor& a, const GradedTensor& b);
double max_abs(const GradedTensor& t);

/// Reorders legs so that result leg k is input leg perm[k]. Each transposed
/// pair of odd basis vectors contributes a factor -1 (Koszul rule).
GradedTensor permute_legs(const GradedTensor& t, std::span<const int> perm);

/// Contracts leg pairs.first of `a` against leg pairs.second of `b`, with `a`
/// standing to the left of `b`. The paired legs are brought together nested:
/// `a`'s legs move to its right end (pairs[0] innermost) and `b`'s legs to its
/// left end, after which each adjacent pair is traced with the unit pairing.
/// Result legs: remaining legs of `a` followed by remaining legs of `b`.
GradedTensor contract(const GradedTensor& a, const GradedTensor& b,
                      std::span<const std::pair<int, int>> pairs);

/// Legs of a followed by legs of b; no reordering, hence no signs.
GradedTensor tensor_product(const GradedTensor& a, const GradedTensor& b);

/// sum_a (-1)^{|a|} m_{aa} for a two-leg tensor on a single space.
complex supertrace(const GradedTensor& m);

/// Diagonal (-1)^{|i|} on the given space (two legs, even).
GradedTensor parity_matrix(const GradedSpace& s);
GradedTensor identity_matrix(const GradedSpace& s);

/// Multiplies every coefficient by (-1)^{|i_leg|}; i.e. applies the parity
/// operator on one leg.
GradedTensor apply_parity(const GradedTensor& t, int leg);

/// Inverse of a permutation given as a list.
std::vector<int> inverse_permutation(std::span<const int> perm);

}  // namespace fmpo
