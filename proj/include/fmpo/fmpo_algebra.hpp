#pragma once

// Translation-invariant fermionic MPOs: site tensors, closure, products and
// block decomposition.
//
// Site tensor legs are (alpha, i, j, beta): virtual-left ket, physical ket,
// physical bra, virtual-right bra, i.e. the element
//   sum B^{ij}_{ab} |a)|i><j|(b|.
// Closing L sites gives tr(Delta B^{i1 j1} ... B^{iL jL}) on |i1..iL><jL..j1|,
// which in the ordinary tensor-product basis |I><J| picks up the sign
// (-1)^{sum_s (|i_s|+|j_s|) sum_{t<s} |j_t|}. Supertrace closure is Delta = Lambda.

#include <cstdint>
#include <optional>
#include <vector>

#include "fmpo/graded.hpp"
#include "fmpo/linalg.hpp"

namespace fmpo {

class FmpoSiteTensor {
 public:
  FmpoSiteTensor() = default;
  // Throws InputError unless t has legs (virt, phys, phys, virt) and is even.
  FmpoSiteTensor(GradedTensor t);

  static FmpoSiteTensor from_blocks(const GradedSpace& virt, const GradedSpace& phys,
                                    const std::vector<Mat>& blocks);

  const GradedSpace& virtual_space() const { return tensor_.leg(0); }
  const GradedSpace& physical_space() const { return tensor_.leg(1); }
  const GradedTensor& tensor() const { return tensor_; }
  int bond_dim() const { return virtual_space().dim(); }
  int phys_dim() const { return physical_space().dim(); }

  // D x D matrix B^{ij}.
  Mat block(int i, int j) const;
  // All B^{ij}, indexed i * phys_dim + j.
  std::vector<Mat> blocks() const;

 private:
  GradedTensor tensor_;
};

enum class Closure { Supertrace, Boundary };

struct Fmpo {
  FmpoSiteTensor site;
  Closure closure = Closure::Supertrace;
  GradedTensor delta;  // Boundary only: two legs on the virtual space

  static Fmpo with_supertrace(FmpoSiteTensor s);
  static Fmpo with_boundary(FmpoSiteTensor s, GradedTensor delta);

  // Lambda for supertrace closure, Delta otherwise.
  Mat boundary_matrix() const;
  int parity() const { return closure == Closure::Supertrace ? 0 : delta.parity(); }
};

struct DenseOperator {
  Mat m;  // rows/cols in the row-major product basis over sites
  int parity = 0;
};

DenseOperator close_to_operator(const Fmpo& m, int L, std::size_t max_dense_dim = 4096);

// Stacked site tensor sum_j A^{ij} (x) B^{jk}, grouped as ket |a g) and
// bra (d b|. The combined virtual index is re-sorted even-first.
Fmpo multiply(const Fmpo& a, const Fmpo& b);

// Position of the product basis vector (x, y) (flat index x * dim(b) + y) in
// the even-first virtual space used by multiply.
std::vector<int> fused_positions(const GradedSpace& a, const GradedSpace& b);
GradedSpace fused_space(const GradedSpace& a, const GradedSpace& b);

// Block-diagonal direct sum; boundary matrices are summed block-diagonally
// and must share a parity.
Fmpo direct_sum(const std::vector<Fmpo>& parts);

// Applies an even invertible gauge G on the virtual space: B -> G B G^-1,
// Delta -> G Delta G^-1.
Fmpo gauge_conjugate(const Fmpo& m, const Mat& g);

enum class AlgebraType { Even, Odd };

struct GradedAlgebraBlock {
  Fmpo fmpo;            // restricted site tensor with the induced boundary
  AlgebraType type = AlgebraType::Even;
  Mat embed;            // U: block space -> original virtual space
  Mat project;          // W: original virtual space -> block space
};

struct DecomposeOptions {
  double tol = 1e-9;
  std::uint64_t seed = 12345;
};

// Splits the virtual space into graded-simple blocks. Throws
// ConsistencyError when the generated algebra is not semisimple.
std::vector<GradedAlgebraBlock> decompose_blocks(const Fmpo& m, const DecomposeOptions& opt = {});

// Even when the generated algebra is simple as an ungraded algebra, Odd when
// it is a sum of two simple ideals exchanged by parity. Throws
// ConsistencyError if the algebra is not graded-simple.
AlgebraType classify_block_type(const FmpoSiteTensor& s, const DecomposeOptions& opt = {});

// An odd element of the centre of the generated algebra (as an ungraded
// algebra), or nullopt when the centre is purely even. For an Odd block this
// is the difference of the two exchanged central idempotents, up to scale,
// and serves as an odd boundary matrix.
std::optional<Mat> odd_central_element(const FmpoSiteTensor& s, double tol = 1e-9);

bool projector_check(const Fmpo& m, int L_max, double tol = 1e-10,
                     std::size_t max_dense_dim = 4096);

// Basis (vectorized, orthonormal columns) of the associative algebra
// generated by the given matrices, closed under multiplication.
Mat generated_algebra(const std::vector<Mat>& gens, double tol);

}  // namespace fmpo
