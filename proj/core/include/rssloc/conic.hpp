#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

namespace rssloc {

/// Cone types for the blocks of a conic program.
enum class Cone { Zero, Nonnegative, SecondOrder, PsdTriangle };

/// One cone block: the affine image s = A y + b must lie in the cone.
/// PsdTriangle blocks carry the scaled lower triangle (svec) of a symmetric
/// side x side matrix: columns j = 0..n-1, rows i = j..n-1, off-diagonal
/// entries multiplied by sqrt(2) so that the svec inner product equals the
/// Frobenius inner product.
struct ConeBlock {
  Cone cone = Cone::Nonnegative;
  int side = 0;  ///< PSD side length; 0 for non-PSD cones
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  int rows() const { return static_cast<int>(b.size()); }
};

/// Solver-agnostic conic program: minimize objective . y subject to every
/// block's affine image lying in its cone.
struct ConicProgram {
  int num_vars = 0;
  Eigen::VectorXd objective;
  std::vector<ConeBlock> blocks;

  /// Throws std::invalid_argument on dimension mismatches.
  void validate() const;
};

/// Number of svec entries for a side-n symmetric matrix.
inline int svec_size(int side) { return side * (side + 1) / 2; }

/// Flat svec index of entry (i, j), i >= j, for a side-n matrix.
int svec_index(int i, int j, int side);

/// Scaled lower-triangle vectorization and its inverse.
Eigen::VectorXd svec(const Eigen::MatrixXd& symmetric);
Eigen::MatrixXd smat(const Eigen::VectorXd& v);

/// Incrementally builds the svec'd affine map of one LMI block
///   S(y) = F0 + sum_k y_k F_k  >= 0.
class LmiBuilder {
 public:
  LmiBuilder(int side, int num_vars);

  /// Adds v to the constant term at (i, j) (and (j, i)).
  LmiBuilder& constant(int i, int j, double v);
  /// Adds v * y[var] to the entry at (i, j) (and (j, i)).
  LmiBuilder& coeff(int i, int j, int var, double v);

  ConeBlock build() const;

 private:
  int side_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
};

/// Maximum violation of a single block at y: 0 when the image is in the cone,
/// otherwise the distance-like margin (negative part, eigenvalue deficit, or
/// norm excess).
double cone_violation(const ConeBlock& block, const Eigen::VectorXd& y);

/// Maximum violation across all blocks.
double max_violation(const ConicProgram& program, const Eigen::VectorXd& y);

/// Plain-text sparse dump (one line per nonzero: block row col value; the
/// offset column is printed as col = -1) for cross-checking against external
/// tools.
void dump_program(const ConicProgram& program, std::ostream& os);

}  // namespace rssloc
