#include "rssloc/conic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rssloc {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

void ConicProgram::validate() const {
  if (num_vars < 0) throw std::invalid_argument("ConicProgram: negative num_vars");
  if (objective.size() != num_vars) {
    throw std::invalid_argument("ConicProgram: objective size != num_vars");
  }
  for (const ConeBlock& blk : blocks) {
    if (blk.A.cols() != num_vars) {
      throw std::invalid_argument("ConicProgram: block column count != num_vars");
    }
    if (blk.A.rows() != blk.b.size()) {
      throw std::invalid_argument("ConicProgram: block row/offset mismatch");
    }
    switch (blk.cone) {
      case Cone::PsdTriangle:
        if (blk.side <= 0 || blk.rows() != svec_size(blk.side)) {
          throw std::invalid_argument("ConicProgram: bad PSD block dimensions");
        }
        break;
      case Cone::SecondOrder:
        if (blk.rows() < 2) {
          throw std::invalid_argument("ConicProgram: SOC block needs dim >= 2");
        }
        break;
      default:
        if (blk.rows() < 1) {
          throw std::invalid_argument("ConicProgram: empty block");
        }
        break;
    }
  }
}

int svec_index(int i, int j, int side) {
  if (j > i) std::swap(i, j);
  if (i >= side || j < 0) throw std::invalid_argument("svec_index: out of range");
  // Entries of columns 0..j-1 come first, then rows j..i of column j.
  return j * side - j * (j - 1) / 2 + (i - j);
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::invalid_argument("svec: non-square input");
  Eigen::VectorXd v(svec_size(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      v[k++] = (i == j) ? m(i, j) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v) {
  // Invert n(n+1)/2 = size.
  const int size = static_cast<int>(v.size());
  const int n = static_cast<int>(std::lround((std::sqrt(8.0 * size + 1.0) - 1.0) / 2.0));
  if (svec_size(n) != size) throw std::invalid_argument("smat: bad vector length");
  Eigen::MatrixXd m(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      const double val = (i == j) ? v[k] : v[k] / kSqrt2;
      m(i, j) = val;
      m(j, i) = val;
      ++k;
    }
  }
  return m;
}

LmiBuilder::LmiBuilder(int side, int num_vars)
    : side_(side),
      A_(Eigen::MatrixXd::Zero(svec_size(side), num_vars)),
      b_(Eigen::VectorXd::Zero(svec_size(side))) {
  if (side < 1) throw std::invalid_argument("LmiBuilder: side must be >= 1");
}

LmiBuilder& LmiBuilder::constant(int i, int j, double v) {
  const int k = svec_index(i, j, side_);
  b_[k] += (i == j) ? v : kSqrt2 * v;
  return *this;
}

LmiBuilder& LmiBuilder::coeff(int i, int j, int var, double v) {
  const int k = svec_index(i, j, side_);
  A_(k, var) += (i == j) ? v : kSqrt2 * v;
  return *this;
}

ConeBlock LmiBuilder::build() const {
  ConeBlock blk;
  blk.cone = Cone::PsdTriangle;
  blk.side = side_;
  blk.A = A_;
  blk.b = b_;
  return blk;
}

double cone_violation(const ConeBlock& block, const Eigen::VectorXd& y) {
  const Eigen::VectorXd s = block.A * y + block.b;
  switch (block.cone) {
    case Cone::Zero:
      return s.cwiseAbs().maxCoeff();
    case Cone::Nonnegative:
      return std::max(0.0, -s.minCoeff());
    case Cone::SecondOrder: {
      const double margin = s[0] - s.tail(s.size() - 1).norm();
      return std::max(0.0, -margin);
    }
    case Cone::PsdTriangle: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(s));
      return std::max(0.0, -es.eigenvalues().minCoeff());
    }
  }
  return 0.0;
}

double max_violation(const ConicProgram& program, const Eigen::VectorXd& y) {
  double worst = 0.0;
  for (const ConeBlock& blk : program.blocks) {
    worst = std::max(worst, cone_violation(blk, y));
  }
  return worst;
}

void dump_program(const ConicProgram& program, std::ostream& os) {
  os << "vars " << program.num_vars << "\n";
  for (int j = 0; j < program.num_vars; ++j) {
    if (program.objective[j] != 0.0) {
      os << "obj " << j << " " << program.objective[j] << "\n";
    }
  }
  for (std::size_t k = 0; k < program.blocks.size(); ++k) {
    const ConeBlock& blk = program.blocks[k];
    const char* name = "zero";
    if (blk.cone == Cone::Nonnegative) name = "nonneg";
    if (blk.cone == Cone::SecondOrder) name = "soc";
    if (blk.cone == Cone::PsdTriangle) name = "psd";
    os << "block " << k << " " << name << " " << blk.rows();
    if (blk.cone == Cone::PsdTriangle) os << " side " << blk.side;
    os << "\n";
    for (int r = 0; r < blk.rows(); ++r) {
      for (int c = 0; c < blk.A.cols(); ++c) {
        if (blk.A(r, c) != 0.0) {
          os << k << " " << r << " " << c << " " << blk.A(r, c) << "\n";
        }
      }
      if (blk.b[r] != 0.0) {
        os << k << " " << r << " -1 " << blk.b[r] << "\n";
      }
    }
  }
}

}  // namespace rssloc
