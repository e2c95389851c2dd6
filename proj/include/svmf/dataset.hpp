#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "svmf/types.hpp"

namespace svmf {

enum class MatrixFormat { DenseCsv, SparseTriplet };

MatrixFormat parse_matrix_format(const std::string& name);
std::string to_string(MatrixFormat format);

// An immutable N x d observation matrix, stored densely or as a row-major
// sparse matrix. Every numerical kernel goes through project() and
// weighted_sum(), so callers never branch on the storage.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Matrix dense);
  explicit Dataset(SparseMatrix sparse);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(data_); }
  bool normalized() const { return normalized_; }

  // Fraction of stored entries that are nonzero.
  double density() const;

  // Rows [begin, end) times M^T: an (end - begin) x M.rows() block of inner
  // products between observations and the rows of M.
  Matrix project(const Matrix& m, Index begin, Index end) const;
  Matrix project(const Matrix& m) const { return project(m, 0, rows()); }

  // W[begin:end]^T X[begin:end]: weighted sums of observations, one row per
  // column of W (which has one row per observation).
  Matrix weighted_sum(const Matrix& w, Index begin, Index end) const;
  Matrix weighted_sum(const Matrix& w) const { return weighted_sum(w, 0, rows()); }

  Vector row(Index i) const;
  Vector row_norms() const;
  Matrix to_dense() const;

  // Scales each row to unit Euclidean norm. Throws ZeroRowError naming every
  // all-zero row.
  void normalize_rows();

  // Max deviation of a row norm from 1.
  double max_unit_norm_error() const;

  const Matrix* dense() const { return std::get_if<Matrix>(&data_); }
  const SparseMatrix* sparse() const { return std::get_if<SparseMatrix>(&data_); }

 private:
  std::variant<Matrix, SparseMatrix> data_;
  bool normalized_ = false;
};

struct LoadReport {
  Index n = 0;
  Index d = 0;
  double density = 0.0;
  bool had_header = false;
};

// Dense CSV: comma separated, one observation per line, an optional header
// line (detected as a first line that does not parse as numbers). Lines
// starting with '#' are comments.
// Sparse triplet: whitespace separated "row col value" lines with 0-based
// indices; an optional "#shape N d" comment fixes the dimensions, otherwise
// they are inferred from the largest indices.
Dataset load_matrix(const std::filesystem::path& path, MatrixFormat format, bool normalize,
                    LoadReport* report = nullptr);

// Writes with 17 significant digits so that reloading is exact. A nonempty
// comment goes on a leading '#' line.
void save_matrix(const Dataset& data, const std::filesystem::path& path, MatrixFormat format,
                 const std::string& comment = "");

}  // namespace svmf
