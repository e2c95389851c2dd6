#include "svmf/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "svmf/error.hpp"

namespace svmf {

ZeroRowError::ZeroRowError(std::vector<std::size_t> rows)
    : Error("ZeroRow",
            [&] {
              std::string msg = "all-zero rows cannot be normalized:";
              for (std::size_t i = 0; i < rows.size() && i < 20; ++i) msg += " " + std::to_string(rows[i]);
              if (rows.size() > 20) msg += " ... (" + std::to_string(rows.size()) + " rows)";
              return msg;
            }()),
      rows_(std::move(rows)) {}

MatrixFormat parse_matrix_format(const std::string& name) {
  if (name == "dense-csv" || name == "csv") return MatrixFormat::DenseCsv;
  if (name == "sparse-triplet" || name == "triplet") return MatrixFormat::SparseTriplet;
  throw DomainError("unknown matrix format '" + name + "' (expected dense-csv or sparse-triplet)");
}

std::string to_string(MatrixFormat format) {
  return format == MatrixFormat::DenseCsv ? "dense-csv" : "sparse-triplet";
}

Dataset::Dataset(Matrix dense) : data_(std::move(dense)) {}

Dataset::Dataset(SparseMatrix sparse) : data_(std::move(sparse)) {
  std::get<SparseMatrix>(data_).makeCompressed();
}

Index Dataset::rows() const {
  return std::visit([](const auto& m) -> Index { return m.rows(); }, data_);
}

Index Dataset::cols() const {
  return std::visit([](const auto& m) -> Index { return m.cols(); }, data_);
}

double Dataset::density() const {
  const double total = static_cast<double>(rows()) * static_cast<double>(cols());
  if (total == 0.0) return 0.0;
  if (const auto* s = sparse()) return static_cast<double>(s->nonZeros()) / total;
  return static_cast<double>((dense()->array() != 0.0).count()) / total;
}

Matrix Dataset::project(const Matrix& m, Index begin, Index end) const {
  if (m.cols() != cols()) throw DimensionMismatch("project: dimension mismatch");
  if (const auto* s = sparse()) {
    const SparseMatrix block = s->middleRows(begin, end - begin);
    return block * m.transpose();
  }
  return dense()->middleRows(begin, end - begin) * m.transpose();
}

Matrix Dataset::weighted_sum(const Matrix& w, Index begin, Index end) const {
  if (w.rows() != rows()) throw DimensionMismatch("weighted_sum: weight rows must match observations");
  const Index n = end - begin;
  if (const auto* s = sparse()) {
    const SparseMatrix block = s->middleRows(begin, n);
    Matrix out = Matrix::Zero(w.cols(), cols());
    for (Index i = 0; i < n; ++i) {
      for (SparseMatrix::InnerIterator it(block, i); it; ++it) {
        out.col(it.col()) += it.value() * w.row(begin + i).transpose();
      }
    }
    return out;
  }
  return w.middleRows(begin, n).transpose() * dense()->middleRows(begin, n);
}

Vector Dataset::row(Index i) const {
  if (const auto* s = sparse()) return Vector(s->row(i).transpose());
  return dense()->row(i).transpose();
}

Vector Dataset::row_norms() const {
  if (const auto* s = sparse()) {
    Vector n(s->rows());
    for (Index i = 0; i < s->outerSize(); ++i) {
      double acc = 0.0;
      for (SparseMatrix::InnerIterator it(*s, i); it; ++it) acc += it.value() * it.value();
      n[i] = std::sqrt(acc);
    }
    return n;
  }
  return dense()->rowwise().norm();
}

Matrix Dataset::to_dense() const {
  if (const auto* s = sparse()) return Matrix(*s);
  return *dense();
}

void Dataset::normalize_rows() {
  const Vector norms = row_norms();
  std::vector<std::size_t> zero_rows;
  for (Index i = 0; i < norms.size(); ++i)
    if (!(norms[i] > 0.0)) zero_rows.push_back(static_cast<std::size_t>(i));
  if (!zero_rows.empty()) throw ZeroRowError(std::move(zero_rows));
  if (auto* s = std::get_if<SparseMatrix>(&data_)) {
    for (Index i = 0; i < s->outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(*s, i); it; ++it) it.valueRef() /= norms[i];
  } else {
    auto& d = std::get<Matrix>(data_);
    for (Index i = 0; i < d.rows(); ++i) d.row(i) /= norms[i];
  }
  normalized_ = true;
}

double Dataset::max_unit_norm_error() const {
  const Vector norms = row_norms();
  return norms.size() == 0 ? 0.0 : (norms.array() - 1.0).abs().maxCoeff();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& token, double& out) {
  const std::string t = trim(token);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Matrix load_dense_csv(const std::filesystem::path& path, std::ifstream& in, bool& had_header) {
  std::vector<double> values;
  Index d = -1;
  Index n = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto fields = split_commas(trim(line));
    std::vector<double> row(fields.size());
    bool ok = true;
    for (std::size_t j = 0; j < fields.size() && ok; ++j) ok = parse_double(fields[j], row[j]);
    if (!ok) {
      if (first_content) {
        had_header = true;
        first_content = false;
        continue;
      }
      throw ParseError(path.string(), line_no, "non-numeric field in '" + trim(line) + "'");
    }
    first_content = false;
    if (d < 0) d = static_cast<Index>(row.size());
    if (static_cast<Index>(row.size()) != d)
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(d) + " fields, got " + std::to_string(row.size()));
    values.insert(values.end(), row.begin(), row.end());
    ++n;
  }
  if (n == 0) throw ParseError(path.string(), line_no, "no observations");
  Matrix m(n, d);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

SparseMatrix load_triplets(const std::filesystem::path& path, std::ifstream& in) {
  std::vector<Eigen::Triplet<double>> triplets;
  long declared_n = -1;
  long declared_d = -1;
  long max_row = -1;
  long max_col = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::istringstream hs(t.substr(1));
      std::string key;
      hs >> key;
      if (key == "shape") {
        if (!(hs >> declared_n >> declared_d) || declared_n <= 0 || declared_d <= 0)
          throw ParseError(path.string(), line_no, "malformed '#shape N d' line");
      }
      continue;
    }
    std::istringstream ls(t);
    std::string a, b, c, extra;
    if (!(ls >> a >> b >> c) || (ls >> extra))
      throw ParseError(path.string(), line_no, "expected 'row col value'");
    long r = 0;
    long col = 0;
    double v = 0.0;
    auto [p1, e1] = std::from_chars(a.data(), a.data() + a.size(), r);
    auto [p2, e2] = std::from_chars(b.data(), b.data() + b.size(), col);
    if (e1 != std::errc() || p1 != a.data() + a.size() || e2 != std::errc() ||
        p2 != b.data() + b.size() || r < 0 || col < 0)
      throw ParseError(path.string(), line_no, "indices must be nonnegative integers");
    if (!parse_double(c, v)) throw ParseError(path.string(), line_no, "value is not a finite number");
    max_row = std::max(max_row, r);
    max_col = std::max(max_col, col);
    triplets.emplace_back(static_cast<Index>(r), static_cast<Index>(col), v);
  }
  const long n = declared_n > 0 ? declared_n : max_row + 1;
  const long d = declared_d > 0 ? declared_d : max_col + 1;
  if (n <= 0 || d <= 0) throw ParseError(path.string(), line_no, "no entries and no #shape line");
  if (max_row >= n || max_col >= d)
    throw ParseError(path.string(), line_no, "entry outside the declared #shape");
  SparseMatrix m(n, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(0.0);
  return m;
}

}  // namespace

Dataset load_matrix(const std::filesystem::path& path, MatrixFormat format, bool normalize,
                    LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  bool had_header = false;
  Dataset data = format == MatrixFormat::DenseCsv ? Dataset(load_dense_csv(path, in, had_header))
                                                  : Dataset(load_triplets(path, in));
  if (normalize) data.normalize_rows();
  if (report) *report = {data.rows(), data.cols(), data.density(), had_header};
  return data;
}

void save_matrix(const Dataset& data, const std::filesystem::path& path, MatrixFormat format,
                 const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  if (format == MatrixFormat::DenseCsv) {
    const Matrix m = data.to_dense();
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << m(i, j);
      }
      out << '\n';
    }
  } else {
    out << "#shape " << data.rows() << ' ' << data.cols() << '\n';
    SparseMatrix s = data.is_sparse() ? *data.sparse() : data.dense()->sparseView();
    for (Index i = 0; i < s.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(s, i); it; ++it)
        out << i << ' ' << it.col() << ' ' << it.value() << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace svmf
