#include "svmf/viz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "svmf/error.hpp"

namespace svmf {

std::vector<int> order_components(const Vector& alpha) {
  std::vector<int> order(static_cast<std::size_t>(alpha.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return alpha[a] > alpha[b]; });
  return order;
}

std::vector<Index> order_observations(std::span<const int> labels, std::span<const int> component_order) {
  std::vector<int> rank(component_order.size(), 0);
  for (std::size_t r = 0; r < component_order.size(); ++r) rank.at(static_cast<std::size_t>(component_order[r])) = static_cast<int>(r);
  std::vector<Index> order(labels.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return rank.at(static_cast<std::size_t>(labels[static_cast<std::size_t>(a)])) <
           rank.at(static_cast<std::size_t>(labels[static_cast<std::size_t>(b)]));
  });
  return order;
}

DimensionOrdering order_dimensions(const MixtureParams& params, double epsilon) {
  const Index d = params.dim();
  const int k = params.n_components();
  const std::vector<int> rows = order_components(params.alpha);

  DimensionOrdering out;
  out.counts.assign(static_cast<std::size_t>(d), 0);
  std::vector<std::vector<char>> pattern(static_cast<std::size_t>(d), std::vector<char>(static_cast<std::size_t>(k)));
  std::vector<double> mass(static_cast<std::size_t>(d), 0.0);
  for (Index j = 0; j < d; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    for (int r = 0; r < k; ++r) {
      const double v = params.means(rows[static_cast<std::size_t>(r)], j);
      const bool nz = std::abs(v) > epsilon;
      pattern[sj][static_cast<std::size_t>(r)] = nz ? 1 : 0;
      out.counts[sj] += nz;
      mass[sj] += std::abs(v);
    }
  }

  out.perm.resize(static_cast<std::size_t>(d));
  std::iota(out.perm.begin(), out.perm.end(), Index{0});
  std::stable_sort(out.perm.begin(), out.perm.end(), [&](Index a, Index b) {
    const auto sa = static_cast<std::size_t>(a);
    const auto sb = static_cast<std::size_t>(b);
    if (out.counts[sa] != out.counts[sb]) return out.counts[sa] > out.counts[sb];
    if (pattern[sa] != pattern[sb]) return pattern[sa] > pattern[sb];  // 1 before 0 at the first difference
    return mass[sa] > mass[sb];
  });

  out.group_of.assign(static_cast<std::size_t>(d), 0);
  int group = -1;
  int current = -1;
  for (Index j : out.perm) {
    const int c = out.counts[static_cast<std::size_t>(j)];
    if (c != current) {
      ++group;
      current = c;
    }
    out.group_of[static_cast<std::size_t>(j)] = group;
  }
  return out;
}

std::string to_string(PixelMode mode) { return mode == PixelMode::Means ? "means" : "data"; }

const std::array<Rgb, 12>& pixel_palette() {
  static const std::array<Rgb, 12> palette{{
      {31, 119, 180},
      {255, 127, 14},
      {44, 160, 44},
      {214, 39, 40},
      {148, 103, 189},
      {140, 86, 75},
      {227, 119, 194},
      {127, 127, 127},
      {188, 189, 34},
      {23, 190, 207},
      {57, 59, 121},
      {173, 73, 74},
  }};
  return palette;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

std::string pixel_map_bytes(const Matrix& m, const DimensionOrdering& dims, std::span<const Index> row_perm,
                            const PixelMapOptions& opts) {
  const Index d = m.cols();
  if (static_cast<Index>(dims.perm.size()) != d || static_cast<Index>(dims.group_of.size()) != d)
    throw DimensionMismatch("pixel map: dimension ordering does not match the matrix");
  if (static_cast<Index>(row_perm.size()) != m.rows())
    throw DimensionMismatch("pixel map: row permutation does not match the matrix");
  if (opts.scale < 1) throw DomainError("pixel map: scale must be >= 1");

  const double max_abs = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  const auto& palette = pixel_palette();
  const std::size_t width = static_cast<std::size_t>(d) * static_cast<std::size_t>(opts.scale);
  const std::size_t height = row_perm.size() * static_cast<std::size_t>(opts.scale);

  std::string out = "P6\n# svmf pixel map palette=" + std::to_string(kPaletteVersion) +
                    " mode=" + to_string(opts.mode) + " max=" + format_double(max_abs) + "\n";
  if (!opts.comment.empty()) {
    std::string c = opts.comment;
    std::replace(c.begin(), c.end(), '\n', ' ');
    out += "# " + c + "\n";
  }
  out += std::to_string(width) + " " + std::to_string(height) + "\n255\n";

  std::string line;
  line.reserve(width * 3);
  for (Index r : row_perm) {
    line.clear();
    for (Index j : dims.perm) {
      const Rgb& hue = palette[static_cast<std::size_t>(dims.group_of[static_cast<std::size_t>(j)]) % palette.size()];
      const double s = max_abs > 0.0 ? std::abs(m(r, j)) / max_abs : 0.0;
      Rgb px;
      for (int ch = 0; ch < 3; ++ch)
        px[ch] = static_cast<std::uint8_t>(std::lround(255.0 - s * (255.0 - hue[ch])));
      for (int rep = 0; rep < opts.scale; ++rep)
        line.append(reinterpret_cast<const char*>(px.data()), 3);
    }
    for (int rep = 0; rep < opts.scale; ++rep) out += line;
  }
  return out;
}

void render_pixel_map(const Matrix& m, const DimensionOrdering& dims, std::span<const Index> row_perm,
                      const std::filesystem::path& out_path, const PixelMapOptions& opts) {
  const std::string bytes = pixel_map_bytes(m, dims, row_perm, opts);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + out_path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + out_path.string());
}

std::string ordering_csv(const MixtureParams& params, const DimensionOrdering& dims, double epsilon) {
  const std::vector<int> rows = order_components(params.alpha);
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "original_dim,position,group_id,n_j,abs_sum,signs\n";
  for (std::size_t pos = 0; pos < dims.perm.size(); ++pos) {
    const Index j = dims.perm[pos];
    double mass = 0.0;
    std::string signs;
    for (int r : rows) {
      const double v = params.means(r, j);
      mass += std::abs(v);
      signs += std::abs(v) <= epsilon ? '0' : (v > 0.0 ? '+' : '-');
    }
    os << j << ',' << pos << ',' << dims.group_of[static_cast<std::size_t>(j)] << ','
       << dims.counts[static_cast<std::size_t>(j)] << ',' << mass << ',' << signs << '\n';
  }
  return os.str();
}

}  // namespace svmf
