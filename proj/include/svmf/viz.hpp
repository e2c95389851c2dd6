#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "svmf/em.hpp"

namespace svmf {

// Column ordering of a pixel map. Arrays indexed by original dimension except
// `perm`, which lists original dimensions in display order.
struct DimensionOrdering {
  std::vector<Index> perm;
  std::vector<int> group_of;  // id of the block of equal counts, numbered along perm
  std::vector<int> counts;    // n_j: number of means with a nonzero in dimension j
};

/// Orders dimensions by: nonzero count (descending); then the binary column
/// pattern read over components in decreasing-alpha order, with 1 before 0;
/// then sum_k |mu_kj| (descending); then original index.
/// A coordinate counts as nonzero when |mu_kj| > epsilon.
DimensionOrdering order_dimensions(const MixtureParams& params, double epsilon = 1e-8);

/// Components by decreasing alpha, ties by index.
std::vector<int> order_components(const Vector& alpha);

/// Observations grouped by cluster in `component_order`, original order
/// inside each cluster.
std::vector<Index> order_observations(std::span<const int> labels, std::span<const int> component_order);

enum class PixelMode { Means, Data };

std::string to_string(PixelMode mode);

inline constexpr int kPaletteVersion = 1;
using Rgb = std::array<std::uint8_t, 3>;
const std::array<Rgb, 12>& pixel_palette();

struct PixelMapOptions {
  PixelMode mode = PixelMode::Means;
  int scale = 1;             // integer upscaling factor
  std::string comment;       // extra "#" line (e.g. the invoking configuration)
};

/// Binary PPM (P6) bytes: one pixel per (row, dimension) after permutation.
/// Hue from the dimension's group, intensity linear in |value| / max |value|;
/// zeros are white.
std::string pixel_map_bytes(const Matrix& m, const DimensionOrdering& dims, std::span<const Index> row_perm,
                            const PixelMapOptions& opts = {});
void render_pixel_map(const Matrix& m, const DimensionOrdering& dims, std::span<const Index> row_perm,
                      const std::filesystem::path& out_path, const PixelMapOptions& opts = {});

/// CSV with columns original_dim,position,group_id,n_j,abs_sum,signs.
/// `signs` lists, in component display order, +, - or 0 for each mean.
std::string ordering_csv(const MixtureParams& params, const DimensionOrdering& dims, double epsilon = 1e-8);

}  // namespace svmf
