#pragma once

#include <span>
#include <vector>

#include "misdef/model.hpp"

namespace misdef {

struct CappedSimplex {
  int dimension = 0;
  double budget = 0.0;  // feasible set { 0 <= x <= 1, sum x <= budget }
};

/// Indices of the k largest scores; ties broken toward the lower index.
/// k >= dimension returns everything.
PureStrategy top_k(std::span<const double> scores, int k);

/// Euclidean projection onto the capped simplex. When the box-clamped point
/// is within budget it is returned directly; otherwise the KKT threshold t
/// with sum_i clamp(y_i - t, 0, 1) = budget is located exactly by walking the
/// sorted breakpoints {y_i, y_i - 1}. O(d log d).
std::vector<double> project_euclidean(std::span<const double> y, const CappedSimplex& set);

enum class EntropicMode {
  /// One-shot closed form: z = min(y, 1), lambda = max(0, ln(sum z / budget)),
  /// x = z * exp(-lambda). Cheap, feasible, but coordinates clipped before
  /// scaling can end strictly below 1 where the exact KL projection would
  /// saturate them.
  closed_form,
  /// Exact generalized-KL (Bregman) projection: iteratively pin coordinates
  /// that saturate at 1 and rescale the remainder until stable.
  exact,
};

/// KL projection onto the capped simplex. Requires y >= 0 (zeros stay zero);
/// throws ErrorCode::domain on negative coordinates.
std::vector<double> project_entropic(std::span<const double> y, const CappedSimplex& set,
                                     EntropicMode mode);

enum class Geometry { euclidean, entropic_closed_form, entropic_exact };

/// Block-separable projection onto a product of two capped simplices over a
/// partition of the index range. Throws ErrorCode::domain unless the two index
/// sets exactly partition [0, y.size()). A zero-budget block maps to zeros.
std::vector<double> project_partition(std::span<const double> y,
                                      std::span<const int> first_block, double first_budget,
                                      std::span<const int> second_block, double second_budget,
                                      Geometry geometry);

}  // namespace misdef
