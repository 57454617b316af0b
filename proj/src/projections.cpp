#include "misdef/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "misdef/error.hpp"

namespace misdef {

namespace {

void check_set(std::span<const double> y, const CappedSimplex& set) {
  if (set.dimension < 0 || static_cast<int>(y.size()) != set.dimension) {
    throw Error(ErrorCode::invalid_argument, "point size must match the simplex dimension");
  }
  if (!(set.budget >= 0.0) || !std::isfinite(set.budget)) {
    throw Error(ErrorCode::invalid_argument, "simplex budget must be finite and nonnegative");
  }
  for (double yi : y) {
    if (!std::isfinite(yi)) {
      throw Error(ErrorCode::invalid_argument, "projection input must be finite");
    }
  }
}

double clamped_sum(std::span<const double> y, double shift) {
  double total = 0.0;
  for (double yi : y) total += std::clamp(yi - shift, 0.0, 1.0);
  return total;
}

}  // namespace

PureStrategy top_k(std::span<const double> scores, int k) {
  if (k < 0) throw Error(ErrorCode::invalid_argument, "selection size must be nonnegative");
  const int m = static_cast<int>(scores.size());
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  const int take = std::min(k, m);
  std::partial_sort(order.begin(), order.begin() + take, order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(take);
  return PureStrategy(std::move(order));
}

std::vector<double> project_euclidean(std::span<const double> y, const CappedSimplex& set) {
  check_set(y, set);
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::clamp(y[i], 0.0, 1.0);
  const double box_sum = std::accumulate(x.begin(), x.end(), 0.0);
  if (box_sum <= set.budget) return x;
  if (set.budget == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return x;
  }

  // The shifted point x_i(t) = clamp(y_i - t, 0, 1) has a piecewise-linear,
  // nonincreasing budget usage g(t); its slope only changes at y_i and y_i - 1.
  std::vector<double> breakpoints;
  breakpoints.reserve(2 * y.size());
  for (double yi : y) {
    if (yi > 0.0) breakpoints.push_back(yi);
    if (yi - 1.0 > 0.0) breakpoints.push_back(yi - 1.0);
  }
  std::sort(breakpoints.begin(), breakpoints.end());

  double lo = 0.0;
  double g_lo = box_sum;  // g(0), known to exceed the budget
  double shift = breakpoints.empty() ? 0.0 : breakpoints.back();
  for (double bp : breakpoints) {
    const double g_bp = clamped_sum(y, bp);
    if (g_bp > set.budget) {
      lo = bp;
      g_lo = g_bp;
      continue;
    }
    // The crossing lies in [lo, bp]; g is linear there.
    if (g_bp == set.budget || g_lo == g_bp) {
      shift = bp;
    } else {
      shift = lo + (g_lo - set.budget) * (bp - lo) / (g_lo - g_bp);
    }
    break;
  }
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::clamp(y[i] - shift, 0.0, 1.0);
  return x;
}

std::vector<double> project_entropic(std::span<const double> y, const CappedSimplex& set,
                                     EntropicMode mode) {
  check_set(y, set);
  for (double yi : y) {
    if (yi < 0.0) {
      throw Error(ErrorCode::domain, "entropic projection requires nonnegative input");
    }
  }
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::min(y[i], 1.0);
  const double capped_sum = std::accumulate(x.begin(), x.end(), 0.0);
  if (capped_sum <= set.budget) return x;
  if (set.budget == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return x;
  }

  if (mode == EntropicMode::closed_form) {
    const double scale = set.budget / capped_sum;
    for (double& xi : x) xi *= scale;
    return x;
  }

  // Exact KL projection: x_i = min(1, t * y_i) with t chosen so the budget is
  // tight. Pin the largest coordinates at 1 one by one until the scale that
  // spends the remaining budget on the rest no longer saturates anything new.
  std::vector<int> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (y[a] != y[b]) return y[a] > y[b];
    return a < b;
  });
  double tail_sum = 0.0;
  for (double yi : y) tail_sum += yi;
  const int d = static_cast<int>(y.size());
  double t = 0.0;
  int pinned = 0;
  for (int j = 0; j <= d; ++j) {
    if (set.budget - j <= 0.0 || tail_sum <= 0.0) break;
    const double tj = (set.budget - j) / tail_sum;
    const bool pinned_ok = j == 0 || tj * y[order[j - 1]] >= 1.0 - 1e-12;
    const bool free_ok = j == d || tj * y[order[j]] <= 1.0 + 1e-12;
    if (pinned_ok && free_ok) {
      t = tj;
      pinned = j;
      break;
    }
    if (j < d) tail_sum -= y[order[j]];
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (int j = 0; j < pinned; ++j) x[order[j]] = 1.0;
  for (int j = pinned; j < d; ++j) x[order[j]] = std::min(1.0, t * y[order[j]]);
  return x;
}

std::vector<double> project_partition(std::span<const double> y,
                                      std::span<const int> first_block, double first_budget,
                                      std::span<const int> second_block, double second_budget,
                                      Geometry geometry) {
  if (first_block.size() + second_block.size() != y.size()) {
    throw Error(ErrorCode::domain, "blocks must partition the coordinate range");
  }
  std::vector<std::uint8_t> seen(y.size(), 0);
  auto check_block = [&](std::span<const int> block) {
    for (int i : block) {
      if (i < 0 || i >= static_cast<int>(y.size()) || seen[i]) {
        throw Error(ErrorCode::domain, "blocks must partition the coordinate range");
      }
      seen[i] = 1;
    }
  };
  check_block(first_block);
  check_block(second_block);

  std::vector<double> out(y.size(), 0.0);
  auto project_block = [&](std::span<const int> block, double budget) {
    if (block.empty()) return;
    std::vector<double> sub(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) sub[i] = y[block[i]];
    CappedSimplex set{static_cast<int>(block.size()), budget};
    std::vector<double> proj;
    switch (geometry) {
      case Geometry::euclidean:
        proj = project_euclidean(sub, set);
        break;
      case Geometry::entropic_closed_form:
        proj = project_entropic(sub, set, EntropicMode::closed_form);
        break;
      case Geometry::entropic_exact:
        proj = project_entropic(sub, set, EntropicMode::exact);
        break;
    }
    for (std::size_t i = 0; i < block.size(); ++i) out[block[i]] = proj[i];
  };
  project_block(first_block, first_budget);
  project_block(second_block, second_budget);
  return out;
}

}  // namespace misdef
