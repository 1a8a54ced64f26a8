#pragma once

// Shared fixtures for the test suite: the bundled example panel (four
// partially filled relations), its completed counterparts at full precision,
// the two-decimal variants of the same matrices as used by the worked
// examples, and the suggested-values panel.  Plus a couple of helpers.

#include <functional>
#include <string>
#include <vector>

#include "concord/error.hpp"
#include "concord/fpr.hpp"

#include "doctest.h"

namespace fixtures {

using concord::Grid;
using concord::OptionalGrid;

// Marks a missing cell in the literal grids below.
inline constexpr double NA = -1.0;

inline OptionalGrid with_missing(const Grid& rows) {
  OptionalGrid grid;
  grid.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::optional<double>> cells;
    cells.reserve(row.size());
    for (double v : row) {
      if (v == NA) {
        cells.push_back(std::nullopt);
      } else {
        cells.push_back(v);
      }
    }
    grid.push_back(std::move(cells));
  }
  return grid;
}

// The four incomplete relations of the bundled example panel.
inline OptionalGrid p1_raw() {
  return with_missing({{0.5, 0.33, 0.7, 0.6},
                       {NA, 0.5, NA, NA},
                       {NA, NA, 0.5, NA},
                       {NA, NA, NA, 0.5}});
}
inline OptionalGrid p2_raw() {
  return with_missing({{0.5, NA, 0.7, 0.3},
                       {0.6, 0.5, NA, 0.7},
                       {0.3, NA, 0.5, NA},
                       {NA, 0.47, NA, 0.5}});
}
inline OptionalGrid p3_raw() {
  return with_missing({{0.5, 0.3, 0.5, 0.75},
                       {0.6, 0.5, NA, 0.6},
                       {NA, 0.7, 0.5, NA},
                       {0.3, 0.4, NA, 0.5}});
}
inline OptionalGrid p4_raw() {
  return with_missing({{0.5, NA, 0.6, 0.3},
                       {0.4, 0.5, 0.45, 0.2},
                       {0.5, 0.6, 0.5, 0.3},
                       {0.7, 0.7, 0.7, 0.5}});
}

// Their completions at full precision (frozen from an independent
// implementation of the estimation rules).
inline Grid cp1() {
  return {{0.5, 0.33, 0.7, 0.6},
          {0.67, 0.5, 0.87, 0.77},
          {0.3, 0.13, 0.5, 0.4},
          {0.4, 0.23, 0.6, 0.5}};
}
inline Grid cp2() {
  return {{0.5, 0.185, 0.7, 0.3},
          {0.6, 0.5, 0.8, 0.7},
          {0.3, 0.2, 0.5, 0.1},
          {0.485, 0.47, 0.9, 0.5}};
}
inline Grid cp3() {
  return {{0.5, 0.3, 0.5, 0.75},
          {0.6, 0.5, 0.65, 0.6},
          {0.85, 0.7, 0.5, 0.7833333333333333},
          {0.3, 0.4, 0.25, 0.5}};
}
inline Grid cp4() {
  return {{0.5, 0.5916666666666667, 0.6, 0.3},
          {0.4, 0.5, 0.45, 0.2},
          {0.5, 0.6, 0.5, 0.3},
          {0.7, 0.7, 0.7, 0.5}};
}

// The same completed matrices rounded to two decimals, as the worked
// examples print them.
inline Grid cp1_printed() { return cp1(); }
inline Grid cp2_printed() {
  return {{0.5, 0.19, 0.7, 0.3},
          {0.6, 0.5, 0.8, 0.7},
          {0.3, 0.2, 0.5, 0.1},
          {0.49, 0.47, 0.9, 0.5}};
}
inline Grid cp3_printed() {
  return {{0.5, 0.3, 0.5, 0.75},
          {0.6, 0.5, 0.65, 0.6},
          {0.85, 0.7, 0.5, 0.78},
          {0.3, 0.4, 0.25, 0.5}};
}
inline Grid cp4_printed() {
  return {{0.5, 0.59, 0.6, 0.3},
          {0.4, 0.5, 0.45, 0.2},
          {0.5, 0.6, 0.5, 0.3},
          {0.7, 0.7, 0.7, 0.5}};
}

// Two-decimal collective similarity matrix of the worked example (diagonal
// filled with 1, which the consensus chain never reads).
inline Grid sm_printed() {
  return {{1.0, 0.79, 0.88, 0.72},
          {0.87, 1.0, 0.77, 0.7},
          {0.69, 0.65, 1.0, 0.64},
          {0.79, 0.75, 0.66, 1.0}};
}

// The resolved panel bundled as example_panel_resolved.json.
inline Grid spv1() {
  return {{0.5, 0.03, 0.5, 0.5},
          {0.97, 0.5, 0.77, 0.07},
          {0.5, 0.23, 0.5, 0.1},
          {0.5, 0.93, 0.9, 0.5}};
}
inline Grid spv2() {
  return {{0.5, 0.09, 0.9, 0.4},
          {0.7, 0.5, 0.8, 0.2},
          {0.1, 0.2, 0.5, 0.1},
          {0.39, 0.97, 0.9, 0.5}};
}
inline Grid spv3() {
  return {{0.5, 0.0, 0.9, 0.65},
          {0.9, 0.5, 0.85, 0.1},
          {0.45, 0.5, 0.5, 0.18},
          {0.4, 0.9, 0.85, 0.5}};
}
inline Grid spv4() {
  return {{0.5, 0.09, 0.7, 0.4},
          {0.9, 0.5, 0.85, 0.0},
          {0.4, 0.2, 0.5, 0.1},
          {0.6, 0.9, 0.9, 0.5}};
}

// Frozen full-precision metric values for the completed example panel.
inline std::vector<double> expected_cls() {
  return {1.0, 0.9022222222222222, 0.8712962962962963, 0.9662037037037037};
}
inline constexpr double kExpectedGlobalCl = 0.9349305555555556;
inline Grid expected_sm() {
  return {{1.0, 0.7916666666666666, 0.8833333333333333, 0.725},
          {0.865, 1.0, 0.765, 0.6983333333333333},
          {0.6916666666666667, 0.6483333333333333, 1.0, 0.6416666666666667},
          {0.7858333333333333, 0.7533333333333333, 0.6583333333333333, 1.0}};
}
inline std::vector<double> expected_ca() {
  return {0.7904166666666667, 0.7536111111111111, 0.7147222222222222,
          0.7104166666666667};
}
inline constexpr double kExpectedCr = 0.7422916666666667;
inline constexpr double kExpectedCcl = 0.8097152777777778;
inline constexpr double kExpectedCost = 0.1902847222222222;

// Frozen metrics for the suggested-values panel.
inline constexpr double kSpvGlobalCl = 0.71875;
inline constexpr double kSpvCr = 0.8909722222222222;
inline constexpr double kSpvCcl = 0.8306944444444444;

inline std::string data_file(const std::string& name) {
  return std::string(CONCORD_DATA_DIR) + "/" + name;
}

// Asserts that `fn` throws a concord::Error carrying `code`.
inline void check_error(concord::ErrorCode code,
                        const std::function<void()>& fn) {
  const std::string wanted = concord::to_string(code);
  try {
    fn();
    FAIL_CHECK("expected an error with code " << wanted
                                              << ", but nothing was thrown");
  } catch (const concord::Error& e) {
    const std::string got = concord::to_string(e.code());
    CHECK_MESSAGE(e.code() == code, "expected code " << wanted << ", got "
                                                     << got << " (" << e.what()
                                                     << ")");
  }
}

}  // namespace fixtures
