#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace longnet::svg {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Line chart on the unit square, as used for ROC and PR curves.
std::string curves(const std::string& title, const std::string& x_label,
                   const std::string& y_label, const std::vector<Series>& series);

struct Box {
  std::string label;
  std::vector<double> values;
  std::optional<double> marker;  ///< drawn as a red dot, e.g. the observed value
};

/// One panel of boxplots (quartiles, 1.5 IQR whiskers) with an optional
/// dashed reference line.
std::string boxplots(const std::string& title, const std::string& y_label,
                     const std::vector<Box>& boxes, std::optional<double> reference = std::nullopt);

/// Stacks panels vertically into one document.
std::string stack(const std::vector<std::string>& panels);

}  // namespace longnet::svg
