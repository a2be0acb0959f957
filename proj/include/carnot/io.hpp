#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carnot/extensions.hpp"

namespace carnot {

// Malformed or inconsistent input files (exit status 2).
class InputError : public Error {
 public:
  using Error::Error;
};

struct LoadedGroup {
  std::filesystem::path path;
  std::string name;
  AlgebraPtr algebra;
  AlgebraValidation validation;
  GroupPtr group;  // null when the brackets are not homogeneous for the weights
};

// Group file: name, dimension, layers (1-based inclusive index ranges, one
// per weight), brackets, optional labels / coordinates / covectors.
LoadedGroup load_group(const std::filesystem::path& path);
LoadedGroup parse_group(std::string_view text, const std::string& source = "<string>");

struct NamedForm {
  std::string name;
  bool on_source = false;
  PolyForm form;
};

struct ChainSpec {
  std::string form;
  int page = 1;
  std::vector<std::string> witnesses;
};

struct Scenario {
  std::filesystem::path path;
  std::string title;
  LoadedGroup source;
  LoadedGroup target;
  std::optional<PolyMap> map;
  std::vector<NamedForm> forms;  // file order
  std::vector<std::pair<std::string, WeightedPoly>> functions;  // on the target

  std::vector<std::string> commute_forms;
  std::vector<int> commute_pages;
  std::optional<int> commute_bound;
  std::vector<ChainSpec> chains;

  std::optional<std::string> extend_cocycle;
  std::optional<std::string> extend_shift;
  std::string extend_label = "W";

  std::string lift_mode = "pansu";  // "pansu" or "jacobian"
  std::optional<std::string> lift_cocycle;         // on the target
  std::optional<std::string> lift_source_cocycle;  // jacobian mode
  bool lift_rescale = false;
  std::optional<int> lift_bound;

  const NamedForm& form(const std::string& name) const;
  const LoadedGroup& group_of(const NamedForm& f) const { return f.on_source ? source : target; }
};

Scenario load_scenario(const std::filesystem::path& path);

// Invariant form from a form whose coefficients are all constants.
FiberForm to_invariant(const PolyForm& f, const std::string& what);

std::string algebra_brackets(const StratifiedAlgebra& a);
std::string format_matrix_row(const std::vector<WeightedPoly>& row);

}  // namespace carnot
