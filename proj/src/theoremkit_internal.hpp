#pragma once

#include <functional>
#include <stdexcept>

#include "qd/theoremkit.hpp"

namespace qd::detail {

struct RuleFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Contradiction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Derived {
  std::optional<CohTable> table;
  std::optional<HyperTable> hyper;
};

using Lookup = std::function<const CertNode &(const std::string &)>;

CohTable as_table(const CertNode &nd, int n);
/// Statement of a rule node recomputed from its inputs.
Derived evaluate(const CertNode &nd, const Lookup &get);

} // namespace qd::detail
