#pragma once

// Non-recurrence certificates over declared integer sets and the finite-union
// combinator.

#include <string>
#include <vector>

#include "recurlab/jsonio.hpp"
#include "recurlab/numeric.hpp"

namespace recurlab {

struct ComponentCertificate {
  std::string kind;        // producing experiment, e.g. "rankone"
  std::string claim;
  std::string set_label;
  std::vector<BigInt> set;  // the declared set (finite horizon), sorted
  bool passed = false;
  json payload = json::object();

  json to_json() const;
  static ComponentCertificate from_json(const json& j);
};

struct AggregateCertificate {
  std::vector<ComponentCertificate> components;
  std::vector<BigInt> union_set;
  std::string claim;
  bool passed = false;

  json to_json() const;
};

/// Union claim over the components' sets. Throws when the list is empty or any
/// component failed. A single component comes back with its own claim.
AggregateCertificate combine(const std::vector<ComponentCertificate>& certs, const std::string& claim = "");

}  // namespace recurlab
