#include "recurlab/certificate.hpp"

#include <algorithm>

namespace recurlab {

namespace {

json set_json(const std::vector<BigInt>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

}  // namespace

json ComponentCertificate::to_json() const {
  return json{{"kind", kind}, {"claim", claim},   {"set_label", set_label},
              {"set", set_json(set)}, {"passed", passed}, {"payload", payload}};
}

ComponentCertificate ComponentCertificate::from_json(const json& j) {
  ComponentCertificate c;
  try {
    c.kind = j.at("kind").get<std::string>();
    c.claim = j.value("claim", "");
    c.set_label = j.value("set_label", "");
    for (const auto& x : j.at("set")) c.set.push_back(parse_bigint(x.get<std::string>()));
    c.passed = j.at("passed").get<bool>();
    c.payload = j.value("payload", json::object());
  } catch (const json::exception& e) {
    throw Error(std::string("certificate: malformed JSON: ") + e.what());
  }
  std::sort(c.set.begin(), c.set.end());
  return c;
}

json AggregateCertificate::to_json() const {
  json comps = json::array();
  for (const auto& c : components) {
    comps.push_back(json{{"kind", c.kind}, {"claim", c.claim}, {"set_label", c.set_label},
                         {"size", c.set.size()}, {"passed", c.passed}});
  }
  return json{{"claim", claim}, {"passed", passed}, {"components", comps}, {"union", set_json(union_set)}};
}

AggregateCertificate combine(const std::vector<ComponentCertificate>& certs, const std::string& claim) {
  if (certs.empty()) throw Error("combine: no certificates");
  for (const auto& c : certs) {
    if (!c.passed) throw Error("combine: component '" + c.set_label + "' (" + c.kind + ") did not pass");
  }
  AggregateCertificate out;
  out.components = certs;
  for (const auto& c : certs) out.union_set.insert(out.union_set.end(), c.set.begin(), c.set.end());
  std::sort(out.union_set.begin(), out.union_set.end());
  out.union_set.erase(std::unique(out.union_set.begin(), out.union_set.end()), out.union_set.end());
  if (!claim.empty()) {
    out.claim = claim;
  } else if (certs.size() == 1) {
    out.claim = certs[0].claim;
  } else {
    std::string labels;
    for (std::size_t i = 0; i < certs.size(); ++i) labels += (i ? " + " : "") + certs[i].set_label;
    out.claim = "non-recurrence for the union " + labels;
  }
  out.passed = true;
  return out;
}

}  // namespace recurlab
