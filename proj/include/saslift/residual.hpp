#pragma once
// Named residual bundles returned by the verification operations.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace saslift {

struct ResidualRecord {
  std::vector<std::pair<std::string, double>> entries;

  void add(std::string name, double value) { entries.emplace_back(std::move(name), value); }

  void merge_max(const ResidualRecord& other) {
    if (entries.empty()) {
      entries = other.entries;
      return;
    }
    for (size_t i = 0; i < entries.size(); ++i)
      entries[i].second = std::max(entries[i].second, other.entries[i].second);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.second));
    return m;
  }

  double operator[](const std::string& name) const {
    for (const auto& e : entries)
      if (e.first == name) return e.second;
    throw std::invalid_argument("no residual entry named " + name);
  }
};

}  // namespace saslift
