#pragma once
// Residual reports and JSON emission (17 significant digits, stable key order).

#include <string>
#include <vector>

#include <json.hpp>

#include "ellq/core.hpp"

namespace ellq {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ellq-report/1";

struct PointResidual {
  json params;
  double residual = 0.0;
};

struct ResidualReport {
  std::string relation;
  std::vector<PointResidual> points;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  TruncationPolicy policy;
  PrecisionContext precision;

  void add(json params, double r);
  void finalize();
  bool below(double tol) const { return max_residual < tol; }
  json to_json() const;
};

json cjson(cplx z);  // [re, im]
json policy_json(const TruncationPolicy& pol);
json precision_json(const PrecisionContext& pc);

// Serializer printing every float with %.17g
std::string dump17(const json& j, int indent = 2);

}  // namespace ellq
