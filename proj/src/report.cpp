#include "ellq/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ellq {

void ResidualReport::add(json params, double r) {
  points.push_back({std::move(params), r});
}

void ResidualReport::finalize() {
  max_residual = 0.0;
  double s = 0.0;
  for (const auto& pt : points) {
    const double r = std::isnan(pt.residual) ? INFINITY : pt.residual;
    max_residual = std::max(max_residual, r);
    s += r;
  }
  mean_residual = points.empty() ? 0.0 : s / double(points.size());
}

json ResidualReport::to_json() const {
  json j;
  j["relation"] = relation;
  json pts = json::array();
  for (const auto& pt : points) pts.push_back({{"params", pt.params}, {"residual", pt.residual}});
  j["points"] = pts;
  j["max_residual"] = max_residual;
  j["mean_residual"] = mean_residual;
  j["policy"] = policy_json(policy);
  j["precision"] = precision_json(precision);
  return j;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json policy_json(const TruncationPolicy& pol) {
  return {{"max_terms", pol.max_terms}, {"tail_tol", pol.tail_tol}};
}

json precision_json(const PrecisionContext& pc) {
  return {{"bits", pc.bits}, {"rounding", "nearest"}};
}

namespace {

void put_string(std::ostringstream& os, const std::string& s) {
  os << json(s).dump();
}

void put_number(std::ostringstream& os, double x) {
  if (!std::isfinite(x)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

void emit(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad(std::size_t(indent * (depth + 1)), ' ');
  const std::string pad_end(std::size_t(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        put_string(os, it.key());
        os << ": ";
        emit(os, it.value(), indent, depth + 1);
      }
      os << "\n" << pad_end << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // short numeric arrays stay on one line
      bool flat = j.size() <= 4;
      for (const auto& e : j) flat = flat && e.is_primitive();
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          emit(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        emit(os, j[i], indent, depth + 1);
      }
      os << "\n" << pad_end << "]";
      return;
    }
    case json::value_t::number_float:
      put_number(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump17(const json& j, int indent) {
  std::ostringstream os;
  emit(os, j, indent, 0);
  os << "\n";
  return os.str();
}

}  // namespace ellq
