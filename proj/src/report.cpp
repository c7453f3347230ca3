#include "rankdiff/report.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace rankdiff {

bool ExperimentReport::all_pass() const {
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

const VerdictEntry* ExperimentReport::first_failure() const {
  for (const auto& v : verdicts) {
    if (!v.pass) return &v;
  }
  return nullptr;
}

void ExperimentReport::add_stat(std::string name, double value, double std_error) {
  statistics.push_back({std::move(name), value, std_error});
}

bool ExperimentReport::add_verdict(std::string name, std::string comparator,
                                   double threshold, double value) {
  bool pass = false;
  if (comparator == "<") {
    pass = value < threshold;
  } else if (comparator == "<=") {
    pass = value <= threshold;
  } else if (comparator == ">") {
    pass = value > threshold;
  } else if (comparator == ">=") {
    pass = value >= threshold;
  } else if (comparator == "==") {
    pass = value == threshold;
  } else {
    throw std::invalid_argument("unknown comparator: " + comparator);
  }
  verdicts.push_back({std::move(name), std::move(comparator), threshold, value, pass});
  return pass;
}

std::string report_to_json(const ExperimentReport& report) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["scenario"] = report.scenario;
  doc["seed"] = report.seed;
  doc["replicates"] = report.replicates;
  doc["statistics"] = json::array();
  for (const auto& s : report.statistics) {
    json row;
    row["name"] = s.name;
    row["value"] = s.value;
    if (s.std_error >= 0.0) row["std_error"] = s.std_error;
    doc["statistics"].push_back(std::move(row));
  }
  doc["verdicts"] = json::array();
  for (const auto& v : report.verdicts) {
    json row;
    row["name"] = v.name;
    row["comparator"] = v.comparator;
    row["threshold"] = v.threshold;
    row["value"] = v.value;
    row["pass"] = v.pass;
    doc["verdicts"].push_back(std::move(row));
  }
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

}  // namespace rankdiff
