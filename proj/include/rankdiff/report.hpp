#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rankdiff {

inline constexpr int kReportSchemaVersion = 1;

struct StatisticEntry {
  std::string name;
  double value = 0.0;
  double std_error = -1.0;  // < 0: no error bar applies
};

struct VerdictEntry {
  std::string name;
  std::string comparator;  // "<", ">", "<=", ">=", "=="
  double threshold = 0.0;
  double value = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::vector<StatisticEntry> statistics;
  std::vector<VerdictEntry> verdicts;
  std::vector<std::string> notes;
  // wall-clock is displayed on the console but never serialized, so reports
  // from identical (config, seed) runs stay byte-identical
  double runtime_seconds = 0.0;

  bool all_pass() const;
  const VerdictEntry* first_failure() const;

  void add_stat(std::string name, double value, double std_error = -1.0);
  // records the verdict and returns whether it passed
  bool add_verdict(std::string name, std::string comparator, double threshold, double value);
};

// JSON document with schema_version, stable field order, shortest-round-trip
// number formatting; excludes runtime.
std::string report_to_json(const ExperimentReport& report);

}  // namespace rankdiff
