#pragma once

// Experiment driver behind the command-line tool. Every command turns an
// ExperimentConfig into ResultRecords; records serialize to one JSON object
// per line and carry enough of their inputs to be rerun.

#include "json.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "divchar/curve.hpp"

namespace divchar {

using json = nlohmann::json;

struct ExperimentConfig {
  // Curve y^2 = x^3 + a x + b over F_p, and a point on it.
  std::optional<u64> p;
  std::optional<u64> a;
  std::optional<u64> b;
  std::optional<u64> px;
  std::optional<u64> py;

  std::optional<i64> n;      // single index (eval)
  std::optional<u64> cap_n;  // sequence length or sum length N
  std::string twist_a;       // "a" or "lo:hi" (half-open); empty means [0, R)
  std::vector<u64> ells;     // division polynomial indices for Weil checks
  std::optional<u64> char_order;

  u64 p_min = 5;
  u64 p_max = 50;
  u64 seed = 0;

  std::string lemma = "all";      // verify: recurrence | parper | nm | per-chi | weil | all
  std::string points = "max-order";  // given | max-order | all
  std::string curves = "all";     // scan: all | random
  u64 curves_per_prime = 1;       // scan with curves = random
  u64 trials = 1000;              // verify: random trials for recurrence and nm

  unsigned threads = 1;
  std::string out;
};

struct CurveSpec {
  u64 p = 0;
  u64 a = 0;
  u64 b = 0;

  friend bool operator==(const CurveSpec&, const CurveSpec&) = default;
};

/// Coordinates of an echoed point; std::nullopt stands for O.
using PointSpec = std::optional<std::pair<u64, u64>>;

struct ResultRecord {
  std::string kind;
  std::optional<CurveSpec> curve;
  std::optional<PointSpec> point;
  std::optional<u64> r;
  std::optional<u64> R;
  json payload = json::object();
  u64 seed = 0;
  std::string version;

  /// Verification failures recorded in the payload ("failures"), or 0.
  u64 failures() const;
};

json to_json(const ResultRecord& rec);

/// Throws UsageError when `j` does not follow the record schema.
ResultRecord record_from_json(const json& j);

/// Schema violations, empty when `j` is a valid record.
std::vector<std::string> validate_record(const json& j);

ResultRecord cmd_eval(const ExperimentConfig& cfg);
ResultRecord cmd_sums(const ExperimentConfig& cfg);
ResultRecord cmd_verify(const ExperimentConfig& cfg);
std::vector<ResultRecord> cmd_scan(const ExperimentConfig& cfg);
ResultRecord cmd_bench(const ExperimentConfig& cfg);

/// Runs `command` and returns its records.
std::vector<ResultRecord> run_command(const std::string& command, const ExperimentConfig& cfg);

/// 0 when no record reports a failure, 2 otherwise.
int exit_status(const std::vector<ResultRecord>& records);

/// One JSON object per line.
void write_jsonl(std::ostream& os, const std::vector<ResultRecord>& records);

/// Record of kind "error" describing a failed invocation.
ResultRecord error_record(const std::string& code, const std::string& message);

const char* library_version();

}  // namespace divchar
