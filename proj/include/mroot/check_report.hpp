#ifndef MROOT_CHECK_REPORT_HPP
#define MROOT_CHECK_REPORT_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mroot {

inline constexpr const char* kEngineVersion = "1.0.0";

struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// A residual passes when it is finite and not above its tolerance.
inline CheckRecord make_check(std::string name, double residual, double tolerance) {
  const bool pass = std::isfinite(residual) && residual <= tolerance;
  return CheckRecord{std::move(name), residual, tolerance, pass};
}

struct ReportSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
};

class CheckReport {
 public:
  std::string metric;
  std::vector<std::vector<double>> points;
  std::vector<std::string> skipped;
  std::uint64_t seed = 0;
  std::string engine_version = kEngineVersion;

  void add(CheckRecord rec) { records_.push_back(std::move(rec)); }
  void add(std::string name, double residual, double tolerance) {
    add(make_check(std::move(name), residual, tolerance));
  }
  void append(const CheckReport& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  }

  const std::vector<CheckRecord>& records() const { return records_; }

  ReportSummary summary() const {
    ReportSummary s;
    s.total = records_.size();
    for (const auto& r : records_) (r.pass ? s.passed : s.failed) += 1;
    return s;
  }
  bool all_pass() const { return summary().failed == 0; }

  const CheckRecord* find(const std::string& name) const {
    for (const auto& r : records_)
      if (r.name == name) return &r;
    return nullptr;
  }

 private:
  std::vector<CheckRecord> records_;
};

}  // namespace mroot

#endif  // MROOT_CHECK_REPORT_HPP
