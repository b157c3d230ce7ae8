// Named residual checks collected into a machine-readable report.

#ifndef WKA_REPORT_HPP_
#define WKA_REPORT_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "wka/types.hpp"

namespace wka {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = true;
  bool hard = true;  // soft checks are reported but never fail the report
  std::string note;
};

class Report {
public:
  explicit Report(std::string title = {}) : title_(std::move(title)) {}

  /// Records residual <= bound as a check.
  Check& check(const std::string& name, double residual, double bound, bool hard = true);
  /// Records a boolean condition.
  Check& require(const std::string& name, bool condition, const std::string& note = {});
  /// Like require, but never fails the report.
  Check& flag(const std::string& name, bool condition, const std::string& note = {});

  /// Appends every check of `other`, prefixing names with `prefix`.
  void merge(const Report& other, const std::string& prefix = {});

  bool passed() const;
  const Check* first_failure() const;
  /// Largest residual among checks that carry a bound.
  double max_residual() const;
  const Check* find(const std::string& name) const;

  const std::string& title() const { return title_; }
  const std::vector<Check>& checks() const { return checks_; }
  std::vector<std::string>& warnings() { return warnings_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  Json& values() { return values_; }
  const Json& values() const { return values_; }

  Json to_json() const;
  std::string to_text() const;

  /// Throws VerificationError naming the first failed hard check.
  void throw_if_failed(const std::string& context) const;

private:
  std::string title_;
  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
  Json values_ = Json::object();
};

} // namespace wka

#endif // WKA_REPORT_HPP_
