#include "wka/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace wka {

Check& Report::check(const std::string& name, double residual, double bound, bool hard) {
  Check c;
  c.name = name;
  c.residual = residual;
  c.bound = bound;
  c.pass = residual <= bound;
  c.hard = hard;
  checks_.push_back(std::move(c));
  return checks_.back();
}

Check& Report::require(const std::string& name, bool condition, const std::string& note) {
  Check c;
  c.name = name;
  c.pass = condition;
  c.note = note;
  checks_.push_back(std::move(c));
  return checks_.back();
}

Check& Report::flag(const std::string& name, bool condition, const std::string& note) {
  Check& c = require(name, condition, note);
  c.hard = false;
  return c;
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (Check c : other.checks_) {
    c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
  for (const auto& w : other.warnings_)
    warnings_.push_back(prefix + w);
}

bool Report::passed() const { return first_failure() == nullptr; }

const Check* Report::first_failure() const {
  for (const auto& c : checks_)
    if (c.hard && !c.pass)
      return &c;
  return nullptr;
}

double Report::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks_)
    if (c.bound > 0.0)
      m = std::max(m, c.residual);
  return m;
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name)
      return &c;
  return nullptr;
}

Json Report::to_json() const {
  Json j;
  j["title"] = title_;
  j["pass"] = passed();
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json e;
    e["name"] = c.name;
    e["residual"] = c.residual;
    e["bound"] = c.bound;
    e["pass"] = c.pass;
    e["hard"] = c.hard;
    if (!c.note.empty())
      e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["values"] = values_;
  if (!warnings_.empty())
    j["warnings"] = warnings_;
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "== " << title_ << (passed() ? " [PASS]" : " [FAIL]") << '\n';
  char buf[64];
  for (const auto& c : checks_) {
    os << (c.pass ? "  ok   " : (c.hard ? "  FAIL " : "  warn "));
    os << c.name;
    if (c.bound > 0.0) {
      std::snprintf(buf, sizeof buf, "  residual=%.3e (bound %.1e)", c.residual, c.bound);
      os << buf;
    }
    if (!c.note.empty())
      os << "  " << c.note;
    os << '\n';
  }
  for (const auto& w : warnings_)
    os << "  warning: " << w << '\n';
  if (!values_.empty())
    os << "  values: " << values_.dump() << '\n';
  return os.str();
}

void Report::throw_if_failed(const std::string& context) const {
  if (const Check* c = first_failure()) {
    std::ostringstream os;
    os << context << ": check '" << c->name << "' failed";
    if (c->bound > 0.0)
      os << " (residual " << c->residual << " > " << c->bound << ")";
    if (!c->note.empty())
      os << " - " << c->note;
    throw VerificationError(os.str());
  }
}

} // namespace wka
