#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cotor/model.hpp"

namespace cotor {

struct CheckRecord {
  std::string name;
  std::string status;  // pass, fail or info
  std::string witness;
  bool operator==(const CheckRecord&) const = default;
};

/// Outcome of one command. The machine form leaves out wall time so reruns compare byte for byte.
struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  double wall_seconds = 0;

  void pass(const std::string& name, const std::string& witness = "") { checks.push_back({name, "pass", witness}); }
  void fail(const std::string& name, const std::string& witness) { checks.push_back({name, "fail", witness}); }
  void info(const std::string& name, const std::string& value) { checks.push_back({name, "info", value}); }
  void check(const std::string& name, bool ok, const std::string& witness = "") {
    if (ok) pass(name);
    else fail(name, witness);
  }
  void add(const CheckResult& c) {
    std::string w;
    for (auto& s : c.witnesses) w += (w.empty() ? "" : "; ") + s;
    if (c.ok()) pass(c.name);
    else fail(c.name, w);
  }

  std::size_t count(const std::string& status) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](auto& c) { return c.status == status; }));
  }
  bool violations() const { return count("fail") > 0; }

  void canonicalize() {
    std::stable_sort(checks.begin(), checks.end(), [](auto& a, auto& b) { return a.name < b.name; });
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["seed"] = seed;
    j["checks"] = nlohmann::ordered_json::array();
    for (auto& c : checks) j["checks"].push_back({{"name", c.name}, {"status", c.status}, {"witness", c.witness}});
    j["summary"] = {{"total", checks.size()}, {"passed", count("pass")}, {"failed", count("fail")}, {"info", count("info")}};
    return j;
  }
  std::string machine() const { return to_json().dump(2) + "\n"; }

  static Report from_json(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    Report r;
    r.command = j.at("command").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("status").get<std::string>(), c.at("witness").get<std::string>()});
    return r;
  }

  std::string text() const {
    std::ostringstream o;
    o << "command: " << command << "\nseed: " << seed << "\n";
    for (auto& c : checks) {
      o << (c.status == "info" ? "  " : c.status == "pass" ? "ok   " : "FAIL ") << c.name;
      if (!c.witness.empty()) o << (c.status == "info" ? " = " : "  [") << c.witness << (c.status == "info" ? "" : "]");
      o << "\n";
    }
    o << "summary: " << count("pass") << " passed, " << count("fail") << " failed";
    o << "\nwall time: " << std::fixed;
    o.precision(3);
    o << wall_seconds << " s\n";
    return o.str();
  }
};

}  // namespace cotor
