#pragma once

#include <map>
#include <string>
#include <vector>

namespace concentra {

inline constexpr const char* kVersion = "concentra 0.1.0";
inline constexpr const char* kRngIdentity = "splitmix64-counter/1";

/// Shortest round-trip decimal formatting; reports must be byte-identical
/// across reruns, so every number goes through this one function.
std::string format_double(double v);

/// Tabular experiment report. CSV output is `# key=value` metadata lines
/// (sorted), a header row, then data rows; JSON mirrors the same content.
/// No wall-clock or host information is written: files are byte-stable
/// across reruns and thread counts.
struct Report {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  struct Verdict {
    std::string name;
    bool pass = true;
    bool asserted = true;  // report-only verdicts never affect the exit code
  };
  std::vector<Verdict> verdicts;

  void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
  void add_verdict(std::string name, bool pass, bool asserted = true) {
    verdicts.push_back({std::move(name), pass, asserted});
  }
  bool all_asserted_pass() const;

  std::string to_csv() const;
  std::string to_json() const;
  void write(const std::string& path, const std::string& format) const;
};

}  // namespace concentra
