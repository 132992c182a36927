#include "concentra/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "concentra/errors.hpp"

#include <json.hpp>

namespace concentra {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool Report::all_asserted_pass() const {
  for (const auto& v : verdicts)
    if (v.asserted && !v.pass) return false;
  return true;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  for (const auto& [k, v] : metadata) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  for (const auto& v : verdicts)
    os << "# verdict " << v.name << "=" << (v.pass ? "pass" : "fail")
       << (v.asserted ? "" : " (report-only)") << "\n";
  return os.str();
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["metadata"] = metadata;
  j["columns"] = columns;
  j["rows"] = rows;
  auto& verd = j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : verdicts)
    verd.push_back({{"name", v.name}, {"pass", v.pass}, {"asserted", v.asserted}});
  return j.dump(2) + "\n";
}

void Report::write(const std::string& path, const std::string& format) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << (format == "json" ? to_json() : to_csv());
}

}  // namespace concentra
