#include "swaplab/report_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "swaplab/errors.hpp"

namespace swaplab {

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << content;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string summary_csv(const SuiteResult& result) {
  std::ostringstream os;
  os.precision(10);
  os << "report,component,statistic,p_value,pass\n";
  for (const auto& r : result.reports) {
    for (const auto& m : r.marginals)
      os << quoted(r.name) << ',' << quoted("ks:" + m.label) << ',' << m.ks.statistic << ','
         << m.ks.p_value << ',' << r.pass << '\n';
    if (r.energy)
      os << quoted(r.name) << ",energy," << r.energy->statistic << ',' << r.energy->p_value << ','
         << r.pass << '\n';
    for (const auto& c : r.chi_square)
      os << quoted(r.name) << ',' << quoted("chi2:" + c.label) << ',' << c.result.statistic << ','
         << c.result.p_value << ',' << r.pass << '\n';
    for (const auto& c : r.checks)
      os << quoted(r.name) << ',' << quoted("check:" + c.label) << ',' << c.value << ",," << c.pass << '\n';
  }
  return os.str();
}

std::string emit_suite_result(const SuiteResult& result, const std::string& out, const std::string& format) {
  if (format == "json") {
    const std::string text = result.to_json() + "\n";
    if (out.empty()) return text;
    write_text_file(out, text);
    return {};
  }
  if (format != "csv") throw ConfigError("format must be json or csv");
  const std::string text = summary_csv(result);
  if (out.empty()) return text;
  write_text_file(out, text);
  std::filesystem::path p(out);
  const auto stem = (p.parent_path() / p.stem()).string();
  for (const auto& [name, m] : result.samples) write_text_file(stem + "_" + name + ".csv", m.to_csv());
  for (const auto& [name, t] : result.tables) write_text_file(stem + "_" + name + ".csv", t);
  return {};
}

}  // namespace swaplab
