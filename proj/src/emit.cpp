#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "driftbench/harness.hpp"

namespace driftbench {

namespace {

constexpr std::array<const char*, 10> kColumns{"kind",   "param", "policy", "metric",         "mean",
                                               "std",    "n",     "seed",   "runtime_policy", "runtime_total"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

/// Shortest decimal form that round-trips, independent of locale.
std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << "\n";
  for (const auto& r : rows) {
    out << csv_field(r.kind) << ',' << format_number(r.param) << ',' << csv_field(r.policy) << ','
        << csv_field(r.metric) << ',' << format_number(r.mean) << ',' << format_number(r.std) << ',' << r.n << ','
        << r.seed << ',' << format_number(r.runtime_policy) << ',' << format_number(r.runtime_total) << "\n";
  }
  return out.str();
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["kind"] = r.kind;
    o["param"] = r.param;
    o["policy"] = r.policy;
    o["metric"] = r.metric;
    o["mean"] = r.mean;
    o["std"] = r.std;
    o["n"] = r.n;
    o["seed"] = r.seed;
    o["runtime_policy"] = r.runtime_policy;
    o["runtime_total"] = r.runtime_total;
    doc.push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<ResultRow> rows;
  for (const auto& o : doc) {
    ResultRow r;
    r.kind = o.at("kind").get<std::string>();
    r.param = o.at("param").get<double>();
    r.policy = o.at("policy").get<std::string>();
    r.metric = o.at("metric").get<std::string>();
    r.mean = o.at("mean").get<double>();
    r.std = o.at("std").get<double>();
    r.n = o.at("n").get<std::size_t>();
    r.seed = o.at("seed").get<std::uint64_t>();
    r.runtime_policy = o.at("runtime_policy").get<double>();
    r.runtime_total = o.at("runtime_total").get<double>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::filesystem::path& path) {
  if (rows.empty()) throw std::invalid_argument("no result rows to write");
  const std::string text = format == OutputFormat::csv ? rows_to_csv(rows) : rows_to_json(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

void emit_series(const std::vector<double>& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,diff\n";
  for (std::size_t i = 0; i < series.size(); ++i) out << (i + 1) << ',' << format_number(series[i]) << "\n";
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace driftbench
