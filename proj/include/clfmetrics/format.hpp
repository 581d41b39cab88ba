#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "clfmetrics/report.hpp"

namespace clfmetrics {

enum class Format { Text, Json };

namespace detail {

/// Shortest decimal that parses back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, ptr};
}

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

inline double parse_shortest(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

inline std::string cell(const MetricValue& v) {
  if (!v) return "undef(" + std::string(to_string(v.reason())) + ")";
  return fixed4(v.value());
}

inline std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

inline std::string_view to_string(Averaging a) { return a == Averaging::Strict ? "strict" : "lenient"; }
inline std::string_view to_string(Reduce r) { return r == Reduce::Mean ? "mean" : "sum"; }

struct Style {
  bool color = false;
  std::string bold(const std::string& s) const { return color ? "\x1b[1m" + s + "\x1b[0m" : s; }
  std::string mark(const std::string& s) const { return color ? "\x1b[1;33m" + s + "\x1b[0m" : s; }
};

using ordered_json = nlohmann::ordered_json;

inline ordered_json metric_json(const MetricValue& v) {
  ordered_json j = ordered_json::object();
  if (!v) {
    j["undefined"] = std::string(to_string(v.reason()));
    return j;
  }
  j["value"] = shortest(v.value());
  if (v.exact()) j["exact"] = v.exact()->to_string();
  return j;
}

inline MetricValue metric_from_json(const ordered_json& j) {
  if (j.contains("undefined")) {
    auto reason = undefined_reason_from_string(j.at("undefined").get<std::string>());
    if (!reason) throw std::invalid_argument("unknown undefined reason");
    return MetricValue::undefined(*reason);
  }
  double value = parse_shortest(j.at("value").get<std::string>());
  if (j.contains("exact")) {
    auto exact = Rational::parse(j.at("exact").get<std::string>());
    auto v = MetricValue::defined(exact);
    // The stored decimal is authoritative for the double.
    if (v.value() != value) throw std::invalid_argument("value and exact disagree");
    return v;
  }
  return MetricValue::defined(value);
}

inline ordered_json report_json(const EvaluationReport& r) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = r.tool_version;
  j["dataset"] = r.dataset;
  j["classes"] = r.classes;
  j["units"] = r.units;
  j["options"] = {
      {"averaging", to_string(r.options.averaging)},
      {"weights", r.options.weights_source},
      {"epsilon", shortest(r.options.epsilon)},
      {"reduce", to_string(r.options.reduce)},
  };
  ordered_json metrics = ordered_json::object();
  for (const auto& m : r.metrics) metrics[m.name] = metric_json(m.value);
  j["metrics"] = std::move(metrics);
  ordered_json per_class = ordered_json::array();
  for (std::size_t k = 0; k < r.classes.size(); ++k) {
    per_class.push_back({
        {"class", r.classes[k]},
        {"support", r.support[k]},
        {"precision", metric_json(r.per_class.precision[k])},
        {"recall", metric_json(r.per_class.recall[k])},
        {"f1", metric_json(r.per_class.f1[k])},
    });
  }
  j["per_class"] = std::move(per_class);
  j["skipped"] = {{"macro_precision", r.skipped_precision}, {"macro_recall", r.skipped_recall}};
  return j;
}

inline ordered_json delta_json(const MetricDelta& d) {
  if (!d.delta) return nullptr;
  ordered_json j;
  j["value"] = shortest(*d.delta);
  if (d.exact) j["exact"] = d.exact->to_string();
  return j;
}

}  // namespace detail

inline std::string to_json(const EvaluationReport& r) { return detail::report_json(r).dump(2) + "\n"; }

inline EvaluationReport report_from_json(std::string_view text) {
  using detail::ordered_json;
  auto j = ordered_json::parse(text);
  if (j.at("schema_version").get<int>() != kReportSchemaVersion)
    throw std::invalid_argument("unsupported report schema version");
  EvaluationReport r;
  r.tool_version = j.at("tool_version").get<std::string>();
  r.dataset = j.at("dataset").get<std::string>();
  r.classes = j.at("classes").get<std::vector<std::string>>();
  r.units = j.at("units").get<Count>();
  const auto& o = j.at("options");
  r.options.averaging = o.at("averaging").get<std::string>() == "lenient" ? Averaging::Lenient : Averaging::Strict;
  r.options.weights_source = o.at("weights").get<std::string>();
  r.options.epsilon = detail::parse_shortest(o.at("epsilon").get<std::string>());
  r.options.reduce = o.at("reduce").get<std::string>() == "sum" ? Reduce::Sum : Reduce::Mean;
  for (const auto& [name, value] : j.at("metrics").items())
    r.metrics.push_back({name, detail::metric_from_json(value)});
  for (const auto& pc : j.at("per_class")) {
    r.support.push_back(pc.at("support").get<Count>());
    r.per_class.precision.push_back(detail::metric_from_json(pc.at("precision")));
    r.per_class.recall.push_back(detail::metric_from_json(pc.at("recall")));
    r.per_class.f1.push_back(detail::metric_from_json(pc.at("f1")));
  }
  r.skipped_precision = j.at("skipped").at("macro_precision").get<std::size_t>();
  r.skipped_recall = j.at("skipped").at("macro_recall").get<std::size_t>();
  return r;
}

inline std::string to_text(const EvaluationReport& r, bool color = false) {
  using namespace detail;
  Style style{color};
  std::string out = "clfmetrics " + r.tool_version + "\n";
  out += "dataset: " + r.dataset + "\n";
  out += "classes: " + std::to_string(r.classes.size()) + "  units: " + std::to_string(r.units) + "\n";
  out += "options: averaging=" + std::string(to_string(r.options.averaging)) +
         " weights=" + r.options.weights_source + " epsilon=" + shortest(r.options.epsilon) +
         " reduce=" + std::string(to_string(r.options.reduce)) + "\n\n";

  std::size_t name_w = 6;
  for (const auto& m : r.metrics) name_w = std::max(name_w, m.name.size());
  name_w += 2;
  out += style.bold(pad_right("metric", name_w) + pad_left("value", 28) + "  exact") + "\n";
  for (const auto& m : r.metrics) {
    std::string line = pad_right(m.name, name_w) + pad_left(cell(m.value), 28);
    if (m.value.exact()) line += "  " + m.value.exact()->to_string();
    out += line + "\n";
  }
  if (r.options.averaging == Averaging::Lenient)
    out += "skipped classes: macro_precision=" + std::to_string(r.skipped_precision) +
           " macro_recall=" + std::to_string(r.skipped_recall) + "\n";

  std::size_t class_w = 5;
  for (const auto& c : r.classes) class_w = std::max(class_w, c.size());
  class_w += 2;
  out += "\n" + style.bold(pad_right("class", class_w) + pad_left("support", 10) + pad_left("precision", 28) +
                           pad_left("recall", 28) + pad_left("f1", 28)) + "\n";
  for (std::size_t k = 0; k < r.classes.size(); ++k) {
    out += pad_right(r.classes[k], class_w) + pad_left(std::to_string(r.support[k]), 10) +
           pad_left(cell(r.per_class.precision[k]), 28) + pad_left(cell(r.per_class.recall[k]), 28) +
           pad_left(cell(r.per_class.f1[k]), 28) + "\n";
  }
  return out;
}

inline std::string to_json(const ComparisonReport& c) {
  using detail::ordered_json;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = std::string(kToolVersion);
  j["a"] = detail::report_json(c.a);
  j["b"] = detail::report_json(c.b);
  j["same_registry"] = c.same_registry;
  ordered_json deltas = ordered_json::object();
  for (const auto& d : c.deltas) deltas[d.name] = detail::delta_json(d);
  j["deltas"] = std::move(deltas);
  if (c.same_registry) {
    ordered_json per_class = ordered_json::array();
    for (std::size_t k = 0; k < c.per_class_deltas.size(); ++k) {
      ordered_json row;
      row["class"] = c.a.classes[k];
      for (const auto& d : c.per_class_deltas[k]) row[d.name] = detail::delta_json(d);
      per_class.push_back(std::move(row));
    }
    j["per_class_deltas"] = std::move(per_class);
  }
  j["equal_accuracy_differing_kappa"] = c.equal_accuracy_differing_kappa;
  j["note"] = c.note;
  return j.dump(2) + "\n";
}

inline std::string to_text(const ComparisonReport& c, bool color = false) {
  using namespace detail;
  Style style{color};
  std::string out = "clfmetrics " + std::string(kToolVersion) + "\n";
  out += "A: " + c.a.dataset + "  (classes " + std::to_string(c.a.classes.size()) + ", units " +
         std::to_string(c.a.units) + ")\n";
  out += "B: " + c.b.dataset + "  (classes " + std::to_string(c.b.classes.size()) + ", units " +
         std::to_string(c.b.units) + ")\n\n";

  std::size_t name_w = 6;
  for (const auto& d : c.deltas) name_w = std::max(name_w, d.name.size());
  name_w += 4;
  out += style.bold(pad_right("metric", name_w) + pad_left("A", 28) + pad_left("B", 28) + pad_left("B-A", 12)) + "\n";
  for (const auto& d : c.deltas) {
    const bool flagged = c.equal_accuracy_differing_kappa && (d.name == "accuracy" || d.name == "kappa");
    std::string line = pad_right((flagged ? "* " : "  ") + d.name, name_w) + pad_left(cell(c.a.get(d.name)), 28) +
                       pad_left(cell(c.b.get(d.name)), 28) + pad_left(d.delta ? fixed4(*d.delta) : "-", 12);
    out += (flagged ? style.mark(line) : line) + "\n";
  }

  if (c.same_registry) {
    std::size_t class_w = 5;
    for (const auto& cl : c.a.classes) class_w = std::max(class_w, cl.size());
    class_w += 2;
    out += "\n" + style.bold(pad_right("class", class_w) + pad_left("d_precision", 14) + pad_left("d_recall", 14) +
                             pad_left("d_f1", 14)) + "\n";
    for (std::size_t k = 0; k < c.per_class_deltas.size(); ++k) {
      std::string line = pad_right(c.a.classes[k], class_w);
      for (const auto& d : c.per_class_deltas[k]) line += pad_left(d.delta ? fixed4(*d.delta) : "-", 14);
      out += line + "\n";
    }
  } else {
    out += "\nper-class deltas suppressed: class registries differ\n";
  }
  if (c.equal_accuracy_differing_kappa) out += "\n* equal accuracy, differing kappa\n";
  out += "note: " + c.note + "\n";
  return out;
}

}  // namespace clfmetrics
