#include "lgsim/json_io.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "lgsim/error.hpp"

namespace lgsim {

namespace {

using nlohmann::json;

std::string outcome_label(int a) { return a > 0 ? "+1" : "-1"; }

json kraus_to_json(const ComplexMatrix& k) {
  json flat = json::array();
  for (const Complex& z : k.entries()) flat.push_back({z.real(), z.imag()});
  return flat;
}

double number_at(const json& j, const char* what) {
  if (!j.is_number()) fail(ErrorCode::parse_error, std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

json channel_to_json(const KrausChannel& ch) {
  if (ch.input_dim() != ch.output_dim()) {
    fail(ErrorCode::dimension_mismatch, "channel document requires square Kraus operators");
  }
  json doc;
  doc["dim"] = ch.input_dim();
  doc["kind"] = ch.kind() == ChannelKind::trace_preserving ? "tp" : "tni";
  doc["kraus"] = json::array();
  for (const auto& k : ch.kraus_ops()) doc["kraus"].push_back(kraus_to_json(k));
  return doc;
}

KrausChannel channel_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorCode::parse_error, "channel document must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    fail(ErrorCode::parse_error, "\"dim\" must be a positive integer");
  }
  const auto d = static_cast<std::size_t>(doc["dim"].get<long long>());

  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    fail(ErrorCode::parse_error, "\"kind\" must be \"tp\" or \"tni\"");
  }
  const std::string kind_text = doc["kind"].get<std::string>();
  ChannelKind kind;
  if (kind_text == "tp") {
    kind = ChannelKind::trace_preserving;
  } else if (kind_text == "tni") {
    kind = ChannelKind::trace_nonincreasing;
  } else {
    fail(ErrorCode::parse_error, "unknown kind \"" + kind_text + "\"");
  }

  if (!doc.contains("kraus") || !doc["kraus"].is_array() || doc["kraus"].empty()) {
    fail(ErrorCode::parse_error, "\"kraus\" must be a non-empty array");
  }
  std::vector<ComplexMatrix> ops;
  for (const auto& op : doc["kraus"]) {
    if (!op.is_array() || op.size() != d * d) {
      fail(ErrorCode::parse_error,
           "each Kraus operator needs " + std::to_string(d * d) + " [re, im] entries");
    }
    std::vector<Complex> entries;
    entries.reserve(d * d);
    for (const auto& z : op) {
      if (!z.is_array() || z.size() != 2) fail(ErrorCode::parse_error, "entries must be [re, im]");
      entries.emplace_back(number_at(z[0], "re"), number_at(z[1], "im"));
    }
    ops.emplace_back(d, d, std::move(entries));
  }
  return KrausChannel(std::move(ops), kind);
}

KrausChannel parse_channel(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) fail(ErrorCode::parse_error, "channel document is not valid JSON");
  return channel_from_json(doc);
}

json filter_to_json(const FilterSpec& f) { return channel_to_json(as_channel(f)); }

json to_json(const ChshReport& report) {
  json j;
  j["value"] = report.value;
  j["violated"] = report.violated;
  j["nsit_deviation"] = report.nsit_deviation;
  json c;
  for (int x : kSettings) {
    for (int y : kSettings) {
      c[std::to_string(x) + "," + std::to_string(y)] = report.correlator(x, y);
    }
  }
  j["correlators"] = c;
  return j;
}

json to_json(const ActivationResult& result) {
  return {
      {"unfiltered", result.unfiltered_value},
      {"best", result.best_value},
      {"activated", result.activated},
      {"pre", filter_to_json(result.best_pre)},
      {"post", filter_to_json(result.best_post)},
      {"min_success_prob", result.success_prob_min},
      {"search_family", std::string(to_string(result.family))},
      {"resolution", result.resolution},
  };
}

json to_json(const NonlocalityVerdict& verdict) {
  json j{
      {"chsh_max", verdict.chsh_max},
      {"local", verdict.local},
      {"hidden_nonlocal", verdict.hidden_nonlocal},
      {"strongly_breaking_candidate", verdict.strongly_breaking_candidate},
      {"best_filtered_chsh", verdict.best_filtered_chsh},
      {"witness_success_prob", verdict.witness_success_probability},
      {"resolution", verdict.resolution},
      {"search_family", verdict.search_family},
  };
  if (verdict.witness_filters) {
    j["witness_filters"] = {{"a", filter_to_json(verdict.witness_filters->first)},
                            {"b", filter_to_json(verdict.witness_filters->second)}};
  } else {
    j["witness_filters"] = nullptr;
  }
  return j;
}

void write_statistics_csv(const TwoTimeStatistics& stats, std::ostream& out) {
  out << "a,b,x,y,p\n";
  for (int a : kOutcomes) {
    for (int b : kOutcomes) {
      for (int x : kSettings) {
        for (int y : kSettings) {
          out << a << ',' << b << ',' << x << ',' << y << ',' << format_number(stats.p(a, b, x, y))
              << '\n';
        }
      }
    }
  }
}

json success_sidecar(const TwoTimeStatistics& stats) {
  json n = json::object();
  for (int x : kSettings) {
    for (int a : kOutcomes) n[outcome_label(a) + "|" + std::to_string(x)] = stats.success_prob(a, x);
  }
  return {{"N", n}};
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) fail(ErrorCode::io_error, "number formatting failed");
  return std::string(buf, res.ptr);
}

}  // namespace lgsim
