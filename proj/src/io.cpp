#include "inarma/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <variant>
#include <vector>

namespace inarma {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<int> parse_count(const std::string& field) {
  int value = 0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 0) return std::nullopt;
  return value;
}

std::size_t resolve_column(const std::optional<std::string>& column,
                           const std::vector<std::string>& header, std::size_t n_fields) {
  if (!column) return n_fields - 1;
  if (!header.empty()) {
    const auto it = std::find(header.begin(), header.end(), *column);
    if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  }
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(column->data(), column->data() + column->size(), index);
  if (ec != std::errc() || ptr != column->data() + column->size()) {
    throw DataError("column '" + *column + "' not found");
  }
  if (index >= n_fields) throw DataError("column index " + *column + " out of range");
  return index;
}

}  // namespace

CountSeries read_count_csv(std::istream& in, const DatasetSpec& spec) {
  std::vector<int> values;
  std::vector<std::string> labels;
  std::vector<std::string> header;
  std::optional<std::size_t> column;
  std::size_t n_fields = 0;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = spec.header;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (header_pending) {
      header = std::move(fields);
      header_pending = false;
      continue;
    }
    if (!column) {
      n_fields = fields.size();
      column = resolve_column(spec.column, header, n_fields);
    }
    if (fields.size() != n_fields) {
      throw DataError("row " + std::to_string(line_no) + ": expected " + std::to_string(n_fields) +
                      " fields, found " + std::to_string(fields.size()));
    }
    const auto count = parse_count(fields[*column]);
    if (!count) {
      throw DataError("row " + std::to_string(line_no) + ": '" + fields[*column] +
                      "' is not a non-negative integer count");
    }
    values.push_back(*count);
    if (n_fields > 1 && *column != 0) labels.push_back(fields[0]);
  }
  if (values.empty()) throw DataError("no observations found");
  if (!labels.empty()) return CountSeries(std::move(values), std::move(labels));
  return CountSeries(std::move(values));
}

CountSeries load_dataset(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot open data file '" + spec.path + "'");
  return read_count_csv(in, spec);
}

json params_to_json(const FittedParams& params) {
  json j;
  j["model"] = std::string(model_name(params.id()));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Inar1Params>) {
          j["nu"] = p.nu();
          j["alpha"] = p.alpha();
        } else if constexpr (std::is_same_v<T, Inarch1Params>) {
          j["nu"] = p.nu();
          j["alpha"] = p.alpha();
          if (params.initial_state) j["lambda1"] = *params.initial_state;
        } else if constexpr (std::is_same_v<T, Ingarch11Params>) {
          j["nu"] = p.nu();
          j["alpha"] = p.alpha();
          j["beta"] = p.beta();
          if (params.initial_state) j["s1"] = *params.initial_state;
        } else {
          j["tau"] = p.tau();
          j["phi"] = p.phi();
          j["kappa"] = p.kappa();
        }
      },
      params.model);
  return j;
}

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number(j, key);
}

}  // namespace

FittedParams params_from_json(const json& j) {
  const ModelId id = parse_model_id(j.at("model").get<std::string>());
  switch (id) {
    case ModelId::inar1:
      return {Inar1Params(number(j, "nu"), number(j, "alpha")), std::nullopt};
    case ModelId::inarch1:
      return {Inarch1Params(number(j, "nu"), number(j, "alpha")), optional_number(j, "lambda1")};
    case ModelId::ingarch11:
      if (j.contains("nu")) {
        return {Ingarch11Params(number(j, "nu"), number(j, "alpha"), number(j, "beta")),
                optional_number(j, "s1")};
      }
      return {ingarch_from_arma_form({number(j, "tau"), number(j, "phi"), number(j, "kappa")}),
              optional_number(j, "s1")};
    case ModelId::inarma11:
      return {InarmaParams(number(j, "tau"), number(j, "phi"), number(j, "kappa")), std::nullopt};
  }
  throw std::invalid_argument("unknown model");
}

json fit_to_json(const FitResult& fit) {
  json j;
  j["model_id"] = std::string(model_name(fit.model_id));
  j["params_natural"] = params_to_json(fit.params);
  j["loglik"] = fit.loglik;
  j["k"] = fit.k;
  j["aic"] = fit.aic;
  j["converged"] = fit.converged;
  j["n_evals"] = fit.n_evals;
  j["y_max_used"] = fit.y_max_used ? json(*fit.y_max_used) : json(nullptr);
  return j;
}

FitResult fit_from_json(const json& j) {
  std::optional<int> y_max;
  if (j.contains("y_max_used") && !j.at("y_max_used").is_null()) y_max = j.at("y_max_used").get<int>();
  return FitResult{parse_model_id(j.at("model_id").get<std::string>()),
                   params_from_json(j.at("params_natural")),
                   j.at("loglik").get<double>(),
                   j.at("k").get<int>(),
                   j.at("aic").get<double>(),
                   j.at("converged").get<bool>(),
                   j.at("n_evals").get<int>(),
                   y_max};
}

json rolling_to_json(const RollingReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"origin_index", s.origin_index},
                     {"observed", s.observed},
                     {"log_score", s.log_score},
                     {"refit_failed", s.refit_failed},
                     {"fit", fit_to_json(s.fit)}});
  }
  return {{"model_id", std::string(model_name(report.model_id))},
          {"start_index", report.start_index},
          {"mean_log_score", report.mean_log_score},
          {"steps", std::move(steps)}};
}

namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_rolling_csv(std::ostream& out, const RollingReport& report) {
  out << "origin_index,observed,log_score\n";
  for (const auto& s : report.steps) {
    out << s.origin_index << ',' << s.observed << ',' << exact(s.log_score) << '\n';
  }
}

json predictive_to_json(const PredictiveDistribution& pred) {
  json rows = json::array();
  for (int x = 0; x <= pred.pmf.support_max(); ++x) {
    rows.push_back({{"x", x}, {"probability", std::exp(pred.pmf.log_prob(x))}});
  }
  return {{"origin_index", pred.origin_index},
          {"tail_mass", std::exp(pred.pmf.tail_log_mass)},
          {"pmf", std::move(rows)}};
}

void write_predictive_csv(std::ostream& out, const PredictiveDistribution& pred) {
  out << "x,probability\n";
  for (int x = 0; x <= pred.pmf.support_max(); ++x) {
    out << x << ',' << exact(std::exp(pred.pmf.log_prob(x))) << '\n';
  }
}

}  // namespace inarma
