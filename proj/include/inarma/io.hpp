#pragma once

// CSV ingestion and JSON/CSV rendering of parameters, fits and forecast reports.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "inarma/estimate.hpp"
#include "inarma/forecast.hpp"
#include "inarma/series.hpp"

namespace inarma {

/// Raised for unreadable or malformed input data; the message names the line.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  std::string path;
  /// Column name (needs a header) or zero-based index. Defaults to the last column.
  std::optional<std::string> column;
  bool header = false;
};

/// Accepts a bare column of counts or a (label, count) layout. When the count
/// column is not the first one, the first column is kept as time labels.
CountSeries read_count_csv(std::istream& in, const DatasetSpec& spec);
CountSeries load_dataset(const DatasetSpec& spec);

nlohmann::json params_to_json(const FittedParams& params);
FittedParams params_from_json(const nlohmann::json& j);

nlohmann::json fit_to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& j);

nlohmann::json rolling_to_json(const RollingReport& report);
/// origin_index,observed,log_score
void write_rolling_csv(std::ostream& out, const RollingReport& report);

/// Serialises the predictive pmf as rows of (x, probability).
nlohmann::json predictive_to_json(const PredictiveDistribution& pred);
void write_predictive_csv(std::ostream& out, const PredictiveDistribution& pred);

}  // namespace inarma
