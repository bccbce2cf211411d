// inarma_cli: simulate, fit, compare and forecast count time series models.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "inarma/estimate.hpp"
#include "inarma/forecast.hpp"
#include "inarma/io.hpp"
#include "inarma/model.hpp"
#include "inarma/simulate.hpp"

using namespace inarma;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Errors in how the tool was invoked (bad flag values, invalid parameters).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataFlags {
  std::string path;
  std::optional<std::string> column;
  bool header = false;
};

struct FitFlags {
  int starts = 5;
  std::uint64_t seed = 1;
  std::optional<int> ymax;
};

void add_data_flags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--data", d.path, "CSV file with one count per row, or label,count rows")->required();
  cmd->add_option("--column", d.column, "count column: header name or zero-based index (default: last)");
  cmd->add_flag("--header", d.header, "first row is a header");
}

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
  cmd->add_option("--starts", f.starts, "optimizer starting points")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "seed for start perturbations");
  cmd->add_option("--ymax", f.ymax, "fixed latent truncation bound (INARMA only)")->check(CLI::PositiveNumber);
}

CountSeries load(const DataFlags& d) { return load_dataset({d.path, d.column, d.header}); }

FitOptions fit_options(const FitFlags& f) {
  FitOptions opts;
  opts.n_starts = f.starts;
  opts.seed = f.seed;
  opts.y_max_override = f.ymax;
  return opts;
}

ModelId model_arg(const std::string& name) {
  try {
    return parse_model_id(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void require_length(const CountSeries& x) {
  if (x.size() < 3) {
    throw DataError("series has " + std::to_string(x.size()) + " observations; at least 3 are needed");
  }
}

// Writes to --out when given, stdout otherwise.
template <typename Emit>
void with_output(const std::optional<std::string>& out, Emit&& emit) {
  if (!out) {
    emit(std::cout);
    return;
  }
  std::ofstream f(*out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + *out + "'");
  emit(f);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string describe_params(const FittedParams& p, int digits) {
  std::string out;
  const json j = params_to_json(p);
  for (const char* key : {"nu", "alpha", "beta", "tau", "phi", "kappa", "lambda1", "s1"}) {
    if (!j.contains(key)) continue;
    if (!out.empty()) out += ' ';
    out += std::string(key) + '=' + fixed(j.at(key).get<double>(), digits);
  }
  return out;
}

// ---- simulate ----

struct SimulateFlags {
  std::string model;
  std::optional<double> nu, alpha, beta, tau, phi, kappa;
  std::size_t length = 0;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
  bool latent = false;
  std::string representation = "state";
};

double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing ") + flag);
  return *v;
}

ModelParams build_params(const SimulateFlags& f) {
  try {
    switch (model_arg(f.model)) {
      case ModelId::inar1: return Inar1Params(need(f.nu, "--nu"), need(f.alpha, "--alpha"));
      case ModelId::inarch1: return Inarch1Params(need(f.nu, "--nu"), need(f.alpha, "--alpha"));
      case ModelId::ingarch11:
        if (f.tau || f.phi || f.kappa) {
          return ingarch_from_arma_form({need(f.tau, "--tau"), need(f.phi, "--phi"), need(f.kappa, "--kappa")});
        }
        return Ingarch11Params(need(f.nu, "--nu"), need(f.alpha, "--alpha"), need(f.beta, "--beta"));
      case ModelId::inarma11:
        return InarmaParams(need(f.tau, "--tau"), need(f.phi, "--phi"), need(f.kappa, "--kappa"));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown model");
}

int run_simulate(const SimulateFlags& f) {
  const ModelParams params = build_params(f);
  RandomStream stream(f.seed);
  SimulationOutput sim = [&] {
    if (const auto* p = std::get_if<InarmaParams>(&params)) {
      if (f.representation == "state") return simulate_inarma_state(*p, f.length, stream);
      if (f.representation == "population") return simulate_inarma_population(*p, f.length, stream);
      if (f.representation == "thinned") return simulate_inarma_thinned(*p, f.length, stream);
      throw UsageError("--representation must be state, population or thinned");
    }
    return simulate(params, f.length, stream);
  }();
  with_output(f.out, [&](std::ostream& os) {
    for (std::size_t t = 0; t < sim.series.size(); ++t) {
      os << sim.series[t];
      if (f.latent && sim.latent) {
        os << ',' << (*sim.latent)[t];
      } else if (f.latent && sim.intensity) {
        os << ',' << fixed((*sim.intensity)[t], 6);
      }
      os << '\n';
    }
  });
  return 0;
}

// ---- fit ----

struct FitCommand {
  DataFlags data;
  FitFlags fit;
  std::string model;
  bool json = false;
  std::optional<std::string> out;
};

int run_fit(const FitCommand& c) {
  const ModelId id = model_arg(c.model);
  const CountSeries x = load(c.data);
  require_length(x);
  const FitResult r = fit(id, x, fit_options(c.fit));
  with_output(c.out, [&](std::ostream& os) {
    if (c.json) {
      os << fit_to_json(r).dump(2) << '\n';
      return;
    }
    os << "model      " << model_label(id) << '\n';
    os << "params     " << describe_params(r.params, 4) << '\n';
    os << "loglik     " << fixed(r.loglik, 4) << '\n';
    os << "k          " << r.k << '\n';
    os << "AIC        " << fixed(r.aic, 2) << '\n';
    os << "converged  " << (r.converged ? "yes" : "no") << '\n';
    if (r.y_max_used) os << "y_max      " << *r.y_max_used << '\n';
  });
  return 0;
}

// ---- compare ----

struct CompareCommand {
  DataFlags data;
  FitFlags fit;
  std::vector<std::string> models;
  std::optional<std::size_t> rolling_start;
  bool json = false;
  bool cold = false;
  unsigned threads = 1;
  std::optional<std::string> out;
  std::optional<std::string> scores_out;
};

struct CompareRow {
  ModelId id;
  std::optional<FitResult> fit;
  std::optional<RollingReport> rolling;
  std::string error;
};

int run_compare(const CompareCommand& c) {
  if (c.models.size() < 2) throw UsageError("compare needs at least two models (--models)");
  std::vector<ModelId> ids;
  for (const auto& m : c.models) ids.push_back(model_arg(m));
  const CountSeries x = load(c.data);
  require_length(x);
  const std::size_t start = c.rolling_start.value_or(default_rolling_start(x.size()));
  if (start < 3 || start >= x.size()) {
    throw UsageError("--rolling-start must lie in [3, " + std::to_string(x.size() - 1) + "]");
  }
  const FitOptions opts = fit_options(c.fit);
  const RollingOptions rolling{!c.cold, c.threads};

  std::vector<std::future<CompareRow>> jobs;
  for (ModelId id : ids) {
    jobs.push_back(std::async(std::launch::async, [&, id] {
      CompareRow row{id, std::nullopt, std::nullopt, {}};
      try {
        row.fit = fit(id, x, opts);
        row.rolling = rolling_forecast(id, x, start, opts, rolling);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      return row;
    }));
  }
  std::vector<CompareRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    if (a.fit.has_value() != b.fit.has_value()) return a.fit.has_value();
    return a.fit && a.fit->aic < b.fit->aic;
  });

  if (c.scores_out) {
    with_output(c.scores_out, [&](std::ostream& os) {
      os << "model,origin_index,observed,log_score\n";
      for (const auto& row : rows) {
        if (!row.rolling) continue;
        std::ostringstream per;
        write_rolling_csv(per, *row.rolling);
        std::istringstream lines(per.str());
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) os << model_name(row.id) << ',' << line << '\n';
      }
    });
  }

  with_output(c.out, [&](std::ostream& os) {
    if (c.json) {
      json out_rows = json::array();
      for (const auto& row : rows) {
        json r{{"model_id", std::string(model_name(row.id))}};
        r["fit"] = row.fit ? fit_to_json(*row.fit) : json(nullptr);
        r["mean_log_score"] = row.rolling ? json(row.rolling->mean_log_score) : json(nullptr);
        r["error"] = row.error.empty() ? json(nullptr) : json(row.error);
        out_rows.push_back(std::move(r));
      }
      os << json{{"n", x.size()}, {"rolling_start", start}, {"rows", std::move(out_rows)}}.dump(2) << '\n';
      return;
    }
    os << "n = " << x.size() << ", forecasts for observations " << start + 1 << ".." << x.size() << '\n';
    char line[512];
    std::snprintf(line, sizeof line, "%-24s %-58s %6s %7s\n", "model", "parameters", "AIC", "logS");
    os << line;
    for (const auto& row : rows) {
      if (!row.fit) {
        std::snprintf(line, sizeof line, "%-24s failed: %s\n", std::string(model_label(row.id)).c_str(), row.error.c_str());
      } else {
        const std::string logs = row.rolling ? fixed(row.rolling->mean_log_score, 3) : "-";
        std::snprintf(line, sizeof line, "%-24s %-58s %6.0f %7s\n", std::string(model_label(row.id)).c_str(),
                      describe_params(row.fit->params, 3).c_str(), row.fit->aic, logs.c_str());
      }
      os << line;
    }
  });
  return std::any_of(rows.begin(), rows.end(), [](const CompareRow& r) { return !r.error.empty(); }) ? kExitRuntime : 0;
}

// ---- forecast ----

struct ForecastCommand {
  DataFlags data;
  FitFlags fit;
  std::string model;
  std::optional<std::size_t> origin;
  int horizon = 1;
  bool json = false;
  std::optional<std::string> out;
};

int run_forecast(const ForecastCommand& c) {
  const ModelId id = model_arg(c.model);
  if (c.horizon != 1) throw UsageError("only --horizon 1 is supported");
  const CountSeries x = load(c.data);
  const std::size_t origin = c.origin.value_or(x.size());
  if (origin < 3 || origin > x.size()) {
    throw UsageError("--origin must lie in [3, " + std::to_string(x.size()) + "]");
  }
  const CountSeries history = x.head(origin);
  const FitResult r = fit(id, history, fit_options(c.fit));
  const PredictiveDistribution pred = predictive_one_step(r, history);
  with_output(c.out, [&](std::ostream& os) {
    if (c.json) {
      json j = predictive_to_json(pred);
      j["fit"] = fit_to_json(r);
      os << j.dump(2) << '\n';
    } else {
      write_predictive_csv(os, pred);
    }
  });
  return 0;
}

// ---- acf ----

struct AcfCommand {
  DataFlags data;
  int max_lag = 20;
  std::optional<std::string> out;
};

int run_acf(const AcfCommand& c) {
  const CountSeries x = load(c.data);
  with_output(c.out, [&](std::ostream& os) {
    os << "lag,acf\n";
    for (int h = 0; h <= c.max_lag && static_cast<std::size_t>(h) < x.size(); ++h) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%d,%.17g\n", h, sample_acf(x.values(), h));
      os << buf;
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson INAR(1), INARCH(1), INGARCH(1,1) and INARMA(1,1) count time series models"};
  app.require_subcommand(1);

  SimulateFlags sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "simulate a trajectory");
  sim_cmd->add_option("--model", sim.model, "inar1 | inarch1 | ingarch11 | inarma11")->required();
  sim_cmd->add_option("--nu", sim.nu);
  sim_cmd->add_option("--alpha", sim.alpha);
  sim_cmd->add_option("--beta", sim.beta);
  sim_cmd->add_option("--tau", sim.tau);
  sim_cmd->add_option("--phi", sim.phi);
  sim_cmd->add_option("--kappa", sim.kappa);
  sim_cmd->add_option("--length", sim.length, "number of observations")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--out", sim.out, "output file (default: stdout)");
  sim_cmd->add_flag("--latent", sim.latent, "add the latent state (or intensity) as a second column");
  sim_cmd->add_option("--representation", sim.representation, "INARMA simulator: state | population | thinned");

  FitCommand fit_c;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit one model by maximum likelihood");
  add_data_flags(fit_cmd, fit_c.data);
  add_fit_flags(fit_cmd, fit_c.fit);
  fit_cmd->add_option("--model", fit_c.model)->required();
  fit_cmd->add_flag("--json", fit_c.json);
  fit_cmd->add_option("--out", fit_c.out);

  CompareCommand cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "fit several models, rank by AIC and rolling log score");
  add_data_flags(cmp_cmd, cmp.data);
  add_fit_flags(cmp_cmd, cmp.fit);
  cmp_cmd->add_option("--models", cmp.models, "models to compare (comma separated)")->required()->delimiter(',');
  cmp_cmd->add_option("--rolling-start", cmp.rolling_start,
                      "number of observations before the first forecast (default: n / 2)");
  cmp_cmd->add_flag("--json", cmp.json);
  cmp_cmd->add_flag("--cold", cmp.cold, "refit every origin from scratch instead of warm starts");
  cmp_cmd->add_option("--threads", cmp.threads, "worker threads for cold refits")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--out", cmp.out);
  cmp_cmd->add_option("--scores-out", cmp.scores_out, "write per-step log scores as CSV");

  ForecastCommand fc;
  CLI::App* fc_cmd = app.add_subcommand("forecast", "one-step-ahead predictive distribution");
  add_data_flags(fc_cmd, fc.data);
  add_fit_flags(fc_cmd, fc.fit);
  fc_cmd->add_option("--model", fc.model)->required();
  fc_cmd->add_option("--origin", fc.origin, "observations used for fitting and conditioning (default: all)");
  fc_cmd->add_option("--horizon", fc.horizon);
  fc_cmd->add_flag("--json", fc.json);
  fc_cmd->add_option("--out", fc.out);

  AcfCommand acf_c;
  CLI::App* acf_cmd = app.add_subcommand("acf", "sample autocorrelation function as CSV");
  add_data_flags(acf_cmd, acf_c.data);
  acf_cmd->add_option("--max-lag", acf_c.max_lag)->check(CLI::NonNegativeNumber);
  acf_cmd->add_option("--out", acf_c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (fit_cmd->parsed()) return run_fit(fit_c);
    if (cmp_cmd->parsed()) return run_compare(cmp);
    if (fc_cmd->parsed()) return run_forecast(fc);
    if (acf_cmd->parsed()) return run_acf(acf_c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
