#include "curveflat/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "curveflat/change_rate.hpp"
#include "curveflat/error.hpp"
#include "curveflat/forecast.hpp"
#include "curveflat/logistic.hpp"
#include "curveflat/plot.hpp"
#include "curveflat/series.hpp"
#include "curveflat/spline.hpp"
#include "curveflat/ts_network.hpp"
#include "output.hpp"

namespace curveflat::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string input;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

struct RatesOptions {
  std::string basis = "cumulative_ratio";
  int window_start = kDefaultRateWindowStart;
  int window_n = kDefaultRateWindowLength;
};

struct KnotsOptions {
  std::string source = "detected";
  std::string series = "new";
  int first_day = 1;
  int last_day = 43;
  std::vector<double> knots;
  bool edges = false;
};

struct SplineOptions {
  std::string knots_file;
  std::vector<double> knots;
  int degree = kDefaultSplineDegree;
  std::string response = "cumulative";
  std::optional<int> first_day;
  std::optional<int> last_day;
};

struct ForecastOptions {
  std::string mode = "geometric";
  int horizon = 62;
  double m_bar = 1.049521;
  std::optional<double> m;
  double u0 = 1.0;
  double factor = 1.0;
  std::optional<double> start;
  std::optional<double> increment;
  std::optional<int> anchor_day;
  std::string anchor_date;
  std::string calibrate;
  std::optional<double> u_pb2;
};

struct LogisticOptions {
  double upper_bound = 3683.0;
  std::optional<int> window_start;
  int window_n = kDefaultLogisticWindow;
};

struct Options {
  std::string subcommand;
  CommonOptions common;
  RatesOptions rates;
  KnotsOptions knots;
  SplineOptions spline;
  ForecastOptions forecast;
  LogisticOptions logistic;
};

template <class T>
void take(const json& cfg, const char* key, T& target) {
  if (cfg.contains(key) && !cfg.at(key).is_null()) target = cfg.at(key).get<T>();
}

template <class T>
void take(const json& cfg, const char* key, std::optional<T>& target) {
  if (cfg.contains(key) && !cfg.at(key).is_null()) target = cfg.at(key).get<T>();
}

// Config file values become the starting point that flags then override.
void apply_config(const json& cfg, Options& o) {
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  take(cfg, "input", o.common.input);
  take(cfg, "out_dir", o.common.out_dir);
  take(cfg, "seed", o.common.seed);
  take(cfg, "basis", o.rates.basis);
  take(cfg, "window_start", o.rates.window_start);
  take(cfg, "window_n", o.rates.window_n);
  take(cfg, "source", o.knots.source);
  take(cfg, "series", o.knots.series);
  take(cfg, "first_day", o.knots.first_day);
  take(cfg, "last_day", o.knots.last_day);
  take(cfg, "knots", o.knots.knots);
  take(cfg, "edges", o.knots.edges);
  take(cfg, "knots_file", o.spline.knots_file);
  take(cfg, "knots", o.spline.knots);
  take(cfg, "degree", o.spline.degree);
  take(cfg, "response", o.spline.response);
  take(cfg, "first_day", o.spline.first_day);
  take(cfg, "last_day", o.spline.last_day);
  take(cfg, "mode", o.forecast.mode);
  take(cfg, "horizon", o.forecast.horizon);
  take(cfg, "m_bar", o.forecast.m_bar);
  take(cfg, "m", o.forecast.m);
  take(cfg, "u0", o.forecast.u0);
  take(cfg, "factor", o.forecast.factor);
  take(cfg, "start", o.forecast.start);
  take(cfg, "increment", o.forecast.increment);
  take(cfg, "anchor_day", o.forecast.anchor_day);
  take(cfg, "anchor_date", o.forecast.anchor_date);
  take(cfg, "calibrate", o.forecast.calibrate);
  take(cfg, "u_pb2", o.forecast.u_pb2);
  take(cfg, "upper_bound", o.logistic.upper_bound);
  take(cfg, "window_start", o.logistic.window_start);
  take(cfg, "window_n", o.logistic.window_n);
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a path");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

template <class T>
CLI::Option* add_optional(CLI::App* app, const std::string& name, std::optional<T>& target, const std::string& help) {
  return app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

json optional_json(const auto& v) { return v ? json(*v) : json(nullptr); }

json effective_config(const Options& o) {
  json j;
  j["subcommand"] = o.subcommand;
  j["input"] = o.common.input;
  j["out_dir"] = o.common.out_dir;
  j["seed"] = o.common.seed;
  if (o.subcommand == "rates" || o.subcommand == "report") {
    j["basis"] = o.rates.basis;
    j["window_start"] = o.rates.window_start;
    j["window_n"] = o.rates.window_n;
  } else if (o.subcommand == "knots") {
    j["source"] = o.knots.source;
    j["series"] = o.knots.series;
    j["first_day"] = o.knots.first_day;
    j["last_day"] = o.knots.last_day;
    j["knots"] = o.knots.knots;
    j["edges"] = o.knots.edges;
  } else if (o.subcommand == "fit-spline") {
    j["knots_file"] = o.spline.knots_file;
    j["knots"] = o.spline.knots;
    j["degree"] = o.spline.degree;
    j["response"] = o.spline.response;
    j["first_day"] = optional_json(o.spline.first_day);
    j["last_day"] = optional_json(o.spline.last_day);
  } else if (o.subcommand == "forecast") {
    const auto& f = o.forecast;
    j["mode"] = f.mode;
    j["horizon"] = f.horizon;
    j["m_bar"] = f.m_bar;
    j["m"] = optional_json(f.m);
    j["u0"] = f.u0;
    j["factor"] = f.factor;
    j["start"] = optional_json(f.start);
    j["increment"] = optional_json(f.increment);
    j["anchor_day"] = optional_json(f.anchor_day);
    j["anchor_date"] = f.anchor_date;
    j["calibrate"] = f.calibrate;
    j["u_pb2"] = optional_json(f.u_pb2);
  } else if (o.subcommand == "fit-logistic") {
    j["upper_bound"] = o.logistic.upper_bound;
    j["window_start"] = optional_json(o.logistic.window_start);
    j["window_n"] = o.logistic.window_n;
  }
  return j;
}

class Outputs {
 public:
  explicit Outputs(const Options& o) : dir_(o.common.out_dir) {}

  void write(const std::string& name, std::string_view content) {
    write_atomic(dir_ / name, content);
    written_.push_back((dir_ / name).string());
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

ParsedSeries require_series(const Options& o) {
  if (o.common.input.empty()) throw UsageError(o.subcommand + " requires an input series CSV");
  return load_csv(o.common.input);
}

std::string date_text(const std::optional<std::chrono::year_month_day>& d) {
  return d ? format_iso_date(*d) : std::string{};
}

// --- subcommands -----------------------------------------------------------

int cmd_validate(const Options& o, Outputs& out, std::ostream& console) {
  const auto parsed = require_series(o);
  const auto report = validate(parsed.series);
  json j;
  j["input"] = o.common.input;
  j["records"] = parsed.series.size();
  j["ok"] = report.ok;
  j["issues"] = json::array();
  for (const auto& issue : report.issues) {
    j["issues"].push_back({{"day_id", issue.day_id}, {"rule", issue.rule}, {"message", issue.message}});
  }
  j["parse_report"] = {{"zero_filled", parsed.report.zero_filled},
                       {"new_cases_derived", parsed.report.new_cases_derived}};
  out.write_json("validation.json", j);
  console << j.dump(2) << "\n";
  return report.ok ? kExitOk : kExitFailure;
}

int cmd_rates(const Options& o, Outputs& out, std::ostream& console) {
  const auto parsed = require_series(o);
  const auto basis = parse_rate_basis(o.rates.basis);
  if (!basis) throw UsageError("unknown rate basis '" + o.rates.basis + "'");
  const auto rates = change_rates(parsed.series, *basis);
  const auto mean = mean_change_rate(rates, o.rates.window_start, o.rates.window_n);

  std::string csv = "day_id,rate,defined_flag\n";
  for (std::size_t i = 0; i < rates.day_ids.size(); ++i) {
    csv += std::to_string(rates.day_ids[i]) + "," + (rates.rates[i] ? format_real(*rates.rates[i]) : "") + "," +
           (rates.rates[i] ? "1" : "0") + "\n";
  }
  out.write("rates.csv", csv);
  json j{{"value", mean.value},
         {"window_start", mean.window_start},
         {"n", mean.window_length},
         {"excluded", mean.excluded},
         {"basis", std::string(to_string(*basis))}};
  out.write_json("mean_rate.json", j);
  console << j.dump(2) << "\n";
  return kExitOk;
}

json communities_json(const CommunityPartition& p, int first_day) {
  json arr = json::array();
  const auto members = p.members();
  for (std::size_t c = 0; c < members.size(); ++c) {
    std::vector<int> days;
    for (auto node : members[c]) days.push_back(first_day + static_cast<int>(node));
    arr.push_back({{"id", c}, {"members", days}});
  }
  return arr;
}

int cmd_knots(const Options& o, Outputs& out, std::ostream& console) {
  const auto& k = o.knots;
  if (k.series != "new" && k.series != "cumulative") throw UsageError("--series must be new or cumulative");
  std::optional<VisibilityGraph> graph;
  int first_day = k.first_day;
  if (!o.common.input.empty()) {
    const auto parsed = require_series(o);
    const auto window = parsed.series.slice(k.first_day, k.last_day);
    if (window.size() < 2) throw Error("ts_network", "day range selects fewer than two observations");
    first_day = window.first_day();
    std::vector<double> values;
    for (const auto& r : window.records) {
      values.push_back(static_cast<double>(k.series == "new" ? r.new_cases : r.all_cases));
    }
    graph = visibility_graph(values);
  }

  CommunityPartition partition;
  KnotPartition knots;
  if (k.source == "paper_default") {
    partition = builtin_partition();
    knots = builtin_knots();
    first_day = 1;
    if (graph && graph->node_count() == partition.assignment.size() && k.first_day == 1) {
      partition.modularity = modularity(*graph, partition.assignment);
    }
  } else if (k.source == "detected") {
    if (!graph) throw UsageError("knots --source detected requires an input series CSV");
    partition = detect_communities(*graph, o.common.seed);
    knots = knots_from_partition(partition, first_day, KnotSource::detected);
  } else if (k.source == "user") {
    if (k.knots.empty()) throw UsageError("knots --source user requires --knots");
    const std::size_t nodes = graph ? graph->node_count() : static_cast<std::size_t>(k.last_day - k.first_day + 1);
    partition = partition_from_knots(k.knots, nodes, first_day);
    if (graph) partition.modularity = modularity(*graph, partition.assignment);
    knots = {k.knots, KnotSource::user};
  } else {
    throw UsageError("--source must be paper_default, detected or user");
  }

  json j{{"interior_knots", knots.interior_knots},
         {"communities", communities_json(partition, first_day)},
         {"modularity", partition.modularity},
         {"source", std::string(to_string(knots.source))}};
  out.write_json("knots.json", j);
  if (k.edges) {
    if (!graph) throw UsageError("--edges requires an input series CSV");
    std::string csv = "source_day,target_day\n";
    for (const auto& [a, b] : graph->edges()) {
      csv += std::to_string(first_day + static_cast<int>(a)) + "," + std::to_string(first_day + static_cast<int>(b)) +
             "\n";
    }
    out.write("edges.csv", csv);
  }
  console << j.dump(2) << "\n";
  return kExitOk;
}

std::vector<double> read_knots_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cli", "cannot open knot file " + path);
  const json j = json::parse(in);
  if (j.is_array()) return j.get<std::vector<double>>();
  if (!j.contains("interior_knots")) throw Error("cli", path + " has no interior_knots field");
  return j.at("interior_knots").get<std::vector<double>>();
}

int cmd_fit_spline(const Options& o, Outputs& out, std::ostream& console) {
  const auto& s = o.spline;
  const auto parsed = require_series(o);
  if (s.response != "cumulative" && s.response != "new") throw UsageError("--response must be cumulative or new");
  const int first = s.first_day.value_or(parsed.series.first_day());
  const int last = s.last_day.value_or(parsed.series.last_day());
  const auto window = parsed.series.slice(first, last);

  std::vector<double> knots;
  if (!s.knots_file.empty()) {
    knots = read_knots_file(s.knots_file);
  } else if (!s.knots.empty()) {
    knots = s.knots;
  } else {
    knots = builtin_knots().interior_knots;
  }

  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : window.records) {
    x.push_back(r.day_id);
    y.push_back(static_cast<double>(s.response == "new" ? r.new_cases : r.all_cases));
  }
  const auto model = fit_spline(x, y, SplineBasis{s.degree, knots});

  json j{{"degree", model.basis.degree},
         {"knots", model.basis.interior_knots},
         {"columns", model.basis.column_names()},
         {"coefficients", model.coefficients},
         {"r_squared", model.r_squared},
         {"loocv", optional_json(model.loocv)},
         {"sigma2", std::isfinite(model.residual_variance) ? json(model.residual_variance) : json(nullptr)},
         {"hat_trace", model.hat_trace()},
         {"basis_size", model.basis.size()},
         {"n", model.x.size()},
         {"response", s.response}};
  out.write_json("spline_model.json", j);

  std::string csv = "day_id,observed,fitted,pointwise_sd\n";
  for (std::size_t i = 0; i < model.x.size(); ++i) {
    csv += std::to_string(static_cast<int>(model.x[i])) + "," + std::to_string(static_cast<long long>(model.y[i])) +
           "," + format_real(model.fitted[i]) + "," + format_real(model.pointwise_sd[i]) + "\n";
  }
  out.write("spline_fit.csv", csv);
  console << j.dump(2) << "\n";
  return kExitOk;
}

std::string forecast_csv(const ForecastTable& table) {
  std::string csv = "day_id,date,forecast\n";
  for (const auto& r : table.rows) {
    csv += std::to_string(r.day_id) + "," + date_text(r.date) + "," + std::to_string(round_half_up(r.value)) + "\n";
  }
  return csv;
}

int cmd_forecast(const Options& o, Outputs& out, std::ostream& console) {
  const auto& f = o.forecast;
  std::optional<ParsedSeries> parsed;
  if (!o.common.input.empty()) parsed = require_series(o);

  ForecastAnchor anchor;
  if (parsed) anchor = {parsed->series.last_day(), parsed->series.records.back().date};
  if (f.anchor_day) anchor.day_id = *f.anchor_day;
  if (!f.anchor_date.empty()) {
    anchor.date = parse_iso_date(f.anchor_date);
    if (!anchor.date) throw UsageError("--anchor-date must be YYYY-MM-DD");
  }

  ForecastTable table;
  json summary;
  if (f.mode == "eq13") {
    double start = 0.0;
    if (f.start) start = *f.start;
    else if (parsed) start = static_cast<double>(parsed->series.records.back().all_cases);
    else throw UsageError("forecast --mode eq13 needs --start or an input series");
    table = forecast_eq13(start, f.m_bar, f.m.value_or(f.m_bar), f.u0, f.horizon, anchor);
    std::string trace = "day_id,u,g,h,f_hat\n";
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
      const auto& st = table.trace[k];
      trace += std::to_string(table.rows[k].day_id) + "," + format_real(st.u) + "," + format_real(st.g) + "," +
               format_real(st.h) + "," + format_real(st.f_hat) + "\n";
    }
    out.write("forecast_trace.csv", trace);
    summary = {{"mode", "eq13"}, {"start", start}, {"m_bar", f.m_bar}, {"m", f.m.value_or(f.m_bar)}, {"u0", f.u0}};
  } else if (f.mode == "geometric") {
    if (!f.calibrate.empty()) {
      const auto golden = load_golden_csv(f.calibrate);
      const auto cal = calibrate_to_table(golden);
      table = forecast_geometric(cal.params.start, cal.params.last_increment, cal.params.daily_factor, f.horizon,
                                 cal.anchor);
      double replay_dev = 0.0;
      for (std::size_t k = 0; k < golden.size() && k < table.rows.size(); ++k) {
        replay_dev = std::max(replay_dev, std::abs(static_cast<double>(round_half_up(table.rows[k].value)) -
                                                   golden[k].value));
      }
      json cj{{"start", cal.params.start},
              {"last_increment", cal.params.last_increment},
              {"daily_factor", cal.params.daily_factor},
              {"anchor_day", cal.anchor.day_id},
              {"anchor_date", date_text(cal.anchor.date)},
              {"max_abs_deviation", cal.max_abs_deviation},
              {"replay_max_abs_deviation", replay_dev},
              {"golden_rows", golden.size()}};
      out.write_json("calibration.json", cj);
      summary = {{"mode", "geometric"}, {"calibration", cj}};
    } else {
      double start = 0.0;
      double increment = 0.0;
      if (f.start) start = *f.start;
      else if (parsed) start = static_cast<double>(parsed->series.records.back().all_cases);
      else throw UsageError("forecast --mode geometric needs --calibrate, --start or an input series");
      if (f.increment) increment = *f.increment;
      else if (parsed) increment = static_cast<double>(parsed->series.records.back().new_cases);
      else throw UsageError("forecast --mode geometric needs --increment or an input series");
      table = forecast_geometric(start, increment, f.factor, f.horizon, anchor);
      summary = {{"mode", "geometric"}, {"start", start}, {"last_increment", increment}, {"daily_factor", f.factor}};
    }
  } else {
    throw UsageError("--mode must be eq13 or geometric");
  }
  out.write("forecast.csv", forecast_csv(table));

  const auto values = table.values();
  const double peak = *std::max_element(values.begin(), values.end());
  json ub;
  if (peak > 0.0) {
    const auto est = upper_bound(peak, f.m_bar, f.u_pb2);
    ub = {{"u_pb1", est.u_pb1_serialized()},
          {"u_pb2", est.u_pb2_serialized()},
          {"u_pb", est.u_pb_serialized()},
          {"override_used", est.override_used},
          {"m_bar", f.m_bar},
          {"exact", {{"u_pb1", est.u_pb1}, {"u_pb2", est.u_pb2}, {"u_pb", est.u_pb}}}};
  } else {
    ub = {{"u_pb1", nullptr}, {"u_pb2", nullptr}, {"u_pb", nullptr}, {"override_used", false},
          {"note", "forecast has no positive value"}};
  }
  out.write_json("upper_bound.json", ub);
  summary["rows"] = table.rows.size();
  summary["upper_bound"] = ub;
  console << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_fit_logistic(const Options& o, Outputs& out, std::ostream& console) {
  const auto& l = o.logistic;
  const auto parsed = require_series(o);
  const int start = l.window_start.value_or(parsed.series.first_day());
  const auto model = fit_logistic_growth(parsed.series, l.upper_bound, start, l.window_n);
  json j{{"r_squared", model.r_squared},
         {"f", std::isfinite(model.f_stat) ? json(model.f_stat) : json(nullptr)},
         {"df1", model.df1},
         {"df2", model.df2},
         {"constant", model.b0},
         {"b1", model.b1},
         {"upper_bound", model.upper_bound_u},
         {"window_start", model.window_start},
         {"window_n", model.n},
         {"statistics_scale", "linearized: ln(1/y - 1/u) = ln(constant) + t ln(b1)"}};
  out.write_json("logistic_model.json", j);
  std::string csv = "day_id,observed,fitted,in_window\n";
  for (const auto& r : parsed.series.records) {
    const bool in_window = r.day_id >= start && r.day_id < start + l.window_n;
    csv += std::to_string(r.day_id) + "," + std::to_string(r.all_cases) + "," +
           format_real(predict_logistic(model, r.day_id)) + "," + (in_window ? "1" : "0") + "\n";
  }
  out.write("logistic_fit.csv", csv);
  console << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_report(const Options& o, Outputs& out, std::ostream& console) {
  const auto parsed = require_series(o);
  const auto& s = parsed.series;
  PlotSeries cumulative{"All_Cases", s.day_axis(), {}};
  for (const auto& r : s.records) cumulative.y.push_back(static_cast<double>(r.all_cases));
  PlotStyle style1;
  style1.title = "Cumulative confirmed cases";
  style1.y_label = "All_Cases";
  out.write("cumulative.svg", emit_plot({cumulative}, style1));

  const auto basis = parse_rate_basis(o.rates.basis);
  if (!basis) throw UsageError("unknown rate basis '" + o.rates.basis + "'");
  const auto rates = change_rates(s, *basis);
  PlotSeries rate_line{"change rate", {}, {}};
  for (std::size_t i = 0; i < rates.day_ids.size(); ++i) {
    if (!rates.rates[i]) continue;
    rate_line.x.push_back(rates.day_ids[i]);
    rate_line.y.push_back(*rates.rates[i]);
  }
  PlotStyle style2;
  style2.title = "Change rate (" + std::string(to_string(*basis)) + ")";
  style2.y_label = "m";
  out.write("change_rates.svg", emit_plot({rate_line}, style2));
  console << json{{"written", out.written()}}.dump(2) << "\n";
  return kExitOk;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& module, const std::string& message) {
  err << json{{"error", {{"kind", kind}, {"module", module}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Epidemic curve modelling: change rates, network knots, regression splines, forecasts", "curveflat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config_path;
  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("input", o.common.input, "series CSV (Day_ID, Date, All_Cases, ...)");
    if (!needs_input) in->description("optional series CSV");
    sub->add_option("--out-dir,-o", o.common.out_dir, "directory for emitted artifacts");
    sub->add_option("--config", config_path, "JSON config; flags override its values");
    sub->add_option("--seed", o.common.seed, "random seed (CURVEFLAT_SEED overrides)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check series invariants");
  add_common(validate_cmd, true);

  auto* rates_cmd = app.add_subcommand("rates", "per-day change rates and their windowed mean");
  add_common(rates_cmd, true);
  rates_cmd->add_option("--basis", o.rates.basis, "cumulative_ratio | increment_ratio | printed_increment_ratio");
  rates_cmd->add_option("--window-start", o.rates.window_start, "first day of the averaging window");
  rates_cmd->add_option("--window-n", o.rates.window_n, "number of rates averaged");

  auto* knots_cmd = app.add_subcommand("knots", "visibility-graph communities -> spline knots");
  add_common(knots_cmd, false);
  knots_cmd->add_option("--source", o.knots.source, "paper_default | detected | user");
  knots_cmd->add_option("--series", o.knots.series, "new | cumulative");
  knots_cmd->add_option("--first-day", o.knots.first_day);
  knots_cmd->add_option("--last-day", o.knots.last_day);
  knots_cmd->add_option("--knots", o.knots.knots, "user knot positions")->delimiter(',');
  knots_cmd->add_flag("--edges", o.knots.edges, "also write edges.csv");

  auto* spline_cmd = app.add_subcommand("fit-spline", "regression spline fit with hat-matrix diagnostics");
  add_common(spline_cmd, true);
  spline_cmd->add_option("--knots-file", o.spline.knots_file, "JSON with interior_knots (e.g. knots.json)");
  spline_cmd->add_option("--knots", o.spline.knots, "knot positions")->delimiter(',');
  spline_cmd->add_option("--degree", o.spline.degree);
  spline_cmd->add_option("--response", o.spline.response, "cumulative | new");
  add_optional(spline_cmd, "--first-day", o.spline.first_day, "first day to fit");
  add_optional(spline_cmd, "--last-day", o.spline.last_day, "last day to fit");

  auto* forecast_cmd = app.add_subcommand("forecast", "horizon forecast and upper bound");
  add_common(forecast_cmd, false);
  forecast_cmd->add_option("--mode", o.forecast.mode, "eq13 | geometric");
  forecast_cmd->add_option("--horizon", o.forecast.horizon);
  forecast_cmd->add_option("--m-bar", o.forecast.m_bar, "mean change rate");
  add_optional(forecast_cmd, "--m", o.forecast.m, "instantaneous rate (eq13; default m-bar)");
  forecast_cmd->add_option("--u0", o.forecast.u0, "initial U (eq13)");
  forecast_cmd->add_option("--factor", o.forecast.factor, "daily increment factor (geometric)");
  add_optional(forecast_cmd, "--start", o.forecast.start, "last observed cumulative count");
  add_optional(forecast_cmd, "--increment", o.forecast.increment, "last observed increment (geometric)");
  add_optional(forecast_cmd, "--anchor-day", o.forecast.anchor_day, "day_id of the last observation");
  forecast_cmd->add_option("--anchor-date", o.forecast.anchor_date, "date of the last observation");
  forecast_cmd->add_option("--calibrate", o.forecast.calibrate, "golden CSV to calibrate the geometric mode");
  add_optional(forecast_cmd, "--u-pb2", o.forecast.u_pb2, "override the rate-scaled bound");

  auto* logistic_cmd = app.add_subcommand("fit-logistic", "bounded logistic growth fit");
  add_common(logistic_cmd, true);
  logistic_cmd->add_option("--upper-bound", o.logistic.upper_bound);
  add_optional(logistic_cmd, "--window-start", o.logistic.window_start, "first day of the fit window");
  logistic_cmd->add_option("--window-n", o.logistic.window_n);

  auto* report_cmd = app.add_subcommand("report", "SVG plots of the case curve and change rates");
  add_common(report_cmd, true);
  report_cmd->add_option("--basis", o.rates.basis);

  try {
    if (auto path = find_config_path(args)) {
      std::ifstream in(*path);
      if (!in) throw UsageError("cannot open config file " + *path);
      json cfg;
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError("config file " + *path + " is not valid JSON: " + e.what());
      }
      apply_config(cfg, o);
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", "cli", e.what());
    return kExitUsage;
  } catch (const UsageError& e) {
    write_error(err, "usage", "cli", e.what());
    return kExitUsage;
  } catch (const json::exception& e) {
    write_error(err, "usage", "cli", std::string("bad config value: ") + e.what());
    return kExitUsage;
  }

  if (const char* env = std::getenv("CURVEFLAT_SEED"); env != nullptr && *env != '\0') {
    try {
      o.common.seed = std::stoull(env);
    } catch (const std::exception&) {
      write_error(err, "usage", "cli", "CURVEFLAT_SEED is not an unsigned integer");
      return kExitUsage;
    }
  }

  CLI::App* selected = app.get_subcommands().front();
  o.subcommand = selected->get_name();
  try {
    Outputs outputs(o);
    outputs.write_json(o.subcommand + ".config.json", effective_config(o));
    if (o.subcommand == "validate") return cmd_validate(o, outputs, out);
    if (o.subcommand == "rates") return cmd_rates(o, outputs, out);
    if (o.subcommand == "knots") return cmd_knots(o, outputs, out);
    if (o.subcommand == "fit-spline") return cmd_fit_spline(o, outputs, out);
    if (o.subcommand == "forecast") return cmd_forecast(o, outputs, out);
    if (o.subcommand == "fit-logistic") return cmd_fit_logistic(o, outputs, out);
    if (o.subcommand == "report") return cmd_report(o, outputs, out);
    write_error(err, "usage", "cli", "unknown subcommand " + o.subcommand);
    return kExitUsage;
  } catch (const UsageError& e) {
    write_error(err, "usage", "cli", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    write_error(err, "computation", e.module(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    write_error(err, "io", "cli", e.what());
    return kExitFailure;
  }
}

}  // namespace curveflat::cli
