#include "covq/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "covq/closed_form.hpp"
#include "covq/eb_engineering.hpp"
#include "covq/errors.hpp"
#include "covq/oracle.hpp"

namespace covq::cli {

namespace {

using Json = nlohmann::ordered_json;

// Non-finite values have no JSON literal; they become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void write_error(std::ostream& err, std::string_view kind, std::string_view message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  file << text;
  if (!file) throw std::runtime_error("failed writing output file: " + path);
}

OutputFormat parse_format(const std::string& text) {
  return text == "json" ? OutputFormat::json : OutputFormat::csv;
}

FockCutoff resolve_cutoff(const std::optional<int>& flag) {
  int value = kDefaultCutoff;
  if (flag) {
    value = *flag;
  } else if (const char* env = std::getenv(kCutoffEnvVar); env && *env) {
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc() && ptr == text.data() + text.size(), ErrorKind::domain,
            std::string(kCutoffEnvVar) + " must be an integer");
  }
  require(value >= 1, ErrorKind::domain, "cutoff must be at least 1");
  return FockCutoff{value};
}

LogicalQubit parse_qubit(const std::string& spec) {
  const double h = M_SQRT1_2;
  if (spec == "zero") return LogicalQubit::make(1.0, 0.0);
  if (spec == "one") return LogicalQubit::make(0.0, 0.0);
  if (spec == "plus") return LogicalQubit::pure({h, 0.0}, {h, 0.0});
  if (spec == "minus") return LogicalQubit::pure({h, 0.0}, {-h, 0.0});
  if (spec == "plus_i") return LogicalQubit::pure({h, 0.0}, {0.0, h});
  if (spec == "minus_i") return LogicalQubit::pure({h, 0.0}, {0.0, -h});
  if (spec == "mixed") return LogicalQubit::balanced_mixture();
  std::vector<double> parts;
  std::stringstream stream(spec);
  for (std::string item; std::getline(stream, item, ',');) parts.push_back(parse_number(item));
  require(parts.size() == 3, ErrorKind::domain,
          "qubit must be zero|one|plus|minus|plus_i|minus_i|mixed or 'alpha_sq,gamma_re,gamma_im'");
  const LogicalQubit q = LogicalQubit::make(parts[0], {parts[1], parts[2]});
  q.validate();
  return q;
}

std::string csv_header_line(std::string_view key, const std::string& value) {
  return "# " + std::string(key) + "=" + value + "\n";
}

// --- bounds ---------------------------------------------------------------------

struct BoundsArgs {
  double eta{0};
  double nbar_b{0};
  double delta{0};
  std::string n_range;
  std::optional<double> modes_per_second;
  std::optional<int> cutoff;
  std::string format{"csv"};
  std::string out;
};

int cmd_bounds(const BoundsArgs& args, std::ostream& out) {
  RunConfig config;
  config.channel = make_channel(args.eta, args.nbar_b);
  config.delta = args.delta;
  config.n_range = parse_n_range(args.n_range);
  config.modes_per_second = args.modes_per_second;
  config.cutoff = resolve_cutoff(args.cutoff);
  config.output_format = parse_format(args.format);
  config.output_path = args.out;
  emit(render_bounds(config), config.output_path, out);
  return kSuccess;
}

// --- verify ---------------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> checks;
  std::optional<double> tolerance;
  std::vector<double> etas;
  std::vector<double> nbars;
  std::optional<int> cutoff;
  std::string out;
};

Json report_json(const VerificationReport& r) {
  Json worst = Json::object();
  for (const auto& [key, value] : r.worst_case_inputs) worst[key] = number(value);
  return Json{{"check_name", r.check_name},
              {"grid_size", r.grid_size},
              {"max_abs_error", number(r.max_abs_error)},
              {"max_rel_error", number(r.max_rel_error)},
              {"metric", r.metric == ErrorMetric::abs ? "abs" : "rel"},
              {"tolerance", number(r.tolerance)},
              {"passed", r.passed},
              {"worst_case_inputs", worst}};
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  SuiteOptions options;
  options.checks = args.checks;
  options.eta_override = args.etas;
  options.nbar_override = args.nbars;
  if (args.cutoff) options.cutoff = resolve_cutoff(args.cutoff).max_photons;
  if (args.tolerance)
    require(std::isfinite(*args.tolerance) && *args.tolerance >= 0.0, ErrorKind::domain,
            "tolerance must be finite and >= 0");

  bool all_passed = true;
  std::string text;
  for (auto report : run_suite(options)) {
    if (args.tolerance) report = rescore(std::move(report), *args.tolerance);
    all_passed = all_passed && report.passed;
    text += report_json(report).dump() + "\n";
  }
  emit(text, args.out, out);
  return all_passed ? kSuccess : kVerificationFailure;
}

// --- willie-state ------------------------------------------------------------------------

struct WillieArgs {
  double eta{0};
  double nbar_b{0};
  std::string qubit{"plus"};
  std::string source{"closed"};
  std::string layout{"sparse"};
  std::optional<int> cutoff;
  std::string format{"csv"};
  std::string out;
};

int cmd_willie_state(const WillieArgs& args, std::ostream& out) {
  const ChannelParams params = make_channel(args.eta, args.nbar_b);
  const LogicalQubit qubit = parse_qubit(args.qubit);
  const FockCutoff cutoff = resolve_cutoff(args.cutoff);
  const TriDiagonalWillieState closed = willie_state_closed(qubit, params, cutoff);
  const DensityOperator state =
      args.source == "numeric" ? willie_state_numeric(qubit, params, cutoff) : closed.to_density();
  const bool json = parse_format(args.format) == OutputFormat::json;
  const ComplexMatrix& m = state.matrix();

  Json doc{{"parameters",
            {{"eta", params.eta},
             {"nbar_b", params.nbar_b},
             {"alpha_sq", qubit.alpha_sq},
             {"gamma_re", qubit.gamma.real()},
             {"gamma_im", qubit.gamma.imag()},
             {"cutoff", cutoff.max_photons},
             {"source", args.source},
             {"layout", args.layout}}}};
  std::string text;
  if (!json) {
    for (const auto& [key, value] : doc["parameters"].items())
      text += csv_header_line(key, value.is_string() ? value.get<std::string>()
                                  : value.is_number_integer() ? std::to_string(value.get<int>())
                                                               : format_number(value.get<double>()));
  }

  if (args.layout == "sparse") {
    // The listing follows the tri-diagonal pattern; numeric values are read at
    // the same positions.
    Json rows = Json::array();
    if (!json) text += "f,g,f_prime,g_prime,re,im\n";
    for (const auto& e : closed.entries()) {
      const int row[] = {e.f, e.g};
      const int col[] = {e.f_prime, e.g_prime};
      const Complex v = m(fock_index(row, cutoff), fock_index(col, cutoff));
      if (json) {
        rows.push_back({e.f, e.g, e.f_prime, e.g_prime, v.real(), v.imag()});
      } else {
        text += std::to_string(e.f) + "," + std::to_string(e.g) + "," + std::to_string(e.f_prime) +
                "," + std::to_string(e.g_prime) + "," + format_number(v.real()) + "," +
                format_number(v.imag()) + "\n";
      }
    }
    if (json) {
      doc["columns"] = {"f", "g", "f_prime", "g_prime", "re", "im"};
      doc["entries"] = std::move(rows);
    }
  } else {
    Json re = Json::array(), im = Json::array();
    if (!json) {
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        text += (c ? "," : "") + ("c" + std::to_string(c) + "_re,c" + std::to_string(c) + "_im");
      text += "\n";
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      Json re_row = Json::array(), im_row = Json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (json) {
          re_row.push_back(m(r, c).real());
          im_row.push_back(m(r, c).imag());
        } else {
          text += (c ? "," : "") + format_number(m(r, c).real()) + "," + format_number(m(r, c).imag());
        }
      }
      if (json) {
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
      } else {
        text += "\n";
      }
    }
    if (json) {
      doc["re"] = std::move(re);
      doc["im"] = std::move(im);
    }
  }
  if (json) text = doc.dump() + "\n";
  emit(text, args.out, out);
  return kSuccess;
}

// --- eb-report ------------------------------------------------------------------------------

struct EbArgs {
  double eta{0};
  double nbar_b{0};
  std::string mechanism{"auto"};
  double margin{kDefaultEbMargin};
  std::optional<double> nbar_prime;
  std::optional<double> delta;
  std::optional<std::string> n_range;
  std::string format{"json"};
  std::string out;
};

EbPlan choose_plan(const EbArgs& args, const ChannelParams& params) {
  if (args.mechanism == "lemma1") return plan_lemma1(params, args.margin);
  if (args.mechanism == "lemma2") return plan_lemma2(params, args.nbar_prime);
  if (is_entanglement_breaking(params) || params.willie_occupancy() > 0.0)
    return plan_lemma1(params, args.margin);
  return plan_lemma2(params, args.nbar_prime);
}

int cmd_eb_report(const EbArgs& args, std::ostream& out) {
  const ChannelParams params = make_channel(args.eta, args.nbar_b);
  require(args.delta.has_value() == args.n_range.has_value(), ErrorKind::domain,
          "--delta and --n must be given together");
  const EbPlan plan = choose_plan(args, params);
  const auto pair = [](const ChannelParams& p) { return Json{{"eta", p.eta}, {"nbar_b", p.nbar_b}}; };

  Json doc;
  doc["parameters"] = {{"eta", params.eta}, {"nbar_b", params.nbar_b}, {"mechanism_requested", args.mechanism}};
  doc["entanglement_breaking"] = is_entanglement_breaking(params);
  doc["plan"] = {{"mechanism", std::string(to_string(plan.mechanism))},
                 {"tau", plan.tau},
                 {"gain_eb", plan.gain_eb},
                 {"gain_as_stated", plan.gain_as_stated},
                 {"nbar_prime", plan.nbar_prime},
                 {"nbar_double_prime", plan.nbar_double_prime}};
  doc["effective_covert_params"] = pair(plan.effective_covert_params);
  doc["effective_rate_params"] = pair(plan.effective_rate_params);
  doc["effective_entanglement_breaking"] = is_entanglement_breaking(plan.effective_covert_params);
  doc["c_cov"] = number(c_cov(plan.effective_covert_params));
  doc["rate_R"] = number(hashing_rate(plan.effective_rate_params));

  std::vector<double> ns;
  if (args.n_range) ns = expand(parse_n_range(*args.n_range));
  Json rows = Json::array();
  std::string table;
  if (!ns.empty()) table = "n_rounds,lower_qubits,eb_lower_qubits\n";
  for (double n : ns) {
    const double lower = lower_bound_qubits(params, *args.delta, n);
    const double eb = eb_lower_bound_qubits(plan, *args.delta, n);
    rows.push_back({{"n_rounds", n}, {"lower_qubits", number(lower)}, {"eb_lower_qubits", number(eb)}});
    table += format_number(n) + "," + format_number(lower) + "," + format_number(eb) + "\n";
  }
  if (args.delta) doc["delta"] = *args.delta;
  if (!ns.empty()) doc["rows"] = std::move(rows);

  std::string text;
  if (parse_format(args.format) == OutputFormat::json) {
    text = doc.dump() + "\n";
  } else {
    const auto flat = doc.flatten();
    for (const auto& [key, value] : flat.items()) {
      if (key.rfind("/rows", 0) == 0) continue;
      std::string v;
      if (value.is_string()) v = value.get<std::string>();
      else if (value.is_boolean()) v = value.get<bool>() ? "true" : "false";
      else if (value.is_null()) v = "inf";
      else v = format_number(value.get<double>());
      text += csv_header_line(key.substr(1), v);
    }
    text += table;
  }
  emit(text, args.out, out);
  return kSuccess;
}

}  // namespace

// --- public helpers ------------------------------------------------------------------------

NRange parse_n_range(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  require(second != std::string_view::npos && spec.find(':', second + 1) == std::string_view::npos,
          ErrorKind::domain, "n range must be start:stop:points");
  NRange range;
  range.start = parse_number(spec.substr(0, first));
  range.stop = parse_number(spec.substr(first + 1, second - first - 1));
  const double points = parse_number(spec.substr(second + 1));
  require(points >= 1.0 && points <= 1e6 && points == std::floor(points), ErrorKind::domain,
          "n range points must be an integer in [1, 1e6]");
  range.points = static_cast<int>(points);
  require(std::isfinite(range.start) && range.start >= 1.0 && std::isfinite(range.stop),
          ErrorKind::domain, "n range start must be >= 1 and finite");
  require(range.points == 1 ? range.stop >= range.start : range.stop > range.start,
          ErrorKind::domain, "n range must be strictly increasing");
  return range;
}

std::string to_string(const NRange& range) {
  return format_number(range.start) + ":" + format_number(range.stop) + ":" +
         std::to_string(range.points);
}

std::vector<double> expand(const NRange& range) {
  std::vector<double> out;
  out.reserve(range.points);
  out.push_back(range.start);
  if (range.points == 1) return out;
  const double log_start = std::log10(range.start);
  const double step = (std::log10(range.stop) - log_start) / (range.points - 1);
  for (int i = 1; i < range.points - 1; ++i) out.push_back(std::pow(10.0, log_start + i * step));
  out.push_back(range.stop);
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(), ErrorKind::domain,
          "not a number: '" + std::string(text) + "'");
  return value;
}

std::vector<std::string> bounds_columns(bool with_seconds) {
  std::vector<std::string> cols{"n_rounds"};
  if (with_seconds) cols.push_back("seconds_s");
  for (const char* c : {"lower_qubits", "upper_qubits", "assisted_lower_qubits",
                        "rate_R_qubits_per_round", "capacity_C_qubits_per_mode", "q",
                        "nbar_s_photons_per_mode"})
    cols.push_back(c);
  return cols;
}

namespace {

std::vector<double> row_values(const BoundsPoint& p) {
  std::vector<double> v{p.n};
  if (p.seconds) v.push_back(*p.seconds);
  for (double x : {p.lower_qubits, p.upper_qubits, p.assisted_lower_qubits, p.rate_R,
                   p.capacity_C, p.q, p.nbar_s})
    v.push_back(x);
  return v;
}

void check_ordering(std::span<const BoundsPoint> rows) {
  for (const auto& p : rows)
    require(p.upper_qubits >= p.lower_qubits, ErrorKind::condition_unmet,
            "upper bound below lower bound at n=" + format_number(p.n));
}

}  // namespace

std::string bounds_csv(const RunConfig& config, std::span<const BoundsPoint> rows) {
  check_ordering(rows);
  std::string text = "# covert-bosonic bounds\n";
  text += csv_header_line("eta", format_number(config.channel.eta));
  text += csv_header_line("nbar_b", format_number(config.channel.nbar_b));
  text += csv_header_line("delta", format_number(config.delta));
  text += csv_header_line("n", to_string(config.n_range));
  if (config.modes_per_second)
    text += csv_header_line("modes_per_sec", format_number(*config.modes_per_second));
  const auto cols = bounds_columns(config.modes_per_second.has_value());
  for (std::size_t i = 0; i < cols.size(); ++i) text += (i ? "," : "") + cols[i];
  text += "\n";
  for (const auto& p : rows) {
    const auto values = row_values(p);
    for (std::size_t i = 0; i < values.size(); ++i) text += (i ? "," : "") + format_number(values[i]);
    text += "\n";
  }
  return text;
}

std::string bounds_json(const RunConfig& config, std::span<const BoundsPoint> rows) {
  check_ordering(rows);
  Json params{{"eta", config.channel.eta},
              {"nbar_b", config.channel.nbar_b},
              {"delta", config.delta},
              {"n", to_string(config.n_range)}};
  if (config.modes_per_second) params["modes_per_sec"] = *config.modes_per_second;
  const auto cols = bounds_columns(config.modes_per_second.has_value());
  Json out_rows = Json::array();
  for (const auto& p : rows) {
    const auto values = row_values(p);
    Json row = Json::object();
    for (std::size_t i = 0; i < cols.size(); ++i) row[cols[i]] = number(values[i]);
    out_rows.push_back(std::move(row));
  }
  return Json{{"parameters", params}, {"columns", cols}, {"rows", out_rows}}.dump() + "\n";
}

std::string render_bounds(const RunConfig& config) {
  const auto ns = expand(config.n_range);
  const auto rows = bounds_curve(config.channel, config.delta, ns, config.modes_per_second);
  return config.output_format == OutputFormat::json ? bounds_json(config, rows)
                                                    : bounds_csv(config, rows);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covert quantum communication over lossy thermal bosonic channels"};
  app.name("covert-bosonic");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with one [subcommand] section; flags take precedence");
  const auto formats = CLI::IsMember({"csv", "json"});

  BoundsArgs b;
  auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds on covert qubits over a sweep of n");
  bounds->add_option("--eta", b.eta, "Channel transmittance")->required();
  bounds->add_option("--nbar-b", b.nbar_b, "Thermal noise photons per mode")->required();
  bounds->add_option("--delta", b.delta, "Covertness parameter")->required();
  bounds->add_option("--n", b.n_range, "Rounds as start:stop:points (geometric)")->required();
  bounds->add_option("--modes-per-sec", b.modes_per_second, "Mode rate; adds a seconds column");
  bounds->add_option("--cutoff", b.cutoff, "Fock cutoff (default $COVERT_BOSONIC_CUTOFF or 20)");
  bounds->add_option("--format", b.format, "Output format")->check(formats);
  bounds->add_option("--out", b.out, "Output file (default stdout)");

  VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "Run the oracle suite; JSON lines, one per report");
  verify->add_option("--check", v.checks, "Check to run (repeatable; default all)")
      ->check(CLI::IsMember(suite_check_names()));
  verify->add_option("--tolerance", v.tolerance, "Override every report's tolerance");
  verify->add_option("--eta", v.etas, "Replace the grid transmittances")->delimiter(',');
  verify->add_option("--nbar-b", v.nbars, "Replace the grid noise levels")->delimiter(',');
  verify->add_option("--cutoff", v.cutoff, "Oracle Fock cutoff");
  verify->add_option("--out", v.out, "Output file (default stdout)");

  WillieArgs w;
  auto* willie = app.add_subcommand("willie-state", "Dump Willie's two-mode state");
  willie->add_option("--eta", w.eta, "Channel transmittance")->required();
  willie->add_option("--nbar-b", w.nbar_b, "Thermal noise photons per mode")->required();
  willie->add_option("--qubit", w.qubit,
                     "zero|one|plus|minus|plus_i|minus_i|mixed or alpha_sq,gamma_re,gamma_im");
  willie->add_option("--source", w.source, "closed or numeric")->check(CLI::IsMember({"closed", "numeric"}));
  willie->add_option("--layout", w.layout, "sparse or dense")->check(CLI::IsMember({"sparse", "dense"}));
  willie->add_option("--cutoff", w.cutoff, "Fock cutoff (default $COVERT_BOSONIC_CUTOFF or 20)");
  willie->add_option("--format", w.format, "Output format")->check(formats);
  willie->add_option("--out", w.out, "Output file (default stdout)");

  EbArgs e;
  auto* eb = app.add_subcommand("eb-report", "Entanglement-breaking check and engineering plan");
  eb->add_option("--eta", e.eta, "Channel transmittance")->required();
  eb->add_option("--nbar-b", e.nbar_b, "Thermal noise photons per mode")->required();
  eb->add_option("--mechanism", e.mechanism, "auto, lemma1 (added loss) or lemma2 (amplifier)")
      ->check(CLI::IsMember({"auto", "lemma1", "lemma2"}));
  eb->add_option("--margin", e.margin, "Added-loss margin in (0, 1)");
  eb->add_option("--nbar-prime", e.nbar_prime, "Added thermal photons for the amplifier plan");
  eb->add_option("--delta", e.delta, "Covertness parameter for recomputed bounds");
  eb->add_option("--n", e.n_range, "Rounds as start:stop:points for recomputed bounds");
  eb->add_option("--format", e.format, "Output format")->check(formats);
  eb->add_option("--out", e.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    write_error(err, "usage", ex.what());
    return kUsageError;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(b, out);
    if (verify->parsed()) return cmd_verify(v, out);
    if (willie->parsed()) return cmd_willie_state(w, out);
    return cmd_eb_report(e, out);
  } catch (const Error& ex) {
    write_error(err, to_string(ex.kind()), ex.what());
  } catch (const std::exception& ex) {
    write_error(err, "io", ex.what());
  }
  return kValidationError;
}

}  // namespace covq::cli
