#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "circval/measures.hpp"
#include "circval/recovery.hpp"
#include "circval/serialization.hpp"
#include "circval/valuation.hpp"
#include "circval/verify.hpp"

using json = nlohmann::json;
using namespace circval;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string kernel_path;
  std::string fn_path;
  std::string valuation_name;
  std::string lambda_grid;
  std::string sigma_grid;
  std::string m_schedule;
  std::string slope_unit;
  std::string out_path;
  double tol = 1e-10;
  uint64_t seed = 20260809;
  bool trace = false;
  int intervals = 16;
  int lambda_samples = 33;
};

json config_json(const CLI::App& app) {
  json config;
  for (const CLI::Option* option : app.get_options()) {
    const std::string name = option->get_name();
    if (name.empty() || name == "--help") continue;
    if (option->count())
      config[name] = option->as<std::string>();
    else if (!option->get_default_str().empty())
      config[name] = option->get_default_str();
  }
  return config;
}

json report_shell(const std::string& command, const CLI::App& cmd, uint64_t seed) {
  json report;
  report["version"] = kLibraryVersion;
  report["command"] = command;
  report["seed"] = seed;
  report["config"] = config_json(cmd);
  return report;
}

void emit(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_atomic(out_path, text);
  }
}

std::vector<Rat> parse_grid(const std::string& text) {
  // "a:b:n": inclusive linspace with rational endpoints
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw std::invalid_argument("grid must be a:b:n");
  const Rat a = parse_rat(text.substr(0, first));
  const Rat b = parse_rat(text.substr(first + 1, second - first - 1));
  const long n = std::stol(text.substr(second + 1));
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<Rat> grid;
  if (n == 1) {
    grid.push_back(a);
  } else {
    for (long k = 0; k < n; ++k) grid.push_back(a + (b - a) * k / (n - 1));
  }
  return grid;
}

std::vector<int> parse_schedule(const std::string& text) {
  std::vector<int> schedule;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    schedule.push_back(std::stoi(item));
  }
  if (schedule.empty()) throw std::invalid_argument("empty m-schedule");
  return schedule;
}

void check_slope_unit(const KernelSpec& spec, const std::string& flag) {
  if (flag.empty()) return;
  if (flag != "per_turn" && flag != "per_radian")
    throw std::invalid_argument("slope unit must be per_turn or per_radian");
  const SlopeUnit expected =
      flag == "per_turn" ? SlopeUnit::PerTurn : SlopeUnit::PerRadian;
  if (spec.slope_unit != expected)
    throw std::invalid_argument(
        "kernel slope unit does not match --slope-unit; refusing to convert");
}

ValuationHandle builtin_valuation(const std::string& name, double tol) {
  if (name == "zero")
    return make_external_valuation([](const PLFunction&) { return 0.0; }, true,
                                   true);
  if (name == "step1")
    return make_opaque_kernel_valuation(make_step_kernel(1.0), tol);
  if (name == "anisotropic") {
    // A linear functional weighted along the circle: a valuation, but not
    // rotation invariant, so kernel recovery refuses it.
    auto eval = [](const PLFunction& f) {
      double total = 0;
      for (const auto& seg : f.segments()) {
        const double s0 = to_double(seg.s_begin);
        const double s1 = to_double(seg.s_end);
        const double v0 = to_double(seg.v_begin);
        const double v1 = to_double(seg.v_end);
        const int slices = 256;
        double acc = 0;
        for (int i = 0; i < slices; ++i) {
          const double t = (i + 0.5) / slices;
          acc += (v0 + (v1 - v0) * t) *
                 std::cos(2 * std::numbers::pi * (s0 + (s1 - s0) * t));
        }
        total += acc * (s1 - s0) / slices;
      }
      return total;
    };
    return make_external_valuation(eval, false, false);
  }
  throw std::invalid_argument("unknown builtin valuation: " + name);
}

ValuationHandle resolve_valuation(const CommonOptions& options) {
  if (!options.kernel_path.empty() && !options.valuation_name.empty())
    throw std::invalid_argument("give either --kernel or --valuation, not both");
  if (!options.kernel_path.empty()) {
    const KernelSpec spec = load_kernel_file(options.kernel_path);
    check_slope_unit(spec, options.slope_unit);
    return make_opaque_kernel_valuation(spec, options.tol);
  }
  if (!options.valuation_name.empty())
    return builtin_valuation(options.valuation_name, options.tol);
  throw std::invalid_argument("a --kernel file or --valuation name is required");
}

int cmd_eval(const CLI::App& cmd, const CommonOptions& options) {
  const KernelSpec spec = load_kernel_file(options.kernel_path);
  check_slope_unit(spec, options.slope_unit);
  const PLFunction f = load_plfunction_file(options.fn_path);
  const KernelValuationResult result =
      eval_kernel_valuation_ex(spec, f, options.tol);

  std::cout << format_double(result.value) << "\n";
  json report = report_shell("eval", cmd, options.seed);
  report["value"] = result.value;
  report["quadrature_error_estimate"] = result.error_estimate;
  emit(report, options.out_path);
  return kExitOk;
}

int cmd_decompose(const CLI::App& cmd, const CommonOptions& options) {
  const KernelSpec spec = load_kernel_file(options.kernel_path);
  check_slope_unit(spec, options.slope_unit);
  json report = report_shell("decompose", cmd, options.seed);
  report["flat_kernel"] = kernel_to_json(spec.flat_part());
  report["slope_kernel"] = kernel_to_json(spec.slope_part());

  const ValuationHandle v = make_kernel_valuation(spec, options.tol);
  json eta = json::array();
  const int samples = 32;
  for (int k = 0; k <= samples; ++k) {
    const Rat lambda = rat(-2) + rat(4) * k / samples;
    eta.push_back({{"lambda", to_double(lambda)},
                   {"eta", v(PLFunction::constant(lambda))}});
  }
  report["eta_samples"] = eta;
  emit(report, options.out_path);
  return kExitOk;
}

int cmd_recover(const CLI::App& cmd, const CommonOptions& options) {
  const ValuationHandle v = resolve_valuation(options);
  if (!v.rotation_invariant)
    throw std::invalid_argument(
        "recovery refused: the valuation is not flagged rotation invariant");

  RecoverySettings settings;
  settings.tol = options.tol;
  if (!options.m_schedule.empty())
    settings.m_schedule = parse_schedule(options.m_schedule);

  const std::vector<Rat> lambdas = parse_grid(options.lambda_grid);
  const std::vector<Rat> sigmas = parse_grid(options.sigma_grid);

  // Non-vanishing handles are decomposed; the flat part is added back so the
  // rows tabulate the full kernel.
  const ValuationHandle slope =
      v.vanishes_on_constants ? v : slope_component(v);

  std::ostringstream csv;
  csv << "lambda,sigma,m_last,value,cauchy_residual,oscillation\n";
  for (const Rat& lambda : lambdas) {
    const double flat =
        v.vanishes_on_constants ? 0.0 : v(PLFunction::constant(lambda));
    for (const Rat& sigma : sigmas) {
      const RecoveryPoint point =
          recover_kernel_point(slope, lambda, sigma, settings);
      csv << format_double(to_double(lambda)) << ","
          << format_double(to_double(sigma)) << "," << point.schedule.back()
          << "," << format_double(point.extracted + flat) << ","
          << format_double(point.cauchy_residual) << ","
          << (point.oscillation ? 1 : 0) << "\n";
    }
  }

  if (options.out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text_atomic(options.out_path, csv.str());
    json report = report_shell("recover", cmd, options.seed);
    report["rows"] = lambdas.size() * sigmas.size();
    report["out"] = options.out_path;
    std::cout << report.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_nu_table(const CLI::App& cmd, const CommonOptions& options) {
  const KernelSpec spec = load_kernel_file(options.kernel_path);
  check_slope_unit(spec, options.slope_unit);
  const ValuationHandle v = make_kernel_valuation(spec, options.tol);
  if (!v.vanishes_on_constants)
    throw std::invalid_argument(
        "nu requires a kernel that vanishes on constants; decompose first");
  const PLFunction g = load_plfunction_file(options.fn_path);
  const NuRecord record = make_nu_record(g);

  const int n = options.intervals;
  if (n < 1) throw std::invalid_argument("need at least one interval");
  std::ostringstream csv;
  csv << "a,b,nu_value,h1_length,ratio\n";
  for (int k = 0; k < n; ++k) {
    const Rat a = rat(k, n);
    const Rat b = rat(k + 1, n);
    const double value =
        nu(v, record, IntervalAlgebraElement::from_interval(a, b));
    const double length = to_double(b - a);
    csv << format_double(to_double(a)) << "," << format_double(to_double(b))
        << "," << format_double(value) << "," << format_double(length) << ","
        << format_double(value / length) << "\n";
  }
  if (options.out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text_atomic(options.out_path, csv.str());
    json report = report_shell("nu-table", cmd, options.seed);
    report["rows"] = n;
    report["out"] = options.out_path;
    std::cout << report.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_reconstruct(const CLI::App& cmd, const CommonOptions& options) {
  ValuationHandle v = resolve_valuation(options);
  if (!v.vanishes_on_constants) v = slope_component(v);
  const PLFunction g = load_plfunction_file(options.fn_path);

  RecoverySettings settings;
  settings.tol = options.tol;
  settings.m_schedule = {8, 16, 32};
  if (!options.m_schedule.empty())
    settings.m_schedule = parse_schedule(options.m_schedule);

  const ReconstructionResult result =
      reconstruct_via_kernel(v, g, settings, options.lambda_samples);

  json report = report_shell("reconstruct", cmd, options.seed);
  report["direct"] = result.direct;
  report["reconstructed"] = result.reconstructed;
  report["residual"] = result.residual;
  report["oscillation_warning"] = result.oscillation_warning;
  json segments = json::array();
  for (const SegmentKernelSamples& seg : result.segments) {
    json item;
    item["sigma"] = seg.sigma;
    item["length"] = seg.length;
    if (options.trace) {
      item["lambdas"] = seg.lambdas;
      item["kernel_values"] = seg.kernel_values;
    } else {
      item["samples"] = seg.lambdas.size();
    }
    segments.push_back(item);
  }
  report["segments"] = segments;
  emit(report, options.out_path);
  return kExitOk;
}

int cmd_verify(const CLI::App& cmd, const CommonOptions& options) {
  VerifyConfig config;
  config.seed = options.seed;
  config.quad_tol = options.tol;
  if (!options.kernel_path.empty()) {
    KernelSpec spec = load_kernel_file(options.kernel_path);
    check_slope_unit(spec, options.slope_unit);
    config.invisibility_kernel = spec;
  }

  const std::vector<CheckResult> results = run_verification(config);

  json report = report_shell("verify", cmd, options.seed);
  json checks = json::array();
  for (const CheckResult& result : results) {
    checks.push_back({{"name", result.name},
                      {"pass", result.pass},
                      {"observed", result.observed},
                      {"threshold", result.threshold},
                      {"detail", result.detail},
                      {"seconds", result.seconds}});
  }
  report["checks"] = checks;
  const bool ok = all_passed(results);
  report["all_pass"] = ok;

  if (options.trace) {
    const ValuationHandle v = make_kernel_valuation(
        make_polynomial_kernel({{0, 1, 1.0}}), options.tol);
    const ControlEstimate estimate = control_measure_estimate(
        v, Rat(0), rat(2), ArcSet::from_arcs({Arc(Rat(0), rat(1, 2))}),
        ControlSettings{}, true);
    json trace = json::array();
    for (const ControlCandidate& c : estimate.trace)
      trace.push_back({{"slope", c.slope},
                       {"teeth", c.teeth},
                       {"amplitude", c.amplitude},
                       {"sign", c.sign},
                       {"value", c.value}});
    report["control_estimate"] = {{"lambda", 0.0},
                                  {"gamma_cap", 2.0},
                                  {"mu_plus", estimate.mu_plus},
                                  {"mu_minus", estimate.mu_minus},
                                  {"theta", estimate.theta},
                                  {"trace", trace}};
  }

  for (const CheckResult& result : results) {
    std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << result.name << ": "
              << result.detail << " (observed "
              << format_double(result.observed) << ", threshold "
              << format_double(result.threshold) << ")\n";
  }
  emit(report, options.out_path);
  return ok ? kExitOk : kExitFailure;
}

int cmd_approx(const CLI::App& cmd, const CommonOptions& options) {
  std::ifstream in(options.fn_path);
  if (!in)
    throw std::invalid_argument("cannot open samples file: " + options.fn_path);
  std::vector<Rat> samples;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    samples.push_back(parse_rat(line.substr(start, end - start + 1)));
  }
  const PLFunction f = interpolate_samples(samples);
  const std::string text = serialize_plfunction(f) + "\n";
  if (options.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_atomic(options.out_path, text);
    json report = report_shell("approx", cmd, options.seed);
    report["samples"] = samples.size();
    report["nodes"] = f.nodes().size();
    report["out"] = options.out_path;
    std::cout << report.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-linear circle valuations: evaluate, decompose, "
               "recover kernels, tabulate representing measures, verify"};
  app.require_subcommand(1);

  CommonOptions options;

  auto add_common = [&](CLI::App* cmd, bool wants_fn, bool wants_kernel) {
    if (wants_kernel)
      cmd->add_option("--kernel", options.kernel_path, "kernel spec JSON");
    if (wants_fn) cmd->add_option("--fn", options.fn_path, "PL function JSON");
    cmd->add_option("--tol", options.tol, "quadrature tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", options.seed, "seed recorded in reports");
    cmd->add_option("--out", options.out_path, "output path (atomic write)");
    cmd->add_option("--slope-unit", options.slope_unit,
                    "assert the kernel's slope unit (per_turn|per_radian)");
    cmd->add_flag("--trace", options.trace, "include full traces in reports");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate a kernel valuation");
  add_common(eval, true, true);

  CLI::App* decompose =
      app.add_subcommand("decompose", "flat/slope kernel decomposition");
  add_common(decompose, false, true);

  CLI::App* recover =
      app.add_subcommand("recover", "recover the pseudo kernel on a grid");
  add_common(recover, false, true);
  recover->add_option("--valuation", options.valuation_name,
                      "builtin valuation (zero|step1|anisotropic)");
  recover->add_option("--lambda-grid", options.lambda_grid, "a:b:n")->required();
  recover->add_option("--sigma-grid", options.sigma_grid, "a:b:n")->required();
  recover->add_option("--m-schedule", options.m_schedule, "e.g. 2,4,...,256");

  CLI::App* nu_table =
      app.add_subcommand("nu-table", "tabulate nu_g over uniform intervals");
  add_common(nu_table, true, true);
  nu_table->add_option("--intervals", options.intervals, "row count");

  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "kernel-reconstruction round trip for one function");
  add_common(reconstruct, true, true);
  reconstruct->add_option("--valuation", options.valuation_name,
                          "builtin valuation (zero|step1|anisotropic)");
  reconstruct->add_option("--m-schedule", options.m_schedule,
                          "recovery schedule");
  reconstruct->add_option("--lambda-samples", options.lambda_samples,
                          "kernel samples per segment");

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify, false, true);

  CLI::App* approx = app.add_subcommand(
      "approx", "PL interpolant of uniform samples from a CSV file (--fn)");
  add_common(approx, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (eval->parsed()) return cmd_eval(*eval, options);
    if (decompose->parsed()) return cmd_decompose(*decompose, options);
    if (recover->parsed()) return cmd_recover(*recover, options);
    if (nu_table->parsed()) return cmd_nu_table(*nu_table, options);
    if (reconstruct->parsed()) return cmd_reconstruct(*reconstruct, options);
    if (verify->parsed()) return cmd_verify(*verify, options);
    if (approx->parsed()) return cmd_approx(*approx, options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
