#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "doseeffect/dose_effect.hpp"
#include "doseeffect/error.hpp"
#include "doseeffect/fitting.hpp"
#include "doseeffect/model_document.hpp"
#include "doseeffect/trial_io.hpp"

namespace doseeffect::cli {
namespace {

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return format_number(v, 17); }

std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot open input file " + path);
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

void deliver(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot open output file " + path);
  file << text;
  if (!file) throw IoFailure("failed writing output file " + path);
}

bool starts_with_header(const std::string& text, std::string_view header) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return false;
  return std::string_view(text).substr(first).starts_with(header);
}

ModelDocument load_model(const std::string& path, std::istream& in) {
  std::istringstream stream(slurp(path, in));
  return read_model_document(stream);
}

std::vector<SummaryRow> load_rows(const std::string& text) {
  std::istringstream stream(text);
  if (starts_with_header(text, "dose,mean")) return parse_summary_csv(stream);
  const auto cohorts = parse_csv(stream);
  return summarize(cohorts);
}

struct Common {
  std::string input = "-";
  std::string output = "-";
};

void add_io(CLI::App* cmd, Common& io) {
  cmd->add_option("--input", io.input, "Input file ('-' for stdin)");
  cmd->add_option("--output", io.output, "Output file ('-' for stdout)");
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::both_known: return "both_known";
    case Regime::l1_known: return "l1_known";
    case Regime::none_known: return "none_known";
  }
  return "?";
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Skew-normal dose-effect modelling: fit, simulate, and report optimal doses"};
  app.name("doseeffect");
  app.require_subcommand(1);

  // summarize
  Common sum_io;
  auto* summarize_cmd = app.add_subcommand("summarize", "Per-dose mean, sd and skewness of raw observations");
  add_io(summarize_cmd, sum_io);

  // fit
  Common fit_io;
  std::string regime = "none";
  std::optional<double> l1;
  std::optional<double> l2;
  std::string offset = "grid";
  std::string regression = "standard";
  double constant_tol = 0.05;
  auto* fit_cmd = app.add_subcommand("fit", "Fit mean, dispersion and skewness curves");
  add_io(fit_cmd, fit_io);
  fit_cmd->add_option("--regime", regime, "Asymptote knowledge for the mean curve")
      ->check(CLI::IsMember({"both", "l1", "none"}));
  fit_cmd->add_option("--l1", l1, "Known lower asymptote");
  fit_cmd->add_option("--l2", l2, "Known upper asymptote");
  fit_cmd->add_option("--offset", offset, "Skewness-curve offset: zero or grid search")
      ->check(CLI::IsMember({"zero", "grid"}));
  fit_cmd->add_option("--regression", regression, "Line regression formula")
      ->check(CLI::IsMember({"standard", "published"}));
  fit_cmd->add_option("--constant-tol", constant_tol,
                      "Relative spread under which the dispersion head counts as constant");

  // simulate
  Common sim_io;
  double dose = 0.0;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Draw effects at one dose from a fitted model");
  add_io(simulate_cmd, sim_io);
  simulate_cmd->add_option("--dose", dose, "Dose")->required()->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--n", count, "Number of draws")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", seed, "Random seed");

  // optimal
  Common opt_io;
  std::vector<double> interval;
  std::vector<double> weights;
  std::vector<double> thresholds;
  auto* optimal_cmd = app.add_subcommand("optimal", "Choose a dose on an interval");
  add_io(optimal_cmd, opt_io);
  optimal_cmd->add_option("--interval", interval, "LO HI")->expected(2)->required();
  auto* weights_opt =
      optimal_cmd->add_option("--weights", weights, "WM WS WG (scalarized criterion)")->expected(3);
  auto* thresholds_opt = optimal_cmd
                             ->add_option("--thresholds", thresholds,
                                          "MMIN SMAX GMIN (smallest admissible dose)")
                             ->expected(3);
  weights_opt->excludes(thresholds_opt);

  // plot
  Common plot_io;
  std::string curve = "mean";
  std::vector<double> plot_interval{0.0, 4.0};
  std::size_t steps = 101;
  std::string format = "csv";
  auto* plot_cmd = app.add_subcommand("plot", "Tabulate or draw a fitted curve");
  add_io(plot_cmd, plot_io);
  plot_cmd->add_option("--curve", curve, "Curve to plot")
      ->check(CLI::IsMember({"mean", "sd", "skew"}));
  plot_cmd->add_option("--interval", plot_interval, "LO HI")->expected(2);
  plot_cmd->add_option("--steps", steps, "Number of grid points")->check(CLI::PositiveNumber);
  plot_cmd->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

  // check
  Common check_io;
  double horizon = 20.0;
  double eps = 1e-3;
  auto* check_cmd = app.add_subcommand("check", "Verify the dispersion assumptions of a model");
  add_io(check_cmd, check_io);
  check_cmd->add_option("--horizon", horizon, "Largest dose examined");
  check_cmd->add_option("--eps", eps, "Bound on sigma at the horizon")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::ostringstream result;

    if (*summarize_cmd) {
      const auto text = slurp(sum_io.input, in);
      std::istringstream stream(text);
      const auto rows = summarize(parse_csv(stream));
      emit_summary(rows, result);
      deliver(sum_io.output, result.str(), out);

    } else if (*fit_cmd) {
      ModelFitOptions options;
      if (regime == "both") {
        if (!l1 || !l2) {
          err << "ERROR usage: --regime both requires --l1 and --l2\n";
          return kExitUsage;
        }
        options.mean_knowledge = BothKnown{*l1, *l2};
      } else if (regime == "l1") {
        if (!l1) {
          err << "ERROR usage: --regime l1 requires --l1\n";
          return kExitUsage;
        }
        options.mean_knowledge = L1Known{*l1};
      }
      if (offset == "zero") options.skew_offset = FixedOffset{0.0};
      options.formula =
          regression == "published" ? RegressionFormula::published : RegressionFormula::standard;
      options.constant_tol = constant_tol;

      const auto rows = load_rows(slurp(fit_io.input, in));
      const ModelFit fit = fit_model(rows, options);
      const auto& rep = fit.mean_report;
      result << "# mean curve: regime=" << regime_name(rep.regime)
             << " theta_n=" << num(rep.approx.theta_n) << " gamma_n=" << num(rep.approx.gamma_n)
             << " delta_n=" << num(rep.approx.delta_n) << " sse=" << num(rep.sse) << '\n';
      if (rep.l1_equation_residual) {
        result << "# asymptote equation residual=" << num(*rep.l1_equation_residual) << '\n';
      }
      result << "# sigma family=" << to_string(fit.sigma_shape.family) << '\n';
      write_model_document({fit.model, rows}, result);
      deliver(fit_io.output, result.str(), out);

    } else if (*simulate_cmd) {
      const auto doc = load_model(sim_io.input, in);
      const auto values = simulate(doc.model, dose, count, seed);
      result << "dose,value\n";
      const std::string d = num(dose);
      for (double v : values) result << d << ',' << num(v) << '\n';
      deliver(sim_io.output, result.str(), out);

    } else if (*optimal_cmd) {
      const auto doc = load_model(opt_io.input, in);
      DoseCriteria criteria = Scalarized{1.0, 0.0, 0.0};
      if (!thresholds.empty()) {
        criteria = Admissible{thresholds[0], thresholds[1], thresholds[2]};
      } else if (!weights.empty()) {
        criteria = Scalarized{weights[0], weights[1], weights[2]};
      }
      const auto rep = optimal_dose(doc.model, interval[0], interval[1], criteria, doc.empirical);
      const DoseReport at = params_at(doc.model, rep.dose);
      if (const auto* w = std::get_if<Scalarized>(&criteria)) {
        result << "criterion=scalarized\nweights=" << num(w->w_mean) << ',' << num(w->w_sd)
               << ',' << num(w->w_skew) << '\n';
      } else {
        const auto& t = std::get<Admissible>(criteria);
        result << "criterion=admissible\nthresholds=" << num(t.mean_min) << ','
               << num(t.sd_max) << ',' << num(t.skew_min) << '\n';
      }
      result << "interval=" << num(interval[0]) << ',' << num(interval[1]) << '\n'
             << "grid_points=" << rep.grid_points << '\n'
             << "dose=" << num(rep.dose) << '\n'
             << "model.mean=" << num(rep.at_dose.mu) << '\n'
             << "model.sd=" << num(rep.at_dose.sigma) << '\n'
             << "model.skewness=" << num(rep.at_dose.gamma) << '\n'
             << "model.sd_min=" << num(rep.model_sd_min) << '\n'
             << "model.sd_max=" << num(rep.model_sd_max) << '\n'
             << "skew_normal.xi=" << num(at.skew_params.xi) << '\n'
             << "skew_normal.omega=" << num(at.skew_params.omega) << '\n'
             << "skew_normal.alpha=" << num(at.skew_params.alpha) << '\n'
             << "skew_normal.clamped=" << (at.clamped ? "true" : "false") << '\n';
      if (rep.empirical_sd_min) {
        result << "empirical.sd_min=" << num(*rep.empirical_sd_min) << '\n'
               << "empirical.sd_max=" << num(*rep.empirical_sd_max) << '\n';
      }
      if (rep.empirical_at_dose) {
        result << "empirical.mean=" << num(rep.empirical_at_dose->mean_hat) << '\n'
               << "empirical.sd=" << num(rep.empirical_at_dose->sd_hat) << '\n'
               << "empirical.skewness=" << num(rep.empirical_at_dose->skew_hat) << '\n';
      }
      deliver(opt_io.output, result.str(), out);

    } else if (*plot_cmd) {
      const auto doc = load_model(plot_io.input, in);
      const DoseEffectModel model = doc.model;
      Curve fn;
      std::string title;
      if (curve == "mean") {
        fn = [model](double d) { return eval(model.mu_curve, d); };
        title = "Mean effect";
      } else if (curve == "sd") {
        fn = [model](double d) { return eval(model.sigma_curve, d); };
        title = "Standard deviation";
      } else {
        fn = [model](double d) { return eval(model.gamma_curve, d); };
        title = "Skewness";
      }
      if (!(plot_interval[1] > plot_interval[0])) {
        err << "ERROR usage: --interval needs LO < HI\n";
        return kExitUsage;
      }
      if (format == "svg") {
        emit_curve_svg(fn, plot_interval[0], plot_interval[1], steps, title, result);
      } else {
        emit_curve_points(fn, plot_interval[0], plot_interval[1], steps, result);
      }
      deliver(plot_io.output, result.str(), out);

    } else if (*check_cmd) {
      const auto doc = load_model(check_io.input, in);
      const auto rep = check_assumptions(doc.model, horizon, eps);
      auto flag = [](bool b) { return b ? "true" : "false"; };
      result << "horizon=" << num(horizon) << '\n'
             << "eps=" << num(eps) << '\n'
             << "d0_hat=" << num(doc.model.d0_hat) << '\n'
             << "decreasing.passed=" << flag(rep.decreasing.passed) << '\n';
      if (rep.decreasing.first_violation) {
        result << "decreasing.first_violation=" << num(*rep.decreasing.first_violation) << '\n';
      }
      if (rep.decreasing.tail_start) {
        result << "decreasing.tail_start=" << num(*rep.decreasing.tail_start) << '\n';
      }
      result << "vanishing.passed=" << flag(rep.vanishing.passed) << '\n'
             << "vanishing.sigma_at_horizon=" << num(rep.vanishing.sigma_at_horizon) << '\n'
             << "vanishing.limit=" << num(rep.vanishing.limit) << '\n'
             << "passed=" << flag(rep.passed()) << '\n';
      deliver(check_io.output, result.str(), out);
    }
  } catch (const Error& e) {
    err << "ERROR " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitDomainError;
  } catch (const IoFailure& e) {
    err << "ERROR IOError: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace doseeffect::cli
