#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cli/gallant_fixture.hpp"
#include "cli/io.hpp"
#include "perturb/errors.hpp"
#include "perturb/fa.hpp"
#include "perturb/laurent.hpp"
#include "perturb/linmodel.hpp"
#include "perturb/pca.hpp"

namespace perturb::cli {

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  Format format;
  InvertOptions invert;
};

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

Json laurent_json(const Laurent& series, int order) {
  Json coefficients = Json::array();
  for (int p = series.lowest_power(); p <= order; ++p) {
    coefficients.push_back(Json{{"power", p}, {"matrix", to_json(series.coefficient(p))}});
  }
  return coefficients;
}

void print_laurent(std::ostream& out, const Laurent& series, int order, const std::string& name) {
  for (int p = series.lowest_power(); p <= order; ++p) {
    out << name << "_" << p << " =\n";
    print_matrix(out, series.coefficient(p));
  }
}

// ---------------------------------------------------------------- invert

struct InvertArgs {
  std::string series;
  int order = 2;
  std::optional<int> max_t;
};

void cmd_invert(const Context& ctx, const InvertArgs& args) {
  const AnalyticMatrixSeries series = read_series_file(args.series);
  InvertOptions options = ctx.invert;
  if (args.max_t) options.max_t = *args.max_t;
  const Laurent inv = invert_series(series, args.order, options);
  if (ctx.format == Format::Json) {
    emit_json(ctx.out, Json{{"n", series.rows()},
                            {"pole_order", inv.pole_order()},
                            {"order", args.order},
                            {"coefficients", laurent_json(inv, args.order)}});
    return;
  }
  ctx.out << "pole order s = " << inv.pole_order() << "\n";
  print_laurent(ctx.out, inv, args.order, "Y");
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string design;
  std::string y;
  std::optional<std::string> beta0;
  int order = 2;
  std::optional<double> eps;
  bool estimate_eps = false;
  double alpha = 0.05;
  bool exact = false;
  int eval_order = 1;
  bool singular = false;
};

PerturbedDesign load_design(const std::string& path) {
  return PerturbedDesign(read_series_file(path).coefficients());
}

void cmd_fit_singular(const Context& ctx, const PerturbedDesign& design, const Vector& y,
                      const std::optional<Vector>& beta0) {
  const SingularFit s = fit_singular(design, y, beta0, ctx.invert);
  if (ctx.format == Format::Json) {
    Json j{{"pole_order", s.pole_order},
           {"rank", s.rank},
           {"nu", s.nu},
           {"b0_ginv", to_json(s.b0_ginv)},
           {"beta_tilde", to_json(s.beta_tilde)},
           {"sse_d0_star", s.sse_d0_star},
           {"sse_limit", s.sse_limit},
           {"maclaurin_representation", s.maclaurin_representation},
           {"f_tilde", s.f_tilde ? Json(*s.f_tilde) : Json()},
           {"f0_rank_based", s.f0_rank_based ? Json(*s.f0_rank_based) : Json()},
           {"f_scale", s.f_scale}};
    emit_json(ctx.out, j);
    return;
  }
  auto& out = ctx.out;
  out << "singular perturbation, pole order " << s.pole_order << "\n";
  out << "rank(X0) = " << s.rank << ", nu = n - rank = " << s.nu << "\n";
  out << "B0^+ =\n";
  print_matrix(out, s.b0_ginv);
  out << "beta~ = B0^+ X0 y = " << fmt_vector(s.beta_tilde) << "\n";
  out << "y^T D0* y = " << fmt(s.sse_d0_star) << "\n";
  out << "SSE(eps) -> " << fmt(s.sse_limit) << " as eps -> 0\n";
  out << "B^-1(eps) X(eps) regular at 0: " << (s.maclaurin_representation ? "yes" : "no") << "\n";
  if (s.f_tilde) out << "F~ = " << fmt(*s.f_tilde) << "\n";
  if (s.f0_rank_based) out << "F0 (rank based) = " << fmt(*s.f0_rank_based) << "\n";
  out << "F~ / F0 scale r(n-m)/(m(n-r)) = " << fmt(s.f_scale) << "\n";
}

void cmd_fit(const Context& ctx, const FitArgs& args) {
  const PerturbedDesign design = load_design(args.design);
  const Vector y = read_vector_csv(args.y);
  std::optional<Vector> beta0;
  if (args.beta0) beta0 = parse_number_list(*args.beta0, "--beta0");
  if (args.singular) {
    cmd_fit_singular(ctx, design, y, beta0);
    return;
  }

  FitOptions options;
  options.order = args.order;
  options.eps = args.eps;
  options.estimate_eps = args.estimate_eps;
  options.eval_order = args.exact ? std::nullopt : std::optional<int>(args.eval_order);
  options.beta0 = beta0;
  options.alpha = args.alpha;
  options.invert = ctx.invert;
  FitResult r;
  try {
    r = fit(design, y, options);
  } catch (const SingularPerturbation&) {
    throw SingularPerturbation("fit: X_0 X_0^T is singular (singular perturbation); rerun with --singular");
  }

  const std::string evaluation = args.exact ? "exact" : "order " + std::to_string(args.eval_order);
  if (ctx.format == Format::Json) {
    Json beta_series = Json::array();
    for (const Vector& b : r.beta_series) beta_series.push_back(to_json(b));
    Json eps_hat;
    if (r.epsilon_hat) {
      eps_hat = Json{{"value", r.epsilon_hat->value},
                     {"stationary_point", r.epsilon_hat->stationary_point},
                     {"sse_linear", r.epsilon_hat->linear_coefficient},
                     {"sse_quadratic", r.epsilon_hat->quadratic_coefficient}};
    }
    Json j{{"m", design.m()},
           {"n", design.n()},
           {"pole_order", r.pole_order},
           {"beta_series", beta_series},
           {"sse_series", to_json(r.sse_series)},
           {"epsilon_hat", eps_hat},
           {"eps", r.eps},
           {"evaluation", evaluation},
           {"beta", to_json(r.beta_at_eps)},
           {"sse", r.sse_at_eps},
           {"sigma2_hat", r.sigma2_hat},
           {"standard_errors", to_json(r.stderr_at_eps)},
           {"alpha", args.alpha},
           {"f_threshold", r.f_threshold}};
    if (beta0) {
      j["beta0"] = to_json(*beta0);
      j["f_series"] = to_json(r.f_series);
      j["f"] = *r.f_at_eps;
      j["beta0_in_confidence_set"] = *r.beta0_in_confidence_set;
    }
    emit_json(ctx.out, j);
    return;
  }

  auto& out = ctx.out;
  out << "design: m = " << design.m() << ", n = " << design.n() << ", " << design.components().size()
      << " components\n";
  out << "beta series:\n";
  for (std::size_t k = 0; k < r.beta_series.size(); ++k) {
    out << "  beta_" << k << " = " << fmt_vector(r.beta_series[k]) << "\n";
  }
  out << "SSE series: " << fmt_list(r.sse_series) << "\n";
  if (r.epsilon_hat) {
    out << "eps-hat = " << fmt(r.epsilon_hat->value) << "  (stationary point of the quadratic SSE: "
        << fmt(r.epsilon_hat->stationary_point) << ")\n";
  }
  out << "at eps = " << fmt(r.eps) << " (" << evaluation << "):\n";
  out << "  beta  = " << fmt_vector(r.beta_at_eps) << "\n";
  out << "  s.e.  = " << fmt_vector(r.stderr_at_eps) << "\n";
  out << "  SSE   = " << fmt(r.sse_at_eps) << ", sigma^2-hat = " << fmt(r.sigma2_hat) << "\n";
  out << "  F threshold (alpha = " << fmt(args.alpha) << "; " << design.m() << ", " << design.n() - design.m()
      << ") = " << fmt(r.f_threshold) << "\n";
  if (beta0) {
    out << "  F series for beta0 = " << fmt_vector(*beta0) << ": " << fmt_list(r.f_series) << "\n";
    out << "  F = " << fmt(*r.f_at_eps) << ", beta0 " << (*r.beta0_in_confidence_set ? "inside" : "outside")
        << " the " << fmt(1.0 - args.alpha) << " confidence set\n";
  }
}

// ---------------------------------------------------------------- pca

struct PcaArgs {
  std::string design;
  std::string y;
  int order = 1;
};

void cmd_pca(const Context& ctx, const PcaArgs& args) {
  const PerturbedDesign design = load_design(args.design);
  const Matrix y = read_matrix_csv(args.y);
  const CovarianceSeries s = covariance_series(design, y, std::max(1, args.order), ctx.invert);
  const Matrix& s0 = s.coefficients[0];
  const Matrix& s1 = s.coefficients[1];
  const Eigen::Index p = s0.rows();

  std::vector<std::optional<EigenExpansion>> pairs;
  bool degenerate = false;
  for (Eigen::Index i = 0; i < p; ++i) {
    try {
      pairs.emplace_back(eigen_pair_series(s0, s1, i));
    } catch (const DegenerateEigenvalue&) {
      pairs.emplace_back(std::nullopt);
      degenerate = true;
    }
  }
  std::optional<EigenGap> gap;
  if (p == 2 && !degenerate) gap = eigen_gap_2x2(s0, s1);

  if (ctx.format == Format::Json) {
    Json cov = Json::array();
    for (int k = 0; k <= args.order; ++k) cov.push_back(to_json(s.coefficients[static_cast<std::size_t>(k)]));
    Json eig = Json::array();
    for (Eigen::Index i = 0; i < p; ++i) {
      const auto& e = pairs[static_cast<std::size_t>(i)];
      if (!e) {
        eig.push_back(Json{{"index", i}, {"degenerate", true}});
        continue;
      }
      eig.push_back(Json{{"index", i},
                         {"degenerate", false},
                         {"lambda0", e->lambda0},
                         {"lambda1", e->lambda1},
                         {"d0", to_json(e->d0)},
                         {"d1", to_json(e->d1)}});
    }
    Json j{{"p", p}, {"covariance_series", cov}, {"eigenpairs", eig}};
    if (gap) j["gap"] = Json{{"gap0", gap->gap0}, {"gap1", gap->gap1}};
    emit_json(ctx.out, j);
  } else {
    auto& out = ctx.out;
    for (int k = 0; k <= args.order; ++k) {
      out << "S_" << k << " =\n";
      print_matrix(out, s.coefficients[static_cast<std::size_t>(k)]);
    }
    for (Eigen::Index i = 0; i < p; ++i) {
      const auto& e = pairs[static_cast<std::size_t>(i)];
      out << "eigenpair " << i + 1 << ": ";
      if (!e) {
        out << "degenerate (repeated eigenvalue of S_0)\n";
        continue;
      }
      out << "lambda = " << fmt(e->lambda0) << " + eps * " << fmt(e->lambda1) << "\n";
      out << "  d0 = " << fmt_vector(e->d0) << "\n  d1 = " << fmt_vector(e->d1) << "\n";
    }
    if (gap) out << "eigenvalue gap = " << fmt(gap->gap0) << " + eps * " << fmt(gap->gap1) << "\n";
  }
  if (degenerate) throw DegenerateEigenvalue("pca: S_0 has a repeated eigenvalue; first-order expansion undefined");
}

// ---------------------------------------------------------------- fa

struct FaArgs {
  std::string gamma;
  std::string psi;
  std::optional<std::string> phi;
  int order = 2;
  std::optional<std::string> sample_cov;
};

void cmd_fa(const Context& ctx, const FaArgs& args) {
  const Matrix gamma = read_matrix_csv(args.gamma);
  const Vector psi = parse_number_list(args.psi, "--psi");
  std::vector<Matrix> phi;
  if (args.phi) phi = read_series_file(*args.phi).coefficients();
  const FaModel model(gamma, psi, phi);
  const CovarianceSeries sigma = sigma_series(model, args.order);
  const Laurent inv = sigma_inverse_series(model, args.order);
  const ScalarSeries logdet = logdet_series(model, args.order);
  std::optional<ScalarSeries> loglik;
  if (args.sample_cov) loglik = loglik_terms(model, read_matrix_csv(*args.sample_cov), args.order);

  if (ctx.format == Format::Json) {
    Json sig = Json::array();
    for (const Matrix& m : sigma.coefficients) sig.push_back(to_json(m));
    Json inverse = Json::array();
    for (int k = 0; k <= args.order; ++k) inverse.push_back(to_json(inv.coefficient(k)));
    Json j{{"p", model.p()},
           {"k", model.k()},
           {"sigma_series", sig},
           {"sigma_inverse_series", inverse},
           {"logdet_series", to_json(logdet)}};
    if (loglik) j["loglik_series"] = to_json(*loglik);
    emit_json(ctx.out, j);
    return;
  }
  auto& out = ctx.out;
  for (std::size_t k = 0; k < sigma.coefficients.size(); ++k) {
    out << "Sigma_" << k << " =\n";
    print_matrix(out, sigma.coefficients[k]);
  }
  for (int k = 0; k <= args.order; ++k) {
    out << "Sigma^-1_" << k << " =\n";
    print_matrix(out, inv.coefficient(k));
  }
  out << "ln det Sigma series: " << fmt_list(logdet) << "\n";
  if (loglik) out << "log-likelihood series: " << fmt_list(*loglik) << "\n";
}

// ---------------------------------------------------------------- reproduce-gallant

struct Comparison {
  std::string group;
  std::string label;
  double computed;
  double reference;
  double tolerance;
  double deviation() const { return std::abs(computed - reference); }
  bool ok() const { return deviation() <= tolerance; }
};

struct GallantArgs {
  std::optional<std::string> json_out;
  std::optional<std::string> export_dir;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

// design.json plus y0.csv .. y3.csv, ready for the fit and pca commands.
void export_fixture(const std::string& dir) {
  write_text(dir + "/design.json", series_to_json(gallant_design().series()).dump() + "\n");
  for (int s = 0; s < 4; ++s) {
    const Vector y = gallant_response(s);
    std::string csv;
    for (Eigen::Index i = 0; i < y.size(); ++i) csv += Json(y(i)).dump() + "\n";
    write_text(dir + "/y" + std::to_string(s) + ".csv", csv);
  }
}

Json gallant_report(std::vector<Comparison>& rows) {
  const PerturbedDesign design = gallant_design();
  const GallantReference& ref = gallant_reference();
  const Vector null_beta = Vector::Ones(3);
  const char* names[] = {"theta0", "theta1", "theta2"};

  const RegressionExpansion e = expand_gram(design, 2);
  const Matrix* printed[] = {&ref.b0, &ref.c0, &ref.b1, &ref.c1, &ref.b2, &ref.c2};
  const char* labels[] = {"B0", "C0", "B1", "C1", "B2", "C2"};
  Json gram = Json::object();
  for (int k = 0; k < 6; ++k) {
    const Matrix computed = k % 2 == 0 ? e.gram.coefficient(k / 2) : e.inverse.coefficient(k / 2);
    gram[labels[k]] = Json{{"computed", to_json(computed)}, {"reference", to_json(*printed[k])}};
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) {
        rows.push_back({"gram", std::string(labels[k]) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                        computed(i, j), (*printed[k])(i, j), 1e-3});
      }
  }

  Json sets = Json::array();
  for (int s = 0; s < 4; ++s) {
    const auto si = static_cast<std::size_t>(s);
    const Vector y = gallant_response(s);
    const std::string tag = "set " + std::to_string(s + 1);
    const EpsilonEstimate eh = epsilon_hat(design, y);
    rows.push_back({"epsilon_hat", tag, eh.value, ref.epsilon_hat[si], 5e-4});

    Json columns = Json::object();
    for (const bool at_zero : {false, true}) {
      const double eps = at_zero ? 0.0 : eh.value;
      const std::string where = at_zero ? "eps=0" : "eps-hat";
      const auto beta = beta_series(design, y, 1);
      const Vector coef = beta[0] + eps * beta[1];
      const Vector se = standard_errors(design, y, eps, 1);
      const double f = f_statistic(design, y, null_beta, eps, 1);
      const auto& rc = at_zero ? ref.coef_at_zero[si] : ref.coef_at_eps_hat[si];
      const auto& rse = at_zero ? ref.se_at_zero[si] : ref.se_at_eps_hat[si];
      const double rf = at_zero ? ref.f_at_zero[si] : ref.f_at_eps_hat[si];
      for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        rows.push_back({"coef " + where, tag + " " + names[j], coef(j), rc[sj], 1e-3});
      }
      for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        rows.push_back({"s.e. " + where, tag + " " + names[j], se(j), rse[sj], 5e-3});
      }
      rows.push_back({"F " + where, tag, f, rf, 5e-3});
      columns[at_zero ? "at_zero" : "at_epsilon_hat"] =
          Json{{"eps", eps}, {"coefficients", to_json(coef)}, {"standard_errors", to_json(se)}, {"f", f}};
    }
    Json entry{{"data_set", s + 1},
               {"epsilon_hat", eh.value},
               {"quadratic_stationary_point", eh.stationary_point}};
    entry.update(columns);
    sets.push_back(std::move(entry));
  }

  Json comparisons = Json::array();
  Json summary = Json::object();
  for (const Comparison& c : rows) {
    comparisons.push_back(Json{{"group", c.group},
                               {"label", c.label},
                               {"computed", c.computed},
                               {"reference", c.reference},
                               {"deviation", c.deviation()},
                               {"tolerance", c.tolerance},
                               {"within_tolerance", c.ok()}});
    if (!summary.contains(c.group)) summary[c.group] = Json{{"max_deviation", 0.0}, {"all_within_tolerance", true}};
    Json& g = summary[c.group];
    g["max_deviation"] = std::max(g["max_deviation"].get<double>(), c.deviation());
    g["all_within_tolerance"] = g["all_within_tolerance"].get<bool>() && c.ok();
  }
  return Json{{"null_hypothesis", to_json(null_beta)},
              {"gram", gram},
              {"data_sets", sets},
              {"comparisons", comparisons},
              {"summary", summary}};
}

void cmd_reproduce_gallant(const Context& ctx, const GallantArgs& args) {
  if (args.export_dir) export_fixture(*args.export_dir);
  std::vector<Comparison> rows;
  const Json report = gallant_report(rows);
  if (args.json_out) {
    std::ofstream file(*args.json_out);
    if (!file) throw InputError("cannot write " + *args.json_out);
    emit_json(file, report);
  }
  if (ctx.format == Format::Json) {
    emit_json(ctx.out, report);
    return;
  }
  auto& out = ctx.out;
  out << "Treatment-control data, n = 30, H0: theta = (1, 1, 1); first-order expansions in eps\n\n";
  for (const Json& s : report["data_sets"]) {
    out << "data set " << s["data_set"].get<int>() << ": eps-hat = " << fmt(s["epsilon_hat"].get<double>());
    out << "\n";
  }
  out << "\n";
  std::string group;
  const auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  out << pad("quantity", 26) << pad("computed", 14) << pad("published", 14) << pad("deviation", 14) << "ok\n";
  for (const Comparison& c : rows) {
    if (c.group != group) {
      group = c.group;
      out << "[" << group << "]\n";
    }
    out << pad("  " + c.label, 26) << pad(fmt(c.computed), 14) << pad(fmt(c.reference), 14)
        << pad(fmt(c.deviation()), 14) << (c.ok() ? "yes" : "NO") << "\n";
  }
  out << "\nmax deviations:\n";
  for (const auto& [name, g] : report["summary"].items()) {
    out << pad("  " + name, 26) << pad(fmt(g["max_deviation"].get<double>()), 14)
        << (g["all_within_tolerance"].get<bool>() ? "within tolerance" : "OUTSIDE tolerance") << "\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool stdout_is_terminal) {
  CLI::App app{"Perturbation expansions for matrix inverses, linear models, PCA and factor analysis"};
  app.name("perturb");
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> format;
  app.add_option("--format", format, "Output format: table or json (default: table on a terminal)")
      ->check(CLI::IsMember({"table", "json"}));

  InvertArgs invert_args;
  auto* invert = app.add_subcommand("invert", "Laurent expansion of A(eps)^-1");
  invert->add_option("--series", invert_args.series, "Series file (JSON)")->required();
  invert->add_option("--order", invert_args.order, "Highest power to report")->check(CLI::NonNegativeNumber);
  invert->add_option("--max-t", invert_args.max_t, "Largest augmented index searched for the pole order")
      ->check(CLI::NonNegativeNumber);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Perturbed linear model estimation and inference");
  fit_cmd->add_option("--design", fit_args.design, "Design series file X_0, X_1, ... (m x n each)")->required();
  fit_cmd->add_option("--y", fit_args.y, "Response vector (CSV, one column)")->required();
  fit_cmd->add_option("--beta0", fit_args.beta0, "Null hypothesis beta, comma separated");
  fit_cmd->add_option("--order", fit_args.order, "Series order")->check(CLI::NonNegativeNumber);
  auto* eps_opt = fit_cmd->add_option("--eps", fit_args.eps, "Evaluation point");
  auto* est_opt = fit_cmd->add_flag("--estimate-eps", fit_args.estimate_eps, "Evaluate at the estimated eps");
  eps_opt->excludes(est_opt);
  fit_cmd->add_option("--alpha", fit_args.alpha, "Confidence-set level")->check(CLI::Range(0.0, 1.0));
  auto* exact_opt = fit_cmd->add_flag("--exact", fit_args.exact, "Evaluate directly instead of by series");
  fit_cmd->add_option("--eval-order", fit_args.eval_order, "Series order used for evaluation at eps")
      ->check(CLI::NonNegativeNumber)
      ->excludes(exact_opt);
  fit_cmd->add_flag("--singular", fit_args.singular, "Report limits for a singular design");

  PcaArgs pca_args;
  auto* pca = app.add_subcommand("pca", "Perturbed principal components");
  pca->add_option("--design", pca_args.design, "Design series file")->required();
  pca->add_option("--y", pca_args.y, "Responses (CSV, n x p)")->required();
  pca->add_option("--order", pca_args.order, "Series order")->check(CLI::PositiveNumber);

  FaArgs fa_args;
  auto* fa = app.add_subcommand("fa", "Perturbed factor-analysis covariance");
  fa->add_option("--gamma", fa_args.gamma, "Loadings (CSV, p x k)")->required();
  fa->add_option("--psi", fa_args.psi, "Residual variances, comma separated")->required();
  fa->add_option("--phi", fa_args.phi, "Series file with Phi_1, Phi_2, ... (k x k)");
  fa->add_option("--order", fa_args.order, "Series order")->check(CLI::NonNegativeNumber);
  fa->add_option("--sample-cov", fa_args.sample_cov, "Sample covariance (CSV, p x p)");

  GallantArgs gallant_args;
  auto* gallant = app.add_subcommand("reproduce-gallant", "Recompute the treatment-control example");
  gallant->add_option("--json-out", gallant_args.json_out, "Also write the JSON report to this file");
  gallant->add_option("--export", gallant_args.export_dir, "Write the fixture as design.json and y0..y3.csv here")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    Context ctx{out, err, resolve_format(format, stdout_is_terminal), {}};
    if (const auto tol = rank_tolerance_from_env()) ctx.invert.rank_tol = *tol;
    if (invert->parsed()) cmd_invert(ctx, invert_args);
    if (fit_cmd->parsed()) cmd_fit(ctx, fit_args);
    if (pca->parsed()) cmd_pca(ctx, pca_args);
    if (fa->parsed()) cmd_fa(ctx, fa_args);
    if (gallant->parsed()) cmd_reproduce_gallant(ctx, gallant_args);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const MathError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMath;
  }
  return kExitOk;
}

}  // namespace perturb::cli
