// Command-line front end: construct family members, run minimality
// certificates and the diagonal-approximation oracle, measure curve
// lengths, and drive the convergence experiment suites.
//
// Exit codes: 0 success, 1 input parse failure, 2 invalid parameters,
// 3 certificate conditions fail, 4 numerically marginal result,
// 5 experiment assertion failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minorb/convergence.hpp"
#include "minorb/families.hpp"
#include "minorb/geodesics.hpp"
#include "minorb/linalg.hpp"
#include "minorb/minimality.hpp"
#include "minorb/serialization.hpp"

namespace {

using nlohmann::json;
using namespace minorb;

constexpr int kExitParse = 1;
constexpr int kExitParams = 2;
constexpr int kExitConditionsFail = 3;
constexpr int kExitMarginal = 4;
constexpr int kExitAssertion = 5;

struct RunConfig {
  double gamma = 0.5;
  std::optional<double> delta;
  std::optional<double> r;
  int n = 4;
  int N = 64;
  std::vector<int> n_list{4, 8, 16, 32};
  Tolerances tol;
  int budget = 40000;
  std::uint64_t seed = 42;
  std::string output_dir = ".";
};

void apply_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  json j = json::parse(in);
  if (j.value("schema", 1) != 1)
    throw ParameterError("unsupported config schema");
  c.gamma = j.value("gamma", c.gamma);
  if (j.contains("delta")) c.delta = j["delta"].get<double>();
  if (j.contains("r")) c.r = j["r"].get<double>();
  c.n = j.value("n", c.n);
  c.N = j.value("N", c.N);
  if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<int>>();
  c.tol.tol_alg = j.value("tol_alg", c.tol.tol_alg);
  c.tol.tol_min = j.value("tol_min", c.tol.tol_min);
  c.tol.tol_oracle = j.value("tol_oracle", c.tol.tol_oracle);
  c.tol.tol_quad = j.value("tol_quad", c.tol.tol_quad);
  c.budget = j.value("budget", c.budget);
  c.seed = j.value("seed", c.seed);
  c.output_dir = j.value("output_dir", c.output_dir);
}

void validate(const RunConfig& c) {
  if (c.tol.tol_alg <= 0 || c.tol.tol_min <= 0 || c.tol.tol_oracle <= 0 ||
      c.tol.tol_quad <= 0)
    throw ParameterError("tolerances must be positive");
}

// n_list only drives the experiment suites, so it is checked there and not
// in the global validation shared by every command.
void validate_n_list(const RunConfig& c) {
  for (int n : c.n_list)
    if (n < 2 || n > c.N)
      throw ParameterError("n_list entries must satisfy 2 <= n <= N");
}

FamilyParams to_params(const RunConfig& c) {
  FamilyParams p;
  p.gamma = c.gamma;
  p.delta = c.delta;
  p.r = c.r;
  p.n = c.n;
  p.N = c.N;
  return p;
}

OracleOptions to_oracle(const RunConfig& c) {
  OracleOptions o;
  o.budget = c.budget;
  o.oracle_dim_max = std::max(c.N, 64);
  return o;
}

DenseOperator load_operator(const std::string& path, json* params = nullptr,
                            std::optional<TailDescriptor>* tail = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open operator file " + path);
  json j = json::parse(in);
  return operator_from_json(j, params, tail);
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

int cmd_construct(const RunConfig& c, const std::string& family,
                  const std::string& sigma, const std::string& output) {
  FamilyParams p = to_params(c);
  json params{{"gamma", c.gamma}, {"N", c.N}};
  if (c.delta) params["delta"] = *c.delta;
  if (c.r) params["r"] = *c.r;
  std::optional<TailDescriptor> tail;
  std::optional<DenseOperator> op;
  json summary;

  if (family == "L") {
    op = build_L(p);
  } else if (family == "Y1") {
    op = build_Y1(p);
  } else if (family == "D0") {
    DiagonalSeq d = build_D0(p);
    op = d.as_operator();
    tail = d.tail;
  } else if (family == "Zr") {
    op = build_Zr(p);
    const ResolvedMain res = compute_M0(p);
    summary["M0"] = res.M0;
    summary["r"] = c.r ? *c.r : res.r;
    summary["c1_norm"] = res.c1L * (c.r ? *c.r : res.r);
    summary["c1L_tail"] = res.c1L_tail;
  } else if (family == "Yn" || family == "Dn") {
    params["n"] = c.n;
    auto [yn, dn] = build_Yn_Dn(p);
    if (family == "Yn") {
      op = yn;
    } else {
      op = dn.as_operator();
      tail = dn.tail;
    }
    summary["r_n"] = resolve_rn(p, c.n);
  } else if (family == "Z0") {
    op = build_Z0(p);
  } else if (family == "D0prime") {
    DiagonalSeq d = build_D0prime(p);
    op = d.as_operator();
    tail = d.tail;
    auto [lam, mu] = oscillant_limits(p.gamma, *p.delta);
    summary["limit_even"] = lam;
    summary["limit_odd"] = mu;
  } else if (family == "Znprime" || family == "Dnprime") {
    params["n"] = c.n;
    auto [zn, dn] = build_Znprime_Dnprime(p);
    if (family == "Znprime") {
      op = zn;
    } else {
      op = dn.as_operator();
      tail = dn.tail;
    }
    const ResolvedOscillant res = compute_M1(p);
    summary["M1"] = res.M1;
    summary["r_n"] = resolve_rn_oscillant(p, c.n);
  } else if (family == "Psigma") {
    params["sigma"] = sigma;
    if (sigma == "even") op = build_Psigma_even(c.N);
    else if (sigma == "odd") op = build_Psigma_odd(c.N);
    else throw ParameterError("--sigma must be 'even' or 'odd'");
  } else if (family == "base_point") {
    op = default_base_point(c.N).as_operator();
  } else {
    throw ParameterError("unknown family: " + family);
  }

  std::filesystem::path out =
      output.empty()
          ? std::filesystem::path(c.output_dir) / (family + ".json")
          : std::filesystem::path(output);
  write_json(out, operator_to_json(*op, params, tail));

  summary["family"] = family;
  summary["file"] = out.string();
  summary["dim"] = op->dim();
  summary["operator_norm"] = operator_norm(*op);
  if (tail) summary["tail"] = tail_to_json(*tail);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_certify(const RunConfig& c, const std::string& input, int pivot,
                int audit_trials, double audit_radius,
                const std::string& output) {
  DenseOperator op = load_operator(input);
  MinimalityCertificate cert = check_theorem_minimality(op, pivot, c.tol);
  json j = certificate_to_json(cert);
  if (audit_trials > 0) {
    const double worst = perturbation_audit(
        op, audit_trials, audit_radius, derive_seed(c.seed, "perturbation_audit"));
    j["audit"] = {{"trials", audit_trials},
                  {"radius", audit_radius},
                  {"worst_improvement", worst}};
  }
  if (!output.empty()) write_json(output, j);
  std::cout << j.dump(2) << "\n";
  if (cert.verdict == Verdict::conditions_fail) return kExitConditionsFail;
  if (cert.verdict == Verdict::numerically_marginal) return kExitMarginal;
  return 0;
}

int cmd_quotient_norm(const RunConfig& c, const std::string& input,
                      const std::string& candidate_path) {
  DenseOperator op = load_operator(input);
  std::optional<RealVector> candidate;
  if (!candidate_path.empty()) {
    DenseOperator d = load_operator(candidate_path);
    if (d.dim() != op.dim())
      throw ParameterError("candidate diagonal dimension mismatch");
    candidate = RealVector(d.entries().diagonal().imag());
  }
  QuotientNormResult r = quotient_norm(op, candidate, to_oracle(c), c.tol);
  std::cout << quotient_result_to_json(r).dump(2) << "\n";
  return r.marginal ? kExitMarginal : 0;
}

int cmd_curve_length(const RunConfig& c, const std::string& generator_path,
                     double t_min, double t_max, int order, int panels) {
  DenseOperator z = load_operator(generator_path);
  OrbitBasePoint b = default_base_point(z.dim());
  if (std::isnan(t_max)) t_max = std::numbers::pi / (4.0 * operator_norm(z));
  OrbitCurve curve = orbit_curve(z, b, t_min, t_max, 9);
  const double len =
      curve_length(curve, order, panels, std::nullopt, to_oracle(c), c.tol);
  json j{{"t_min", t_min}, {"t_max", t_max}, {"order", order},
         {"panels", panels}, {"length", len}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_experiment(const RunConfig& c, const std::string& id) {
  validate_n_list(c);
  std::vector<std::string> ids;
  if (id == "all")
    ids = {"norm", "sot", "shifted", "curves", "oscillant"};
  else if (id == "norm" || id == "sot" || id == "shifted" ||
           id == "curves" || id == "oscillant")
    ids = {id};
  else
    throw ParameterError("unknown experiment id: " + id);

  FamilyParams p = to_params(c);
  std::filesystem::create_directories(c.output_dir);
  json summary = json::array();
  std::string first_failure;
  for (const std::string& e : ids) {
    FamilyParams q = p;
    if (e == "oscillant" && !q.delta) q.delta = q.gamma * q.gamma;
    std::cerr << "running experiment " << e << " (gamma=" << q.gamma
              << ", N=" << q.N << ")\n";
    ConvergenceReport rep = run_experiment(e, q, c.n_list);
    const std::string name = report_filename(e, q.gamma, q.N);
    std::filesystem::path base = std::filesystem::path(c.output_dir) / name;
    write_json(base, report_to_json(rep));
    std::filesystem::path csv = base;
    csv.replace_extension(".csv");
    write_file_atomic(csv, report_to_csv(rep));
    for (const auto& a : rep.assertions)
      if (!a.passed && first_failure.empty())
        first_failure = e + ": " + a.name;
    summary.push_back({{"experiment", e},
                       {"file", base.string()},
                       {"passed", rep.passed()}});
  }
  std::cout << summary.dump(2) << "\n";
  if (!first_failure.empty()) {
    std::cerr << "assertion failed: " << first_failure << "\n";
    return kExitAssertion;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator families, minimality certificates, orbit curves "
               "and convergence experiments at finite truncation"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (schema 1)");
  double gamma_flag = NAN, delta_flag = NAN, r_flag = NAN;
  int n_flag = -1, N_flag = -1, budget_flag = -1;
  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  std::vector<int> n_list_flag;
  std::string outdir_flag;
  app.add_option("--gamma", gamma_flag, "decay parameter in (0,1)");
  app.add_option("--delta", delta_flag, "oscillant decay parameter");
  app.add_option("--r", r_flag, "first-row scaling (default: auto)");
  app.add_option("--rank,-n", n_flag, "finite-range truncation rank");
  app.add_option("--dim,-N", N_flag, "ambient truncation dimension");
  app.add_option("--n-list", n_list_flag, "experiment truncation ranks");
  app.add_option("--budget", budget_flag, "oracle iteration budget");
  app.add_option("--seed", seed_flag, "root seed for randomized audits")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--output-dir", outdir_flag, "report/operator output dir");

  auto* sc_construct = app.add_subcommand("construct",
                                          "build a family member file");
  std::string family, sigma = "even", construct_out;
  sc_construct->add_option("family", family, "family member name")
      ->required();
  sc_construct->add_option("--sigma", sigma, "projection parity (Psigma)");
  sc_construct->add_option("--output", construct_out, "output file path");

  auto* sc_certify = app.add_subcommand("certify",
                                        "run the minimality certificate");
  std::string certify_in, certify_out;
  int pivot = 1, audit_trials = 0;
  double audit_radius = 0.1;
  sc_certify->add_option("operator", certify_in, "operator JSON file")
      ->required();
  sc_certify->add_option("--pivot", pivot, "1-based pivot column");
  sc_certify->add_option("--audit-trials", audit_trials,
                         "random diagonal perturbation trials");
  sc_certify->add_option("--audit-radius", audit_radius,
                         "perturbation sup-norm radius");
  sc_certify->add_option("--output", certify_out, "certificate output file");

  auto* sc_qnorm = app.add_subcommand(
      "quotient-norm", "distance to the diagonal subalgebra");
  std::string qnorm_in, qnorm_candidate;
  sc_qnorm->add_option("operator", qnorm_in, "operator JSON file")
      ->required();
  sc_qnorm->add_option("--candidate", qnorm_candidate,
                       "diagonal candidate operator file");

  auto* sc_curve = app.add_subcommand("curve-length",
                                      "Finsler length of an orbit curve");
  std::string curve_gen;
  double t_min = 0.0, t_max = NAN;
  int order = 16, panels = 4;
  sc_curve->add_option("generator", curve_gen, "generator JSON file")
      ->required();
  sc_curve->add_option("--t-min", t_min, "interval start");
  sc_curve->add_option("--t-max", t_max,
                       "interval end (default pi / (4 ||Z||))");
  sc_curve->add_option("--order", order, "Gauss-Legendre order per panel");
  sc_curve->add_option("--panels", panels, "quadrature panels");

  auto* sc_exp = app.add_subcommand("experiment",
                                    "run a convergence experiment suite");
  std::string experiment_id = "all";
  sc_exp->add_option("id", experiment_id,
                     "norm | sot | shifted | curves | oscillant | all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    if (!std::isnan(gamma_flag)) cfg.gamma = gamma_flag;
    if (!std::isnan(delta_flag)) cfg.delta = delta_flag;
    if (!std::isnan(r_flag)) cfg.r = r_flag;
    if (n_flag >= 0) cfg.n = n_flag;
    if (N_flag >= 0) cfg.N = N_flag;
    if (!n_list_flag.empty()) cfg.n_list = n_list_flag;
    if (budget_flag >= 0) cfg.budget = budget_flag;
    if (seed_set) cfg.seed = seed_flag;
    if (!outdir_flag.empty()) cfg.output_dir = outdir_flag;
    validate(cfg);

    if (sc_construct->parsed())
      return cmd_construct(cfg, family, sigma, construct_out);
    if (sc_certify->parsed())
      return cmd_certify(cfg, certify_in, pivot, audit_trials, audit_radius,
                         certify_out);
    if (sc_qnorm->parsed()) return cmd_quotient_norm(cfg, qnorm_in,
                                                     qnorm_candidate);
    if (sc_curve->parsed())
      return cmd_curve_length(cfg, curve_gen, t_min, t_max, order, panels);
    if (sc_exp->parsed()) return cmd_experiment(cfg, experiment_id);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitParams;
  } catch (const StructureError& e) {
    std::cerr << "structure error: " << e.what() << "\n";
    return kExitParams;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
