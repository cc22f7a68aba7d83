#include "minorb/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace minorb {

using nlohmann::json;

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json tail_to_json(const TailDescriptor& t) {
  json j;
  j["kind"] = to_string(t.kind);
  switch (t.kind) {
    case TailDescriptor::Kind::finite_support:
      j["support"] = t.support;
      break;
    case TailDescriptor::Kind::single_limit:
      j["limit"] = t.limit;
      break;
    case TailDescriptor::Kind::two_limits:
      j["limit_even"] = t.limit_even;
      j["limit_odd"] = t.limit_odd;
      break;
  }
  if (t.bound_c != 0.0) {
    j["bound_c"] = t.bound_c;
    j["bound_q"] = t.bound_q;
  }
  return j;
}

TailDescriptor tail_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  TailDescriptor t;
  if (kind == "finite_support") {
    t = TailDescriptor::finite(j.at("support").get<int>());
  } else if (kind == "single_limit") {
    t = TailDescriptor::single(j.at("limit").get<double>(), 0.0, 0.0);
  } else if (kind == "two_limits") {
    t = TailDescriptor::two(j.at("limit_even").get<double>(),
                            j.at("limit_odd").get<double>(), 0.0, 0.0);
  } else {
    throw ParameterError("unknown tail kind: " + kind);
  }
  if (j.contains("bound_c")) {
    t.bound_c = j.at("bound_c").get<double>();
    t.bound_q = j.at("bound_q").get<double>();
  }
  return t;
}

json operator_to_json(const DenseOperator& op, const json& params,
                      const std::optional<TailDescriptor>& tail) {
  json j;
  j["schema"] = 1;
  j["dim"] = op.dim();
  j["structure_flag"] = to_string(op.structure());
  json entries = json::array();
  for (int i = 0; i < op.dim(); ++i)
    for (int k = 0; k < op.dim(); ++k) {
      const Complex& v = op.entries()(i, k);
      entries.push_back(json::array({v.real(), v.imag()}));
    }
  j["entries"] = std::move(entries);
  if (!params.is_null()) j["params"] = params;
  if (tail) j["tail"] = tail_to_json(*tail);
  return j;
}

DenseOperator operator_from_json(const json& j, json* params_out,
                                 std::optional<TailDescriptor>* tail_out) {
  if (j.at("schema").get<int>() != 1)
    throw ParameterError("unsupported schema version");
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw ParameterError("dim must be positive");
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != dim * dim)
    throw ParameterError("entries size does not match dim^2");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      const auto& e = entries.at(i * dim + k);
      const double re = e.at(0).get<double>();
      const double im = e.at(1).get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw ParameterError("non-finite entry rejected");
      m(i, k) = Complex{re, im};
    }
  const Structure s =
      structure_from_string(j.at("structure_flag").get<std::string>());
  if (params_out) *params_out = j.value("params", json());
  if (tail_out)
    *tail_out = j.contains("tail")
                    ? std::optional<TailDescriptor>(tail_from_json(j["tail"]))
                    : std::nullopt;
  return DenseOperator(std::move(m), s);
}

json certificate_to_json(const MinimalityCertificate& c) {
  json j;
  j["pivot_index"] = c.pivot_index;
  j["verdict"] = to_string(c.verdict);
  j["conditions"] = {{"real", c.cond_real},
                     {"pivot", c.cond_pivot},
                     {"column_dominates", c.cond_column_dominates},
                     {"orthogonal", c.cond_orthogonal}};
  j["realness_residual"] = c.realness_residual;
  j["pivot_diag_residual"] = c.pivot_diag_residual;
  if (c.zero_offpivot_index != 0)
    j["zero_offpivot_index"] = c.zero_offpivot_index;
  j["column_margin"] = c.column_margin;
  j["max_orthogonality_residual"] = c.max_orthogonality_residual;
  j["certified_norm"] = c.certified_norm;
  j["operator_norm"] = c.operator_norm_value;
  return j;
}

json quotient_result_to_json(const QuotientNormResult& r) {
  json j;
  j["value"] = r.value;
  j["minimizer_diagonal"] = std::vector<double>(
      r.minimizer_diagonal.data(),
      r.minimizer_diagonal.data() + r.minimizer_diagonal.size());
  j["iterations"] = r.iterations;
  j["gap_estimate"] = r.gap_estimate;
  j["certified"] = r.certified;
  j["marginal"] = r.marginal;
  return j;
}

json report_to_json(const ConvergenceReport& r) {
  json j;
  j["schema"] = 1;
  j["experiment_id"] = r.experiment_id;
  j["gamma"] = r.gamma;
  if (r.delta) j["delta"] = *r.delta;
  j["N"] = r.N;
  j["n_list"] = r.n_list;
  json metrics = json::object();
  for (const auto& m : r.metrics) metrics[m.name] = m.values;
  j["metrics"] = std::move(metrics);
  if (r.fitted_ratio) j["fitted_ratio"] = *r.fitted_ratio;
  json asserts = json::array();
  for (const auto& a : r.assertions)
    asserts.push_back({{"name", a.name},
                       {"passed", a.passed},
                       {"value", a.value},
                       {"threshold", a.threshold}});
  j["assertions"] = std::move(asserts);
  j["passed"] = r.passed();
  return j;
}

std::string report_to_csv(const ConvergenceReport& r) {
  std::ostringstream out;
  out << "n";
  for (const auto& m : r.metrics) out << "," << m.name;
  out << "\n";
  for (std::size_t i = 0; i < r.n_list.size(); ++i) {
    out << r.n_list[i];
    for (const auto& m : r.metrics) {
      out << ",";
      if (i < m.values.size()) out << format_float(m.values[i]);
    }
    out << "\n";
  }
  return out.str();
}

json curve_to_json(const OrbitCurve& c) {
  json j;
  j["schema"] = 1;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  j["base_eigenvalues"] = std::vector<double>(
      c.base.lambdas.data(), c.base.lambdas.data() + c.base.lambdas.size());
  j["generator"] = operator_to_json(c.generator);
  json samples = json::array();
  for (const auto& [t, op] : c.samples)
    samples.push_back({{"t", t}, {"operator", operator_to_json(op)}});
  j["samples"] = std::move(samples);
  return j;
}

std::string curve_to_csv(const OrbitCurve& c) {
  std::ostringstream out;
  const int n = c.base.dim();
  out << "t";
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      out << ",re_" << i << "_" << k << ",im_" << i << "_" << k;
  out << "\n";
  for (const auto& [t, op] : c.samples) {
    out << format_float(t);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        out << "," << format_float(op.entries()(i, k).real()) << ","
            << format_float(op.entries()(i, k).imag());
    out << "\n";
  }
  return out.str();
}

std::string report_filename(const std::string& experiment_id, double gamma,
                            int N) {
  char g[32];
  std::snprintf(g, sizeof(g), "%g", gamma);
  return experiment_id + "_" + g + "_" + std::to_string(N) + ".json";
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace minorb
