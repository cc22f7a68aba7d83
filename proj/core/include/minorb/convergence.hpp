#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minorb/families.hpp"

namespace minorb {

/// One named metric series, aligned with the report's n_list.
struct MetricSeries {
  std::string name;
  std::vector<double> values;
};

struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // bound it was checked against
};

/// Quantitative rendering of one convergence statement: metric tables over
/// a truncation-rank list plus the pass/fail assertions derived from them.
struct ConvergenceReport {
  std::string experiment_id;
  double gamma = 0.0;
  std::optional<double> delta;
  int N = 0;
  std::vector<int> n_list;
  std::vector<MetricSeries> metrics;
  std::optional<double> fitted_ratio;  // geometric decay of the lead metric
  std::vector<Assertion> assertions;

  bool passed() const;
  const MetricSeries* metric(const std::string& name) const;
};

/// Least-squares geometric ratio fit v_k ~ C q^{n_k}; requires >= 4 points
/// with positive values, nullopt otherwise.
std::optional<double> fit_geometric_ratio(const std::vector<int>& n_list,
                                          const std::vector<double>& values);

/// Operator-norm convergence of the finite-range members: ||Y_r - Y_n||,
/// |r - r_n|, and the proof's three-term triangle bound per n.
ConvergenceReport run_norm_convergence(const FamilyParams& p,
                                       const std::vector<int>& n_list);

/// Probe-vector (strong operator topology) convergence of the diagonals:
/// per-probe |d_k^{(n)} - d_k| tables together with the persistent
/// operator-norm gap ||D_n - D_0||.
ConvergenceReport run_sot_convergence(const FamilyParams& p,
                                      const std::vector<int>& n_list,
                                      int n_probes = 8);

/// Convergence of the scalar-shifted minimal operators in operator norm,
/// split into diagonal and off-diagonal components, with the proof's max
/// formula recomputed analytically.
ConvergenceReport run_shifted_norm_convergence(const FamilyParams& p,
                                               const std::vector<int>& n_list);

/// Uniform convergence of the curves sigma_n -> sigma on
/// [-pi/(2 M0), pi/(2 M0)]: sup_t distances, per-n lengths, and tangent
/// convergence at t = 0.
ConvergenceReport run_curve_convergence(const FamilyParams& p,
                                        const std::vector<int>& n_list,
                                        int t_samples = 65);

/// Oscillant-family suite under gamma^2 = delta: minimality certificates
/// with value M1, interleaving audit of the diagonals, shifted distance to
/// the two-projection limit operator, and the two-limit tail recovery.
ConvergenceReport run_oscillant_convergence(const FamilyParams& p,
                                            const std::vector<int>& n_list);

/// Runs one experiment by id ("norm", "sot", "shifted", "curves",
/// "oscillant") with its default knobs.
ConvergenceReport run_experiment(const std::string& experiment_id,
                                 const FamilyParams& p,
                                 const std::vector<int>& n_list);

}  // namespace minorb
