#pragma once

#include <iosfwd>
#include <vector>

#include "hpdg/solution.hpp"

namespace hpdg {

/// Local estimator contributions of one triangle. All entries are >= 0.
struct ElementEstimate {
  double eta_r = 0.0;
  double eta_e = 0.0;
  double eta_j = 0.0;
  /// sqrt(eta_r^2 + eta_e^2 + eta_j^2).
  double eta = 0.0;
  /// Same with f and g replaced by their local L2 projections.
  double eta_tilde = 0.0;
  /// Estimator driving adaptivity: no trace residual, interior gradient-jump
  /// term weighted by p_K / 2.
  double eta_check = 0.0;
  double osc = 0.0;
  /// Triangle touches a declared singular point of the data.
  bool singular_data = false;
};

struct EstimatorReport {
  std::vector<ElementEstimate> elements;
  // Global values are root-sum-squares of the local ones.
  double eta_r = 0.0;
  double eta_e = 0.0;
  double eta_j = 0.0;
  double eta = 0.0;
  double eta_tilde = 0.0;
  double eta_check = 0.0;
  double osc = 0.0;
  double m_khp = 0.0;
};

/// (h_K / p_K) || Lap v + k^2 v + f ||_{L2(K)}.
double internal_residual(const DgSolution &sol, int t);
/// { 1/2 || sqrt(b h/p) [[grad v]]_N ||^2 on interior edges of K
///   + || sqrt(h) (g - d_n v - i k v) ||^2 on boundary edges of K }^(1/2).
double edge_residual(const DgSolution &sol, int t);
/// 2^(-1/2) || sqrt(a p^2 / h) [[v]] || over the interior edges of K.
double trace_residual(const DgSolution &sol, int t);
/// eta_check_K.
double practical_estimator(const DgSolution &sol, int t);
/// { ||(h_K/p_K)(f - f_T)||^2_K + ||sqrt(h)(g - g_e)||^2 on boundary edges }^(1/2)
/// with f_T, g_e the L2 projections onto P_{p_K}(K), P_{p_K}(e).
double oscillations(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem,
                    int t);

/// All local and global estimators, including the projected-data variant and
/// the oscillations.
EstimatorReport estimate(const DgSolution &sol);

/// Local estimator CSV: id,eta_R,eta_E,eta_J,eta,eta_check,osc
void write_element_csv(std::ostream &out, const EstimatorReport &report);

} // namespace hpdg
