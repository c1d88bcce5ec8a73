#pragma once

#include <vector>

#include <Eigen/Core>

namespace steinshape {

/// Balanced transportation problem: minimize sum cost(i, j) flow(i, j)
/// subject to row sums = supply, column sums = demand, flow >= 0.
/// Successive shortest paths with dense Dijkstra and node potentials.
struct TransportResult {
  double cost = 0.0;
  Eigen::MatrixXd flow;
  int augmentations = 0;
};

/// Throws InputError if supplies and demands do not balance to 1e-9 relative,
/// SolverStall past max_augment augmentations.
TransportResult solve_transport(const Eigen::MatrixXd& cost, const std::vector<double>& supply,
                                const std::vector<double>& demand, int max_augment = 1000000);

/// max sum h_i mass_i over |h_i| <= m, h_i - h_j <= s |x_i - x_j|^alpha,
/// m + s <= 1. Solved through its dual transport problem for fixed s and a
/// golden-section search over s (the value is concave in s).
struct HolderLpResult {
  double value = 0.0;
  double s = 0.0;
  double m = 0.0;
  int evaluations = 0;
};

HolderLpResult holder_lp(const std::vector<Eigen::Vector2d>& nodes, const std::vector<double>& mass, double alpha);

/// Value for fixed Lipschitz budget s and sup budget m.
double holder_lp_fixed(const std::vector<Eigen::Vector2d>& nodes, const std::vector<double>& mass, double alpha,
                       double s, double m);

}  // namespace steinshape
