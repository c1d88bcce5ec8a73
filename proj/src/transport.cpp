#include "steinshape/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steinshape/error.hpp"

namespace steinshape {

TransportResult solve_transport(const Eigen::MatrixXd& cost, const std::vector<double>& supply,
                                const std::vector<double>& demand, int max_augment) {
  const int ns = static_cast<int>(supply.size());
  const int nt = static_cast<int>(demand.size());
  if (cost.rows() != ns || cost.cols() != nt) throw Error(ErrorCode::InputError, "cost matrix shape mismatch");
  double total_s = 0.0, total_t = 0.0;
  for (double v : supply) {
    if (v < 0.0) throw Error(ErrorCode::InputError, "negative supply");
    total_s += v;
  }
  for (double v : demand) {
    if (v < 0.0) throw Error(ErrorCode::InputError, "negative demand");
    total_t += v;
  }
  if (std::abs(total_s - total_t) > 1e-9 * std::max({1.0, total_s, total_t}))
    throw Error(ErrorCode::InputError, "transport problem is not balanced");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double eps = 1e-13 * std::max(1e-300, total_s);
  TransportResult res;
  res.flow = Eigen::MatrixXd::Zero(ns, nt);
  std::vector<double> rem_s = supply, rem_t = demand;
  // potentials keep reduced costs non-negative
  std::vector<double> pot_s(ns, 0.0), pot_t(nt, 0.0);
  for (int j = 0; j < nt; ++j) {
    double mn = kInf;
    for (int i = 0; i < ns; ++i) mn = std::min(mn, cost(i, j));
    pot_t[j] = ns > 0 ? mn : 0.0;
  }

  const int nv = ns + nt;
  std::vector<double> dist(nv);
  std::vector<int> prev(nv);
  std::vector<char> done(nv);
  auto open_sink = [&] {
    for (double v : rem_t)
      if (v > eps) return true;
    return false;
  };
  double left = total_s;
  while (left > eps && open_sink()) {
    if (res.augmentations >= max_augment)
      throw Error(ErrorCode::SolverStall, "transport solver exceeded its augmentation cap");
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev.begin(), prev.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (int i = 0; i < ns; ++i)
      if (rem_s[i] > eps) dist[i] = 0.0;
    int target = -1;
    while (true) {
      int u = -1;
      double best = kInf;
      for (int v = 0; v < nv; ++v)
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      if (u < 0) break;
      done[u] = 1;
      if (u >= ns && rem_t[u - ns] > eps) {
        target = u;
        break;
      }
      if (u < ns) {
        for (int j = 0; j < nt; ++j) {
          const int v = ns + j;
          if (done[v]) continue;
          const double nd = dist[u] + cost(u, j) + pot_s[u] - pot_t[j];
          if (nd < dist[v]) {
            dist[v] = nd;
            prev[v] = u;
          }
        }
      } else {
        const int j = u - ns;
        for (int i = 0; i < ns; ++i) {
          if (done[i] || res.flow(i, j) <= eps) continue;
          const double nd = dist[u] - cost(i, j) - pot_s[i] + pot_t[j];
          if (nd < dist[i]) {
            dist[i] = nd;
            prev[i] = u;
          }
        }
      }
    }
    if (target < 0) throw Error(ErrorCode::SolverStall, "no augmenting path in transport residual graph");
    const double dt = dist[target];
    for (int v = 0; v < nv; ++v) {
      const double d = done[v] ? dist[v] : dt;
      if (v < ns) pot_s[v] += d;
      else pot_t[v - ns] += d;
    }
    // bottleneck along the path
    double delta = rem_t[target - ns];
    int v = target;
    while (prev[v] >= 0) {
      const int u = prev[v];
      if (u >= ns) delta = std::min(delta, res.flow(v, u - ns));  // reverse edge t -> s
      v = u;
    }
    delta = std::min(delta, rem_s[v]);
    v = target;
    while (prev[v] >= 0) {
      const int u = prev[v];
      if (u < ns) res.flow(u, v - ns) += delta;
      else res.flow(v, u - ns) -= delta;
      v = u;
    }
    rem_s[v] -= delta;
    rem_t[target - ns] -= delta;
    left -= delta;
    ++res.augmentations;
  }
  res.cost = (res.flow.array() * cost.array()).sum();
  return res;
}

double holder_lp_fixed(const std::vector<Eigen::Vector2d>& nodes, const std::vector<double>& mass, double alpha,
                       double s, double m) {
  std::vector<int> pos, neg;
  double total_pos = 0.0, total_neg = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] > 0.0) {
      pos.push_back(static_cast<int>(i));
      total_pos += mass[i];
    } else if (mass[i] < 0.0) {
      neg.push_back(static_cast<int>(i));
      total_neg -= mass[i];
    }
  }
  // Sources: positive nodes plus a ground node carrying the negative mass.
  // Sinks: negative nodes plus a ground node absorbing the positive mass.
  // Ground edges cost m, which encodes |h| <= m.
  const int ns = static_cast<int>(pos.size()) + 1;
  const int nt = static_cast<int>(neg.size()) + 1;
  Eigen::MatrixXd cost(ns, nt);
  for (int a = 0; a < ns - 1; ++a) {
    for (int b = 0; b < nt - 1; ++b) {
      const double d = (nodes[pos[a]] - nodes[neg[b]]).norm();
      cost(a, b) = std::min(s * std::pow(d, alpha), 2.0 * m);
    }
    cost(a, nt - 1) = m;
  }
  for (int b = 0; b < nt - 1; ++b) cost(ns - 1, b) = m;
  cost(ns - 1, nt - 1) = 0.0;
  std::vector<double> supply(ns), demand(nt);
  for (int a = 0; a < ns - 1; ++a) supply[a] = mass[pos[a]];
  supply[ns - 1] = total_neg;
  for (int b = 0; b < nt - 1; ++b) demand[b] = -mass[neg[b]];
  demand[nt - 1] = total_pos;
  return solve_transport(cost, supply, demand).cost;
}

HolderLpResult holder_lp(const std::vector<Eigen::Vector2d>& nodes, const std::vector<double>& mass, double alpha) {
  if (nodes.size() != mass.size()) throw Error(ErrorCode::InputError, "nodes and masses differ in length");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InputError, "alpha must lie in (0, 1]");
  HolderLpResult res;
  auto value = [&](double s) {
    ++res.evaluations;
    return holder_lp_fixed(nodes, mass, alpha, s, 1.0 - s);
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = value(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = value(x1);
    }
  }
  // endpoints too, in case the optimum sits on the boundary
  const double f_lo = value(0.0), f_hi = value(1.0);
  res.s = 0.5 * (lo + hi);
  res.value = std::max(f1, f2);
  if (f_lo > res.value) { res.value = f_lo; res.s = 0.0; }
  if (f_hi > res.value) { res.value = f_hi; res.s = 1.0; }
  res.m = 1.0 - res.s;
  return res;
}

}  // namespace steinshape
