#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/SparseCore>

#include "satdomain/overhead.hpp"

namespace satdomain {

struct PairCosts {
  double flow = 0.0;
  double sync = 0.0;
  double mig = 0.0;
};

/// Pairwise cost terms for one link with rates in both directions, bandwidth in bits/s.
PairCosts link_costs(double rate_ij, double rate_ji, double bandwidth, double distance_km, const Vec3& vel_i,
                     const Vec3& vel_j, bool mobile_pair, const OverheadParams& p);

/// Costs for an ISL-adjacent LEO pair.
PairCosts pairwise_costs(NodeId i, NodeId j, const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                         const OverheadParams& p);

/// |v_i/|v_i| - v_j/|v_j|| / 2 * mig_unit_s.
double velocity_divergence(const Vec3& vi, const Vec3& vj, double mig_unit_s);

/// xi = alpha W_FLOW + beta W_SYNC + (1 - alpha - beta) W_MIG.
double edge_weight(const PairCosts& c, double alpha = 0.5, double beta = 0.3);

struct CorgEdge {
  std::size_t a = 0;  // local indices, a < b
  std::size_t b = 0;
  double xi = 0.0;
};

/// Region LEOs (local indices [0, num_leos)) followed by one virtual node per competing controller.
struct Corg {
  std::vector<NodeId> node_ids;
  std::vector<bool> virtual_flags;
  std::vector<CorgEdge> edges;
  std::size_t num_leos = 0;

  std::size_t size() const { return node_ids.size(); }
  std::size_t num_virtual() const { return node_ids.size() - num_leos; }
};

Corg build_corg(const OverlapRegion& region, const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                const Coverage& cov, const OverheadParams& p);

void write_corg_edges(std::ostream& os, const Corg& g);

/// Symmetric Gaussian-kernel similarity, unit diagonal, zero for absent pairs.
struct SimilarityMatrix {
  Eigen::SparseMatrix<double> s;
  double sigma = 1.0;
};

/// Kernel bandwidth: sqrt(median(positive xi) / 2), so the median edge maps to e^-1; 1 when no xi is positive.
double default_sigma(const Corg& g);

SimilarityMatrix similarity(const Corg& g, std::optional<double> sigma = std::nullopt);

}  // namespace satdomain
