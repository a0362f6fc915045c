#pragma once

#include <map>
#include <tuple>
#include <vector>
#include <cstdint>
#include "qlab/rational.hpp"
#include "qlab/labels.hpp"

namespace qlab {

// Configuration graph on 1/N-separated points: edge between z_r and z_r' when
// the centered difference lies in the arc-rectangle union at the given level,
// with the witness cell recorded as a signed label.
struct ConfigGraph {
    std::vector<TorusPoint> vertices;
    i64 N = 1;
    DyadicLevel level;
    std::vector<std::vector<std::uint64_t>> adj_bits;  // R rows of ceil(R/64) words
    std::map<std::pair<int, int>, LabeledDiff> labels;  // key (i,j) with i<j

    int R() const { return (int)adj_bits.size(); }
    i64 edge_count() const;
    double K_emp() const;  // R^2/(2E); +inf when E = 0
    bool edgeless() const { return edge_count() == 0; }
    bool has_edge(int i, int j) const;
    void set_edge(int i, int j);
    LabeledDiff label(int i, int j) const;  // label of z_i - z_j (negated for i>j)
    i64 common_count(int i, int j) const;
    std::vector<int> common_neighbors(int i, int j) const;

    // adjacency-only graph (no points, no labels), for combinatorial queries
    static ConfigGraph from_adjacency(int R, const std::vector<std::pair<int, int>>& edges);
};

ConfigGraph build_graph(const std::vector<TorusPoint>& points, i64 N, const DyadicLevel& level,
                        const Rat& eps_c = Rat(1));

struct PopularResult {
    std::vector<std::pair<int, int>> pairs;  // unordered (i<j), common count >= R/(4K^2)
    i64 sum_common = 0;
};

PopularResult popular_pairs(const ConfigGraph& g, double K);

using DpfKey = std::tuple<i64, i64, i64>;  // dyadic blocks (D, P, F)

// common neighbors of (v1, v2) binned by the gcd profile of the labels of
// (v1 - v3) and (v3 - v2)
std::map<DpfKey, std::vector<int>> dpf_partition(const ConfigGraph& g, int v1, int v2);

struct DominantTriple {
    i64 D = 1, P = 1, F = 1;
    std::vector<std::pair<int, int>> popular_subset;  // pairs assigned to this key
    i64 group_sum = 0;                                // sum of |N_{D,P,F}| over the subset
};

DominantTriple dominant_triple(const ConfigGraph& g, double K);

struct ForkChain {
    int v1 = -1, v3 = -1;
    LabeledDiff handle;  // label of z_{v1} - z_{v3}
    i64 D = 1, P = 1, F = 1;
    std::vector<int> S, S_prime, S_dprime, S_tprime;
    i64 fixed_d = 1, fixed_p = 1, fixed_f = 1;
    // per-member labels of z_{v3} - z_{v2}, aligned with S
    std::map<int, LabeledDiff> member_label;
};

ForkChain extract_fork(const ConfigGraph& g, i64 D, i64 P, i64 F);

struct ForkReport {
    i64 pairs_checked = 0;
    i64 violations = 0;
};

// for every pair in S'': the reduced denominator of a2/q2 - a2'/q2' must
// divide (d/p) * m2 * m2'
ForkReport fork_structure_check(const ForkChain& fork);

struct ForkNeighborCount {
    i64 max_count = 0;
    double bound_ratio = 0.0;  // max_count / (N/2^{l1} * log2(N)^3)
};

ForkNeighborCount fork_dyadic_neighbor_count(const ConfigGraph& g, const ForkChain& fork,
                                             const DyadicLevel& level1);

}  // namespace qlab
