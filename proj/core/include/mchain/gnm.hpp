#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mchain/chain.hpp"
#include "mchain/hitting.hpp"

namespace mchain {

// Literal: the five edge rules as stated (one long edge per direction per
// vertex at n = 2).  Symmetric: both same-row and same-column long edges
// toward each of i +- m/4, which matches the cluster-walk arithmetic with
// long-move probability 1/6 at n = 2.
enum class LongEdgeRule { Literal, Symmetric };

// The cluster graph family: n^2 m vertices i(a,b) with i in Z_m and
// a,b in Z_n; short edges join everything in adjacent clusters, long edges
// reach the clusters a quarter of the way around.
class GnmGraph {
  public:
    GnmGraph(int n, int m, LongEdgeRule rule = LongEdgeRule::Literal);

    int n() const { return n_; }
    int m() const { return m_; }
    LongEdgeRule rule() const { return rule_; }
    std::size_t vertex_count() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(m_); }

    std::size_t vertex(int cluster, int a, int b) const;
    int cluster_of(std::size_t v) const;
    std::pair<int, int> coords_of(std::size_t v) const;
    std::string label(std::size_t v) const;  // "i(a,b)"

    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_[v]; }
    bool adjacent(std::size_t u, std::size_t v) const { return adj_matrix_[u * vertex_count() + v]; }
    bool edge_is_long(std::size_t u, std::size_t v) const;

    std::size_t degree(std::size_t v) const { return adj_[v].size(); }
    std::size_t edge_count() const;
    bool is_regular() const;
    bool is_connected() const;

    // Undirected edge set produced by one of the five numbered rules.
    std::set<std::pair<std::size_t, std::size_t>> rule_edges(int rule) const;

    // Simple (or lazy) random walk on the graph.
    template <class T>
    MarkovChain<T> walk_chain(bool lazy) const {
        const std::size_t count = vertex_count();
        Matrix<T> p(count, count);
        for (std::size_t v = 0; v < count; ++v) {
            T share = num_traits<T>::ratio(1, static_cast<long>(degree(v)));
            for (std::size_t w : adj_[v]) p(v, w) += share;
        }
        MarkovChain<T> chain{std::move(p)};
        return lazy ? lazify(chain) : chain;
    }

  private:
    int n_, m_;
    LongEdgeRule rule_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<bool> adj_matrix_;
    std::set<std::pair<std::size_t, std::size_t>> long_edges_;

    void add_edge(std::size_t u, std::size_t v, bool is_long);
};

struct TransitivityResult {
    bool pass = false;
    std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
    std::size_t pairs_checked = 0;
};

// For every ordered vertex pair, builds the translation automorphism
// (coordinate-swapped when the cluster shift is odd) and verifies it is a
// bijection preserving the edge set exactly.
TransitivityResult check_transitivity(const GnmGraph& g);

// Same check restricted to sampled pairs, for larger graphs.
TransitivityResult check_transitivity_sampled(const GnmGraph& g, std::size_t pairs, std::uint64_t seed);

// Circulant cluster walk on Z_m: steps +-1 and +-m/4.
struct ClusterChain {
    int m = 0;
    Rat q_step;     // q(+1) = q(-1)
    Rat q_quarter;  // q(+m/4) = q(-m/4)

    MarkovChain<Rat> chain() const;
    // h(k) = expected time for the cluster walk to cover distance k.
    std::vector<Rat> hitting_by_distance() const;
};

// Projects the simple walk on g onto cluster indices.  Verifies strong
// lumpability (per-cluster edge counts independent of the vertex) and the
// circulant symmetry; throws NotLumpable with a witness otherwise.
ClusterChain lump_to_clusters(const GnmGraph& g);

// The circulant law consistent with the shuttle probability 1/6 and the
// conditional exit weights (2/5, 2/5, 1/5): q(+-1) = 1/3, q(+-m/4) = 1/6.
ClusterChain paper_cluster_chain(int m);

struct ShuttleExpectation {
    Rat a1, a2;                 // expected remainders after leaving the shuttle, by parity
    Rat odd_mass, even_mass;    // P(X odd), P(X even) for the geometric exit time
    Rat accounting;             // 1 + sum_odd A1 + sum_even A2
    Rat direct;                 // absorbing-chain solve on (shuttle endpoint, parity)
    Rat h_far;                  // E[0 -> m/2], the value both must stay below
};

// Expected time to reach the quarter cluster without crossing the shuttle
// edge directly, computed both by the geometric-series accounting and by a
// first-principles absorbing chain.
ShuttleExpectation shuttle_expectation(const ClusterChain& cc);

// Expected hitting time of target_vertex from the uniform distribution on
// its own cluster (the constant z of the uniform-arrival argument).
Rat uniform_cluster_hitting(const GnmGraph& g, int cluster, std::size_t target_vertex);

struct CounterexampleReport {
    Rat static_max;
    std::size_t static_argmax = 0;
    Rat best_moving;
    std::size_t best_wait_vertex = 0;
    long best_wait_steps = 0;
    std::size_t best_final_vertex = 0;
    Rat margin;  // best_moving - static_max
    Rat paper_trajectory_value;  // wait 2 steps at 5(1,1), then 6(1,1); 0 if m != 12
    bool pass = false;           // margin > 0 in exact arithmetic
};

// Enumerates wait-then-move trajectories (stay at u through time w, then
// constant at v) for the walk started at 0(0,0) and compares the best
// against the best static target.  Exact rationals throughout.
CounterexampleReport certify_counterexample(const GnmGraph& g, bool lazy, long wait_budget);

}  // namespace mchain
