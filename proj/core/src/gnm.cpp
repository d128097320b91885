#include "mchain/gnm.hpp"

#include <algorithm>
#include <queue>
#include <random>

#include "mchain/mc.hpp"

namespace mchain {

GnmGraph::GnmGraph(int n, int m, LongEdgeRule rule) : n_(n), m_(m), rule_(rule) {
    if (n < 2) throw InvalidParams("G_{n,m} needs n >= 2");
    if (m < 8 || m % 4 != 0) throw InvalidParams("G_{n,m} needs m divisible by 4 and m >= 8");
    const std::size_t count = vertex_count();
    adj_.assign(count, {});
    adj_matrix_.assign(count * count, false);
    for (int rule_id = 1; rule_id <= 5; ++rule_id)
        for (const auto& [u, v] : rule_edges(rule_id)) add_edge(u, v, rule_id != 1);
    if (rule_ == LongEdgeRule::Symmetric) {
        // Mirror every long rule across row/column so each vertex reaches
        // both i + m/4 and i - m/4 along its row and along its column.
        for (std::size_t v = 0; v < count; ++v) {
            int i = cluster_of(v);
            auto [a, b] = coords_of(v);
            for (int dir : {m_ / 4, -m_ / 4}) {
                int j = ((i + dir) % m_ + m_) % m_;
                for (int x = 0; x < n_; ++x) {
                    if (x != b) add_edge(v, vertex(j, a, x), true);  // same row
                    if (x != a) add_edge(v, vertex(j, x, b), true);  // same column
                }
            }
        }
    }
}

void GnmGraph::add_edge(std::size_t u, std::size_t v, bool is_long) {
    if (u == v) throw InvalidParams("self-loop in G_{n,m} construction");
    if (adj_matrix_[u * vertex_count() + v]) return;
    adj_matrix_[u * vertex_count() + v] = true;
    adj_matrix_[v * vertex_count() + u] = true;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    if (is_long) long_edges_.insert({std::min(u, v), std::max(u, v)});
}

std::size_t GnmGraph::vertex(int cluster, int a, int b) const {
    return (static_cast<std::size_t>(cluster) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a)) *
               static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(b);
}

int GnmGraph::cluster_of(std::size_t v) const {
    return static_cast<int>(v / (static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_)));
}

std::pair<int, int> GnmGraph::coords_of(std::size_t v) const {
    std::size_t rem = v % (static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    return {static_cast<int>(rem / static_cast<std::size_t>(n_)), static_cast<int>(rem % static_cast<std::size_t>(n_))};
}

std::string GnmGraph::label(std::size_t v) const {
    auto [a, b] = coords_of(v);
    return std::to_string(cluster_of(v)) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

bool GnmGraph::edge_is_long(std::size_t u, std::size_t v) const {
    return long_edges_.count({std::min(u, v), std::max(u, v)}) > 0;
}

std::size_t GnmGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : adj_) total += nb.size();
    return total / 2;
}

bool GnmGraph::is_regular() const {
    for (const auto& nb : adj_)
        if (nb.size() != adj_[0].size()) return false;
    return true;
}

bool GnmGraph::is_connected() const {
    const std::size_t count = vertex_count();
    std::vector<char> seen(count, 0);
    std::queue<std::size_t> queue;
    queue.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop();
        for (std::size_t w : adj_[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                queue.push(w);
            }
    }
    return reached == count;
}

std::set<std::pair<std::size_t, std::size_t>> GnmGraph::rule_edges(int rule) const {
    std::set<std::pair<std::size_t, std::size_t>> edges;
    auto put = [&edges](std::size_t u, std::size_t v) { edges.insert({std::min(u, v), std::max(u, v)}); };
    for (int i = 0; i < m_; ++i) {
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) {
                std::size_t u = vertex(i, a, b);
                switch (rule) {
                    case 1:
                        for (int j : {(i + 1) % m_, (i - 1 + m_) % m_})
                            for (int c = 0; c < n_; ++c)
                                for (int d = 0; d < n_; ++d) put(u, vertex(j, c, d));
                        break;
                    case 2:
                        if (i % 2 == 0) {
                            int j = (i + m_ / 4) % m_;
                            for (int d = 0; d < n_; ++d)
                                if (d != b) put(u, vertex(j, a, d));
                        }
                        break;
                    case 3:
                        if (i % 2 == 0) {
                            int j = ((i - m_ / 4) % m_ + m_) % m_;
                            for (int c = 0; c < n_; ++c)
                                if (c != a) put(u, vertex(j, c, b));
                        }
                        break;
                    case 4:
                        if (i % 2 == 1) {
                            int j = (i + m_ / 4) % m_;
                            for (int c = 0; c < n_; ++c)
                                if (c != a) put(u, vertex(j, c, b));
                        }
                        break;
                    case 5:
                        if (i % 2 == 1) {
                            int j = ((i - m_ / 4) % m_ + m_) % m_;
                            for (int d = 0; d < n_; ++d)
                                if (d != b) put(u, vertex(j, a, d));
                        }
                        break;
                    default:
                        throw InvalidParams("rule must be 1..5");
                }
            }
    }
    return edges;
}

namespace {

TransitivityResult check_pairs(const GnmGraph& g,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    const std::size_t count = g.vertex_count();
    TransitivityResult result;
    for (const auto& [from, to] : pairs) {
        int i = g.cluster_of(from), j = g.cluster_of(to);
        auto [a, b] = g.coords_of(from);
        auto [c, d] = g.coords_of(to);
        int shift = ((j - i) % g.m() + g.m()) % g.m();
        bool odd_shift = shift % 2 == 1;

        std::vector<std::size_t> phi(count);
        std::vector<char> image_seen(count, 0);
        bool bijective = true;
        for (std::size_t v = 0; v < count; ++v) {
            int k = g.cluster_of(v);
            auto [u_coord, v_coord] = g.coords_of(v);
            int k2 = (k + shift) % g.m();
            int x, y;
            if (odd_shift) {
                x = ((v_coord + c - b) % g.n() + g.n()) % g.n();
                y = ((u_coord + d - a) % g.n() + g.n()) % g.n();
            } else {
                x = ((u_coord + c - a) % g.n() + g.n()) % g.n();
                y = ((v_coord + d - b) % g.n() + g.n()) % g.n();
            }
            phi[v] = g.vertex(k2, x, y);
            if (image_seen[phi[v]]) bijective = false;
            image_seen[phi[v]] = 1;
        }

        bool ok = bijective && phi[from] == to;
        if (ok) {
            for (std::size_t v = 0; v < count && ok; ++v)
                for (std::size_t w : g.neighbors(v))
                    if (!g.adjacent(phi[v], phi[w])) {
                        ok = false;
                        break;
                    }
        }
        ++result.pairs_checked;
        if (!ok) {
            result.failing_pair = {from, to};
            result.pass = false;
            return result;
        }
    }
    result.pass = true;
    return result;
}

}  // namespace

TransitivityResult check_transitivity(const GnmGraph& g) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t count = g.vertex_count();
    pairs.reserve(count * count);
    for (std::size_t x = 0; x < count; ++x)
        for (std::size_t y = 0; y < count; ++y) pairs.push_back({x, y});
    return check_pairs(g, pairs);
}

TransitivityResult check_transitivity_sampled(const GnmGraph& g, std::size_t n_pairs, std::uint64_t seed) {
    std::mt19937_64 rng = substream(seed, 0);
    std::uniform_int_distribution<std::size_t> pick(0, g.vertex_count() - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n_pairs);
    for (std::size_t k = 0; k < n_pairs; ++k) pairs.push_back({pick(rng), pick(rng)});
    return check_pairs(g, pairs);
}

MarkovChain<Rat> ClusterChain::chain() const {
    Matrix<Rat> p(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        auto to = [&](int j) -> Rat& { return p(static_cast<std::size_t>(i), static_cast<std::size_t>(((j % m) + m) % m)); };
        to(i + 1) += q_step;
        to(i - 1) += q_step;
        to(i + m / 4) += q_quarter;
        to(i - m / 4) += q_quarter;
    }
    return MarkovChain<Rat>(p);
}

std::vector<Rat> ClusterChain::hitting_by_distance() const {
    MarkovChain<Rat> c = chain();
    std::vector<Rat> h = static_hitting(c, StateSet::singleton(static_cast<std::size_t>(m), 0));
    std::vector<Rat> by_dist(static_cast<std::size_t>(m / 2) + 1, Rat(0));
    for (int k = 1; k <= m / 2; ++k) by_dist[static_cast<std::size_t>(k)] = h[static_cast<std::size_t>(k)];
    return by_dist;
}

ClusterChain lump_to_clusters(const GnmGraph& g) {
    const int m = g.m();
    // Per-cluster edge counts must depend only on the vertex's own cluster.
    std::vector<std::vector<std::size_t>> reference(static_cast<std::size_t>(m));
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        std::vector<std::size_t> counts(static_cast<std::size_t>(m), 0);
        for (std::size_t w : g.neighbors(v)) ++counts[static_cast<std::size_t>(g.cluster_of(w))];
        int i = g.cluster_of(v);
        auto& ref = reference[static_cast<std::size_t>(i)];
        if (ref.empty()) {
            ref = counts;
        } else if (ref != counts) {
            throw NotLumpable("cluster edge counts differ inside cluster " + std::to_string(i) +
                              " (witness vertex " + g.label(v) + ")");
        }
    }
    const auto& row0 = reference[0];
    std::size_t deg = 0;
    for (std::size_t c : row0) deg += c;
    auto count_to = [&](int j) { return row0[static_cast<std::size_t>(((j % m) + m) % m)]; };
    // Circulant symmetry across clusters and directions.
    for (int i = 0; i < m; ++i) {
        const auto& row = reference[static_cast<std::size_t>(i)];
        for (int delta = 0; delta < m; ++delta)
            if (row[static_cast<std::size_t>((i + delta) % m)] != count_to(delta))
                throw NotLumpable("cluster chain is not circulant");
    }
    if (count_to(1) != count_to(-1) || count_to(m / 4) != count_to(-m / 4))
        throw NotLumpable("cluster chain lacks directional symmetry");

    ClusterChain cc;
    cc.m = m;
    cc.q_step = make_ratio(static_cast<long>(count_to(1)), static_cast<long>(deg));
    cc.q_quarter = make_ratio(static_cast<long>(count_to(m / 4)), static_cast<long>(deg));
    return cc;
}

ClusterChain paper_cluster_chain(int m) {
    if (m != 12) throw InvalidParams("the published cluster law is stated for m = 12");
    ClusterChain cc;
    cc.m = m;
    cc.q_step = make_ratio(1, 3);
    cc.q_quarter = make_ratio(1, 6);
    return cc;
}

ShuttleExpectation shuttle_expectation(const ClusterChain& cc) {
    if (cc.m != 12) throw InvalidParams("shuttle computation is specific to m = 12");
    std::vector<Rat> h = cc.hitting_by_distance();
    const Rat p = cc.q_quarter;  // probability of crossing the shuttle edge
    const Rat q = Rat(1) - p;

    ShuttleExpectation se;
    // Leaving the 0-endpoint: clusters 1, 11, 9 sit at distances 2, 4, 6
    // from cluster 3; leaving the 3-endpoint: clusters 2, 4, 6 at 1, 1, 3.
    se.a1 = (cc.q_step * h[2] + cc.q_step * h[4] + cc.q_quarter * h[6]) / q;
    se.a2 = (cc.q_step * h[1] + cc.q_step * h[1] + cc.q_quarter * h[3]) / q;
    se.odd_mass = q / (Rat(1) - p * p);
    se.even_mass = q * p / (Rat(1) - p * p);
    se.accounting = Rat(1) + se.odd_mass * se.a1 + se.even_mass * se.a2;

    // Absorbing chain on (shuttle endpoint, parity): from either endpoint
    // the walk crosses the shuttle with probability p, else exits and needs
    // the plain cluster hitting time of cluster 3 from where it landed.
    //   u = 1 + p w + (1-p) A1,   w = 1 + p u + (1-p) A2
    Rat u = (Rat(1) + q * se.a1 + p * (Rat(1) + q * se.a2)) / (Rat(1) - p * p);
    se.direct = u;
    se.h_far = h[6];
    return se;
}

Rat uniform_cluster_hitting(const GnmGraph& g, int cluster, std::size_t target_vertex) {
    if (g.cluster_of(target_vertex) != cluster) throw InvalidParams("target vertex not in the named cluster");
    MarkovChain<Rat> chain = g.walk_chain<Rat>(false);
    std::vector<Rat> h = static_hitting(chain, StateSet::singleton(chain.n(), target_vertex));
    Rat total(0);
    long count = 0;
    for (int a = 0; a < g.n(); ++a)
        for (int b = 0; b < g.n(); ++b) {
            total += h[g.vertex(cluster, a, b)];
            ++count;
        }
    return total / Rat(count);
}

CounterexampleReport certify_counterexample(const GnmGraph& g, bool lazy, long wait_budget) {
    if (wait_budget < 0) throw InvalidParams("wait budget must be nonnegative");
    MarkovChain<Rat> chain = g.walk_chain<Rat>(lazy);
    const std::size_t count = chain.n();
    const std::size_t start = g.vertex(0, 0, 0);

    // By transitivity the maximum over starting states is attained from any
    // fixed start, so both searches pin the walker at 0(0,0).
    std::vector<std::vector<Rat>> hit(count);
    for (std::size_t v = 0; v < count; ++v)
        hit[v] = static_hitting(chain, StateSet::singleton(count, v));

    CounterexampleReport report;
    report.static_max = 0;
    for (std::size_t v = 0; v < count; ++v) {
        if (hit[v][start] > report.static_max) {
            report.static_max = hit[v][start];
            report.static_argmax = v;
        }
    }

    report.best_moving = 0;
    for (std::size_t u = 0; u < count; ++u) {
        // Survival through f(0..w) = u, then constant v: masses masked by
        // {u} each step; the tail term reuses the precomputed hitting rows.
        std::vector<Rat> cur(count, Rat(0));
        if (start != u) cur[start] = 1;
        Rat acc(0);
        for (const Rat& x : cur) acc += x;
        for (long w = 0; w <= wait_budget; ++w) {
            if (w > 0) {
                std::vector<Rat> stepped(count, Rat(0));
                for (std::size_t z = 0; z < count; ++z) {
                    if (cur[z] == 0) continue;
                    for (std::size_t y = 0; y < count; ++y) {
                        const Rat& p = chain.prob(z, y);
                        if (p == 0) continue;
                        if (y != u) stepped[y] += cur[z] * p;
                    }
                }
                cur.swap(stepped);
                for (const Rat& x : cur) acc += x;
            }
            std::vector<Rat> arrived(count, Rat(0));
            for (std::size_t z = 0; z < count; ++z) {
                if (cur[z] == 0) continue;
                for (std::size_t y = 0; y < count; ++y) {
                    const Rat& p = chain.prob(z, y);
                    if (p == 0) continue;
                    arrived[y] += cur[z] * p;
                }
            }
            for (std::size_t v = 0; v < count; ++v) {
                Rat value = acc;
                for (std::size_t y = 0; y < count; ++y)
                    if (arrived[y] != 0) value += arrived[y] * hit[v][y];
                if (value > report.best_moving) {
                    report.best_moving = value;
                    report.best_wait_vertex = u;
                    report.best_wait_steps = w;
                    report.best_final_vertex = v;
                }
            }
        }
    }

    report.margin = report.best_moving - report.static_max;
    report.pass = report.margin > 0;

    if (g.m() == 12 && g.n() == 2 && wait_budget >= 2) {
        std::size_t u = g.vertex(5, 1, 1), v = g.vertex(6, 1, 1);
        SetSequence seq(std::vector<StateSet>(3, StateSet::singleton(count, u)),
                        StateSet::singleton(count, v));
        report.paper_trajectory_value = moving_hitting(chain, start, seq);
    }
    return report;
}

}  // namespace mchain
