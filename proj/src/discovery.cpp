#include "causalkit/discovery.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "causalkit/score.hpp"

namespace causalkit {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

// indices sorted by variable name, the canonical iteration order
std::vector<int> name_order(const std::vector<std::string>& vars) {
    std::vector<int> order(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vars[static_cast<std::size_t>(a)] < vars[static_cast<std::size_t>(b)]; });
    return order;
}

// Size-m combinations of `pool` (already in canonical order), visited in
// lexicographic order. Returns true if fn accepted one (early exit).
bool for_each_combination(const std::vector<int>& pool, int m,
                          const std::function<bool(const std::vector<int>&)>& fn) {
    int n = static_cast<int>(pool.size());
    if (m > n) return false;
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<int> subset(static_cast<std::size_t>(m));
    while (true) {
        for (int i = 0; i < m; ++i)
            subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        if (fn(subset)) return true;
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) return false;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

void check_vars(const CiTester& tester, const std::vector<std::string>& vars) {
    if (static_cast<int>(vars.size()) != tester.var_count())
        throw std::invalid_argument("discovery: vars/tester size mismatch");
    std::set<std::string> uniq(vars.begin(), vars.end());
    if (uniq.size() != vars.size()) throw std::invalid_argument("discovery: duplicate variable name");
}

// v-structure orientation plus Meek closure, shared by ic and pc.
void orient_from_sepsets(MixedGraph& g, const SepsetMap& sepsets, const std::vector<int>& order) {
    for (std::size_t ai = 0; ai < order.size(); ++ai) {
        for (std::size_t bi = ai + 1; bi < order.size(); ++bi) {
            int a = order[ai], b = order[bi];
            if (g.has_edge(a, b) || !sepsets.has(a, b)) continue;
            const std::vector<int>& s = sepsets.get(a, b);
            for (int c : order) {
                if (c == a || c == b || !g.has_edge(a, c) || !g.has_edge(b, c)) continue;
                if (std::find(s.begin(), s.end(), c) != s.end()) continue;
                orient_or_conflict(g, a, c);
                orient_or_conflict(g, b, c);
            }
        }
    }
    meek_closure(g);
}

std::vector<std::pair<std::string, std::string>> bidirected_pairs(const MixedGraph& g) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : g.edges()) {
        if (e.mark_at_a != Mark::ARROW || e.mark_at_b != Mark::ARROW) continue;
        std::string na = g.name(e.a), nb = g.name(e.b);
        if (nb < na) std::swap(na, nb);
        out.emplace_back(na, nb);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

DiscoveryResult ic_algorithm(const CiTester& tester, const std::vector<std::string>& vars,
                             int max_cond) {
    if (max_cond < 0) throw std::invalid_argument("ic_algorithm: max_cond must be >= 0");
    check_vars(tester, vars);
    auto t0 = Clock::now();
    DiscoveryResult res;
    res.algorithm = "ic";
    res.graph = MixedGraph::with_nodes(vars);
    std::vector<int> order = name_order(vars);

    // step 1: exhaustive sepset search per pair
    for (std::size_t ai = 0; ai < order.size(); ++ai) {
        for (std::size_t bi = ai + 1; bi < order.size(); ++bi) {
            int a = order[ai], b = order[bi];
            std::vector<int> pool;
            for (int c : order)
                if (c != a && c != b) pool.push_back(c);
            bool separated = false;
            int depth_cap = std::min(max_cond, static_cast<int>(pool.size()));
            for (int m = 0; m <= depth_cap && !separated; ++m) {
                separated = for_each_combination(pool, m, [&](const std::vector<int>& s) {
                    ++res.stats.ci_calls;
                    if (!tester.test(a, b, s).independent) return false;
                    res.sepsets.set(a, b, s);
                    return true;
                });
            }
            if (!separated) res.graph.add_undirected(a, b);
        }
    }

    orient_from_sepsets(res.graph, res.sepsets, order);
    res.latent_edges = bidirected_pairs(res.graph);
    res.stats.elapsed_ms = ms_since(t0);
    return res;
}

DiscoveryResult pc(const CiTester& tester, const std::vector<std::string>& vars, int max_cond) {
    if (max_cond < 0) throw std::invalid_argument("pc: max_cond must be >= 0");
    check_vars(tester, vars);
    auto t0 = Clock::now();
    DiscoveryResult res;
    res.algorithm = "pc";
    res.graph = MixedGraph::with_nodes(vars);
    std::vector<int> order = name_order(vars);

    for (std::size_t ai = 0; ai < order.size(); ++ai)
        for (std::size_t bi = ai + 1; bi < order.size(); ++bi)
            res.graph.add_undirected(order[ai], order[bi]);

    for (int depth = 0; depth <= max_cond; ++depth) {
        // stable variant: adjacency sets frozen before this depth's removals
        std::map<int, std::vector<int>> frozen;
        bool any_big_enough = false;
        for (int v : order) {
            std::vector<int> adj = res.graph.adjacent(v);
            std::sort(adj.begin(), adj.end(), [&](int x, int y) {
                return vars[static_cast<std::size_t>(x)] < vars[static_cast<std::size_t>(y)];
            });
            if (static_cast<int>(adj.size()) >= depth + 1) any_big_enough = true;
            frozen[v] = std::move(adj);
        }
        if (!any_big_enough) break;

        for (int a : order) {
            for (int b : frozen[a]) {
                if (!res.graph.has_edge(a, b)) continue;
                std::vector<int> pool;
                for (int c : frozen[a])
                    if (c != b) pool.push_back(c);
                bool separated = for_each_combination(pool, depth, [&](const std::vector<int>& s) {
                    ++res.stats.ci_calls;
                    if (!tester.test(a, b, s).independent) return false;
                    res.sepsets.set(a, b, s);
                    return true;
                });
                if (separated) res.graph.remove_edge(a, b);
            }
        }
    }

    orient_from_sepsets(res.graph, res.sepsets, order);
    res.latent_edges = bidirected_pairs(res.graph);
    res.stats.elapsed_ms = ms_since(t0);
    return res;
}

namespace {

// directed path from u to v?
bool has_path(const MixedGraph& g, int u, int v) {
    std::deque<int> q{u};
    std::set<int> seen{u};
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        if (x == v) return true;
        for (int c : g.children(x))
            if (seen.insert(c).second) q.push_back(c);
    }
    return false;
}

struct Move {
    int type = 0;  // 0 add, 1 delete, 2 reverse
    int src = -1, dst = -1;
    double delta = 0.0;
};

}  // namespace

DiscoveryResult hill_climb(const Dataset& ds, int max_parents, int max_iters, std::uint64_t seed) {
    if (max_parents < 0) throw std::invalid_argument("hill_climb: max_parents must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("hill_climb: max_iters must be >= 1");
    (void)seed;  // reserved for restart perturbations (restarts: 0)
    auto t0 = Clock::now();

    DiscoveryResult res;
    res.algorithm = "hc";
    std::vector<std::string> vars = ds.names();
    res.graph = MixedGraph::with_nodes(vars);
    std::vector<int> order = name_order(vars);
    int p = static_cast<int>(vars.size());

    LocalScoreCache cache;
    auto local = [&](int v, std::vector<int> parents) {
        std::sort(parents.begin(), parents.end());
        double s;
        if (cache.lookup(v, parents, &s)) return s;
        ++res.stats.score_evals;
        s = local_bic(ds, v, parents);
        cache.store(v, parents, s);
        return s;
    };

    std::vector<double> node_score(static_cast<std::size_t>(p));
    double total = 0.0;
    for (int v = 0; v < p; ++v) {
        node_score[static_cast<std::size_t>(v)] = local(v, {});
        total += node_score[static_cast<std::size_t>(v)];
    }
    res.stats.score_trajectory.push_back(total);

    auto parents_of = [&](int v) { return res.graph.parents(v); };

    for (int iter = 0; iter < max_iters; ++iter) {
        Move best;
        bool have_best = false;
        auto consider = [&](const Move& m) {
            if (m.delta <= 0.0) return;
            if (!have_best || m.delta > best.delta) {
                best = m;
                have_best = true;
            }
            // equal deltas: the enumeration order already encodes the
            // add < delete < reverse, then (src, dst) tie-break
        };

        // adds
        for (int u : order)
            for (int v : order) {
                if (u == v || res.graph.has_edge(u, v)) continue;
                if (static_cast<int>(parents_of(v).size()) + 1 > max_parents) continue;
                if (has_path(res.graph, v, u)) continue;
                std::vector<int> pa = parents_of(v);
                pa.push_back(u);
                double d = local(v, pa) - node_score[static_cast<std::size_t>(v)];
                consider({0, u, v, d});
            }
        // deletes
        for (int u : order)
            for (int v : order) {
                if (u == v || !res.graph.is_directed(u, v)) continue;
                std::vector<int> pa;
                for (int x : parents_of(v))
                    if (x != u) pa.push_back(x);
                double d = local(v, pa) - node_score[static_cast<std::size_t>(v)];
                consider({1, u, v, d});
            }
        // reversals
        for (int u : order)
            for (int v : order) {
                if (u == v || !res.graph.is_directed(u, v)) continue;
                if (static_cast<int>(parents_of(u).size()) + 1 > max_parents) continue;
                res.graph.remove_edge(u, v);
                bool cycle = has_path(res.graph, u, v);
                res.graph.add_directed(u, v);
                if (cycle) continue;
                std::vector<int> pa_u = parents_of(u);
                pa_u.push_back(v);
                std::vector<int> pa_v;
                for (int x : parents_of(v))
                    if (x != u) pa_v.push_back(x);
                double d = (local(u, pa_u) - node_score[static_cast<std::size_t>(u)]) +
                           (local(v, pa_v) - node_score[static_cast<std::size_t>(v)]);
                consider({2, u, v, d});
            }

        if (!have_best) break;

        if (best.type == 0) {
            res.graph.add_directed(best.src, best.dst);
        } else if (best.type == 1) {
            res.graph.remove_edge(best.src, best.dst);
        } else {
            res.graph.remove_edge(best.src, best.dst);
            res.graph.add_directed(best.dst, best.src);
        }
        for (int v : {best.src, best.dst})
            node_score[static_cast<std::size_t>(v)] = local(v, parents_of(v));
        total = 0.0;
        for (int v = 0; v < p; ++v) total += node_score[static_cast<std::size_t>(v)];
        res.stats.score_trajectory.push_back(total);
    }

    res.stats.elapsed_ms = ms_since(t0);
    return res;
}

std::vector<std::pair<std::string, std::string>> detect_latent_edges(const DiscoveryResult& result) {
    return bidirected_pairs(result.graph);
}

}  // namespace causalkit
