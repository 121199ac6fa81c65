#include "causalkit/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace causalkit {

MixedGraph MixedGraph::with_nodes(const std::vector<std::string>& names) {
    MixedGraph g;
    for (const auto& n : names) g.add_node(n);
    return g;
}

int MixedGraph::add_node(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("node name must be non-empty");
    if (index_.count(name)) throw std::invalid_argument("duplicate node name: " + name);
    int idx = static_cast<int>(names_.size());
    names_.push_back(name);
    index_[name] = idx;
    return idx;
}

int MixedGraph::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

std::pair<int, int> MixedGraph::key(int i, int j) const {
    if (i == j) throw std::invalid_argument("self-loop");
    if (i < 0 || j < 0 || i >= node_count() || j >= node_count())
        throw std::invalid_argument("node index out of range");
    return {std::min(i, j), std::max(i, j)};
}

bool MixedGraph::has_edge(int i, int j) const { return edges_.count(key(i, j)) > 0; }

Mark MixedGraph::mark_at(int i, int j, int at) const {
    auto k = key(i, j);
    auto it = edges_.find(k);
    if (it == edges_.end()) throw std::invalid_argument("no such edge");
    return at == k.first ? it->second.first : it->second.second;
}

void MixedGraph::set_edge(int i, int j, Mark mark_at_i, Mark mark_at_j) {
    auto k = key(i, j);
    if (i < j)
        edges_[k] = {mark_at_i, mark_at_j};
    else
        edges_[k] = {mark_at_j, mark_at_i};
}

void MixedGraph::remove_edge(int i, int j) { edges_.erase(key(i, j)); }

bool MixedGraph::is_directed(int from, int to) const {
    if (!has_edge(from, to)) return false;
    return mark_at(from, to, from) == Mark::TAIL && mark_at(from, to, to) == Mark::ARROW;
}

bool MixedGraph::is_undirected_edge(int i, int j) const {
    if (!has_edge(i, j)) return false;
    return mark_at(i, j, i) == Mark::TAIL && mark_at(i, j, j) == Mark::TAIL;
}

bool MixedGraph::is_bidirected(int i, int j) const {
    if (!has_edge(i, j)) return false;
    return mark_at(i, j, i) == Mark::ARROW && mark_at(i, j, j) == Mark::ARROW;
}

std::vector<int> MixedGraph::adjacent(int i) const {
    std::vector<int> out;
    for (const auto& [k, m] : edges_) {
        if (k.first == i) out.push_back(k.second);
        else if (k.second == i) out.push_back(k.first);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> MixedGraph::parents(int i) const {
    std::vector<int> out;
    for (int j : adjacent(i))
        if (is_directed(j, i)) out.push_back(j);
    return out;
}

std::vector<int> MixedGraph::children(int i) const {
    std::vector<int> out;
    for (int j : adjacent(i))
        if (is_directed(i, j)) out.push_back(j);
    return out;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [k, m] : edges_) out.push_back(Edge{k.first, k.second, m.first, m.second});
    return out;
}

bool MixedGraph::operator==(const MixedGraph& other) const {
    std::set<std::string> a(names_.begin(), names_.end());
    std::set<std::string> b(other.names_.begin(), other.names_.end());
    if (a != b) return false;
    using PairMarks = std::pair<Mark, Mark>;
    auto canon = [](const MixedGraph& g) {
        std::map<std::pair<std::string, std::string>, PairMarks> m;
        for (const auto& e : g.edges()) {
            std::string na = g.name(e.a), nb = g.name(e.b);
            Mark ma = e.mark_at_a, mb = e.mark_at_b;
            if (nb < na) {
                std::swap(na, nb);
                std::swap(ma, mb);
            }
            m[{na, nb}] = {ma, mb};
        }
        return m;
    };
    return canon(*this) == canon(other);
}

// ---------------------------------------------------------------------------

Dag::Dag(MixedGraph g) : g_(std::move(g)) {
    for (const auto& e : g_.edges()) {
        bool ab = e.mark_at_a == Mark::TAIL && e.mark_at_b == Mark::ARROW;
        bool ba = e.mark_at_a == Mark::ARROW && e.mark_at_b == Mark::TAIL;
        if (!ab && !ba)
            throw std::invalid_argument("Dag: edge " + g_.name(e.a) + "," + g_.name(e.b) +
                                        " is not directed");
    }
    if (!is_acyclic(g_)) throw std::invalid_argument("Dag: directed cycle");
}

std::vector<int> Dag::topological_order() const {
    int p = g_.node_count();
    std::vector<int> indeg(static_cast<std::size_t>(p), 0);
    for (int v = 0; v < p; ++v) indeg[static_cast<std::size_t>(v)] = static_cast<int>(g_.parents(v).size());
    // name-sorted candidate order keeps the result deterministic
    std::vector<int> by_name(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) by_name[static_cast<std::size_t>(i)] = i;
    std::sort(by_name.begin(), by_name.end(),
              [&](int a, int b) { return g_.name(a) < g_.name(b); });
    std::vector<int> order;
    std::vector<bool> placed(static_cast<std::size_t>(p), false);
    while (static_cast<int>(order.size()) < p) {
        bool found = false;
        for (int v : by_name) {
            if (!placed[static_cast<std::size_t>(v)] && indeg[static_cast<std::size_t>(v)] == 0) {
                placed[static_cast<std::size_t>(v)] = true;
                order.push_back(v);
                for (int c : g_.children(v)) --indeg[static_cast<std::size_t>(c)];
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("topological_order: cycle in validated Dag");
    }
    return order;
}

// ---------------------------------------------------------------------------

void SepsetMap::set(int i, int j, std::vector<int> s) {
    std::sort(s.begin(), s.end());
    map_[{std::min(i, j), std::max(i, j)}] = std::move(s);
}

bool SepsetMap::has(int i, int j) const { return map_.count({std::min(i, j), std::max(i, j)}) > 0; }

const std::vector<int>& SepsetMap::get(int i, int j) const {
    auto it = map_.find({std::min(i, j), std::max(i, j)});
    if (it == map_.end()) throw std::invalid_argument("SepsetMap: no entry for pair");
    return it->second;
}

// ---------------------------------------------------------------------------

bool is_acyclic(const MixedGraph& g) {
    int p = g.node_count();
    std::vector<int> indeg(static_cast<std::size_t>(p), 0);
    std::vector<std::vector<int>> ch(static_cast<std::size_t>(p));
    for (const auto& e : g.edges()) {
        int from = -1, to = -1;
        if (e.mark_at_a == Mark::TAIL && e.mark_at_b == Mark::ARROW) { from = e.a; to = e.b; }
        else if (e.mark_at_a == Mark::ARROW && e.mark_at_b == Mark::TAIL) { from = e.b; to = e.a; }
        else continue;  // undirected/bidirected edges play no part
        ch[static_cast<std::size_t>(from)].push_back(to);
        ++indeg[static_cast<std::size_t>(to)];
    }
    std::deque<int> q;
    for (int v = 0; v < p; ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) q.push_back(v);
    int seen = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        ++seen;
        for (int c : ch[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(c)] == 0) q.push_back(c);
    }
    return seen == p;
}

bool d_separated(const Dag& dag, int x, int y, const std::vector<int>& z) {
    const MixedGraph& g = dag.graph();
    int p = g.node_count();
    auto check = [&](int v) {
        if (v < 0 || v >= p) throw std::invalid_argument("d_separated: unknown node index");
    };
    check(x);
    check(y);
    for (int v : z) check(v);
    if (x == y) throw std::invalid_argument("d_separated: x == y");
    std::vector<bool> in_z(static_cast<std::size_t>(p), false);
    for (int v : z) in_z[static_cast<std::size_t>(v)] = true;
    if (in_z[static_cast<std::size_t>(x)] || in_z[static_cast<std::size_t>(y)])
        throw std::invalid_argument("d_separated: endpoint inside conditioning set");

    // ancestors of z (z included)
    std::vector<bool> anz(static_cast<std::size_t>(p), false);
    std::deque<int> q;
    for (int v : z)
        if (!anz[static_cast<std::size_t>(v)]) {
            anz[static_cast<std::size_t>(v)] = true;
            q.push_back(v);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int par : g.parents(v))
            if (!anz[static_cast<std::size_t>(par)]) {
                anz[static_cast<std::size_t>(par)] = true;
                q.push_back(par);
            }
    }

    // reachability over (node, arrival direction); UP = arrived from a child
    enum { UP = 0, DOWN = 1 };
    std::vector<std::array<bool, 2>> visited(static_cast<std::size_t>(p), {false, false});
    std::deque<std::pair<int, int>> bfs;
    bfs.emplace_back(x, UP);
    while (!bfs.empty()) {
        auto [v, dir] = bfs.front();
        bfs.pop_front();
        if (visited[static_cast<std::size_t>(v)][static_cast<std::size_t>(dir)]) continue;
        visited[static_cast<std::size_t>(v)][static_cast<std::size_t>(dir)] = true;
        if (v == y) return false;
        if (dir == UP && !in_z[static_cast<std::size_t>(v)]) {
            for (int par : g.parents(v)) bfs.emplace_back(par, UP);
            for (int c : g.children(v)) bfs.emplace_back(c, DOWN);
        } else if (dir == DOWN) {
            if (!in_z[static_cast<std::size_t>(v)])
                for (int c : g.children(v)) bfs.emplace_back(c, DOWN);
            if (anz[static_cast<std::size_t>(v)])
                for (int par : g.parents(v)) bfs.emplace_back(par, UP);
        }
    }
    return true;
}

bool orient_or_conflict(MixedGraph& g, int from, int to) {
    if (!g.has_edge(from, to)) throw std::invalid_argument("orient_or_conflict: no edge");
    Mark at_from = g.mark_at(from, to, from);
    Mark at_to = g.mark_at(from, to, to);
    if (at_from == Mark::ARROW) {
        if (at_to != Mark::ARROW) g.set_edge(from, to, Mark::ARROW, Mark::ARROW);
        return false;  // second arrowhead: bidirected, never flipped
    }
    if (at_to != Mark::ARROW || at_from != Mark::TAIL) g.set_edge(from, to, Mark::TAIL, Mark::ARROW);
    return true;
}

namespace {

// Undirected pairs in deterministic (index) order.
std::vector<std::pair<int, int>> undirected_pairs(const MixedGraph& g) {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : g.edges())
        if (e.mark_at_a == Mark::TAIL && e.mark_at_b == Mark::TAIL) out.emplace_back(e.a, e.b);
    return out;
}

bool meek_rule_fires(const MixedGraph& g, int u, int v) {
    // would u -> v be compelled?
    // R1: w -> u, w and v nonadjacent
    for (int w : g.parents(u))
        if (w != v && !g.has_edge(w, v)) return true;
    // R2: u -> w -> v
    for (int w : g.children(u))
        if (w != v && g.is_directed(w, v)) return true;
    // R3: u - w1, u - w2, w1 -> v, w2 -> v, w1 and w2 nonadjacent
    std::vector<int> spouses;
    for (int w : g.adjacent(u))
        if (w != v && g.is_undirected_edge(u, w) && g.is_directed(w, v)) spouses.push_back(w);
    for (std::size_t i = 0; i < spouses.size(); ++i)
        for (std::size_t j = i + 1; j < spouses.size(); ++j)
            if (!g.has_edge(spouses[i], spouses[j])) return true;
    // R4: u - w1, w1 -> w2, w2 -> v, w1 and v nonadjacent, u and w2 adjacent
    for (int w1 : g.adjacent(u)) {
        if (w1 == v || !g.is_undirected_edge(u, w1) || g.has_edge(w1, v)) continue;
        for (int w2 : g.children(w1))
            if (w2 != u && g.is_directed(w2, v) && g.has_edge(u, w2)) return true;
    }
    return false;
}

}  // namespace

void meek_closure(MixedGraph& g, std::vector<std::pair<int, int>>* conflict_pairs) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [a, b] : undirected_pairs(g)) {
            if (!g.is_undirected_edge(a, b)) continue;  // may have been oriented this sweep
            // name order first, so that the outcome is independent of node
            // insertion order
            int u = g.name(a) < g.name(b) ? a : b;
            int v = u == a ? b : a;
            for (auto [from, to] : {std::pair{u, v}, std::pair{v, u}}) {
                if (!g.is_undirected_edge(from, to)) break;
                if (meek_rule_fires(g, from, to)) {
                    if (!orient_or_conflict(g, from, to) && conflict_pairs)
                        conflict_pairs->emplace_back(std::min(from, to), std::max(from, to));
                    changed = true;
                    break;
                }
            }
        }
    }
}

MixedGraph cpdag_of(const Dag& dag) {
    const MixedGraph& g = dag.graph();
    MixedGraph out = skeleton_of(g);
    // v-structures are the compelled anchors
    for (int c = 0; c < g.node_count(); ++c) {
        auto par = g.parents(c);
        for (std::size_t i = 0; i < par.size(); ++i)
            for (std::size_t j = i + 1; j < par.size(); ++j)
                if (!g.has_edge(par[i], par[j])) {
                    orient_or_conflict(out, par[i], c);
                    orient_or_conflict(out, par[j], c);
                }
    }
    meek_closure(out);
    return out;
}

MixedGraph skeleton_of(const MixedGraph& g) {
    MixedGraph out = MixedGraph::with_nodes(g.names());
    for (const auto& e : g.edges()) out.add_undirected(e.a, e.b);
    return out;
}

MixedGraph pad_to_nodes(const MixedGraph& g, const std::vector<std::string>& names) {
    MixedGraph out = MixedGraph::with_nodes(names);
    for (const auto& n : g.names())
        if (out.index_of(n) < 0)
            throw std::invalid_argument("pad_to_nodes: node " + n + " missing from target set");
    for (const auto& e : g.edges())
        out.set_edge(out.index_of(g.name(e.a)), out.index_of(g.name(e.b)), e.mark_at_a, e.mark_at_b);
    return out;
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// (src, dst, kind) with kind in {dir, undir, bidir}; directed edges in
// causal direction, others with lexicographically smaller name first.
struct NamedEdge {
    std::string src, dst, kind;
};

std::vector<NamedEdge> named_edges(const MixedGraph& g) {
    std::vector<NamedEdge> out;
    for (const auto& e : g.edges()) {
        std::string na = g.name(e.a), nb = g.name(e.b);
        bool arrow_a = e.mark_at_a == Mark::ARROW;
        bool arrow_b = e.mark_at_b == Mark::ARROW;
        if (arrow_a && arrow_b) {
            if (nb < na) std::swap(na, nb);
            out.push_back({na, nb, "bidir"});
        } else if (arrow_b) {
            out.push_back({na, nb, "dir"});
        } else if (arrow_a) {
            out.push_back({nb, na, "dir"});
        } else {
            if (nb < na) std::swap(na, nb);
            out.push_back({na, nb, "undir"});
        }
    }
    std::sort(out.begin(), out.end(), [](const NamedEdge& x, const NamedEdge& y) {
        auto kx = std::minmax(x.src, x.dst);
        auto ky = std::minmax(y.src, y.dst);
        return kx < ky;
    });
    return out;
}

}  // namespace

std::string to_dot(const MixedGraph& g) {
    std::ostringstream os;
    os << "digraph g {\n";
    std::vector<std::string> names = g.names();
    std::sort(names.begin(), names.end());
    for (const auto& n : names) os << "  " << quoted(n) << ";\n";
    for (const auto& e : named_edges(g)) {
        os << "  " << quoted(e.src) << " -> " << quoted(e.dst);
        if (e.kind == "undir") os << " [dir=none]";
        else if (e.kind == "bidir") os << " [dir=both, style=dashed]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_edge_list(const MixedGraph& g) {
    std::ostringstream os;
    std::vector<std::string> names = g.names();
    std::sort(names.begin(), names.end());
    for (const auto& n : names) os << "node\t" << n << "\n";
    for (const auto& e : named_edges(g)) os << e.src << "\t" << e.dst << "\t" << e.kind << "\n";
    return os.str();
}

MixedGraph from_edge_list(const std::string& text) {
    MixedGraph g;
    std::set<std::pair<std::string, std::string>> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": " + msg);
    };
    auto node_of = [&](const std::string& name) {
        int idx = g.index_of(name);
        return idx >= 0 ? idx : g.add_node(name);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> tok;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            tok.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (tok.size() == 2 && tok[0] == "node") {
            if (tok[1].empty()) fail("empty node name");
            if (g.index_of(tok[1]) >= 0) fail("duplicate node declaration: " + tok[1]);
            g.add_node(tok[1]);
        } else if (tok.size() == 3) {
            const std::string &src = tok[0], &dst = tok[1], &kind = tok[2];
            if (src.empty() || dst.empty()) fail("empty node name");
            if (src == dst) fail("self-loop: " + src);
            if (kind != "dir" && kind != "undir" && kind != "bidir")
                fail("unknown edge type: " + kind);
            auto pair_key = std::minmax(src, dst);
            if (!seen.insert(pair_key).second) fail("duplicate pair: " + src + "," + dst);
            int a = node_of(src), b = node_of(dst);
            if (kind == "dir") g.add_directed(a, b);
            else if (kind == "undir") g.add_undirected(a, b);
            else g.add_bidirected(a, b);
        } else {
            fail("malformed line");
        }
    }
    return g;
}

}  // namespace causalkit
