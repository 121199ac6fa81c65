#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace causalkit {

// Endpoint mark of a mixed-graph edge. TAIL/ARROW cover directed,
// undirected and bidirected edges; CIRCLE is the unresolved mark.
enum class Mark { TAIL, ARROW, CIRCLE };

// One edge between nodes a < b (canonical storage order; the ordering is
// storage only, the semantics live in the endpoint marks).
struct Edge {
    int a = 0;
    int b = 0;
    Mark mark_at_a = Mark::TAIL;
    Mark mark_at_b = Mark::TAIL;
};

// Graph with named nodes and at most one marked edge per unordered pair.
// Instances are treated as immutable once built; all mutating members are
// meant for construction and for the discovery algorithms that own the
// graph they are editing.
class MixedGraph {
public:
    MixedGraph() = default;
    static MixedGraph with_nodes(const std::vector<std::string>& names);

    // Returns the index of the new node. Duplicate names are an error.
    int add_node(const std::string& name);

    int node_count() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& names() const { return names_; }

    // -1 when the name is unknown.
    int index_of(const std::string& name) const;
    bool has_node(const std::string& name) const { return index_of(name) >= 0; }

    bool has_edge(int i, int j) const;
    // Mark at the `at` end of edge {i, j}; edge must exist.
    Mark mark_at(int i, int j, int at) const;

    void set_edge(int i, int j, Mark mark_at_i, Mark mark_at_j);
    void remove_edge(int i, int j);

    void add_directed(int from, int to) { set_edge(from, to, Mark::TAIL, Mark::ARROW); }
    void add_undirected(int i, int j) { set_edge(i, j, Mark::TAIL, Mark::TAIL); }
    void add_bidirected(int i, int j) { set_edge(i, j, Mark::ARROW, Mark::ARROW); }

    bool is_directed(int from, int to) const;       // from --> to
    bool is_undirected_edge(int i, int j) const;    // i --- j
    bool is_bidirected(int i, int j) const;         // i <-> j

    std::vector<int> adjacent(int i) const;
    std::vector<int> parents(int i) const;   // fully directed edges only
    std::vector<int> children(int i) const;

    int edge_count() const { return static_cast<int>(edges_.size()); }
    std::vector<Edge> edges() const;

    // Equality by node names and per-pair marks; node insertion order and
    // indices are irrelevant.
    bool operator==(const MixedGraph& other) const;
    bool operator!=(const MixedGraph& other) const { return !(*this == other); }

private:
    std::pair<int, int> key(int i, int j) const;

    std::vector<std::string> names_;
    std::map<std::string, int> index_;
    std::map<std::pair<int, int>, std::pair<Mark, Mark>> edges_;
};

// A MixedGraph validated to hold only TAIL->ARROW edges and no directed
// cycle. Construction throws std::invalid_argument on violation.
class Dag {
public:
    Dag() = default;
    explicit Dag(MixedGraph g);

    const MixedGraph& graph() const { return g_; }
    int node_count() const { return g_.node_count(); }
    std::vector<int> topological_order() const;

private:
    MixedGraph g_;
};

// Sepsets found during constraint-based search, keyed by unordered pair.
class SepsetMap {
public:
    void set(int i, int j, std::vector<int> s);
    bool has(int i, int j) const;
    const std::vector<int>& get(int i, int j) const;
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::pair<int, int>, std::vector<int>> map_;
};

// True iff the fully directed part of g has no cycle. Undirected and
// bidirected edges are ignored.
bool is_acyclic(const MixedGraph& g);

// d-separation of x and y given z, by the reachability formulation
// (chain/fork blocked when the middle node is in z, collider blocked
// unless it or a descendant is in z). Throws on unknown nodes.
bool d_separated(const Dag& g, int x, int y, const std::vector<int>& z);

// CPDAG of g's Markov equivalence class: skeleton plus v-structures,
// closed under the Meek rules.
MixedGraph cpdag_of(const Dag& g);

MixedGraph skeleton_of(const MixedGraph& g);

// Extends g with the missing names as isolated nodes.
MixedGraph pad_to_nodes(const MixedGraph& g, const std::vector<std::string>& names);

std::string to_dot(const MixedGraph& g);

std::string to_edge_list(const MixedGraph& g);
MixedGraph from_edge_list(const std::string& text);

// Meek rules R1-R4 applied to fixpoint over the undirected edges of g.
// Orientation that would place a second arrowhead on an edge upgrades it
// to bidirected instead of flipping; such pairs are appended to
// conflict_pairs when given.
void meek_closure(MixedGraph& g, std::vector<std::pair<int, int>>* conflict_pairs = nullptr);

// Orient from --> to; if the edge already carries an arrowhead at `from`
// the edge becomes bidirected (returns false in that case).
bool orient_or_conflict(MixedGraph& g, int from, int to);

}  // namespace causalkit
