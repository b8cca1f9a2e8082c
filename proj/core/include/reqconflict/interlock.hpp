// Requirement dependency digraphs and their elementary circuits.

#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace reqconflict {

enum class DependencyKind { OPERATION_EVENT, INPUT_OUTPUT };

const char* to_string(DependencyKind kind);

struct DependencyEdge {
  std::string from;
  std::string to;
  std::vector<std::string> evidence;
};

class InterlockGraph {
 public:
  explicit InterlockGraph(DependencyKind kind = DependencyKind::INPUT_OUTPUT) : kind_(kind) {}

  DependencyKind kind() const { return kind_; }
  void add_vertex(const std::string& id);
  /// At most one edge per ordered pair; evidence of repeated additions is
  /// merged. Throws std::invalid_argument for unknown vertices.
  void add_edge(const std::string& from, const std::string& to, std::vector<std::string> evidence = {});

  /// Sorted.
  std::vector<std::string> vertices() const;
  /// Sorted by (from, to).
  std::vector<DependencyEdge> edges() const;
  bool has_edge(const std::string& from, const std::string& to) const;
  std::size_t edge_count() const { return edges_.size(); }

 private:
  DependencyKind kind_;
  std::set<std::string> vertices_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> edges_;
};

/// Every elementary circuit of a digraph on vertices 0..n-1 (self-loops
/// included), each starting at its smallest vertex, sorted. Johnson's
/// algorithm.
std::vector<std::vector<int>> elementary_cycles(int n, const std::vector<std::vector<int>>& adjacency);

/// Circuits as id lists, each rotated to start at its smallest id, sorted.
std::vector<std::vector<std::string>> elementary_cycles(const InterlockGraph& graph);

/// Graphviz digraph; edges labelled with their evidence.
std::string to_dot(const InterlockGraph& graph);

}  // namespace reqconflict
