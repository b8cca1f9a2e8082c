#include "reqconflict/interlock.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace reqconflict {

const char* to_string(DependencyKind kind) {
  return kind == DependencyKind::OPERATION_EVENT ? "operation-event" : "input-output";
}

void InterlockGraph::add_vertex(const std::string& id) { vertices_.insert(id); }

void InterlockGraph::add_edge(const std::string& from, const std::string& to, std::vector<std::string> evidence) {
  if (!vertices_.contains(from) || !vertices_.contains(to)) {
    throw std::invalid_argument("edge " + from + " -> " + to + " references an unknown vertex");
  }
  auto& ev = edges_[{from, to}];
  for (auto& e : evidence) {
    if (std::find(ev.begin(), ev.end(), e) == ev.end()) ev.push_back(std::move(e));
  }
}

std::vector<std::string> InterlockGraph::vertices() const { return {vertices_.begin(), vertices_.end()}; }

std::vector<DependencyEdge> InterlockGraph::edges() const {
  std::vector<DependencyEdge> out;
  for (const auto& [key, ev] : edges_) out.push_back(DependencyEdge{key.first, key.second, ev});
  return out;
}

bool InterlockGraph::has_edge(const std::string& from, const std::string& to) const {
  return edges_.contains({from, to});
}

namespace {

// Strongly connected components of the subgraph induced by vertices >= lo.
std::vector<std::vector<int>> components_from(int n, const std::vector<std::vector<int>>& adj, int lo) {
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> out;
  int counter = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : adj[v]) {
      if (w < lo) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w = -1;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      out.push_back(std::move(comp));
    }
  };
  for (int v = lo; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> elementary_cycles(int n, const std::vector<std::vector<int>>& adjacency) {
  std::vector<std::vector<int>> adj(n);
  for (int v = 0; v < n; ++v) {
    adj[v] = adjacency[v];
    std::sort(adj[v].begin(), adj[v].end());
    adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
  }
  std::vector<std::vector<int>> cycles;
  std::vector<bool> blocked(n, false);
  std::vector<std::set<int>> block_map(n);
  std::vector<int> path;

  const std::function<void(int)> unblock = [&](int u) {
    blocked[u] = false;
    auto waiting = std::move(block_map[u]);
    block_map[u].clear();
    for (int w : waiting) {
      if (blocked[w]) unblock(w);
    }
  };

  int s = 0;
  while (s < n) {
    // Component containing the least vertex >= s that lies on some cycle.
    const auto comps = components_from(n, adj, s);
    int start = -1;
    std::vector<bool> in_comp(n, false);
    for (const auto& comp : comps) {
      const bool cyclic =
          comp.size() > 1 || std::binary_search(adj[comp.front()].begin(), adj[comp.front()].end(), comp.front());
      if (!cyclic) continue;
      const int least = *std::min_element(comp.begin(), comp.end());
      if (start < 0 || least < start) {
        start = least;
        std::fill(in_comp.begin(), in_comp.end(), false);
        for (int v : comp) in_comp[v] = true;
      }
    }
    if (start < 0) break;
    for (int v = 0; v < n; ++v) {
      if (in_comp[v]) {
        blocked[v] = false;
        block_map[v].clear();
      }
    }
    const std::function<bool(int)> circuit = [&](int v) -> bool {
      bool found = false;
      path.push_back(v);
      blocked[v] = true;
      for (int w : adj[v]) {
        if (!in_comp[w]) continue;
        if (w == start) {
          cycles.push_back(path);
          found = true;
        } else if (!blocked[w] && circuit(w)) {
          found = true;
        }
      }
      if (found) {
        unblock(v);
      } else {
        for (int w : adj[v]) {
          if (in_comp[w]) block_map[w].insert(v);
        }
      }
      path.pop_back();
      return found;
    };
    circuit(start);
    s = start + 1;
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

std::vector<std::vector<std::string>> elementary_cycles(const InterlockGraph& graph) {
  const auto ids = graph.vertices();
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(ids.size());
  for (const auto& e : graph.edges()) adj[pos.at(e.from)].push_back(pos.at(e.to));
  std::vector<std::vector<std::string>> out;
  for (const auto& cycle : elementary_cycles(static_cast<int>(ids.size()), adj)) {
    std::vector<std::string> named;
    for (int v : cycle) named.push_back(ids[v]);
    out.push_back(std::move(named));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const InterlockGraph& graph) {
  std::ostringstream out;
  std::string name = to_string(graph.kind());
  std::replace(name.begin(), name.end(), '-', '_');
  out << "digraph " << name << " {\n";
  for (const auto& v : graph.vertices()) out << "  \"" << dot_escape(v) << "\";\n";
  for (const auto& e : graph.edges()) {
    std::string label;
    for (std::size_t i = 0; i < e.evidence.size(); ++i) {
      if (i) label += "\\n";
      label += dot_escape(e.evidence[i]);
    }
    out << "  \"" << dot_escape(e.from) << "\" -> \"" << dot_escape(e.to) << "\" [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace reqconflict
