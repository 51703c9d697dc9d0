#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nanophrase/series.hpp"
#include "nanophrase/signed_word.hpp"

namespace nanophrase {

// Vertex of the expansion forest: the quadruple label (location, letter,
// eta index, sign) plus depth. Children are ordered by location; the first
// half comes from the inverted partner prefix (left of the vertex), the
// second half from the prefix itself (right of the vertex).
struct ForestNode {
  int location = 0;
  std::string letter;
  int eta_index = 0;
  int sign = 0;
  int depth = 0;
  std::vector<ForestNode> children;
};

// F_i^q: one rooted tree per occurrence of w_i^eps, in component order.
// Flattening in location order reproduces the expanding word rho^q(w_i^eps).
struct Forest {
  std::vector<ForestNode> roots;
  int q = 2;
};

namespace detail {

inline ForestNode build_node(const MagnusContext& ctx, int id, int exp, int stage, int depth) {
  const auto& o = ctx.occs[id];
  ForestNode node;
  node.letter = o.letter;
  node.eta_index = o.eta;
  node.sign = exp;
  node.depth = depth;
  if (stage >= 3) {
    node.children.reserve(2 * o.prefix.size());
    for (auto it = o.prefix.rbegin(); it != o.prefix.rend(); ++it)
      node.children.push_back(build_node(ctx, it->first, -it->second, stage - 1, depth + 1));
    for (const auto& [pid, psign] : o.prefix)
      node.children.push_back(build_node(ctx, pid, psign, stage - 1, depth + 1));
  }
  return node;
}

inline void assign_locations(ForestNode& node, int& counter) {
  std::size_t half = node.children.size() / 2;
  for (std::size_t i = 0; i < half; ++i)
    assign_locations(node.children[i], counter);
  node.location = ++counter;
  for (std::size_t i = half; i < node.children.size(); ++i)
    assign_locations(node.children[i], counter);
}

inline void flatten_node(const ForestNode& node, SignedWord& out) {
  std::size_t half = node.children.size() / 2;
  for (std::size_t i = 0; i < half; ++i)
    flatten_node(node.children[i], out);
  out.push_back({node.letter, node.sign});
  for (std::size_t i = half; i < node.children.size(); ++i)
    flatten_node(node.children[i], out);
}

}  // namespace detail

inline Forest build_forest(const Nanophrase& p, int i, int q) {
  if (q < 2)
    throw Error("forest construction needs q >= 2");
  if (i < 1 || i > p.component_count())
    throw Error("component index " + std::to_string(i) + " out of range");
  detail::MagnusContext ctx(p);
  Forest f;
  f.q = q;
  for (int id : ctx.component_words[i - 1])
    f.roots.push_back(detail::build_node(ctx, id, ctx.occs[id].sign, q, 0));
  int counter = 0;
  for (ForestNode& root : f.roots)
    detail::assign_locations(root, counter);
  return f;
}

inline SignedWord flatten(const Forest& f) {
  SignedWord out;
  for (const ForestNode& root : f.roots)
    detail::flatten_node(root, out);
  return out;
}

namespace detail {

struct FlatVertex {
  const ForestNode* node = nullptr;
  int parent = -1;  // index into the flat list, -1 for roots
};

inline void collect_vertices(const ForestNode& node, int parent, std::vector<FlatVertex>& out) {
  int self = static_cast<int>(out.size());
  out.push_back({&node, parent});
  for (const ForestNode& child : node.children)
    collect_vertices(child, self, out);
}

}  // namespace detail

// Counts the ancestor-closed selections of exactly |c| vertices whose eta
// labels, read in location order, spell c. The pair is (even, odd) by the
// parity of selected vertices with sign -1.
inline std::pair<long long, long long> subforest_counts(const Forest& f,
                                                        const std::vector<int>& c) {
  std::set<int> labels(c.begin(), c.end());
  if (labels.size() != c.size())
    throw Error("subforest counting needs pairwise distinct labels");
  if (c.empty())
    return {1, 0};  // the empty selection

  // vertices in preorder (parents precede children)
  std::vector<detail::FlatVertex> all;
  for (const ForestNode& root : f.roots)
    detail::collect_vertices(root, -1, all);

  // a vertex is eligible if its whole ancestor path carries labels from c
  std::vector<char> eligible(all.size(), 0);
  std::vector<int> candidates;
  for (std::size_t v = 0; v < all.size(); ++v) {
    bool ok = labels.count(all[v].node->eta_index) > 0 &&
              (all[v].parent < 0 || eligible[all[v].parent]);
    eligible[v] = ok ? 1 : 0;
    if (ok)
      candidates.push_back(static_cast<int>(v));
  }

  const int u = static_cast<int>(c.size());
  long long even = 0, odd = 0;
  std::vector<int> chosen;

  // enumerate ancestor-closed subsets as increasing preorder sequences:
  // a vertex may join only if its parent is already in
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (static_cast<int>(chosen.size()) == u) {
      std::vector<std::pair<int, int>> by_location;  // (location, index)
      for (int v : chosen)
        by_location.emplace_back(all[v].node->location, v);
      std::sort(by_location.begin(), by_location.end());
      for (int j = 0; j < u; ++j)
        if (all[by_location[j].second].node->eta_index != c[j])
          return;
      int negatives = 0;
      for (int v : chosen)
        if (all[v].node->sign < 0)
          ++negatives;
      (negatives % 2 == 0 ? even : odd) += 1;
      return;
    }
    for (std::size_t idx = from; idx < candidates.size(); ++idx) {
      int v = candidates[idx];
      int parent = all[v].parent;
      if (parent >= 0 &&
          std::find(chosen.begin(), chosen.end(), parent) == chosen.end())
        continue;
      chosen.push_back(v);
      self(self, idx + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return {even, odd};
}

// The two-sided check: the degree-|c| coefficient extracted through the
// series pipeline must equal the parity-signed subforest count.
inline bool oracle_check(const Nanophrase& p, int i, const std::vector<int>& c, int q) {
  MagnusSeries s = component_series(p, i, q, static_cast<int>(c.size()));
  auto [even, odd] = subforest_counts(build_forest(p, i, q), c);
  return s.coefficient(c) == even - odd;
}

namespace detail {

inline void dump_node(const ForestNode& node, int indent, std::ostringstream& out) {
  for (int i = 0; i < indent; ++i)
    out << "  ";
  out << "g=" << node.location << ' ' << node.letter << '^' << (node.sign < 0 ? "-1" : "+1")
      << " k=" << node.eta_index << " d=" << node.depth << '\n';
  for (const ForestNode& child : node.children)
    dump_node(child, indent + 1, out);
}

}  // namespace detail

// Indented text, one vertex per line: "g=<loc> <letter>^<sign> k=<eta> d=<depth>".
inline std::string dump_forest(const Forest& f) {
  std::ostringstream out;
  for (const ForestNode& root : f.roots)
    detail::dump_node(root, 0, out);
  return out.str();
}

}  // namespace nanophrase
