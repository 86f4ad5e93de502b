#pragma once

#include <string>
#include <vector>

#include "odetree/branching_tree.hpp"
#include "odetree/oracle.hpp"

namespace odetree {

struct ButcherVertex {
  int parent = -1;  // 1-based label of the parent, -1 for the root
  int mark_order = 0;
  MarkBase base = MarkBase::F;
};

// Labeled rooted tree with derivative marks. Vertex with label l is stored
// at index l-1, so labels are always a permutation of 1..order().
struct ButcherTree {
  std::vector<ButcherVertex> v;

  int order() const { return static_cast<int>(v.size()); }
  bool empty() const { return v.empty(); }
  int root_label() const;  // 0 when empty

  static ButcherTree dot(MarkBase base = MarkBase::F) {
    ButcherTree t;
    t.v.push_back(ButcherVertex{-1, 0, base});
    return t;
  }

  // children labels per vertex, in increasing label order
  std::vector<std::vector<int>> children() const;

  // Parenthesized rendering ignoring labels/marks, e.g. "[]" for the dot
  // and "[[],[[]]]" for a root with a leaf child and a 2-chain child.
  std::string render() const;
};

// Grafting product: attach b's root under vertex l of a, keeping a's
// labels and offsetting b's labels by |a|. l = 0 is allowed only when a is
// empty; grafting the empty tree is the identity.
ButcherTree graft(const ButcherTree& a, int l, const ButcherTree& b);

// Replays the interior splits of a sample in increasing death-time order,
// grafting a new order-0 vertex under the vertex that carried the
// splitting branch and bumping that vertex's mark order. The root mark
// must be the identity or an order-0 derivative mark; for a g-rooted
// sample the vertex descending from the root keeps base G.
ButcherTree extract_butcher(const TreeSample& sample);

// Recursive elementary differential F(tau) at x0: F(empty) = x0,
// F(dot) = f(x0), F(tau) = D^m f(F(tau_1), ..., F(tau_m)). The oracle for
// g is consulted for vertices with base G and may be null otherwise.
std::vector<double> elementary_differential(const ButcherTree& tau,
                                            const DerivativeOracle& oracle_f,
                                            const DerivativeOracle* oracle_g,
                                            const std::vector<double>& x0);

// Direct recursive evaluation of the boundary-mark composition over the
// branching tree itself, without going through a ButcherTree. Used as the
// independent cross-check of the extraction route.
std::vector<double> compose_boundary_marks(const TreeSample& sample,
                                           const DerivativeOracle& oracle_f,
                                           const DerivativeOracle* oracle_g,
                                           const std::vector<double>& x0);

struct CatalogEntry {
  std::vector<int> parent;  // 0-based parents, -1 for the root (vertex 0)
  long long factorial = 1;  // product over vertices of subtree sizes
  long long symmetry = 1;   // order of the root-fixing automorphism group
  std::string shape;        // canonical rendering

  ButcherTree as_butcher() const;
};

struct RootedTreeCatalog {
  int max_order = 0;
  std::vector<std::vector<CatalogEntry>> by_order;  // by_order[n-1]: order n

  const std::vector<CatalogEntry>& order(int n) const { return by_order[n - 1]; }
};

// Canonical enumeration of unlabeled rooted trees up to max_order (<= 8);
// counts per order run 1, 1, 2, 4, 9, 20, 48, 115.
RootedTreeCatalog enumerate_trees(int max_order);

// Truncated series x0 + sum over trees of order <= max_order of
// t^|tau| / (tau! * sym(tau)) * F(tau)(x0).
std::vector<double> butcher_series(const DerivativeOracle& oracle_f,
                                   const std::vector<double>& x0, double t,
                                   int max_order,
                                   const RootedTreeCatalog* catalog = nullptr);

}  // namespace odetree
