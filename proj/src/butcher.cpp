#include "odetree/butcher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace odetree {

int ButcherTree::root_label() const {
  for (int i = 0; i < order(); ++i)
    if (v[i].parent < 0) return i + 1;
  return 0;
}

std::vector<std::vector<int>> ButcherTree::children() const {
  std::vector<std::vector<int>> kids(order());
  for (int i = 0; i < order(); ++i)
    if (v[i].parent > 0) kids[v[i].parent - 1].push_back(i + 1);
  return kids;
}

std::string ButcherTree::render() const {
  if (empty()) return "";
  auto kids = children();
  std::function<std::string(int)> rec = [&](int label) {
    std::string s = "[";
    bool first = true;
    for (int c : kids[label - 1]) {
      if (!first) s += ',';
      first = false;
      s += rec(c);
    }
    return s + "]";
  };
  return rec(root_label());
}

ButcherTree graft(const ButcherTree& a, int l, const ButcherTree& b) {
  if (b.empty()) {
    if (l < 0 || l > a.order())
      throw std::domain_error("graft: label out of range");
    return a;
  }
  if (a.empty()) {
    if (l != 0)
      throw std::domain_error("graft: grafting onto the empty tree requires label 0");
    return b;
  }
  if (l < 1 || l > a.order())
    throw std::domain_error("graft: label out of range");
  ButcherTree r = a;
  int off = a.order();
  for (const auto& w : b.v) {
    ButcherVertex nv = w;
    nv.parent = w.parent < 0 ? l : w.parent + off;
    r.v.push_back(nv);
  }
  return r;
}

ButcherTree extract_butcher(const TreeSample& s) {
  if (s.branches.empty())
    throw std::runtime_error("extract_butcher: empty sample");
  const Mark root = s.root_mark;
  if (!root.is_identity && root.order != 0)
    throw std::runtime_error(
        "extract_butcher: root mark must be the identity or an order-0 mark");

  // interior splits in increasing death-time order; children always die
  // after their parent, so parents are processed first
  std::vector<int> splits;
  splits.reserve(s.interior_count);
  for (int i = 0; i < static_cast<int>(s.branches.size()); ++i)
    if (s.branches[i].interior) splits.push_back(i);
  std::sort(splits.begin(), splits.end(), [&](int x, int y) {
    return s.branches[x].death < s.branches[y].death;
  });

  ButcherTree tau;
  // vertex label carried by each living branch; 0 = the pre-split identity root
  std::vector<int> vertex_of(s.branches.size(), -1);
  if (root.is_identity) {
    vertex_of[0] = 0;
  } else {
    tau.v.push_back(ButcherVertex{-1, 0, root.base});
    vertex_of[0] = 1;
  }

  for (int bi : splits) {
    const Branch& b = s.branches[bi];
    int l = vertex_of[bi];
    if (l < 0)
      throw std::runtime_error("extract_butcher: malformed sample, split of an unseen branch");
    if (l == 0) {
      // identity root: a single offspring starts the tree
      tau = graft(tau, 0, ButcherTree::dot(MarkBase::F));
      vertex_of[b.child_f] = 1;
    } else {
      int fresh = tau.order() + 1;
      tau = graft(tau, l, ButcherTree::dot(MarkBase::F));
      tau.v[l - 1].mark_order += 1;
      vertex_of[b.child_f] = fresh;
      vertex_of[b.child_d] = l;
    }
  }
  return tau;
}

std::vector<double> elementary_differential(const ButcherTree& tau,
                                            const DerivativeOracle& oracle_f,
                                            const DerivativeOracle* oracle_g,
                                            const std::vector<double>& x0) {
  if (tau.empty()) return x0;  // the identity map
  auto kids = tau.children();
  std::function<Tensor(int)> value = [&](int label) -> Tensor {
    const ButcherVertex& vert = tau.v[label - 1];
    const auto& ks = kids[label - 1];
    const DerivativeOracle* oc = &oracle_f;
    if (vert.base == MarkBase::G) {
      if (!oracle_g)
        throw std::runtime_error("elementary_differential: G-rooted tree needs a g oracle");
      oc = oracle_g;
    }
    Tensor t = oc->derivatives(static_cast<int>(ks.size()), x0);
    for (int c : ks) t = t.contract_last(value(c).as_vector());
    return t;
  };
  return value(tau.root_label()).as_vector();
}

std::vector<double> compose_boundary_marks(const TreeSample& s,
                                           const DerivativeOracle& oracle_f,
                                           const DerivativeOracle* oracle_g,
                                           const std::vector<double>& x0) {
  if (s.branches.empty())
    throw std::runtime_error("compose_boundary_marks: empty sample");
  std::function<Tensor(int)> value = [&](int bi) -> Tensor {
    const Branch& b = s.branches[bi];
    if (!b.interior) {
      if (b.mark.is_identity) return Tensor::vector(x0);
      const DerivativeOracle* oc =
          b.mark.base == MarkBase::G ? oracle_g : &oracle_f;
      if (!oc)
        throw std::runtime_error("compose_boundary_marks: missing g oracle");
      return oc->derivatives(b.mark.order, x0);
    }
    if (b.mark.is_identity) return value(b.child_f);
    Tensor down = value(b.child_d);
    Tensor arg = value(b.child_f);
    return down.contract_last(arg.as_vector());
  };
  return value(0).as_vector();
}

namespace {

// canonical unlabeled rooted tree for the catalog
struct Canon {
  std::vector<int> child_ids;  // indices into the per-order pools, sorted
  int size = 1;
  long long factorial = 1;
  long long symmetry = 1;
  std::string shape;
  std::vector<int> child_orders;
};

struct Pool {
  // trees[n-1] = canonical trees of order n
  std::vector<std::vector<Canon>> trees;
};

long long fact_ll(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// enumerate multisets of subtrees with total order `remaining`, picking
// (order, index) pairs in non-increasing order to get each multiset once
void pick(Pool& pool, int remaining, int max_order, int max_index,
          std::vector<std::pair<int, int>>& acc,
          const std::function<void(const std::vector<std::pair<int, int>>&)>& emit) {
  if (remaining == 0) {
    emit(acc);
    return;
  }
  for (int ord = std::min(remaining, max_order); ord >= 1; --ord) {
    int start = ord == max_order ? max_index
                                 : static_cast<int>(pool.trees[ord - 1].size()) - 1;
    for (int idx = start; idx >= 0; --idx) {
      acc.emplace_back(ord, idx);
      pick(pool, remaining - ord, ord, idx, acc, emit);
      acc.pop_back();
    }
  }
}

Canon make_canon(const Pool& pool, const std::vector<std::pair<int, int>>& subs) {
  Canon c;
  c.size = 1;
  c.factorial = 1;
  c.symmetry = 1;
  std::vector<std::string> shapes;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const Canon& ch = pool.trees[subs[i].first - 1][subs[i].second];
    c.size += ch.size;
    c.factorial *= ch.factorial;
    c.symmetry *= ch.symmetry;
    c.child_orders.push_back(subs[i].first);
    shapes.push_back(ch.shape);
  }
  // multiplicity factor: identical subtrees commute
  std::size_t i = 0;
  while (i < subs.size()) {
    std::size_t j = i;
    while (j < subs.size() && subs[j] == subs[i]) ++j;
    c.symmetry *= fact_ll(static_cast<int>(j - i));
    i = j;
  }
  c.factorial *= c.size;  // the root's subtree is the whole tree
  c.shape = "[";
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    if (k) c.shape += ',';
    c.shape += shapes[k];
  }
  c.shape += "]";
  for (std::size_t k = 0; k < subs.size(); ++k)
    c.child_ids.push_back(subs[k].second);
  return c;
}

void flatten(const Pool& pool, const Canon& c, int parent,
             std::vector<int>& parents) {
  int self = static_cast<int>(parents.size());
  parents.push_back(parent);
  for (std::size_t i = 0; i < c.child_ids.size(); ++i) {
    const Canon& ch = pool.trees[c.child_orders[i] - 1][c.child_ids[i]];
    flatten(pool, ch, self, parents);
  }
}

}  // namespace

RootedTreeCatalog enumerate_trees(int max_order) {
  if (max_order < 1 || max_order > 8)
    throw std::invalid_argument("enumerate_trees: order must lie in 1..8");
  Pool pool;
  pool.trees.resize(max_order);
  pool.trees[0].push_back(Canon{{}, 1, 1, 1, "[]", {}});
  for (int n = 2; n <= max_order; ++n) {
    std::vector<std::pair<int, int>> acc;
    pick(pool, n - 1, n - 1,
         static_cast<int>(pool.trees[std::min(n - 1, max_order) - 1].size()) - 1,
         acc, [&](const std::vector<std::pair<int, int>>& subs) {
           pool.trees[n - 1].push_back(make_canon(pool, subs));
         });
  }
  RootedTreeCatalog cat;
  cat.max_order = max_order;
  cat.by_order.resize(max_order);
  for (int n = 1; n <= max_order; ++n) {
    for (const Canon& c : pool.trees[n - 1]) {
      CatalogEntry e;
      flatten(pool, c, -1, e.parent);
      e.factorial = c.factorial;
      e.symmetry = c.symmetry;
      e.shape = c.shape;
      cat.by_order[n - 1].push_back(std::move(e));
    }
  }
  return cat;
}

ButcherTree CatalogEntry::as_butcher() const {
  ButcherTree t;
  std::vector<int> child_count(parent.size(), 0);
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] >= 0) ++child_count[parent[i]];
  for (std::size_t i = 0; i < parent.size(); ++i)
    t.v.push_back(ButcherVertex{parent[i] < 0 ? -1 : parent[i] + 1,
                                child_count[i], MarkBase::F});
  return t;
}

std::vector<double> butcher_series(const DerivativeOracle& oracle_f,
                                   const std::vector<double>& x0, double t,
                                   int max_order,
                                   const RootedTreeCatalog* catalog) {
  RootedTreeCatalog own;
  if (!catalog) {
    own = enumerate_trees(max_order);
    catalog = &own;
  }
  if (catalog->max_order < max_order)
    throw std::invalid_argument("butcher_series: catalog order too small");
  std::vector<double> acc = x0;
  double tn = 1.0;
  for (int n = 1; n <= max_order; ++n) {
    tn *= t;
    for (const CatalogEntry& e : catalog->order(n)) {
      ButcherTree tau = e.as_butcher();
      std::vector<double> f = elementary_differential(tau, oracle_f, nullptr, x0);
      double w = tn / (static_cast<double>(e.factorial) *
                       static_cast<double>(e.symmetry));
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * f[i];
    }
  }
  return acc;
}

}  // namespace odetree
