#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "odetree/lifetime_density.hpp"
#include "odetree/rng.hpp"

namespace odetree {

// Branch label: path over {1,2}, stored as chars '1'/'2'; the root is the
// empty path.
using Label = std::string;

inline int generation(const Label& label) { return static_cast<int>(label.size()); }

enum class MarkBase { F, G };

// Branch mark: the identity map (root only), or the order-k derivative of
// the driving map f or of a test map g.
struct Mark {
  bool is_identity = false;
  MarkBase base = MarkBase::F;
  int order = 0;

  static Mark identity() { return Mark{true, MarkBase::F, 0}; }
  static Mark deriv(MarkBase base, int order) { return Mark{false, base, order}; }
  bool operator==(const Mark&) const = default;
};

std::string to_string(const Mark& m);

enum class BranchClass { FClass, GClass, Identity };

inline BranchClass class_of(const Mark& m) {
  if (m.is_identity) return BranchClass::Identity;
  return m.base == MarkBase::F ? BranchClass::FClass : BranchClass::GClass;
}

struct Branch {
  Label label;
  Mark mark;
  double birth = 0.0;
  double lifetime = 0.0;
  double death = 0.0;
  int parent = -1;   // index into TreeSample::branches
  int child_f = -1;  // child (k,1), mark f; an identity root keeps its single child here
  int child_d = -1;  // child (k,2), mark = parent derivative
  bool interior = false;  // split at or before the horizon
};

// One realized marked branching tree on [0, horizon]. Branches are stored
// in creation (breadth-first, label-lexicographic) order, root first.
struct TreeSample {
  double horizon = 0.0;
  Mark root_mark;
  std::vector<Branch> branches;
  int interior_count = 0;

  int boundary_count() const {
    return static_cast<int>(branches.size()) - interior_count;
  }
  long long total() const { return static_cast<long long>(branches.size()); }

  // Debug dump, one branch per line: label<TAB>mark<TAB>birth<TAB>death,
  // labels as comma-joined digits (empty for the root).
  std::string dump() const;
};

// Core sampler; lifetimes come from `next_lifetime` and are consumed in
// breadth-first label-lexicographic order, which makes a sample a pure
// function of the draw sequence. Returns nullopt when the branch count
// would exceed node_cap (the sample must then be discarded and counted).
std::optional<TreeSample> sample_tree_with(
    const std::function<double()>& next_lifetime, double horizon,
    Mark root_mark, long long node_cap);

std::optional<TreeSample> sample_tree(const LifetimeDensity& rho,
                                      double horizon, Mark root_mark,
                                      RngStream& rng, long long node_cap);

struct YuleBranch {
  int mark = 0;
  double birth = 0.0;
  double lifetime = 0.0;
  double death = 0.0;
  int parent = -1;
  bool interior = false;
};

// Binary branching tree with exponential lifetimes and integer marks:
// the root carries j, and a splitting branch of mark i leaves children
// marked 0 and i+1.
struct MarkedYuleSample {
  double horizon = 0.0;
  std::vector<YuleBranch> branches;
  long long total() const { return static_cast<long long>(branches.size()); }
};

std::optional<MarkedYuleSample> sample_marked_yule_with(
    const std::function<double()>& next_lifetime, double horizon, int j,
    long long node_cap);

std::optional<MarkedYuleSample> sample_marked_yule(double lambda,
                                                   double horizon, int j,
                                                   RngStream& rng,
                                                   long long node_cap);

}  // namespace odetree
