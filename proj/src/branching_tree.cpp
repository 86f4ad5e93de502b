#include "odetree/branching_tree.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace odetree {

std::string to_string(const Mark& m) {
  if (m.is_identity) return "Id";
  std::string base = m.base == MarkBase::F ? "f" : "g";
  if (m.order == 0) return base;
  return "D^" + std::to_string(m.order) + " " + base;
}

std::string TreeSample::dump() const {
  std::ostringstream os;
  for (const auto& b : branches) {
    std::string lab;
    for (std::size_t i = 0; i < b.label.size(); ++i) {
      if (i) lab += ',';
      lab += b.label[i];
    }
    os << lab << '\t' << to_string(b.mark) << '\t' << b.birth << '\t'
       << b.death << '\n';
  }
  return os.str();
}

std::optional<TreeSample> sample_tree_with(
    const std::function<double()>& next_lifetime, double horizon,
    Mark root_mark, long long node_cap) {
  if (horizon < 0.0)
    throw std::invalid_argument("sample_tree: negative horizon");
  if (node_cap < 1)
    throw std::invalid_argument("sample_tree: node_cap must be >= 1");

  TreeSample s;
  s.horizon = horizon;
  s.root_mark = root_mark;
  s.branches.reserve(8);

  auto add = [&](Label label, Mark mark, double birth, int parent) -> int {
    if (static_cast<long long>(s.branches.size()) >= node_cap) return -1;
    Branch b;
    b.label = std::move(label);
    b.mark = mark;
    b.birth = birth;
    b.lifetime = next_lifetime();
    if (!(b.lifetime > 0.0))
      throw std::runtime_error("sample_tree: nonpositive lifetime draw");
    b.death = b.birth + b.lifetime;
    b.parent = parent;
    s.branches.push_back(std::move(b));
    return static_cast<int>(s.branches.size()) - 1;
  };

  if (add(Label{}, root_mark, 0.0, -1) < 0) return std::nullopt;

  // Breadth-first: branches are appended in label-lexicographic order
  // within each generation, so the draw order is label order.
  for (std::size_t i = 0; i < s.branches.size(); ++i) {
    double death = s.branches[i].death;
    if (death > horizon) continue;  // alive at the horizon
    // a split exactly at the horizon counts as interior
    s.branches[i].interior = true;
    ++s.interior_count;
    Mark mark = s.branches[i].mark;
    Label label = s.branches[i].label;
    if (mark.is_identity) {
      int cf = add(label + '1', Mark::deriv(MarkBase::F, 0), death,
                   static_cast<int>(i));
      if (cf < 0) return std::nullopt;
      s.branches[i].child_f = cf;
    } else {
      int cf = add(label + '1', Mark::deriv(MarkBase::F, 0), death,
                   static_cast<int>(i));
      if (cf < 0) return std::nullopt;
      int cd = add(label + '2', Mark::deriv(mark.base, mark.order + 1), death,
                   static_cast<int>(i));
      if (cd < 0) return std::nullopt;
      s.branches[i].child_f = cf;
      s.branches[i].child_d = cd;
    }
  }
  return s;
}

std::optional<TreeSample> sample_tree(const LifetimeDensity& rho,
                                      double horizon, Mark root_mark,
                                      RngStream& rng, long long node_cap) {
  if (horizon > rho.horizon())
    throw std::invalid_argument(
        "sample_tree: horizon exceeds the density's certified range");
  return sample_tree_with([&]() { return rho.sample(rng); }, horizon,
                          root_mark, node_cap);
}

std::optional<MarkedYuleSample> sample_marked_yule_with(
    const std::function<double()>& next_lifetime, double horizon, int j,
    long long node_cap) {
  if (horizon < 0.0)
    throw std::invalid_argument("sample_marked_yule: negative horizon");
  if (j < 0) throw std::invalid_argument("sample_marked_yule: mark must be >= 0");
  if (node_cap < 1)
    throw std::invalid_argument("sample_marked_yule: node_cap must be >= 1");

  MarkedYuleSample s;
  s.horizon = horizon;
  s.branches.reserve(8);

  auto add = [&](int mark, double birth, int parent) -> int {
    if (static_cast<long long>(s.branches.size()) >= node_cap) return -1;
    YuleBranch b;
    b.mark = mark;
    b.birth = birth;
    b.lifetime = next_lifetime();
    b.death = b.birth + b.lifetime;
    b.parent = parent;
    s.branches.push_back(b);
    return static_cast<int>(s.branches.size()) - 1;
  };

  if (add(j, 0.0, -1) < 0) return std::nullopt;
  for (std::size_t i = 0; i < s.branches.size(); ++i) {
    double death = s.branches[i].death;
    if (death > horizon) continue;
    s.branches[i].interior = true;
    int mark = s.branches[i].mark;
    // children marked 0 and i+1
    if (add(0, death, static_cast<int>(i)) < 0) return std::nullopt;
    if (add(mark + 1, death, static_cast<int>(i)) < 0) return std::nullopt;
  }
  return s;
}

std::optional<MarkedYuleSample> sample_marked_yule(double lambda,
                                                   double horizon, int j,
                                                   RngStream& rng,
                                                   long long node_cap) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("sample_marked_yule: rate must be positive");
  return sample_marked_yule_with(
      [&]() { return -std::log(rng.uniform()) / lambda; }, horizon, j,
      node_cap);
}

}  // namespace odetree
