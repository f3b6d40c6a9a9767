#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "hallubench/chem/elements.hpp"
#include "hallubench/chem/smiles.hpp"

namespace hallubench::chem {
namespace {

int order_code(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 4;
  }
  return 0;
}

// Replaces arbitrary sortable keys with dense ranks 0..k-1.
template <class Key>
std::size_t dense_ranks(const std::vector<Key>& keys, std::vector<std::size_t>& ranks) {
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  ranks.assign(keys.size(), 0);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i > 0 && keys[idx[i - 1]] < keys[idx[i]]) ++distinct;
    ranks[idx[i]] = distinct;
  }
  return keys.empty() ? 0 : distinct + 1;
}

using Signature = std::pair<std::size_t, std::vector<std::pair<std::size_t, int>>>;

// Splits rank classes by sorted neighbour (rank, bond order) lists until stable.
std::size_t refine(const Molecule& m, std::vector<std::size_t>& ranks, std::size_t classes) {
  const std::size_t n = m.atom_count();
  std::vector<Signature> sigs(n);
  while (true) {
    for (std::size_t a = 0; a < n; ++a) {
      auto& [own, around] = sigs[a];
      own = ranks[a];
      around.clear();
      for (const auto& nb : m.neighbors(a)) {
        around.emplace_back(ranks[nb.atom], order_code(m.bonds()[nb.bond].order));
      }
      std::sort(around.begin(), around.end());
    }
    const std::size_t next = dense_ranks(sigs, ranks);
    if (next == classes) return classes;
    classes = next;
  }
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

class Writer {
 public:
  Writer(const Molecule& m, const std::vector<std::size_t>& ranks) : m_(m), ranks_(ranks) {}

  std::string component(std::size_t root) {
    build_tree(root);
    std::string out;
    emit(root, out);
    return out;
  }

 private:
  std::vector<std::size_t> sorted_neighbors(std::size_t atom) const {
    std::vector<std::size_t> nbs;
    for (const auto& nb : m_.neighbors(atom)) nbs.push_back(nb.atom);
    std::sort(nbs.begin(), nbs.end(), [&](std::size_t a, std::size_t b) { return ranks_[a] < ranks_[b]; });
    return nbs;
  }

  void build_tree(std::size_t root) {
    const std::size_t n = m_.atom_count();
    if (visited_.empty()) {
      visited_.assign(n, false);
      position_.assign(n, kNone);
      parent_.assign(n, kNone);
      children_.assign(n, {});
      ring_partners_.assign(n, {});
    }
    // Iterative DFS mirroring the recursive visit order.
    struct Frame {
      std::size_t atom;
      std::vector<std::size_t> nbs;
      std::size_t next;
    };
    std::vector<Frame> stack;
    visited_[root] = true;
    position_[root] = counter_++;
    stack.push_back({root, sorted_neighbors(root), 0});
    while (!stack.empty()) {
      auto& f = stack.back();
      if (f.next == f.nbs.size()) {
        stack.pop_back();
        continue;
      }
      const std::size_t nb = f.nbs[f.next++];
      const std::size_t atom = f.atom;
      if (nb == parent_[atom]) continue;
      if (visited_[nb]) {
        // Back edge to an ancestor; record once, at the atom that closes it.
        if (position_[nb] < position_[atom]) {
          ring_partners_[atom].push_back(nb);
          ring_partners_[nb].push_back(atom);
        }
        continue;
      }
      visited_[nb] = true;
      position_[nb] = counter_++;
      parent_[nb] = atom;
      children_[atom].push_back(nb);
      stack.push_back({nb, sorted_neighbors(nb), 0});
    }
  }

  std::string atom_text(std::size_t a) const {
    const Atom& atom = m_.atoms()[a];
    const int hydrogens = m_.total_hydrogens(a);
    std::string symbol(atom.symbol());
    if (atom.aromatic) symbol[0] = static_cast<char>(symbol[0] - 'A' + 'a');
    const bool organic_ok = in_organic_subset(atom.atomic_number) && atom.charge == 0 && !atom.isotope;
    if (organic_ok) {
      const auto implied = default_implicit_hydrogens(atom.atomic_number, atom.aromatic, m_.bond_order_sum(a));
      if (implied && *implied == hydrogens) return symbol;
    }
    std::string out = "[";
    if (atom.isotope) out += std::to_string(*atom.isotope);
    out += symbol;
    if (hydrogens > 0) {
      out += 'H';
      if (hydrogens > 1) out += std::to_string(hydrogens);
    }
    if (atom.charge != 0) {
      out += atom.charge > 0 ? '+' : '-';
      const int magnitude = atom.charge > 0 ? atom.charge : -atom.charge;
      if (magnitude > 1) out += std::to_string(magnitude);
    }
    out += ']';
    return out;
  }

  std::string bond_text(std::size_t a, std::size_t b) const {
    const Bond& bond = m_.bonds()[*m_.bond_between(a, b)];
    const bool both_aromatic = m_.atoms()[a].aromatic && m_.atoms()[b].aromatic;
    switch (bond.order) {
      case BondOrder::Single: return both_aromatic ? "-" : "";
      case BondOrder::Double: return "=";
      case BondOrder::Triple: return "#";
      case BondOrder::Aromatic: return both_aromatic ? "" : ":";
    }
    return "";
  }

  static std::string digit_text(int d) {
    return d < 10 ? std::to_string(d) : "%" + std::to_string(d);
  }

  int take_digit() {
    for (int d = 1; d < 100; ++d) {
      if (!digit_busy_[d]) {
        digit_busy_[d] = true;
        return d;
      }
    }
    // More than 99 simultaneously open rings is outside the supported subset.
    return 0;
  }

  void emit(std::size_t root, std::string& out) {
    struct Frame {
      std::size_t atom;
      std::size_t next_child;
    };
    std::vector<Frame> stack;
    auto write_atom = [&](std::size_t a) {
      out += atom_text(a);
      std::vector<int> released;
      // Closings first (partner already written), then openings, each in rank order.
      auto partners = ring_partners_[a];
      std::sort(partners.begin(), partners.end(), [&](std::size_t x, std::size_t y) {
        const bool cx = position_[x] < position_[a];
        const bool cy = position_[y] < position_[a];
        if (cx != cy) return cx;
        return ranks_[x] < ranks_[y];
      });
      for (std::size_t p : partners) {
        const std::pair<std::size_t, std::size_t> key{std::min(a, p), std::max(a, p)};
        if (position_[p] < position_[a]) {
          const int d = open_digits_.at(key);
          open_digits_.erase(key);
          out += digit_text(d);
          released.push_back(d);
        } else {
          const int d = take_digit();
          open_digits_[key] = d;
          out += bond_text(a, p);
          out += digit_text(d);
        }
      }
      for (int d : released) digit_busy_[d] = false;
    };

    write_atom(root);
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& f = stack.back();
      const auto& kids = children_[f.atom];
      if (f.next_child == kids.size()) {
        stack.pop_back();
        // Close the branch if this subtree was not the parent's last child.
        if (!stack.empty()) {
          const auto& pf = stack.back();
          if (pf.next_child < children_[pf.atom].size()) out += ')';
        }
        continue;
      }
      const std::size_t child = kids[f.next_child++];
      const bool last = f.next_child == kids.size();
      if (!last) out += '(';
      out += bond_text(f.atom, child);
      write_atom(child);
      stack.push_back({child, 0});
    }
  }

  const Molecule& m_;
  const std::vector<std::size_t>& ranks_;
  std::vector<bool> visited_;
  std::vector<std::size_t> position_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<std::size_t>> ring_partners_;
  std::size_t counter_ = 0;
  std::vector<bool> digit_busy_ = std::vector<bool>(100, false);
  std::map<std::pair<std::size_t, std::size_t>, int> open_digits_;
};

}  // namespace

std::vector<std::size_t> canonical_ranks(const Molecule& m) {
  const std::size_t n = m.atom_count();
  using Invariant = std::tuple<int, std::size_t, int, int, int, int, int>;
  std::vector<Invariant> initial(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Atom& atom = m.atoms()[a];
    int order_sum = 0;
    for (const auto& nb : m.neighbors(a)) order_sum += order_code(m.bonds()[nb.bond].order);
    initial[a] = {atom.atomic_number, m.degree(a), atom.charge, atom.isotope.value_or(0),
                  atom.aromatic ? 1 : 0, m.total_hydrogens(a), order_sum};
  }
  std::vector<std::size_t> ranks;
  std::size_t classes = dense_ranks(initial, ranks);
  classes = refine(m, ranks, classes);
  // Break remaining ties: single out one member of the lowest tied class and
  // refine again.
  while (classes < n) {
    std::vector<std::size_t> count(classes, 0);
    for (auto r : ranks) ++count[r];
    std::size_t tied = 0;
    while (count[tied] < 2) ++tied;
    std::size_t chosen = kNone;
    for (std::size_t a = 0; a < n; ++a) {
      if (ranks[a] == tied) {
        chosen = a;
        break;
      }
    }
    std::vector<std::pair<std::size_t, int>> keys(n);
    for (std::size_t a = 0; a < n; ++a) keys[a] = {ranks[a], a == chosen ? 0 : 1};
    classes = dense_ranks(keys, ranks);
    classes = refine(m, ranks, classes);
  }
  return ranks;
}

std::string canonical_smiles(const Molecule& m) {
  if (m.atom_count() == 0) return {};
  const auto ranks = canonical_ranks(m);
  std::vector<std::size_t> roots(m.component_count(), kNone);
  for (std::size_t a = 0; a < m.atom_count(); ++a) {
    auto& root = roots[m.component_of(a)];
    if (root == kNone || ranks[a] < ranks[root]) root = a;
  }
  Writer writer(m, ranks);
  std::vector<std::string> parts;
  parts.reserve(roots.size());
  for (std::size_t root : roots) parts.push_back(writer.component(root));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += '.';
    out += parts[i];
  }
  return out;
}

}  // namespace hallubench::chem
