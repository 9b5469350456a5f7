#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcoh/state.hpp"

namespace qcoh {

// One-vs-rest bipartition: `solo` against all remaining subsystems.
struct Cut {
  int solo = 0;

  std::vector<int> rest(int parties) const {
    std::vector<int> r;
    for (int k = 0; k < parties; ++k)
      if (k != solo) r.push_back(k);
    return r;
  }

  bool operator==(const Cut& o) const { return solo == o.solo; }
};

inline char party_letter(int k) { return static_cast<char>('A' + k); }

inline std::string cut_label(Cut cut, int parties) {
  std::string s(1, party_letter(cut.solo));
  s += '-';
  for (int k = 0; k < parties; ++k)
    if (k != cut.solo) s += party_letter(k);
  return s;
}

// One term of a claimed decomposition. `state` is the component's density
// matrix on the full party ordering. A `cut` tags the one-vs-rest split the
// component is claimed to factor across; `factors` (one single-party state
// per subsystem) tags a fully separable component instead.
struct Component {
  double weight = 0.0;
  State state;
  std::optional<Cut> cut;
  std::vector<State> factors;

  Component(double w, State s) : weight(w), state(std::move(s)) {}
  Component(double w, State s, Cut c) : weight(w), state(std::move(s)), cut(c) {}
  Component(double w, State s, std::vector<State> f)
      : weight(w), state(std::move(s)), factors(std::move(f)) {}
};

inline State kron_all(const std::vector<State>& factors) {
  State acc = factors.front();
  for (size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i]);
  return acc;
}

// Weighted list of components; weights sum to 1 and all components share dims.
struct Decomposition {
  std::vector<Component> components;

  Decomposition() = default;
  explicit Decomposition(std::vector<Component> comps, double tol = 1e-9)
      : components(std::move(comps)) {
    if (components.empty())
      fail(ErrorKind::weight_sum_invalid, "decomposition has no components");
    double wsum = 0.0;
    for (const Component& c : components) {
      if (c.weight < -tol || c.weight > 1.0 + tol)
        fail(ErrorKind::weight_out_of_range,
             "weight " + std::to_string(c.weight) + " outside [0,1]");
      wsum += c.weight;
      if (c.state.dims() != components.front().state.dims())
        fail(ErrorKind::dims_mismatch, "components disagree on dims");
    }
    if (std::abs(wsum - 1.0) > tol)
      fail(ErrorKind::weight_sum_invalid,
           "weights sum to " + std::to_string(wsum) + ", expected 1");
  }

  const Dims& dims() const { return components.front().state.dims(); }

  State assemble() const {
    std::vector<std::pair<double, State>> parts;
    parts.reserve(components.size());
    for (const Component& c : components) parts.emplace_back(c.weight, c.state);
    return mix(parts);
  }

  bool all_have_cuts() const {
    for (const Component& c : components)
      if (!c.cut) return false;
    return true;
  }

  bool all_have_factors() const {
    for (const Component& c : components)
      if (c.factors.empty()) return false;
    return true;
  }

  bool single_cut() const {
    if (!all_have_cuts()) return false;
    for (const Component& c : components)
      if (!(*c.cut == *components.front().cut)) return false;
    return true;
  }
};

// Component claimed to be a product of per-party factors; the realized
// state is their Kronecker product.
inline Component product_component(double weight, std::vector<State> factors) {
  State realized = kron_all(factors);
  Component c(weight, std::move(realized), std::move(factors));
  return c;
}

}  // namespace qcoh
