#pragma once

// Diagonal symmetrizability: A is similar to a symmetric matrix through a
// diagonal T exactly when it is sign-symmetric and every directed cycle has
// the same weight as its reversal.

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "pulsekit/core.hpp"

namespace pulsekit {

// Entries smaller than this in magnitude count as structural zeros.
inline constexpr double kSignFloor = 1e-300;
// Relative agreement required between a cycle product and its reversal.
inline constexpr double kCycleTolerance = 1e-9;
// Largest dimension accepted by the brute-force cycle enumeration.
inline constexpr Eigen::Index kBruteForceMaxDim = 8;

enum class Verdict { Symmetrizable, NotSignSymmetric, CycleViolation, ZeroPatternAsymmetric };

const char* to_string(Verdict v) noexcept;

/// Zero-based index pair.
using IndexPair = std::pair<Eigen::Index, Eigen::Index>;

template <typename Scalar>
struct CycleWitness {
  std::vector<Eigen::Index> cycle;  // zero-based, smallest index first
  Scalar forward_product;           // A(c0,c1) A(c1,c2) ... A(ck,c0)
  Scalar reverse_product;           // A(c0,ck) ... A(c2,c1) A(c1,c0)
};

template <typename Scalar>
struct SymmetrizationCertificate {
  Verdict verdict = Verdict::Symmetrizable;
  Vector<Scalar> t;             // diagonal of T, present iff symmetrizable
  Matrix<Scalar> symmetrized;   // T^{-1} A T, present iff symmetrizable
  std::optional<IndexPair> pair_witness;
  std::optional<CycleWitness<Scalar>> cycle_witness;
  // max |M_ij - M_ji| of T^{-1} A T when symmetrizable, of A itself otherwise.
  Scalar residual = 0;

  bool symmetrizable() const noexcept { return verdict == Verdict::Symmetrizable; }
};

namespace detail {

inline int sign_with_floor(double x) noexcept {
  if (std::abs(x) < kSignFloor) return 0;
  return x > 0 ? 1 : -1;
}

template <typename Scalar>
bool products_agree(Scalar fwd, Scalar rev) {
  using std::abs;
  return abs(fwd - rev) <= Scalar(kCycleTolerance) * std::max(abs(fwd), abs(rev));
}

template <typename Derived>
CycleWitness<typename Derived::Scalar> make_cycle_witness(const Eigen::MatrixBase<Derived>& a,
                                                           std::vector<Eigen::Index> cycle) {
  using Scalar = typename Derived::Scalar;
  // Canonical form: smallest index first, then the direction whose second
  // element is smaller than the last.
  const auto min_it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), min_it, cycle.end());
  if (cycle.size() > 2 && cycle[1] > cycle.back()) std::reverse(cycle.begin() + 1, cycle.end());

  Scalar fwd = 1, rev = 1;
  const std::size_t k = cycle.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto from = cycle[i];
    const auto to = cycle[(i + 1) % k];
    fwd *= a(from, to);
    rev *= a(to, from);
  }
  return {std::move(cycle), fwd, rev};
}

template <typename Derived>
typename Derived::Scalar asymmetry(const Eigen::MatrixBase<Derived>& m) {
  return max_norm(m - m.transpose());
}

}  // namespace detail

struct SignCheck {
  bool sign_symmetric = true;
  std::optional<IndexPair> witness;  // first violating (i, j) in row-major order
};

/// sgn(A_ij) == sgn(A_ji) for every off-diagonal pair.
template <typename Derived>
SignCheck check_sign_symmetric(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "check_sign_symmetric input");
  require_finite(a, "check_sign_symmetric input");
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j && detail::sign_with_floor(double(a(i, j))) != detail::sign_with_floor(double(a(j, i))))
        return {false, IndexPair{i, j}};
  return {};
}

template <typename Scalar>
struct CycleCheck {
  bool holds = true;
  std::optional<CycleWitness<Scalar>> witness;
};

/// Brute-force cycle condition: enumerates every simple cycle of length >= 3
/// over the nonzero off-diagonal support. Two-cycles hold trivially.
/// Serves as the reference for symmetrize(); limited to n <= 8.
template <typename Derived>
CycleCheck<typename Derived::Scalar> check_cycle_condition(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "check_cycle_condition input");
  require_finite(a, "check_cycle_condition input");
  const Eigen::Index n = a.rows();
  if (n > kBruteForceMaxDim)
    throw Error(ErrorKind::InvalidInput,
                "check_cycle_condition enumerates cycles only for n <= 8; use symmetrize() for larger matrices");
  if (!check_sign_symmetric(a).sign_symmetric)
    throw Error(ErrorKind::Precondition, "check_cycle_condition requires a sign-symmetric matrix");

  auto edge = [&](Eigen::Index i, Eigen::Index j) { return detail::sign_with_floor(double(a(i, j))) != 0; };

  CycleCheck<Scalar> result;
  std::vector<Eigen::Index> path;
  std::vector<char> on_path(static_cast<std::size_t>(n), 0);

  // Depth-first over vertices larger than the start; each undirected cycle is
  // visited once by requiring path[1] < path.back().
  auto dfs = [&](auto&& self, Eigen::Index start) -> bool {
    const Eigen::Index last = path.back();
    if (path.size() >= 3 && path[1] < last && edge(last, start)) {
      auto witness = detail::make_cycle_witness(a, path);
      if (!detail::products_agree(witness.forward_product, witness.reverse_product)) {
        result.holds = false;
        result.witness = std::move(witness);
        return true;
      }
    }
    for (Eigen::Index next = start + 1; next < n; ++next) {
      if (on_path[static_cast<std::size_t>(next)] || !edge(last, next)) continue;
      path.push_back(next);
      on_path[static_cast<std::size_t>(next)] = 1;
      const bool found = self(self, start);
      on_path[static_cast<std::size_t>(next)] = 0;
      path.pop_back();
      if (found) return true;
    }
    return false;
  };

  for (Eigen::Index start = 0; start < n; ++start) {
    path.assign(1, start);
    on_path[static_cast<std::size_t>(start)] = 1;
    const bool found = dfs(dfs, start);
    on_path[static_cast<std::size_t>(start)] = 0;
    if (found) break;
  }
  return result;
}

/// Builds T by breadth-first traversal of the off-diagonal support graph
/// (T = 1 at each component root, T_j = T_i sqrt(A_ji / A_ij) across a tree
/// edge), then checks the balance relation on every non-tree edge. A failing
/// non-tree edge closes a fundamental cycle, which is returned as witness.
template <typename Derived>
SymmetrizationCertificate<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  require_square(a, "symmetrize input");
  require_finite(a, "symmetrize input");
  const Eigen::Index n = a.rows();

  SymmetrizationCertificate<Scalar> cert;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const int sij = detail::sign_with_floor(double(a(i, j)));
      const int sji = detail::sign_with_floor(double(a(j, i)));
      if (sij == sji) continue;
      cert.verdict = (sij == 0 || sji == 0) ? Verdict::ZeroPatternAsymmetric : Verdict::NotSignSymmetric;
      cert.pair_witness = IndexPair{i, j};
      cert.residual = detail::asymmetry(a);
      return cert;
    }
  }

  auto edge = [&](Eigen::Index i, Eigen::Index j) { return detail::sign_with_floor(double(a(i, j))) != 0; };

  constexpr Eigen::Index none = -1;
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n), none);
  std::vector<Eigen::Index> depth(static_cast<std::size_t>(n), 0);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Vector<Scalar> t = Vector<Scalar>::Ones(n);

  for (Eigen::Index root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    seen[static_cast<std::size_t>(root)] = 1;
    std::queue<Eigen::Index> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const Eigen::Index i = frontier.front();
      frontier.pop();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i || seen[static_cast<std::size_t>(j)] || !edge(i, j)) continue;
        seen[static_cast<std::size_t>(j)] = 1;
        parent[static_cast<std::size_t>(j)] = i;
        depth[static_cast<std::size_t>(j)] = depth[static_cast<std::size_t>(i)] + 1;
        t(j) = t(i) * std::sqrt(a(j, i) / a(i, j));
        frontier.push(j);
      }
    }
  }

  auto is_tree_edge = [&](Eigen::Index i, Eigen::Index j) {
    return parent[static_cast<std::size_t>(j)] == i || parent[static_cast<std::size_t>(i)] == j;
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!edge(i, j) || is_tree_edge(i, j)) continue;
      const Scalar ratio = t(i) / t(j);
      const Scalar predicted = a(j, i) * ratio * ratio;
      if (abs(a(i, j) - predicted) <= Scalar(kCycleTolerance) * std::max(abs(a(i, j)), abs(predicted))) continue;

      // Fundamental cycle: i up to the common ancestor, then down to j.
      std::vector<Eigen::Index> up{i}, down{j};
      Eigen::Index u = i, v = j;
      while (depth[static_cast<std::size_t>(u)] > depth[static_cast<std::size_t>(v)])
        up.push_back(u = parent[static_cast<std::size_t>(u)]);
      while (depth[static_cast<std::size_t>(v)] > depth[static_cast<std::size_t>(u)])
        down.push_back(v = parent[static_cast<std::size_t>(v)]);
      while (u != v) {
        up.push_back(u = parent[static_cast<std::size_t>(u)]);
        down.push_back(v = parent[static_cast<std::size_t>(v)]);
      }
      down.pop_back();  // common ancestor already in `up`
      std::vector<Eigen::Index> cycle = up;
      cycle.insert(cycle.end(), down.rbegin(), down.rend());

      cert.verdict = Verdict::CycleViolation;
      cert.cycle_witness = detail::make_cycle_witness(a, std::move(cycle));
      cert.residual = detail::asymmetry(a);
      return cert;
    }
  }

  Matrix<Scalar> sym(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) sym(i, j) = a(i, j) * t(j) / t(i);
  cert.t = std::move(t);
  cert.residual = detail::asymmetry(sym);
  cert.symmetrized = std::move(sym);
  return cert;
}

}  // namespace pulsekit
