#pragma once

// Pairs of set families over [n] = {1, ..., n}, n <= 24. A subset is stored
// as its characteristic vector: element i is bit i - 1.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace canbound {

using Subset = std::uint32_t;

inline constexpr int kMaxGroundSet = 24;

/// Ground-set size plus two non-empty, duplicate-free lists of subsets.
class FamilyPair {
 public:
  /// Throws std::invalid_argument on n outside [1, 24], an empty family,
  /// a duplicate subset, or an element outside [n].
  FamilyPair(int n, std::vector<Subset> a, std::vector<Subset> b);

  int n() const { return n_; }
  const std::vector<Subset>& a() const { return a_; }
  const std::vector<Subset>& b() const { return b_; }

  /// |A| * |B|.
  std::uint64_t size_product() const {
    return static_cast<std::uint64_t>(a_.size()) * b_.size();
  }

  FamilyPair swapped() const { return FamilyPair(n_, b_, a_); }

  /// Same pair with both lists sorted ascending.
  FamilyPair normalized() const;

  friend bool operator==(const FamilyPair&, const FamilyPair&) = default;

 private:
  int n_;
  std::vector<Subset> a_;
  std::vector<Subset> b_;
};

/// A u B = A' u B  =>  A = A'  and  A u B = A u B'  =>  B = B'.
bool is_cancellative(const FamilyPair& fp);

/// The equivalent set-difference formulation: A \ B determines A for each
/// fixed B, and B \ A determines B for each fixed A.
bool is_cancellative_by_difference(const FamilyPair& fp);

/// A \ B = A' \ B'  =>  A = A'  and  B \ A = B' \ A'  =>  B = B'.
bool is_recovering(const FamilyPair& fp);

/// Disjoint product: fp2's elements are shifted past fp1's ground set.
/// Throws std::overflow_error when n1 + n2 > 24.
FamilyPair product(const FamilyPair& fp1, const FamilyPair& fp2);

/// Products fp with its swap, keeps the most common set size k0 (smallest
/// on ties) on both sides, then takes the M-fold self-product, giving an
/// (M k0)-uniform cancellative pair with |A| = |B|. Throws
/// std::invalid_argument if fp is not cancellative and std::overflow_error
/// when 2 n M > 24.
FamilyPair symmetrize_uniformize(const FamilyPair& fp, int copies);

struct EntropyCheck {
  double lhs = 0.0;  // log2(|A| |B|)
  double rhs = 0.0;  // sum_i f(p_i, q_i)
  bool holds = false;
};

/// p_i (q_i) is the fraction of A (B) not containing i. Throws
/// std::invalid_argument if fp is not cancellative.
EntropyCheck entropy_inequality_check(const FamilyPair& fp);

struct SearchResult {
  std::uint64_t value = 0;
  FamilyPair witness;
};

/// Exact c(n) for 1 <= n <= 3 with the lexicographically smallest maximiser.
/// Throws std::invalid_argument outside that range.
SearchResult exhaustive_max_c(int n);

/// Exact c_k(n) over k-uniform pairs; needs 1 <= k <= n and C(n, k) <= 12.
SearchResult exhaustive_max_ck(int n, int k);

/// n = 3m; A = B = sets with exactly one element from each block
/// {3j+1, 3j+2, 3j+3}.
FamilyPair triple_blocks(int m);

/// A = all subsets of {1..s1}, B = all subsets of {s1+1..n}.
FamilyPair powerset_split(int n, int s1);

class FamilyParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `n=<int>`, then `A:` and one subset per line (ascending comma-separated
/// elements, `-` for the empty set), then `B:` likewise.
void write_family_pair(std::ostream& out, const FamilyPair& fp);
FamilyPair read_family_pair(std::istream& in);

}  // namespace canbound
