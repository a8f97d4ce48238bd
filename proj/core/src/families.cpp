#include "canbound/families.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>

#include "canbound/entropy.hpp"

namespace canbound {

namespace {

Subset ground_mask(int n) { return n >= 32 ? ~Subset{0} : ((Subset{1} << n) - 1); }

bool all_distinct(std::vector<Subset> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) == values.end();
}

// For every fixed `other`, the map x -> combine(x, other) must be injective on xs.
template <typename Combine>
bool injective_for_each(const std::vector<Subset>& xs, const std::vector<Subset>& others,
                        Combine combine) {
  std::vector<Subset> image(xs.size());
  for (Subset other : others) {
    for (std::size_t i = 0; i < xs.size(); ++i) image[i] = combine(xs[i], other);
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end()) return false;
  }
  return true;
}

// No difference value x \ y may arise from two distinct x.
bool differences_separate(const std::vector<Subset>& xs, const std::vector<Subset>& ys) {
  std::vector<std::pair<Subset, std::size_t>> diffs;
  diffs.reserve(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (Subset y : ys) diffs.emplace_back(xs[i] & ~y, i);
  }
  std::sort(diffs.begin(), diffs.end());
  for (std::size_t k = 1; k < diffs.size(); ++k) {
    if (diffs[k].first == diffs[k - 1].first && diffs[k].second != diffs[k - 1].second) {
      return false;
    }
  }
  return true;
}

std::vector<Subset> cross_unions(const std::vector<Subset>& xs, const std::vector<Subset>& ys,
                                 int shift) {
  std::vector<Subset> out;
  out.reserve(xs.size() * ys.size());
  for (Subset x : xs) {
    for (Subset y : ys) out.push_back(x | (y << shift));
  }
  return out;
}

}  // namespace

FamilyPair::FamilyPair(int n, std::vector<Subset> a, std::vector<Subset> b)
    : n_(n), a_(std::move(a)), b_(std::move(b)) {
  if (n_ < 1 || n_ > kMaxGroundSet) {
    throw std::invalid_argument(fmt::format("ground set size {} outside [1, 24]", n_));
  }
  if (a_.empty() || b_.empty()) throw std::invalid_argument("empty family");
  const Subset outside = ~ground_mask(n_);
  for (const auto* family : {&a_, &b_}) {
    for (Subset s : *family) {
      if (s & outside) throw std::invalid_argument("subset has an element outside [n]");
    }
    if (!all_distinct(*family)) throw std::invalid_argument("duplicate subset in a family");
  }
}

FamilyPair FamilyPair::normalized() const {
  std::vector<Subset> a = a_;
  std::vector<Subset> b = b_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return FamilyPair(n_, std::move(a), std::move(b));
}

bool is_cancellative(const FamilyPair& fp) {
  auto unite = [](Subset x, Subset y) { return x | y; };
  return injective_for_each(fp.a(), fp.b(), unite) && injective_for_each(fp.b(), fp.a(), unite);
}

bool is_cancellative_by_difference(const FamilyPair& fp) {
  auto minus = [](Subset x, Subset y) { return x & ~y; };
  return injective_for_each(fp.a(), fp.b(), minus) && injective_for_each(fp.b(), fp.a(), minus);
}

bool is_recovering(const FamilyPair& fp) {
  return differences_separate(fp.a(), fp.b()) && differences_separate(fp.b(), fp.a());
}

FamilyPair product(const FamilyPair& fp1, const FamilyPair& fp2) {
  const int n = fp1.n() + fp2.n();
  if (n > kMaxGroundSet) {
    throw std::overflow_error(fmt::format("product ground set {} exceeds 24", n));
  }
  return FamilyPair(n, cross_unions(fp1.a(), fp2.a(), fp1.n()),
                    cross_unions(fp1.b(), fp2.b(), fp1.n()));
}

FamilyPair symmetrize_uniformize(const FamilyPair& fp, int copies) {
  if (copies < 1) throw std::invalid_argument("copies must be positive");
  if (2 * fp.n() * copies > kMaxGroundSet) {
    throw std::overflow_error("uniformized ground set exceeds 24");
  }
  if (!is_cancellative(fp)) throw std::invalid_argument("input pair is not cancellative");

  // A'' = A x B' and B'' = B x A' have the same size distribution.
  const FamilyPair doubled = product(fp, fp.swapped());
  std::vector<std::size_t> counts(doubled.n() + 1, 0);
  for (Subset s : doubled.a()) ++counts[std::popcount(s)];
  const auto mode = static_cast<int>(
      std::distance(counts.begin(), std::max_element(counts.begin(), counts.end())));

  auto keep = [mode](const std::vector<Subset>& xs) {
    std::vector<Subset> out;
    std::copy_if(xs.begin(), xs.end(), std::back_inserter(out),
                 [mode](Subset s) { return std::popcount(s) == mode; });
    return out;
  };
  const FamilyPair uniform(doubled.n(), keep(doubled.a()), keep(doubled.b()));
  FamilyPair result = uniform;
  for (int c = 1; c < copies; ++c) result = product(result, uniform);
  return result;
}

EntropyCheck entropy_inequality_check(const FamilyPair& fp) {
  if (!is_cancellative(fp)) throw std::invalid_argument("pair is not cancellative");
  EntropyCheck out;
  out.lhs = std::log2(static_cast<double>(fp.size_product()));
  const auto size_a = static_cast<double>(fp.a().size());
  const auto size_b = static_cast<double>(fp.b().size());
  for (int i = 0; i < fp.n(); ++i) {
    const Subset bit = Subset{1} << i;
    const auto missing = [bit](const std::vector<Subset>& xs) {
      return static_cast<double>(
          std::count_if(xs.begin(), xs.end(), [bit](Subset s) { return (s & bit) == 0; }));
    };
    out.rhs += pair_objective(ProbPair(missing(fp.a()) / size_a, missing(fp.b()) / size_b));
  }
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

namespace {

// Branch-and-bound over families drawn from a small universe (<= 12 sets).
// For each candidate A the compatible B's are exactly the independent sets,
// among the individually admissible sets, of the graph joining u and v when
// some A in the family has A u u = A u v.
class UniverseSearch {
 public:
  UniverseSearch(int n, std::vector<Subset> universe)
      : n_(n), universe_(std::move(universe)) {
    std::sort(universe_.begin(), universe_.end());
  }

  SearchResult run() {
    const int m = static_cast<int>(universe_.size());
    const std::uint32_t full = (std::uint32_t{1} << m) - 1;
    std::uint64_t best = 0;
    std::optional<std::pair<std::vector<Subset>, std::vector<Subset>>> best_pair;

    for (std::uint32_t amask = 1; amask <= full; ++amask) {
      const std::vector<Subset> a = members(amask);
      const auto size_a = static_cast<std::uint64_t>(a.size());
      int max_size = 0;
      for (Subset s : a) max_size = std::max(max_size, std::popcount(s));
      // Every B must differ from every other on the complement of each A.
      const std::uint64_t cap_b =
          std::min<std::uint64_t>(m, std::uint64_t{1} << (n_ - max_size));
      if (size_a * cap_b < best) continue;

      std::uint32_t admissible = 0;
      std::vector<std::uint32_t> conflict(m, 0);
      for (int u = 0; u < m; ++u) {
        std::vector<Subset> image;
        for (Subset s : a) image.push_back(s | universe_[u]);
        if (all_distinct(image)) admissible |= std::uint32_t{1} << u;
        for (int v = u + 1; v < m; ++v) {
          for (Subset s : a) {
            if ((s | universe_[u]) == (s | universe_[v])) {
              conflict[u] |= std::uint32_t{1} << v;
              conflict[v] |= std::uint32_t{1} << u;
              break;
            }
          }
        }
      }
      if (size_a * static_cast<std::uint64_t>(std::popcount(admissible)) < best) continue;

      // Enumerate non-empty submasks of the admissible set.
      for (std::uint32_t bmask = admissible; bmask != 0; bmask = (bmask - 1) & admissible) {
        const auto size_b = static_cast<std::uint64_t>(std::popcount(bmask));
        const std::uint64_t value = size_a * size_b;
        if (value < best) continue;
        if (!independent(bmask, conflict)) continue;
        std::vector<Subset> b = members(bmask);
        if (value > best || !best_pair || std::tie(a, b) < std::tie(best_pair->first, best_pair->second)) {
          best = value;
          best_pair.emplace(a, std::move(b));
        }
      }
    }
    return SearchResult{best, FamilyPair(n_, best_pair->first, best_pair->second)};
  }

 private:
  std::vector<Subset> members(std::uint32_t mask) const {
    std::vector<Subset> out;
    for (std::size_t u = 0; u < universe_.size(); ++u) {
      if (mask & (std::uint32_t{1} << u)) out.push_back(universe_[u]);
    }
    return out;
  }

  static bool independent(std::uint32_t mask, const std::vector<std::uint32_t>& conflict) {
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      if (conflict[std::countr_zero(rest)] & mask) return false;
    }
    return true;
  }

  int n_;
  std::vector<Subset> universe_;
};

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * static_cast<std::uint64_t>(n - i) / (i + 1);
  return c;
}

}  // namespace

SearchResult exhaustive_max_c(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("exhaustive_max_c supports 1 <= n <= 3");
  std::vector<Subset> universe;
  for (Subset s = 0; s <= ground_mask(n); ++s) universe.push_back(s);
  return UniverseSearch(n, std::move(universe)).run();
}

SearchResult exhaustive_max_ck(int n, int k) {
  if (k < 1 || k > n || n > kMaxGroundSet) {
    throw std::invalid_argument("exhaustive_max_ck needs 1 <= k <= n <= 24");
  }
  if (binomial(n, k) > 12) {
    throw std::invalid_argument(fmt::format("C({}, {}) > 12 is beyond exhaustive search", n, k));
  }
  std::vector<Subset> universe;
  for (Subset s = 0; s <= ground_mask(n); ++s) {
    if (std::popcount(s) == k) universe.push_back(s);
  }
  return UniverseSearch(n, std::move(universe)).run();
}

FamilyPair triple_blocks(int m) {
  if (m < 1 || 3 * m > kMaxGroundSet) throw std::invalid_argument("triple_blocks needs 1 <= m <= 8");
  std::vector<Subset> sets{0};
  for (int block = 0; block < m; ++block) {
    std::vector<Subset> next;
    next.reserve(sets.size() * 3);
    for (Subset s : sets) {
      for (int j = 0; j < 3; ++j) next.push_back(s | (Subset{1} << (3 * block + j)));
    }
    sets = std::move(next);
  }
  std::sort(sets.begin(), sets.end());
  return FamilyPair(3 * m, sets, sets);
}

FamilyPair powerset_split(int n, int s1) {
  if (n < 1 || n > kMaxGroundSet || s1 < 0 || s1 > n) {
    throw std::invalid_argument("powerset_split needs 1 <= n <= 24 and 0 <= s1 <= n");
  }
  auto all_subsets = [](Subset mask) {
    std::vector<Subset> out;
    // Submasks in increasing order.
    Subset s = 0;
    do {
      out.push_back(s);
      s = (s - mask) & mask;
    } while (s != 0);
    return out;
  };
  const Subset first = ground_mask(s1);
  return FamilyPair(n, all_subsets(first), all_subsets(ground_mask(n) & ~first));
}

void write_family_pair(std::ostream& out, const FamilyPair& fp) {
  auto write_family = [&out](const std::vector<Subset>& xs) {
    for (Subset s : xs) {
      if (s == 0) {
        out << "-\n";
        continue;
      }
      std::string line;
      for (int i = 0; i < kMaxGroundSet; ++i) {
        if (s & (Subset{1} << i)) {
          if (!line.empty()) line += ',';
          line += std::to_string(i + 1);
        }
      }
      out << line << '\n';
    }
  };
  out << "n=" << fp.n() << '\n';
  out << "A:\n";
  write_family(fp.a());
  out << "B:\n";
  write_family(fp.b());
}

namespace {

int parse_int(std::string_view token, std::size_t line) {
  int v = 0;
  const bool leading_zero = token.size() > 1 && token.front() == '0';
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || leading_zero || ec != std::errc() || ptr != token.data() + token.size()) {
    throw FamilyParseError(fmt::format("line {}: bad integer '{}'", line, token));
  }
  return v;
}

Subset parse_subset(std::string_view text, int n, std::size_t line) {
  if (text == "-") return 0;
  Subset s = 0;
  while (true) {
    const std::size_t comma = text.find(',');
    const int e = parse_int(text.substr(0, comma), line);
    if (e < 1 || e > n) {
      throw FamilyParseError(fmt::format("line {}: element {} outside [1, {}]", line, e, n));
    }
    const Subset bit = Subset{1} << (e - 1);
    if (s & bit) throw FamilyParseError(fmt::format("line {}: repeated element {}", line, e));
    s |= bit;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return s;
}

}  // namespace

FamilyPair read_family_pair(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FamilyParseError("empty input");
  ++line_no;
  if (line.rfind("n=", 0) != 0) throw FamilyParseError("line 1: expected 'n=<int>'");
  const int n = parse_int(std::string_view(line).substr(2), line_no);
  if (n < 1 || n > kMaxGroundSet) throw FamilyParseError("line 1: n outside [1, 24]");

  if (!std::getline(in, line) || line != "A:") throw FamilyParseError("line 2: expected 'A:'");
  ++line_no;

  std::vector<Subset> a;
  std::vector<Subset> b;
  std::vector<Subset>* current = &a;
  std::unordered_set<Subset> seen_a;
  std::unordered_set<Subset> seen_b;
  while (std::getline(in, line)) {
    ++line_no;
    if (line == "B:") {
      if (current == &b) throw FamilyParseError(fmt::format("line {}: second 'B:'", line_no));
      current = &b;
      continue;
    }
    const Subset s = parse_subset(line, n, line_no);
    auto& seen = current == &a ? seen_a : seen_b;
    if (!seen.insert(s).second) {
      throw FamilyParseError(fmt::format("line {}: duplicate subset", line_no));
    }
    current->push_back(s);
  }
  if (current != &b) throw FamilyParseError("missing 'B:' section");
  if (a.empty() || b.empty()) throw FamilyParseError("empty family");
  return FamilyPair(n, std::move(a), std::move(b));
}

}  // namespace canbound
