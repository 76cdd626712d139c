#ifndef NNFOCK_PARTITIONS_HPP
#define NNFOCK_PARTITIONS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace nnfock {

enum class Role : std::uint8_t { Opening, Closing, Middle, Singleton };

/// A set partition of {1..n} with cached block structure. Blocks are sorted
/// by their minimum, elements within a block ascending, so equality is
/// structural.
struct Partition {
  int n = 0;
  std::vector<std::vector<int>> blocks;  // 1-based elements
  std::vector<Role> roles;               // roles[i] for element i+1
  std::vector<int> block_of;             // block index of element i+1
  std::vector<bool> inner;               // per block

  bool noncrossing() const;
  bool has_singleton() const;
  bool connects_ends() const;  // 1 ~ n

  static Partition from_blocks(int n, std::vector<std::vector<int>> blocks);
};

bool operator==(const Partition& a, const Partition& b);

inline constexpr int kMaxPartitionSize = 14;

/// Noncrossing partitions of {1..n}; |NC(n)| = Catalan(n). Results cached.
const std::vector<Partition>& enumerate_nc(int n);
/// Interval partitions; |Int(n)| = 2^(n-1).
const std::vector<Partition>& enumerate_int(int n);
/// Noncrossing with no singleton blocks.
const std::vector<Partition>& enumerate_nc_ns(int n);
/// Noncrossing, no singletons, 1 ~ n.
const std::vector<Partition>& enumerate_nc_ns_connected(int n);

std::uint64_t catalan(int n);

/// r_0 = 1, r_1 = 1, r_n = sum_{i=0}^{n-2} r_i r_{n-i-2} + r_{n-1}.
std::vector<std::uint64_t> r_sequence(int count);

/// Moebius inversion oracles. `moment` is called on sub-words (index tuples
/// into whatever family the caller fixed); these are the independent
/// brute-force routes the partition-weight formulas are checked against.
template <class S>
S mobius_free_cumulants(const std::function<S(std::span<const int>)>& moment,
                        std::span<const int> word);

template <class S>
S mobius_boolean_cumulants(const std::function<S(std::span<const int>)>& moment,
                           std::span<const int> word);

namespace detail {

template <class S>
S mobius_cumulant_rec(const std::function<S(std::span<const int>)>& moment,
                      std::span<const int> word, bool free_case,
                      std::map<std::vector<int>, S>& memo) {
  const int n = static_cast<int>(word.size());
  if (n == 0) throw std::invalid_argument("cumulant of empty word");
  std::vector<int> key(word.begin(), word.end());
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  S value = moment(word);
  const auto& parts = free_case ? enumerate_nc(n) : enumerate_int(n);
  for (const auto& pi : parts) {
    if (pi.blocks.size() == 1) continue;  // skip the full block 1_n
    S prod = S(1);
    for (const auto& blk : pi.blocks) {
      std::vector<int> sub;
      sub.reserve(blk.size());
      for (int e : blk) sub.push_back(word[static_cast<std::size_t>(e - 1)]);
      prod = prod * mobius_cumulant_rec<S>(moment, sub, free_case, memo);
      if (prod == S(0)) break;
    }
    value = value - prod;
  }
  memo.emplace(std::move(key), value);
  return value;
}

}  // namespace detail

template <class S>
S mobius_free_cumulants(const std::function<S(std::span<const int>)>& moment,
                        std::span<const int> word) {
  std::map<std::vector<int>, S> memo;
  return detail::mobius_cumulant_rec<S>(moment, word, true, memo);
}

template <class S>
S mobius_boolean_cumulants(const std::function<S(std::span<const int>)>& moment,
                           std::span<const int> word) {
  std::map<std::vector<int>, S> memo;
  return detail::mobius_cumulant_rec<S>(moment, word, false, memo);
}

}  // namespace nnfock

#endif
