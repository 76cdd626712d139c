#include "nnfock/partitions.hpp"

#include <algorithm>
#include <mutex>

namespace nnfock {

namespace {

void check_size(int n) {
  if (n < 1 || n > kMaxPartitionSize)
    throw std::out_of_range("partition size must be in [1, " +
                            std::to_string(kMaxPartitionSize) + "], got " + std::to_string(n));
}

}  // namespace

Partition Partition::from_blocks(int n, std::vector<std::vector<int>> blocks) {
  Partition p;
  p.n = n;
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  p.blocks = std::move(blocks);

  p.block_of.assign(static_cast<std::size_t>(n), -1);
  p.roles.assign(static_cast<std::size_t>(n), Role::Singleton);
  for (int bi = 0; bi < static_cast<int>(p.blocks.size()); ++bi) {
    const auto& blk = p.blocks[static_cast<std::size_t>(bi)];
    for (int e : blk) {
      if (e < 1 || e > n || p.block_of[static_cast<std::size_t>(e - 1)] != -1)
        throw std::invalid_argument("blocks do not partition {1..n}");
      p.block_of[static_cast<std::size_t>(e - 1)] = bi;
    }
    for (int e : blk) {
      Role r;
      if (blk.size() == 1)
        r = Role::Singleton;
      else if (e == blk.front())
        r = Role::Opening;
      else if (e == blk.back())
        r = Role::Closing;
      else
        r = Role::Middle;
      p.roles[static_cast<std::size_t>(e - 1)] = r;
    }
  }
  for (int e = 0; e < n; ++e)
    if (p.block_of[static_cast<std::size_t>(e)] == -1)
      throw std::invalid_argument("blocks do not cover {1..n}");

  // A block V is inner iff some other block W has o_W < o_V <= c_V < c_W.
  p.inner.assign(p.blocks.size(), false);
  for (std::size_t v = 0; v < p.blocks.size(); ++v)
    for (std::size_t w = 0; w < p.blocks.size(); ++w) {
      if (v == w) continue;
      if (p.blocks[w].front() < p.blocks[v].front() && p.blocks[v].back() < p.blocks[w].back()) {
        p.inner[v] = true;
        break;
      }
    }
  return p;
}

bool Partition::noncrossing() const {
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          int bi = block_of[static_cast<std::size_t>(i - 1)];
          int bj = block_of[static_cast<std::size_t>(j - 1)];
          int bk = block_of[static_cast<std::size_t>(k - 1)];
          int bl = block_of[static_cast<std::size_t>(l - 1)];
          if (bi == bk && bj == bl && bi != bj) return false;
        }
  return true;
}

bool Partition::has_singleton() const {
  return std::any_of(blocks.begin(), blocks.end(),
                     [](const auto& b) { return b.size() == 1; });
}

bool Partition::connects_ends() const {
  return block_of.front() == block_of.back();
}

bool operator==(const Partition& a, const Partition& b) {
  return a.n == b.n && a.blocks == b.blocks;
}

namespace {

// Noncrossing partitions of an m-element ordered ground set, as 0-based
// position blocks. The block of the first element is chosen as a subset of
// positions; the gaps between consecutive chosen positions are partitioned
// independently, which generates each noncrossing partition exactly once.
// Lower levels of `cache` must already be built.
std::vector<std::vector<std::vector<int>>> build_nc_positions(
    int m, const std::vector<std::vector<std::vector<std::vector<int>>>>& cache) {
  std::vector<std::vector<std::vector<int>>> out;
  if (m == 0) {
    out.push_back({});
    return out;
  }
  // Iterate over subsets of {1..m-1} joined to position 0.
  for (std::uint32_t mask = 0; mask < (1u << (m - 1)); ++mask) {
    std::vector<int> first_block{0};
    for (int p = 1; p < m; ++p)
      if (mask & (1u << (p - 1))) first_block.push_back(p);

    std::vector<std::pair<int, int>> gaps;  // [lo, hi) position ranges
    for (std::size_t k = 0; k + 1 < first_block.size(); ++k)
      gaps.emplace_back(first_block[k] + 1, first_block[k + 1]);
    gaps.emplace_back(first_block.back() + 1, m);

    std::vector<std::vector<std::vector<int>>> partial{{first_block}};
    for (auto [lo, hi] : gaps) {
      int len = hi - lo;
      if (len == 0) continue;
      const auto& sub = cache[static_cast<std::size_t>(len)];
      std::vector<std::vector<std::vector<int>>> next;
      next.reserve(partial.size() * sub.size());
      for (const auto& acc : partial)
        for (const auto& sp : sub) {
          auto item = acc;
          for (const auto& blk : sp) {
            std::vector<int> shifted;
            shifted.reserve(blk.size());
            for (int e : blk) shifted.push_back(e + lo);
            item.push_back(std::move(shifted));
          }
          next.push_back(std::move(item));
        }
      partial = std::move(next);
    }
    for (auto& p : partial) out.push_back(std::move(p));
  }
  return out;
}

const std::vector<std::vector<std::vector<int>>>& nc_positions(int m) {
  static std::vector<std::vector<std::vector<std::vector<int>>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(cache.size()) <= m)
    cache.push_back(build_nc_positions(static_cast<int>(cache.size()), cache));
  return cache[static_cast<std::size_t>(m)];
}

std::vector<Partition> to_partitions(int n,
                                     const std::vector<std::vector<std::vector<int>>>& pos) {
  std::vector<Partition> out;
  out.reserve(pos.size());
  for (const auto& p : pos) {
    std::vector<std::vector<int>> blocks;
    blocks.reserve(p.size());
    for (const auto& blk : p) {
      std::vector<int> b;
      b.reserve(blk.size());
      for (int e : blk) b.push_back(e + 1);
      blocks.push_back(std::move(b));
    }
    out.push_back(Partition::from_blocks(n, std::move(blocks)));
  }
  return out;
}

template <class Filter>
const std::vector<Partition>& cached_filtered(int n, std::vector<std::vector<Partition>>& cache,
                                              std::mutex& mu, Filter&& filter) {
  check_size(n);
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) <= n) cache.resize(static_cast<std::size_t>(n) + 1);
  auto& slot = cache[static_cast<std::size_t>(n)];
  if (slot.empty()) slot = filter(n);
  return slot;
}

}  // namespace

const std::vector<Partition>& enumerate_nc(int n) {
  static std::vector<std::vector<Partition>> cache;
  static std::mutex mu;
  return cached_filtered(n, cache, mu,
                         [](int m) { return to_partitions(m, nc_positions(m)); });
}

const std::vector<Partition>& enumerate_int(int n) {
  static std::vector<std::vector<Partition>> cache;
  static std::mutex mu;
  return cached_filtered(n, cache, mu, [](int m) {
    // First block is a prefix {1..k}; recurse on the remainder.
    std::vector<Partition> out;
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int start) {
      if (start > m) {
        out.push_back(Partition::from_blocks(m, blocks));
        return;
      }
      for (int end = start; end <= m; ++end) {
        std::vector<int> blk;
        for (int e = start; e <= end; ++e) blk.push_back(e);
        blocks.push_back(std::move(blk));
        rec(end + 1);
        blocks.pop_back();
      }
    };
    rec(1);
    return out;
  });
}

const std::vector<Partition>& enumerate_nc_ns(int n) {
  static std::vector<std::vector<Partition>> cache;
  static std::mutex mu;
  return cached_filtered(n, cache, mu, [](int m) {
    std::vector<Partition> out;
    for (const auto& p : enumerate_nc(m))
      if (!p.has_singleton()) out.push_back(p);
    return out;
  });
}

const std::vector<Partition>& enumerate_nc_ns_connected(int n) {
  static std::vector<std::vector<Partition>> cache;
  static std::mutex mu;
  return cached_filtered(n, cache, mu, [](int m) {
    std::vector<Partition> out;
    for (const auto& p : enumerate_nc_ns(m))
      if (p.connects_ends()) out.push_back(p);
    return out;
  });
}

std::uint64_t catalan(int n) {
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i)
    c = c * 2 * static_cast<std::uint64_t>(2 * i + 1) / static_cast<std::uint64_t>(i + 2);
  return c;
}

std::vector<std::uint64_t> r_sequence(int count) {
  std::vector<std::uint64_t> r;
  r.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    if (n == 0 || n == 1) {
      r.push_back(1);
      continue;
    }
    std::uint64_t v = r[static_cast<std::size_t>(n - 1)];
    for (int i = 0; i <= n - 2; ++i)
      v += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(n - i - 2)];
    r.push_back(v);
  }
  return r;
}

}  // namespace nnfock
