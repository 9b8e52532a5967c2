#include "ipthunt/learn/dataset.hpp"

#include <algorithm>

#include "ipthunt/core/errors.hpp"

namespace ipthunt {

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector v;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      v.index.push_back(static_cast<std::uint32_t>(i));
      v.value.push_back(dense[i]);
    }
  }
  return v;
}

double SparseVector::at(std::uint32_t feature) const {
  const auto it = std::lower_bound(index.begin(), index.end(), feature);
  if (it == index.end() || *it != feature) return 0.0;
  return value[static_cast<std::size_t>(it - index.begin())];
}

void Dataset::add(SparseVector row, std::size_t label) {
  if (!row.index.empty() && row.index.back() >= dimension)
    throw DimensionMismatch("feature index " + std::to_string(row.index.back()) +
                            " outside dimension " + std::to_string(dimension));
  rows.push_back(std::move(row));
  labels.push_back(label);
}

void Dataset::add_dense(std::span<const double> row, std::size_t label) {
  if (row.size() != dimension)
    throw DimensionMismatch("row has " + std::to_string(row.size()) + " features, expected " +
                            std::to_string(dimension));
  add(SparseVector::from_dense(row), label);
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection keeps the draw unbiased.
  std::uint64_t x = next();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double SplitMix64::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw Error("fold count must be positive");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::size_t> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[order[i]] = i % k;
  return fold;
}

}  // namespace ipthunt
