#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ipthunt {

// Feature vector with sorted, unique indices and non-zero values.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  static SparseVector from_dense(std::span<const double> dense);
  double at(std::uint32_t feature) const;
  bool operator==(const SparseVector&) const = default;
};

// Labeled training data. Labels index into `classes`.
struct Dataset {
  std::size_t dimension = 0;
  std::vector<std::string> classes;
  std::vector<SparseVector> rows;
  std::vector<std::size_t> labels;

  void add(SparseVector row, std::size_t label);
  void add_dense(std::span<const double> row, std::size_t label);
  std::size_t size() const { return rows.size(); }
};

// Small deterministic generator (SplitMix64); identical streams on every
// platform for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  // Uniform double in [0, 1).
  double unit();

 private:
  std::uint64_t state_;
};

// Fold index in [0, k) for each of n samples: a seeded shuffle dealt
// round-robin, so fold sizes differ by at most one.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace ipthunt
