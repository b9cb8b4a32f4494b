/*
 * Copyright 2026 The kanova authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace kanova {

/// A subset of the coordinate index set {0, ..., d-1}, stored as a bitmask.
///
/// Coordinates are 0-based internally; all textual interfaces (CLI, CSV,
/// JSON) use 1-based coordinate labels.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint64_t bits) : bits_(bits) {}

  static constexpr SubsetMask empty_set() { return SubsetMask(0); }
  static constexpr SubsetMask full_set(int d) {
    return SubsetMask(d >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1);
  }
  static constexpr SubsetMask singleton(int i) { return SubsetMask(std::uint64_t{1} << i); }

  /// Builds a mask from 0-based coordinate indices.
  static SubsetMask from_indices(const std::vector<int>& idx) {
    std::uint64_t b = 0;
    for (int i : idx) b |= std::uint64_t{1} << i;
    return SubsetMask(b);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr int cardinality() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr bool is_subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask(bits_ & o.bits_); }
  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask(bits_ | o.bits_); }
  /// Set difference (elements of *this not in o).
  constexpr SubsetMask minus(SubsetMask o) const { return SubsetMask(bits_ & ~o.bits_); }
  constexpr SubsetMask complement(int d) const { return SubsetMask(full_set(d).bits_ & ~bits_); }

  constexpr bool operator==(const SubsetMask&) const = default;
  constexpr bool operator<(SubsetMask o) const { return bits_ < o.bits_; }

  /// 0-based member indices in increasing order.
  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(cardinality()));
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  /// 1-based label such as "{1,3}"; the empty set prints as "{}".
  std::string label() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Calls fn(v) for every subset v of u, including the empty set and u itself.
template <typename Fn>
void for_each_subset_of(SubsetMask u, Fn&& fn) {
  const std::uint64_t mask = u.bits();
  std::uint64_t sub = mask;
  while (true) {
    fn(SubsetMask(sub));
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

/// All 2^d subsets of {0..d-1} in increasing bit order. Guarded by callers.
std::vector<SubsetMask> all_subsets(int d);

/// All subsets with cardinality <= max_card, in increasing bit order.
std::vector<SubsetMask> subsets_up_to_cardinality(int d, int max_card);

}  // namespace kanova
