/// @file  hitting_set.hpp
/// @brief Minimal hitting set enumeration (the MMCS scheme of Murakami and Uno)

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "error.hpp"

namespace qlit {

inline constexpr std::size_t kDefaultReasonCap = 100000;

/// Enumerate every minimal hitting set of `sets` over elements 0..n-1.
///
/// Each output is sorted; the list is sorted lexicographically. An empty
/// family yields the single empty set; a family containing an empty set
/// yields nothing. Throws CapacityError once more than `cap` sets are found.
inline std::vector<std::vector<std::uint32_t>>
minimal_hitting_sets(std::size_t n, const std::vector<std::vector<std::uint32_t>> &sets,
                     std::size_t cap = kDefaultReasonCap) {
  for (const auto &s : sets)
    if (s.empty())
      return {};

  const std::size_t m = sets.size();
  std::vector<std::vector<std::uint32_t>> occurs(n); // element -> sets containing it
  for (std::size_t j = 0; j < m; ++j)
    for (auto e : sets[j])
      occurs.at(e).push_back(static_cast<std::uint32_t>(j));

  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> chosen;
  std::vector<std::uint32_t> hits(m, 0);    // how many chosen elements hit set j
  std::vector<char> cand(n, 1);

  // Every chosen element must keep a set that only it hits.
  auto stays_minimal = [&](std::uint32_t e) {
    for (auto j : occurs[e])
      ++hits[j];
    bool ok = true;
    for (auto s : chosen) {
      bool critical = false;
      for (auto j : occurs[s])
        if (hits[j] == 1) {
          critical = true;
          break;
        }
      if (!critical) {
        ok = false;
        break;
      }
    }
    for (auto j : occurs[e])
      --hits[j];
    return ok;
  };

  auto recurse = [&](auto &self) -> void {
    std::size_t best = m;
    std::size_t best_size = n + 1;
    for (std::size_t j = 0; j < m; ++j) {
      if (hits[j])
        continue;
      std::size_t k = 0;
      for (auto e : sets[j])
        k += cand[e] ? 1 : 0;
      if (k < best_size) {
        best_size = k;
        best = j;
      }
    }
    if (best == m) {
      if (out.size() >= cap)
        throw CapacityError("minimal hitting set enumeration", cap);
      auto s = chosen;
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
      return;
    }
    std::vector<std::uint32_t> branch;
    for (auto e : sets[best])
      if (cand[e])
        branch.push_back(e);
    for (auto e : branch)
      cand[e] = 0;
    for (auto e : branch) {
      if (stays_minimal(e)) {
        chosen.push_back(e);
        for (auto j : occurs[e])
          ++hits[j];
        self(self);
        for (auto j : occurs[e])
          --hits[j];
        chosen.pop_back();
      }
      cand[e] = 1;
    }
  };
  recurse(recurse);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace qlit
