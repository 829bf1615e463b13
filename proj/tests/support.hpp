#pragma once

#include "multone/root_system.hpp"

#include <random>
#include <vector>

namespace multone::testing {

inline std::vector<SimpleType> small_types() {
  return {{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 4}, {Family::B, 2},
          {Family::B, 3}, {Family::B, 4}, {Family::C, 2}, {Family::C, 3}, {Family::C, 4},
          {Family::D, 4}, {Family::D, 5}, {Family::E, 6}, {Family::F, 4}, {Family::G, 2}};
}

inline Weight random_weight(std::mt19937_64& rng, std::size_t rank, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  Weight w(rank);
  for (std::size_t i = 0; i < rank; ++i) w[i] = d(rng);
  return w;
}

}  // namespace multone::testing
