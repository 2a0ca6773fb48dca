#pragma once

#include <vector>

namespace qsv {

// C(n, k) as an exact integer; throws on overflow past long long.
long long binomial(int n, int k);

// All k-element subsets of {1, ..., n} with ascending entries, in
// lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

// {1, ..., n} \ subset, ascending; subset must be strictly ascending.
std::vector<int> complement_of(int n, const std::vector<int>& subset);

}  // namespace qsv
