#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "uaq/matroid.hpp"

namespace uaq {

/// Sets of uniform size p.
struct Family {
  std::size_t p = 0;
  std::vector<RoleSet> sets;
};

enum class RepMode { exact, truncated };

struct RepConfig {
  RepMode mode = RepMode::exact;
  std::uint64_t seed = 0;
  /// Prime modulus for the random projection; must be at least 2^31.
  std::uint64_t truncation_field = 2147483659ULL;
};

/// Sparse vector of p x p minors: (rank of the row subset among all p-subsets
/// of the working rows, determinant), sorted by key, zeros omitted.
using WedgeKey = unsigned __int128;
using WedgeVector = std::vector<std::pair<WedgeKey, std::uint64_t>>;

WedgeVector wedge_vector(const FieldMatrix& working_rep, const RoleSet& s);

/// A subfamily that q-represents `fam` in `m`: for every B with |B| <= q, if
/// some member A fits B (disjoint, A | B independent) then some kept member
/// fits B. Output order follows input order.
///
/// Throws InputError when a member has the wrong size or is dependent, and
/// ConfigError on an unusable truncation field.
Family compute_repfam(const PartitionMatroid& m, const Family& fam, int q, const RepConfig& cfg);

/// Exhaustive check over every B subset of `universe` with |B| <= q.
bool oracle_is_representative(const PartitionMatroid& m, const Family& fam, const Family& sub, int q,
                              const RoleSet& universe);

/// C(n, k), saturating at the maximum of the type.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace uaq
