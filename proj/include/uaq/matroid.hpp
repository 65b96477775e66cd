#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uaq/model.hpp"
#include "uaq/reduce.hpp"

namespace uaq {

bool is_prime(std::uint64_t n);
/// Least prime strictly greater than n.
std::uint64_t smallest_prime_above(std::uint64_t n);

/// GF(p) arithmetic on residues in [0, p).
class PrimeField {
 public:
  /// Throws ConfigError unless `p` is prime.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }
  std::uint64_t reduce(std::uint64_t x) const { return x % p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    auto s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  /// Multiplicative inverse of a non-zero residue.
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p_ - 2); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

/// Dense row-major matrix over a prime field.
class FieldMatrix {
 public:
  FieldMatrix(std::size_t rows, std::size_t cols, PrimeField field)
      : rows_(rows), cols_(cols), field_(field), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PrimeField& field() const { return field_; }

  std::uint64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint64_t v) { data_[r * cols_ + c] = field_.reduce(v); }

  /// Rows holding a non-zero entry in column `c`.
  std::vector<std::size_t> support(std::size_t c) const;

  /// this * rhs.
  FieldMatrix multiply(const FieldMatrix& rhs) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  PrimeField field_;
  std::vector<std::uint64_t> data_;
};

/// Rank of the submatrix formed by `cols`, by Gaussian elimination mod p.
std::size_t rank_of_columns(const FieldMatrix& mat, std::span<const std::size_t> cols);

/// Determinant of the square submatrix mat[rows, cols].
std::uint64_t minor_determinant(const FieldMatrix& mat, std::span<const std::size_t> rows,
                                std::span<const std::size_t> cols);

/// A uniform-matroid block of a partition matroid.
struct MatroidBlock {
  RoleSet roles;
  std::size_t capacity = 0;
  /// First representation row owned by the block; it owns `capacity` rows.
  std::size_t row_offset = 0;
};

/// Direct sum of uniform matroids over a role ground set, with a linear
/// representation over a prime field.
///
/// Block i owns rows [row_offset, row_offset + capacity); its j-th role
/// (ascending id) gets the Vandermonde column (1, x, x^2, ...) with x = j + 1.
class PartitionMatroid {
 public:
  /// Blocks must be pairwise disjoint; roles left uncovered become
  /// capacity-1 singleton blocks. Throws ClassError on overlap.
  PartitionMatroid(std::size_t ground, std::vector<std::pair<RoleSet, std::size_t>> blocks,
                   std::uint64_t modulus);

  std::size_t ground_size() const { return ground_; }
  std::size_t rank() const { return rank_; }
  const std::vector<MatroidBlock>& blocks() const { return blocks_; }
  const FieldMatrix& rep() const { return rep_; }
  std::size_t block_of(RoleId r) const { return block_of_.at(r); }

  /// Same matroid, representation rebuilt over GF(modulus).
  FieldMatrix represent(std::uint64_t modulus) const;

 private:
  std::size_t ground_;
  std::vector<MatroidBlock> blocks_;
  std::vector<std::size_t> block_of_;
  std::size_t rank_ = 0;
  FieldMatrix rep_;
};

/// |S & X_i| <= capacity_i for every block.
bool is_independent(const PartitionMatroid& m, const RoleSet& s);

/// Linear test on the representation columns.
bool is_independent_linear(const PartitionMatroid& m, const RoleSet& s);

/// Modulus used for a constraint-satisfaction matroid: the least prime above
/// max(|R|, max |X_i|, 2 * rank).
std::uint64_t csm_modulus(const Instance& inst);

/// Constraint-satisfaction matroid: one block (X_i, t_i - 1) per constraint,
/// singletons elsewhere. `modulus` 0 means csm_modulus(inst).
PartitionMatroid build_csm(const Instance& inst, std::uint64_t modulus = 0);
inline PartitionMatroid build_csm(const BranchLeaf& leaf) { return build_csm(leaf.inst); }

}  // namespace uaq
