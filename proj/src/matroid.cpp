#include "uaq/matroid.hpp"

#include <algorithm>

#include "uaq/errors.hpp"

namespace uaq {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t smallest_prime_above(std::uint64_t n) {
  auto c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (!is_prime(p)) throw ConfigError("field modulus " + std::to_string(p) + " is not prime");
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t result = 1 % p_;
  a %= p_;
  while (e) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

std::vector<std::size_t> FieldMatrix::support(std::size_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows_; ++r)
    if ((*this)(r, c) != 0) out.push_back(r);
  return out;
}

FieldMatrix FieldMatrix::multiply(const FieldMatrix& rhs) const {
  if (cols_ != rhs.rows_ || !(field_ == rhs.field_)) throw ConfigError("matrix shape/field mismatch");
  FieldMatrix out(rows_, rhs.cols_, field_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const auto a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        auto& cell = out.data_[i * out.cols_ + j];
        cell = field_.add(cell, field_.mul(a, rhs(k, j)));
      }
    }
  }
  return out;
}

namespace {

// Row-reduces `m` (rows x cols, row-major) in place; returns the rank and,
// through `det`, the determinant when square.
std::size_t eliminate(std::vector<std::uint64_t>& m, std::size_t rows, std::size_t cols, const PrimeField& f,
                      std::uint64_t* det) {
  std::size_t rank = 0;
  std::uint64_t d = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) {
      d = 0;
      continue;
    }
    if (pivot != rank) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[pivot * cols + j], m[rank * cols + j]);
      d = f.sub(0, d);
    }
    const auto pv = m[rank * cols + c];
    d = f.mul(d, pv);
    const auto inv = f.inv(pv);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const auto factor = f.mul(m[r * cols + c], inv);
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        m[r * cols + j] = f.sub(m[r * cols + j], f.mul(factor, m[rank * cols + j]));
    }
    ++rank;
  }
  if (det) *det = rank == rows && rows == cols ? d : 0;
  return rank;
}

}  // namespace

std::size_t rank_of_columns(const FieldMatrix& mat, std::span<const std::size_t> cols) {
  if (cols.empty() || mat.rows() == 0) return 0;
  // Columns become rows of the working matrix; rank is invariant.
  std::vector<std::uint64_t> m;
  m.reserve(cols.size() * mat.rows());
  for (auto c : cols) {
    if (c >= mat.cols()) throw InputError("column index out of range");
    for (std::size_t r = 0; r < mat.rows(); ++r) m.push_back(mat(r, c));
  }
  return eliminate(m, cols.size(), mat.rows(), mat.field(), nullptr);
}

std::uint64_t minor_determinant(const FieldMatrix& mat, std::span<const std::size_t> rows,
                                std::span<const std::size_t> cols) {
  const auto n = rows.size();
  if (n != cols.size()) throw InputError("minor must be square");
  if (n == 0) return 1;
  std::vector<std::uint64_t> m;
  m.reserve(n * n);
  for (auto r : rows)
    for (auto c : cols) m.push_back(mat(r, c));
  std::uint64_t det = 0;
  eliminate(m, n, n, mat.field(), &det);
  return det;
}

PartitionMatroid::PartitionMatroid(std::size_t ground, std::vector<std::pair<RoleSet, std::size_t>> blocks,
                                   std::uint64_t modulus)
    : ground_(ground), block_of_(ground, RoleSet::npos), rep_(0, ground, PrimeField(modulus)) {
  for (auto& [roles, cap] : blocks) {
    if (roles.universe() != ground) throw InputError("block over wrong ground set");
    const auto idx = blocks_.size();
    roles.for_each([&](std::size_t r) {
      if (block_of_[r] != RoleSet::npos) throw ClassError("constraint role sets are not pairwise disjoint");
      block_of_[r] = idx;
    });
    blocks_.push_back({roles, std::min(cap, roles.count()), 0});
  }
  for (std::size_t r = 0; r < ground; ++r) {
    if (block_of_[r] != RoleSet::npos) continue;
    block_of_[r] = blocks_.size();
    blocks_.push_back({RoleSet(ground, {r}), 1, 0});
  }
  for (auto& b : blocks_) {
    b.row_offset = rank_;
    rank_ += b.capacity;
  }
  for (const auto& b : blocks_)
    if (b.roles.count() >= modulus) throw ConfigError("field too small for block of size " + std::to_string(b.roles.count()));
  rep_ = represent(modulus);
}

FieldMatrix PartitionMatroid::represent(std::uint64_t modulus) const {
  PrimeField f(modulus);
  FieldMatrix m(rank_, ground_, f);
  for (const auto& b : blocks_) {
    if (b.roles.count() >= modulus) throw ConfigError("field too small for block");
    std::uint64_t x = 1;
    b.roles.for_each([&](std::size_t r) {
      std::uint64_t v = 1;
      for (std::size_t i = 0; i < b.capacity; ++i) {
        m.set(b.row_offset + i, r, v);
        v = f.mul(v, x);
      }
      ++x;
    });
  }
  return m;
}

bool is_independent(const PartitionMatroid& m, const RoleSet& s) {
  if (s.universe() != m.ground_size()) throw InputError("role set over wrong ground set");
  for (const auto& b : m.blocks())
    if ((s & b.roles).count() > b.capacity) return false;
  return true;
}

bool is_independent_linear(const PartitionMatroid& m, const RoleSet& s) {
  const auto cols = s.items();
  return rank_of_columns(m.rep(), cols) == cols.size();
}

std::uint64_t csm_modulus(const Instance& inst) {
  std::size_t widest = 0;
  std::size_t in_constraints = 0;
  std::size_t rank = 0;
  for (const auto& c : inst.constraints) {
    widest = std::max(widest, c.roles.count());
    in_constraints += c.roles.count();
    rank += std::min<std::size_t>(c.threshold - 1, c.roles.count());
  }
  rank += inst.num_roles() >= in_constraints ? inst.num_roles() - in_constraints : 0;
  return smallest_prime_above(std::max({inst.num_roles(), widest, 2 * rank}));
}

PartitionMatroid build_csm(const Instance& inst, std::uint64_t modulus) {
  std::vector<std::pair<RoleSet, std::size_t>> blocks;
  for (const auto& c : inst.constraints) {
    if (c.threshold < 1) throw ClassError("constraint threshold below 1");
    blocks.emplace_back(c.roles, static_cast<std::size_t>(c.threshold - 1));
  }
  return PartitionMatroid(inst.num_roles(), std::move(blocks), modulus ? modulus : csm_modulus(inst));
}

}  // namespace uaq
