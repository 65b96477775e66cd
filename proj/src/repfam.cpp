#include "uaq/repfam.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>

#include "uaq/errors.hpp"

namespace uaq {

namespace {

constexpr std::uint64_t kMinTruncationField = 1ULL << 31;

WedgeKey binom128(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  WedgeKey r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// Colex rank of the sorted subset `rows`.
WedgeKey combinadic_rank(const std::vector<std::size_t>& rows) {
  WedgeKey key = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) key += binom128(rows[i], i + 1);
  return key;
}

// Echelon basis of sparse vectors; pivots are each vector's smallest key and
// stored vectors are scaled so the pivot entry is 1.
class SparseBasis {
 public:
  explicit SparseBasis(PrimeField f) : f_(f) {}

  bool add(WedgeVector v) {
    while (!v.empty()) {
      auto it = rows_.find(v.front().first);
      if (it == rows_.end()) {
        const auto inv = f_.inv(v.front().second);
        for (auto& e : v) e.second = f_.mul(e.second, inv);
        const auto key = v.front().first;
        rows_.emplace(key, std::move(v));
        return true;
      }
      v = axpy(v, it->second, f_.sub(0, v.front().second));
    }
    return false;
  }

 private:
  // a + c * b
  WedgeVector axpy(const WedgeVector& a, const WedgeVector& b, std::uint64_t c) const {
    WedgeVector out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.emplace_back(b[j].first, f_.mul(c, b[j].second));
        ++j;
      } else {
        const auto v = f_.add(a[i].second, f_.mul(c, b[j].second));
        if (v) out.emplace_back(a[i].first, v);
        ++i;
        ++j;
      }
    }
    return out;
  }

  PrimeField f_;
  std::map<WedgeKey, WedgeVector> rows_;
};

FieldMatrix working_representation(const PartitionMatroid& m, std::size_t p, int q, const RepConfig& cfg) {
  if (cfg.mode == RepMode::exact) return m.rep();
  if (cfg.truncation_field < kMinTruncationField || !is_prime(cfg.truncation_field))
    throw ConfigError("truncation field must be a prime >= 2^31, got " + std::to_string(cfg.truncation_field));
  const auto full = m.represent(cfg.truncation_field);
  const auto target = p + static_cast<std::size_t>(q);
  if (target >= m.rank()) return full;
  FieldMatrix projection(target, m.rank(), full.field());
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t i = 0; i < target; ++i)
    for (std::size_t j = 0; j < m.rank(); ++j) projection.set(i, j, rng());
  return projection.multiply(full);
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  const auto r = binom128(n, k);
  return r > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                       : static_cast<std::uint64_t>(r);
}

WedgeVector wedge_vector(const FieldMatrix& working_rep, const RoleSet& s) {
  const auto cols = s.items();
  const auto p = cols.size();
  WedgeVector out;
  if (p == 0) {
    out.emplace_back(0, 1);
    return out;
  }
  std::vector<bool> in_support(working_rep.rows(), false);
  for (auto c : cols)
    for (auto r : working_rep.support(c)) in_support[r] = true;
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < in_support.size(); ++r)
    if (in_support[r]) rows.push_back(r);
  if (rows.size() < p) return out;

  // Walk p-subsets of the support in lex order; keys are ranks over all rows.
  std::vector<std::size_t> idx(p);
  for (std::size_t i = 0; i < p; ++i) idx[i] = i;
  std::vector<std::size_t> chosen(p);
  while (true) {
    for (std::size_t i = 0; i < p; ++i) chosen[i] = rows[idx[i]];
    if (auto det = minor_determinant(working_rep, chosen, cols)) out.emplace_back(combinadic_rank(chosen), det);
    std::size_t i = p;
    while (i > 0 && idx[i - 1] == rows.size() - p + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Family compute_repfam(const PartitionMatroid& m, const Family& fam, int q, const RepConfig& cfg) {
  if (q < 0) throw InputError("q must be non-negative");
  for (const auto& s : fam.sets) {
    if (s.count() != fam.p) throw InputError("family member of size " + std::to_string(s.count()) +
                                             ", expected " + std::to_string(fam.p));
    if (!is_independent(m, s)) throw InputError("family member is not independent");
  }
  Family out{fam.p, {}};
  if (fam.sets.empty()) return out;
  if (q == 0) {
    out.sets.push_back(fam.sets.front());
    return out;
  }
  const auto rep = working_representation(m, fam.p, q, cfg);
  SparseBasis basis(rep.field());
  for (const auto& s : fam.sets)
    if (basis.add(wedge_vector(rep, s))) out.sets.push_back(s);
  return out;
}

namespace {

bool fits(const PartitionMatroid& m, const RoleSet& a, const RoleSet& b) {
  return !a.intersects(b) && is_independent(m, a | b);
}

bool any_fits(const PartitionMatroid& m, const Family& fam, const RoleSet& b) {
  return std::any_of(fam.sets.begin(), fam.sets.end(), [&](const RoleSet& a) { return fits(m, a, b); });
}

bool check_all(const PartitionMatroid& m, const Family& fam, const Family& sub, const std::vector<std::size_t>& items,
               std::size_t from, int budget, RoleSet& b) {
  if (any_fits(m, fam, b) && !any_fits(m, sub, b)) return false;
  if (budget == 0) return true;
  for (std::size_t i = from; i < items.size(); ++i) {
    b.insert(items[i]);
    const bool ok = check_all(m, fam, sub, items, i + 1, budget - 1, b);
    b.erase(items[i]);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool oracle_is_representative(const PartitionMatroid& m, const Family& fam, const Family& sub, int q,
                              const RoleSet& universe) {
  RoleSet b(m.ground_size());
  return check_all(m, fam, sub, universe.items(), 0, q, b);
}

}  // namespace uaq
