#pragma once

#include <optional>

#include "stabex/category.hpp"

namespace stabex {

/// Finitely generated free modules over Z/n, skeletal on ranks. Morphisms
/// R^a -> R^b are a x b matrices acting by x -> x * M (row convention), so
/// compose(g, f) has payload payload(f) * payload(g).
class FreeModCategory : public Category {
 public:
  /// kernel_rank_cap: when set, kernel inclusions whose domain rank exceeds
  /// the cap are reported NotRepresentable. This deliberately removes some
  /// limits and is used to exhibit categories where stability sweeps abort.
  explicit FreeModCategory(uint32_t n, std::optional<size_t> kernel_rank_cap = std::nullopt);

  std::string name() const override;
  uint32_t modulus() const override { return ring_.modulus; }

  Obj make_obj(size_t rank) const;
  Mor make_mor(size_t dom_rank, size_t cod_rank, Matrix payload) const;
  static size_t rank_of(const Obj&);
  static const Matrix& payload(const Mor&);

  std::string obj_key(const Obj&) const override;
  std::string mor_iso_key(const Mor&) const override;

  Obj zero_obj() const override;
  Mor identity(const Obj&) const override;
  Mor zero_mor(const Obj&, const Obj&) const override;
  Mor compose(const Mor& g, const Mor& f) const override;
  Mor add(const Mor&, const Mor&) const override;
  Mor negate(const Mor&) const override;

  BiproductCert biproduct(const Obj&, const Obj&) const override;

  std::vector<Obj> objects(int bound) const override;
  std::vector<Mor> hom_generators(const Obj&, const Obj&) const override;
  std::vector<uint32_t> flatten(const Mor&) const override;
  Mor unflatten(const Obj&, const Obj&, const std::vector<uint32_t>&) const override;
  size_t flat_len(const Obj&, const Obj&) const override;

  MorRule kernel_rule(const Mor&) const override;
  MorRule cokernel_rule(const Mor&) const override;
  std::optional<bool> is_kernel_rule(const Mor&) const override;
  std::optional<bool> is_cokernel_rule(const Mor&) const override;

 protected:
  std::vector<Mor> enumerate_hom(const Obj&, const Obj&) const override;

 private:
  RingSpec ring_;
  std::optional<size_t> kernel_rank_cap_;
  std::vector<uint32_t> prime_divisors_;
};

}  // namespace stabex
