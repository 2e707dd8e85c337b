#pragma once

#include "stabex/category.hpp"

namespace stabex {

/// Pairs (V, W) of an F_p vector space V == F_p^v with a distinguished
/// subspace W, given by a canonical reduced row-echelon basis. Morphisms are
/// ambient v x v' matrices (row convention, x -> x*F) with W*F inside W'.
class PairCategory : public Category {
 public:
  explicit PairCategory(uint32_t p);

  std::string name() const override;
  uint32_t modulus() const override { return ring_.modulus; }

  /// Canonicalizes the subspace generators (any spanning set is accepted).
  Obj make_obj(size_t ambient, const Matrix& sub_gens) const;
  Obj make_obj(size_t ambient) const;  // zero subspace
  /// Validates that the payload maps the domain subspace into the codomain's.
  Mor make_mor(const Obj& dom, const Obj& cod, Matrix payload) const;
  static size_t ambient_of(const Obj&);
  static const Matrix& sub_of(const Obj&);  // canonical RREF, full row rank
  static const Matrix& payload(const Mor&);

  std::string obj_key(const Obj&) const override;

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

 private:
  /// Basis of the right annihilator {c : W * c == 0} as columns (v x (v-w)).
  Matrix right_null_cols(const Matrix& w, size_t ambient) const;

  RingSpec ring_;
};

}  // namespace stabex
