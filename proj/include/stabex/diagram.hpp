#pragma once

#include <string>
#include <vector>

#include "stabex/exact.hpp"

namespace stabex {

/// Shared implementation of categories of finite linear diagrams over an
/// enumerable base: a diagram is a tuple of base objects joined by edge
/// morphisms between consecutive positions, and a morphism is a tuple of
/// base morphisms commuting with the edges. Limits, colimits and the
/// additive structure are computed positionwise and assembled; the
/// assembled cones are validated at diagram level by the oracle in tests.
class DiagramCategory : public Category {
 public:
  const Category* base() const { return base_; }
  size_t length() const { return len_; }
  /// True when edges run k -> k+1 (differentials), false for k+1 -> k
  /// (bonding maps toward lower levels).
  bool edges_ascend() const { return ascend_; }

  /// Validates edge shapes (and, for differentials, that consecutive edges
  /// compose to zero). Throws std::invalid_argument otherwise.
  Obj make_obj(std::vector<Obj> positions, std::vector<Mor> edges) const;
  /// Validates commutation with the edges at every position.
  Mor make_mor(const Obj& from, const Obj& to, std::vector<Mor> components) const;

  static const std::vector<Obj>& positions(const Obj&);
  static const std::vector<Mor>& edges(const Obj&);
  static const std::vector<Mor>& components(const Mor&);

  std::string name() const override;
  uint32_t modulus() const override { return base_->modulus(); }
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

 protected:
  DiagramCategory(const Category* base, size_t len, bool ascend, bool ddzero, std::string label);

 private:
  const Category* base_;
  size_t len_;
  bool ascend_;
  bool ddzero_;
  std::string label_;
};

/// Cochain complexes of support length N: positions X^0..X^{N-1} and
/// differentials X^k -> X^{k+1} composing to zero.
class ChainCategory : public DiagramCategory {
 public:
  ChainCategory(const Category* base, size_t n);
};

/// Truncated projective spectra of length L: levels X_0..X_{L-1} with
/// bonding maps X_{m} -> X_{m-1} stored for consecutive indices only;
/// general bonds are composites, so the coherence law holds by
/// construction and the identity bond is implicit.
class SpectrumCategory : public DiagramCategory {
 public:
  SpectrumCategory(const Category* base, size_t l);
};

/// The complex with x in position n and zero objects (and differentials)
/// elsewhere. Throws std::out_of_range when n >= length.
Obj concentrated(const ChainCategory& ch, const Obj& x, size_t n);

/// The spectrum with x at every level and identity bonds.
Obj constant_spectrum(const SpectrumCategory& sp, const Obj& x);

/// Agreement report between stability of a sequence of diagrams and
/// positionwise stability of its component sequences in the base.
struct DiagramEquivReport {
  std::string instance;  // diagram category name (records the truncation)
  int bound = 0;
  bool diagram_stable = false;
  std::vector<bool> componentwise;
  bool componentwise_all = false;
  bool agree = false;
  StableSesCert diagram_cert;
  std::vector<StableSesCert> component_certs;
};

/// The sequence must live in a ChainCategory (resp. SpectrumCategory).
DiagramEquivReport degreewise_stable_equiv(const ShortExactSeq& ses, int bound,
                                           StabilityContext* ctx = nullptr);
DiagramEquivReport levelwise_stable_equiv(const ShortExactSeq& ses, int bound,
                                          StabilityContext* ctx = nullptr);

}  // namespace stabex
