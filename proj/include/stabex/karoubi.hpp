#pragma once

#include <optional>

#include "stabex/category.hpp"
#include "stabex/limits.hpp"
#include "stabex/stability.hpp"

namespace stabex {

/// Idempotent completion of a base instance. Objects are pairs (A, p) with
/// p: A -> A idempotent in the base; morphisms (A, p) -> (B, q) are base
/// morphisms f: A -> B with f = q.f.p; the identity of (A, p) is p and the
/// biproduct is (A (+) B, p (+) q). The embedding sends A to (A, 1_A) and
/// keeps morphisms.
class KaroubiCategory : public Category {
 public:
  explicit KaroubiCategory(const Category* base);

  const Category& base() const { return *base_; }

  /// Constructors with invariant checks (p idempotent; f = q.f.p).
  Obj make_obj(Obj base_obj, Mor idem) const;
  Mor make_mor(const Obj& from, const Obj& to, Mor base_payload) const;
  static const Obj& base_obj(const Obj&);
  static const Mor& idem_of(const Obj&);
  static const Mor& payload(const Mor&);

  /// The embedding on objects and morphisms.
  Obj embed_obj(const Obj& a) const;
  Mor embed_mor(const Mor& f) const;
  /// Whether the idempotent of x is literally the identity (strict image).
  bool is_strict_image(const Obj& x) const;

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

 private:
  const Category* base_;
};

/// Shared per-base completion, so morphism handles stay valid across calls.
const KaroubiCategory& completion_of(const Category& base);

/// Kernel of an idempotent endomorphism e of (A, p) in the completion:
/// ((A, p - e), inclusion p - e). Throws if e is not idempotent.
KernelCert split_idempotent(const Mor& e);

struct EssentialImageWitness {
  Obj base;     // object B of the base category
  Mor to_h;     // isomorphism X -> H(B) in the completion
  Mor from_h;   // its inverse
};

/// Search for an isomorphism between x and an embedded base object, scanning
/// base objects within the bound in enumeration order.
std::optional<EssentialImageWitness> in_essential_image(const KaroubiCategory& k, const Obj& x,
                                                        int bound);

/// The essential image of the embedding as a replayable ObjectClass.
ObjectClass essential_image_class(const KaroubiCategory& k, int bound);
/// Essential image restricted to base objects in a given base class.
ObjectClass essential_image_class(const KaroubiCategory& k, const ObjectClass& base_cls, int bound);

/// Transport a base pullback square across the embedding; the mediator of the
/// image square corrects the base mediator by the cone's idempotent.
PullbackSquare transfer_pullback(const KaroubiCategory& k, const PullbackSquare& base_sq);
/// Reflect a completion-side square whose four corners are strict images back
/// to the base. Throws if a corner is not a strict image.
PullbackSquare reflect_pullback(const KaroubiCategory& k, const PullbackSquare& hat_sq);

/// Agreement report between base-side absolute certification of a cokernel
/// and image-relative certification of its embedding, at matched bounds.
struct TransferReport {
  SemiStableVerdict base_verdict;
  SemiStableVerdict hat_verdict;
  bool agree = false;
};
TransferReport transfer_semistable(const KaroubiCategory& k, const Mor& d, int bound,
                                   StabilityContext* ctx = nullptr);

}  // namespace stabex
