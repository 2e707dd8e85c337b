#pragma once

#include "stabex/category.hpp"

namespace stabex {

/// Formal opposite of a base category. Used as a duality harness: a
/// statement holds for cokernels in C iff its dual holds for kernels in
/// C^op. Objects and morphisms wrap the base ones with arrows reversed.
class OppositeCategory : public Category {
 public:
  explicit OppositeCategory(const Category* base) : base_(base) {}
  const Category* base() const { return base_; }

  Obj wrap(const Obj& a) const;
  Mor wrap(const Mor& f) const;  // reverses dom/cod
  Obj unwrap_obj(const Obj& a) const;
  Mor unwrap_mor(const Mor& f) const;

  std::string name() const override { return base_->name() + "^op"; }
  uint32_t modulus() const override { return base_->modulus(); }

  std::string obj_key(const Obj& a) const override {
    return base_->obj_key(unwrap_obj(a));
  }
  std::string mor_iso_key(const Mor& f) const override {
    return "op:" + base_->mor_iso_key(unwrap_mor(f));
  }

  Obj zero_obj() const override { return wrap(base_->zero_obj()); }
  Mor identity(const Obj& a) const override {
    return wrap(base_->identity(unwrap_obj(a)));
  }
  Mor zero_mor(const Obj& a, const Obj& b) const override {
    return wrap(base_->zero_mor(unwrap_obj(b), unwrap_obj(a)));
  }
  Mor compose(const Mor& g, const Mor& f) const override {
    return wrap(base_->compose(unwrap_mor(f), unwrap_mor(g)));
  }
  Mor add(const Mor& f, const Mor& g) const override {
    return wrap(base_->add(unwrap_mor(f), unwrap_mor(g)));
  }
  Mor negate(const Mor& f) const override {
    return wrap(base_->negate(unwrap_mor(f)));
  }

  BiproductCert biproduct(const Obj& a, const Obj& b) const override {
    BiproductCert bp = base_->biproduct(unwrap_obj(a), unwrap_obj(b));
    BiproductCert out;
    out.sum = wrap(bp.sum);
    out.inj1 = wrap(bp.proj1);
    out.inj2 = wrap(bp.proj2);
    out.proj1 = wrap(bp.inj1);
    out.proj2 = wrap(bp.inj2);
    return out;
  }

  std::vector<Obj> objects(int bound) const override {
    std::vector<Obj> out;
    for (const Obj& a : base_->objects(bound)) out.push_back(wrap(a));
    return out;
  }
  std::vector<Mor> hom_generators(const Obj& a, const Obj& b) const override {
    std::vector<Mor> out;
    for (const Mor& g : base_->hom_generators(unwrap_obj(b), unwrap_obj(a)))
      out.push_back(wrap(g));
    return out;
  }
  std::vector<uint32_t> flatten(const Mor& f) const override {
    return base_->flatten(unwrap_mor(f));
  }
  Mor unflatten(const Obj& a, const Obj& b, const std::vector<uint32_t>& coords) const override {
    return wrap(base_->unflatten(unwrap_obj(b), unwrap_obj(a), coords));
  }
  size_t flat_len(const Obj& a, const Obj& b) const override {
    return base_->flat_len(unwrap_obj(b), unwrap_obj(a));
  }

  MorRule kernel_rule(const Mor& f) const override {
    return wrap_rule(base_->cokernel_rule(unwrap_mor(f)));
  }
  MorRule cokernel_rule(const Mor& f) const override {
    return wrap_rule(base_->kernel_rule(unwrap_mor(f)));
  }
  std::optional<bool> is_kernel_rule(const Mor& f) const override {
    return base_->is_cokernel_rule(unwrap_mor(f));
  }
  std::optional<bool> is_cokernel_rule(const Mor& f) const override {
    return base_->is_kernel_rule(unwrap_mor(f));
  }

 private:
  struct OpObj : ObjData {
    Obj inner;
    explicit OpObj(Obj a) : inner(std::move(a)) {}
  };
  struct OpMor : MorData {
    Mor inner;
    explicit OpMor(Mor f) : inner(std::move(f)) {}
  };

  MorRule wrap_rule(MorRule r) const {
    if (r.mor) r.mor = wrap(*r.mor);
    return r;
  }

  const Category* base_;
};

inline Obj OppositeCategory::wrap(const Obj& a) const {
  return Obj{this, std::make_shared<OpObj>(a)};
}
inline Mor OppositeCategory::wrap(const Mor& f) const {
  return Mor{wrap(f.cod), wrap(f.dom), std::make_shared<OpMor>(f)};
}
inline Obj OppositeCategory::unwrap_obj(const Obj& a) const {
  return static_cast<const OpObj&>(*a.data).inner;
}
inline Mor OppositeCategory::unwrap_mor(const Mor& f) const {
  return static_cast<const OpMor&>(*f.data).inner;
}

}  // namespace stabex
