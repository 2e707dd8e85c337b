#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "stabex/howell.hpp"
#include "stabex/matrix.hpp"

namespace stabex {

class Category;

struct ObjData {
  virtual ~ObjData() = default;
};
struct MorData {
  virtual ~MorData() = default;
};

/// An object of a concrete additive category. Payload is instance-specific.
struct Obj {
  const Category* cat = nullptr;
  std::shared_ptr<const ObjData> data;
};

/// A morphism with explicit domain and codomain.
struct Mor {
  Obj dom, cod;
  std::shared_ptr<const MorData> data;
  const Category* cat() const { return dom.cat; }
};

bool obj_equal(const Obj& a, const Obj& b);
bool mor_equal(const Mor& f, const Mor& g);

/// Witnessed biproduct: proj_i . inj_j = delta_ij, inj1.proj1 + inj2.proj2 = 1.
struct BiproductCert {
  Obj sum;
  Mor inj1, inj2, proj1, proj2;
};

enum class RuleVerdict { Representable, NotRepresentable, NoRule };

/// Outcome of an instance-level (co)limit decision rule.
struct MorRule {
  RuleVerdict verdict = RuleVerdict::NoRule;
  std::optional<Mor> mor;  // kernel inclusion / cokernel projection
  std::string reason;
};

/// Abstract additive category with decidable equality, bounded enumeration
/// and Z/n-linear hom-sets (exposed through flatten/unflatten coordinates).
class Category {
 public:
  virtual ~Category() = default;
  virtual std::string name() const = 0;
  /// Hom-sets are modules over Z/modulus(); composition is bilinear.
  virtual uint32_t modulus() const = 0;

  virtual std::string obj_key(const Obj&) const = 0;
  virtual bool obj_eq(const Obj& a, const Obj& b) const;
  virtual bool mor_eq(const Mor& f, const Mor& g) const;
  std::string mor_key(const Mor& m) const;
  /// Key constant on isomorphism classes of morphisms (used for verdict
  /// memoization); defaults to the exact key, which is always sound.
  virtual std::string mor_iso_key(const Mor& m) const { return mor_key(m); }

  virtual Obj zero_obj() const = 0;
  virtual Mor identity(const Obj&) const = 0;
  virtual Mor zero_mor(const Obj& a, const Obj& b) const = 0;
  virtual Mor compose(const Mor& g, const Mor& f) const = 0;  // g after f
  virtual Mor add(const Mor&, const Mor&) const = 0;
  virtual Mor negate(const Mor&) const = 0;
  Mor sub(const Mor& f, const Mor& g) const { return add(f, negate(g)); }
  bool is_zero_mor(const Mor& m) const;
  bool is_identity(const Mor& m) const;

  virtual BiproductCert biproduct(const Obj&, const Obj&) const = 0;
  /// [f g]: A + B -> C (f.proj1 + g.proj2).
  Mor block_row(const Mor& f, const Mor& g) const;
  /// [f; g]: C -> A + B (inj1.f + inj2.g).
  Mor block_col(const Mor& f, const Mor& g) const;
  /// f + g: A + B -> A' + B'.
  Mor diag_mor(const Mor& f, const Mor& g) const;

  virtual bool enumerable() const { return true; }
  /// All objects within the instance bound; deterministic order.
  virtual std::vector<Obj> objects(int bound) const = 0;
  /// A Z/n-module generating set of hom(a, b).
  virtual std::vector<Mor> hom_generators(const Obj& a, const Obj& b) const = 0;
  /// Coordinates of a morphism; additive, injective, fixed length per (dom,cod).
  virtual std::vector<uint32_t> flatten(const Mor&) const = 0;
  virtual Mor unflatten(const Obj& a, const Obj& b, const std::vector<uint32_t>& coords) const = 0;
  virtual size_t flat_len(const Obj& a, const Obj& b) const = 0;

  /// Full hom-set; default enumerates the span of hom_generators. Cached.
  const std::vector<Mor>& hom(const Obj& a, const Obj& b) const;

  // Instance decision rules for kernels/cokernels. NoRule means the limits
  // module falls back to bounded search.
  virtual MorRule kernel_rule(const Mor&) const { return {}; }
  virtual MorRule cokernel_rule(const Mor&) const { return {}; }
  virtual std::optional<bool> is_kernel_rule(const Mor&) const { return std::nullopt; }
  virtual std::optional<bool> is_cokernel_rule(const Mor&) const { return std::nullopt; }

 protected:
  virtual std::vector<Mor> enumerate_hom(const Obj& a, const Obj& b) const;

 private:
  mutable std::mutex cache_mu_;
  mutable std::map<std::string, std::vector<Mor>> hom_cache_;
};

/// Linear combination sum_i coeffs[i] * gens[i] in hom(a, b).
Mor hom_combination(const Obj& a, const Obj& b, const std::vector<Mor>& gens,
                    const std::vector<uint32_t>& coeffs);

/// Solve k . u = t for u: T -> dom(k) (post-composition by k), linearly over
/// the hom module. Nullopt when no solution exists.
std::optional<Mor> solve_post(const Mor& k, const Mor& t);

/// Solve s . c = t for s: cod(c) -> T (pre-composition by c).
std::optional<Mor> solve_pre(const Mor& c, const Mor& t);

/// Two-sided inverse of f, when one exists in hom(cod f, dom f).
std::optional<Mor> find_inverse(const Mor& f);

/// A named, replayable class of objects.
struct ObjectClass {
  std::string name;
  std::function<bool(const Obj&)> contains;
  /// Deduplicate class members up to isomorphism during enumeration sweeps.
  bool dedup_iso = false;
  /// Optional isomorphism-class key for members; when set, deduplication
  /// compares keys instead of searching for inverse pairs.
  std::function<std::string(const Obj&)> iso_rep_key;
};

ObjectClass all_objects_class();

}  // namespace stabex
