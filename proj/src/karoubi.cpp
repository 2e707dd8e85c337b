#include "stabex/karoubi.hpp"

#include <mutex>
#include <stdexcept>

#include "stabex/freemod.hpp"

namespace stabex {

namespace {

struct KaroubiObjData : ObjData {
  Obj base;
  Mor idem;
};

struct KaroubiMorData : MorData {
  Mor payload;
};

const KaroubiObjData& odata(const Obj& o) { return static_cast<const KaroubiObjData&>(*o.data); }
const KaroubiMorData& mdata(const Mor& m) { return static_cast<const KaroubiMorData&>(*m.data); }

/// Given generators G (rows spanning a submodule K of R^a), find an
/// idempotent e on R^a with row space exactly K, by solving the linear
/// system G.X.G = G and taking e = X.G. Solvable iff such an e exists.
std::optional<Matrix> idempotent_on_rowspace(const Matrix& G) {
  size_t k = G.rows(), a = G.cols();
  uint32_t mod = G.mod();
  if (k == 0 || a == 0) return Matrix(a, a, mod);
  RingSpec ring(mod);
  Matrix sys(a * k, k * a, mod);
  std::vector<uint32_t> rhs(k * a, 0);
  for (size_t r = 0; r < a; ++r)
    for (size_t s = 0; s < k; ++s)
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < a; ++j)
          sys.at(r * k + s, i * a + j) = ring.mul(G.at(i, r), G.at(s, j));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < a; ++j) rhs[i * a + j] = G.at(i, j);
  auto x = solve_left(sys, rhs);
  if (!x) return std::nullopt;
  Matrix X(a, k, mod);
  for (size_t r = 0; r < a; ++r)
    for (size_t s = 0; s < k; ++s) X.at(r, s) = (*x)[r * k + s];
  return X.mul(G);
}

}  // namespace

KaroubiCategory::KaroubiCategory(const Category* base) : base_(base) {}

Obj KaroubiCategory::make_obj(Obj base_obj, Mor idem) const {
  if (!base_->obj_eq(idem.dom, base_obj) || !base_->obj_eq(idem.cod, base_obj))
    throw std::invalid_argument("karoubi object: idempotent is not an endomorphism");
  if (!base_->mor_eq(base_->compose(idem, idem), idem))
    throw std::invalid_argument("karoubi object: morphism is not idempotent");
  auto data = std::make_shared<KaroubiObjData>();
  data->base = std::move(base_obj);
  data->idem = std::move(idem);
  return Obj{this, std::move(data)};
}

Mor KaroubiCategory::make_mor(const Obj& from, const Obj& to, Mor base_payload) const {
  const Mor& p = idem_of(from);
  const Mor& q = idem_of(to);
  Mor normal = base_->compose(q, base_->compose(base_payload, p));
  if (!base_->mor_eq(normal, base_payload))
    throw std::invalid_argument("karoubi morphism: payload not compatible with idempotents");
  auto data = std::make_shared<KaroubiMorData>();
  data->payload = std::move(base_payload);
  return Mor{from, to, std::move(data)};
}

const Obj& KaroubiCategory::base_obj(const Obj& o) { return odata(o).base; }
const Mor& KaroubiCategory::idem_of(const Obj& o) { return odata(o).idem; }
const Mor& KaroubiCategory::payload(const Mor& m) { return mdata(m).payload; }

Obj KaroubiCategory::embed_obj(const Obj& a) const {
  return make_obj(a, base_->identity(a));
}

Mor KaroubiCategory::embed_mor(const Mor& f) const {
  return make_mor(embed_obj(f.dom), embed_obj(f.cod), f);
}

bool KaroubiCategory::is_strict_image(const Obj& x) const {
  return base_->is_identity(idem_of(x));
}

std::string KaroubiCategory::name() const { return "karoubi(" + base_->name() + ")"; }

std::string KaroubiCategory::obj_key(const Obj& o) const {
  return "K(" + base_->mor_key(idem_of(o)) + ")";
}

Obj KaroubiCategory::zero_obj() const { return embed_obj(base_->zero_obj()); }

Mor KaroubiCategory::identity(const Obj& o) const {
  return make_mor(o, o, idem_of(o));
}

Mor KaroubiCategory::zero_mor(const Obj& a, const Obj& b) const {
  return make_mor(a, b, base_->zero_mor(base_obj(a), base_obj(b)));
}

Mor KaroubiCategory::compose(const Mor& g, const Mor& f) const {
  return make_mor(f.dom, g.cod, base_->compose(payload(g), payload(f)));
}

Mor KaroubiCategory::add(const Mor& f, const Mor& g) const {
  return make_mor(f.dom, f.cod, base_->add(payload(f), payload(g)));
}

Mor KaroubiCategory::negate(const Mor& f) const {
  return make_mor(f.dom, f.cod, base_->negate(payload(f)));
}

BiproductCert KaroubiCategory::biproduct(const Obj& a, const Obj& b) const {
  const Mor& p = idem_of(a);
  const Mor& q = idem_of(b);
  BiproductCert bc = base_->biproduct(base_obj(a), base_obj(b));
  Obj sum = make_obj(bc.sum, base_->diag_mor(p, q));
  BiproductCert out;
  out.sum = sum;
  out.inj1 = make_mor(a, sum, base_->compose(bc.inj1, p));
  out.inj2 = make_mor(b, sum, base_->compose(bc.inj2, q));
  out.proj1 = make_mor(sum, a, base_->compose(p, bc.proj1));
  out.proj2 = make_mor(sum, b, base_->compose(q, bc.proj2));
  return out;
}

std::vector<Obj> KaroubiCategory::objects(int bound) const {
  std::vector<Obj> out;
  for (const Obj& a : base_->objects(bound))
    for (const Mor& e : base_->hom(a, a))
      if (base_->mor_eq(base_->compose(e, e), e)) out.push_back(make_obj(a, e));
  return out;
}

std::vector<Mor> KaroubiCategory::hom_generators(const Obj& a, const Obj& b) const {
  const Mor& p = idem_of(a);
  const Mor& q = idem_of(b);
  std::vector<Mor> out;
  for (const Mor& g : base_->hom_generators(base_obj(a), base_obj(b)))
    out.push_back(make_mor(a, b, base_->compose(q, base_->compose(g, p))));
  return out;
}

std::vector<uint32_t> KaroubiCategory::flatten(const Mor& m) const {
  return base_->flatten(payload(m));
}

Mor KaroubiCategory::unflatten(const Obj& a, const Obj& b,
                               const std::vector<uint32_t>& coords) const {
  const Mor& p = idem_of(a);
  const Mor& q = idem_of(b);
  Mor raw = base_->unflatten(base_obj(a), base_obj(b), coords);
  return make_mor(a, b, base_->compose(q, base_->compose(raw, p)));
}

size_t KaroubiCategory::flat_len(const Obj& a, const Obj& b) const {
  return base_->flat_len(base_obj(a), base_obj(b));
}

MorRule KaroubiCategory::kernel_rule(const Mor& f) const {
  const Obj& A = f.dom;
  const Mor& p = idem_of(A);

  // 1. A base-level kernel of the payload restricts along the idempotent.
  MorRule br = base_->kernel_rule(payload(f));
  if (br.verdict == RuleVerdict::Representable) {
    const Mor& k = *br.mor;
    auto u = solve_post(k, base_->compose(p, k));
    if (u && base_->mor_eq(base_->compose(*u, *u), *u)) {
      Obj K = make_obj(k.dom, *u);
      Mor incl = make_mor(K, A, base_->compose(k, *u));
      return {RuleVerdict::Representable, incl, ""};
    }
  }

  // 2. Retractions split in the completion: kernel via the idempotent s.f.
  if (auto s = solve_post(f, identity(f.cod))) {
    Mor e = compose(*s, f);
    Mor rest = base_->sub(p, payload(e));
    Obj K = make_obj(base_obj(A), rest);
    return {RuleVerdict::Representable, make_mor(K, A, rest), ""};
  }

  // 3. Matrix instances: the kernel submodule is representable exactly when
  // it is the row space of an idempotent, decided by a linear solve.
  if (dynamic_cast<const FreeModCategory*>(base_)) {
    const Matrix& P = FreeModCategory::payload(p);
    const Matrix& F = FreeModCategory::payload(payload(f));
    Matrix I = Matrix::identity(P.rows(), P.mod());
    Matrix G = left_nullspace(P.sub(I).hstack(F));
    auto e = idempotent_on_rowspace(G);
    if (!e) return {RuleVerdict::NotRepresentable, std::nullopt,
                    "kernel submodule is not a retract of the ambient object"};
    size_t a = FreeModCategory::rank_of(base_obj(A));
    auto* fm = static_cast<const FreeModCategory*>(base_);
    Mor em = fm->make_mor(a, a, *e);
    Obj K = make_obj(base_obj(A), em);
    return {RuleVerdict::Representable, make_mor(K, A, em), ""};
  }
  return {RuleVerdict::NotRepresentable, std::nullopt, "no kernel constructor applies"};
}

MorRule KaroubiCategory::cokernel_rule(const Mor& f) const {
  const Obj& B = f.cod;
  const Mor& q = idem_of(B);

  // 1. A base-level cokernel of the payload descends along the idempotent.
  MorRule br = base_->cokernel_rule(payload(f));
  if (br.verdict == RuleVerdict::Representable) {
    const Mor& c = *br.mor;
    auto v = solve_pre(c, base_->compose(c, q));
    if (v && base_->mor_eq(base_->compose(*v, *v), *v)) {
      Obj Q = make_obj(c.cod, *v);
      Mor proj = make_mor(B, Q, base_->compose(*v, c));
      return {RuleVerdict::Representable, proj, ""};
    }
  }

  // 2. Sections split in the completion: cokernel via the idempotent f.r.
  if (auto r = solve_pre(f, identity(f.dom))) {
    Mor e = compose(f, *r);
    Mor rest = base_->sub(q, payload(e));
    Obj Q = make_obj(base_obj(B), rest);
    return {RuleVerdict::Representable, make_mor(B, Q, rest), ""};
  }

  // 3. Matrix instances: dualize the kernel construction by transposition.
  if (dynamic_cast<const FreeModCategory*>(base_)) {
    const Matrix& Q = FreeModCategory::payload(q);
    const Matrix& F = FreeModCategory::payload(payload(f));
    Matrix I = Matrix::identity(Q.rows(), Q.mod());
    Matrix G = left_nullspace(Q.sub(I).transpose().hstack(F.transpose()));
    auto e = idempotent_on_rowspace(G);
    if (!e) return {RuleVerdict::NotRepresentable, std::nullopt,
                    "cokernel quotient is not a retract of the ambient object"};
    Matrix E = e->transpose();
    size_t b = FreeModCategory::rank_of(base_obj(B));
    auto* fm = static_cast<const FreeModCategory*>(base_);
    Mor em = fm->make_mor(b, b, E);
    Obj Qp = make_obj(base_obj(B), em);
    return {RuleVerdict::Representable, make_mor(B, Qp, em), ""};
  }
  return {RuleVerdict::NotRepresentable, std::nullopt, "no cokernel constructor applies"};
}

std::optional<bool> KaroubiCategory::is_kernel_rule(const Mor& m) const {
  if (dynamic_cast<const FreeModCategory*>(base_)) {
    // m is a kernel iff its transpose is onto the transposed domain image
    // (matrix duality over Z/n exchanges kernels and cokernels).
    const Matrix& F = FreeModCategory::payload(payload(m));
    const Matrix& P = FreeModCategory::payload(idem_of(m.dom));
    return row_module_eq(F.transpose(), P.transpose());
  }
  if (is_strict_image(m.dom) && is_strict_image(m.cod))
    return base_->is_kernel_rule(payload(m));
  return std::nullopt;
}

std::optional<bool> KaroubiCategory::is_cokernel_rule(const Mor& m) const {
  if (dynamic_cast<const FreeModCategory*>(base_)) {
    // m is a cokernel iff its image is the whole codomain image.
    const Matrix& F = FreeModCategory::payload(payload(m));
    const Matrix& Q = FreeModCategory::payload(idem_of(m.cod));
    return row_module_eq(F, Q);
  }
  if (is_strict_image(m.dom) && is_strict_image(m.cod))
    return base_->is_cokernel_rule(payload(m));
  return std::nullopt;
}

const KaroubiCategory& completion_of(const Category& base) {
  static std::mutex mu;
  static std::map<const Category*, std::unique_ptr<KaroubiCategory>> registry;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = registry[&base];
  if (!slot) slot = std::make_unique<KaroubiCategory>(&base);
  return *slot;
}

KernelCert split_idempotent(const Mor& e) {
  const auto* k = dynamic_cast<const KaroubiCategory*>(e.cat());
  if (!k) throw std::invalid_argument("split_idempotent: morphism not in a completion");
  if (!k->obj_eq(e.dom, e.cod) || !k->mor_eq(k->compose(e, e), e))
    throw std::invalid_argument("split_idempotent: morphism is not an idempotent endomorphism");
  const Category& base = k->base();
  Mor rest = base.sub(KaroubiCategory::idem_of(e.dom), KaroubiCategory::payload(e));
  Obj K = k->make_obj(KaroubiCategory::base_obj(e.dom), rest);
  Mor incl = k->make_mor(K, e.dom, rest);
  return KernelCert{e, incl, [k, e, incl](const Mor& t) -> std::optional<Mor> {
                      if (!k->is_zero_mor(k->compose(e, t))) return std::nullopt;
                      return solve_post(incl, t);
                    }};
}

std::optional<EssentialImageWitness> in_essential_image(const KaroubiCategory& k, const Obj& x,
                                                        int bound) {
  const Category& base = k.base();
  if (k.is_strict_image(x)) {
    Mor id = k.identity(x);
    return EssentialImageWitness{KaroubiCategory::base_obj(x), id, id};
  }
  if (base.is_zero_mor(KaroubiCategory::idem_of(x))) {
    Obj hz = k.zero_obj();
    return EssentialImageWitness{base.zero_obj(), k.zero_mor(x, hz), k.zero_mor(hz, x)};
  }
  if (const auto* fm = dynamic_cast<const FreeModCategory*>(&base)) {
    // Matrix fast path: (A, P) is an embedded object exactly when the row
    // space of P is free; a free basis F with P = U.F and F.U = I gives the
    // two isomorphisms directly, with no morphism enumeration.
    const Matrix& P = FreeModCategory::payload(KaroubiCategory::idem_of(x));
    auto F = free_row_basis(P);
    if (!F) return std::nullopt;
    size_t r = F->rows(), a = P.cols();
    if (static_cast<int>(r) > bound) return std::nullopt;
    Matrix U(a, r, P.mod());
    for (size_t i = 0; i < a; ++i) {
      auto row = solve_left(*F, std::vector<uint32_t>(P.data().begin() + i * a,
                                                      P.data().begin() + (i + 1) * a));
      if (!row) return std::nullopt;
      for (size_t j = 0; j < r; ++j) U.at(i, j) = (*row)[j];
    }
    Obj b = fm->make_obj(r);
    Obj hb = k.embed_obj(b);
    Mor to = k.make_mor(x, hb, fm->make_mor(a, r, U));
    Mor from = k.make_mor(hb, x, fm->make_mor(r, a, *F));
    if (!k.mor_eq(k.compose(from, to), k.identity(x)) ||
        !k.mor_eq(k.compose(to, from), k.identity(hb)))
      throw std::logic_error("in_essential_image: idempotent splitting failed to verify");
    return EssentialImageWitness{b, to, from};
  }
  size_t endos = k.hom(x, x).size();
  for (const Obj& b : base.objects(bound)) {
    // Isomorphic objects have endomorphism monoids of equal size; skip
    // candidates that fail this cheap necessary condition.
    if (base.hom(b, b).size() != endos) continue;
    Obj hb = k.embed_obj(b);
    for (const Mor& f : k.hom(x, hb))
      if (auto g = find_inverse(f)) return EssentialImageWitness{b, f, *g};
  }
  return std::nullopt;
}

ObjectClass essential_image_class(const KaroubiCategory& k, int bound) {
  return essential_image_class(k, all_objects_class(), bound);
}

ObjectClass essential_image_class(const KaroubiCategory& k, const ObjectClass& base_cls,
                                  int bound) {
  const KaroubiCategory* kp = &k;
  // The membership search uses a doubled bound: pullback apexes of in-bound
  // corners can need base representatives up to twice the object bound.
  int search = 2 * bound;
  auto contains = [kp, base_cls, search](const Obj& o) {
    auto w = in_essential_image(*kp, o, search);
    return w && base_cls.contains(w->base);
  };
  auto rep_key = [kp, search](const Obj& o) -> std::string {
    auto w = in_essential_image(*kp, o, search);
    return w ? kp->base().obj_key(w->base) : kp->obj_key(o);
  };
  return ObjectClass{"Im(H):" + base_cls.name, contains, /*dedup_iso=*/true, rep_key};
}

PullbackSquare transfer_pullback(const KaroubiCategory& k, const PullbackSquare& base_sq) {
  const KaroubiCategory* kp = &k;
  PullbackSquare out;
  out.d = k.embed_mor(base_sq.d);
  out.h = k.embed_mor(base_sq.h);
  out.apex = k.embed_obj(base_sq.apex);
  out.g = k.embed_mor(base_sq.g);
  out.dprime = k.embed_mor(base_sq.dprime);
  Obj apex = out.apex;
  out.mediate = [kp, base_sq, apex](const Mor& tB, const Mor& tC) -> std::optional<Mor> {
    auto w = base_sq.mediate(KaroubiCategory::payload(tB), KaroubiCategory::payload(tC));
    if (!w) return std::nullopt;
    const Mor& r = KaroubiCategory::idem_of(tB.dom);
    return kp->make_mor(tB.dom, apex, kp->base().compose(*w, r));
  };
  return out;
}

PullbackSquare reflect_pullback(const KaroubiCategory& k, const PullbackSquare& hat_sq) {
  if (!k.is_strict_image(hat_sq.apex) || !k.is_strict_image(hat_sq.d.dom) ||
      !k.is_strict_image(hat_sq.d.cod) || !k.is_strict_image(hat_sq.h.dom))
    throw std::invalid_argument("reflect_pullback: a corner is not a strict embedded object");
  const KaroubiCategory* kp = &k;
  PullbackSquare out;
  out.d = KaroubiCategory::payload(hat_sq.d);
  out.h = KaroubiCategory::payload(hat_sq.h);
  out.apex = KaroubiCategory::base_obj(hat_sq.apex);
  out.g = KaroubiCategory::payload(hat_sq.g);
  out.dprime = KaroubiCategory::payload(hat_sq.dprime);
  out.mediate = [kp, hat_sq](const Mor& tB, const Mor& tC) -> std::optional<Mor> {
    auto u = hat_sq.mediate(kp->embed_mor(tB), kp->embed_mor(tC));
    if (!u) return std::nullopt;
    return KaroubiCategory::payload(*u);
  };
  return out;
}

TransferReport transfer_semistable(const KaroubiCategory& k, const Mor& d, int bound,
                                   StabilityContext* ctx) {
  TransferReport rep;
  rep.base_verdict = certify_semistable_cokernel(d, all_objects_class(), bound, ctx);
  rep.hat_verdict =
      certify_semistable_cokernel(k.embed_mor(d), essential_image_class(k, bound), bound, ctx);
  rep.agree = rep.base_verdict.certified == rep.hat_verdict.certified;
  return rep;
}

ObscureResult obscure_via_karoubi(const Mor& d, const Mor& p, const ObjectClass& cls, int bound) {
  const Category& base = *d.cat();
  const KaroubiCategory& k = completion_of(base);
  if (!weakly_idempotent_complete(k, bound))
    throw std::logic_error("obscure_via_karoubi: completion failed the retraction-kernel check");
  ObjectClass hcls = essential_image_class(k, cls, bound);
  StabilityContext hat_ctx;
  ObscureResult hat = obscure_cokernel(k.embed_mor(d), k.embed_mor(p), hcls, bound, &hat_ctx);

  ObscureResult out;
  out.trace = hat.trace;
  out.trace.routed_via_karoubi = true;
  out.verdict = hat.verdict;
  out.verdict.subject = p;
  out.verdict.class_name = cls.name;
  out.verdict.witness.reset();
  if (hat.verdict.witness) {
    // Map the completion-side witness back along an essential-image
    // isomorphism, so it reads as a base morphism into cod(p).
    auto w = in_essential_image(k, hat.verdict.witness->dom, 2 * bound);
    if (w)
      out.verdict.witness =
          KaroubiCategory::payload(k.compose(*hat.verdict.witness, w->from_h));
  }
  return out;
}

}  // namespace stabex
