#include "stabex/stability.hpp"

#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stabex {

namespace {

std::string verdict_key(StabilityKind kind, const std::string& cls, int bound,
                        const std::string& mkey) {
  return (kind == StabilityKind::Cokernel ? "coker|" : "ker|") + cls + '|' +
         std::to_string(bound) + '|' + mkey;
}

bool objects_isomorphic(const Category& cat, const Obj& a, const Obj& b) {
  if (cat.obj_eq(a, b)) return true;
  for (const Mor& f : cat.hom(a, b))
    if (find_inverse(f)) return true;
  return false;
}

// Empirical closure check for the class (sampled within bound): the zero
// object belongs; pullback apexes of cospans (d, h) with d a cokernel and
// all three corners in class stay in class; dually pushout apexes of spans
// (i, f) with i a kernel. Violation throws ClassClosureViolation.
//
// The restriction to cokernel/kernel cospans is deliberate: the essential
// image of the completion embedding fails the unrestricted closure (over
// Z/6 the kernel of multiplication by 3 on an embedded rank-1 object is the
// non-embeddable pair (R, 4)), while every pullback the certification
// procedures actually form is of this restricted shape.
void check_class_closure(const Category& cat, const ObjectClass& cls, int bound) {
  static std::mutex mu;
  static std::set<std::string> passed;
  std::string key = cat.name() + '|' + cls.name + '|' + std::to_string(bound);
  {
    std::lock_guard<std::mutex> lk(mu);
    if (passed.count(key)) return;
  }
  if (!cls.contains(cat.zero_obj()))
    throw std::runtime_error("ClassClosureViolation: class misses the zero object");
  struct Record {
    std::mutex* mu;
    std::set<std::string>* passed;
    std::string key;
    ~Record() {
      if (std::uncaught_exceptions() == 0) {
        std::lock_guard<std::mutex> lk(*mu);
        passed->insert(key);
      }
    }
  } record{&mu, &passed, key};
  auto members = objects_in_class(cat, cls, bound);
  size_t budget = 48;  // deterministic sample of cospans/spans
  for (const Obj& b : members) {
    for (const Obj& cp : members) {
      for (const Obj& c : members) {
        const auto& hd = cat.hom(b, c);
        const auto& hh = cat.hom(cp, c);
        size_t sd = std::max<size_t>(1, hd.size() / 3), sh = std::max<size_t>(1, hh.size() / 3);
        for (size_t x = 0; x < hd.size(); x += sd) {
          if (!is_cokernel_mor(hd[x], bound)) continue;
          for (size_t y = 0; y < hh.size(); y += sh) {
            if (budget == 0) return;
            --budget;
            auto pb = pullback(hd[x], hh[y]);
            if (pb.ok() && !cls.contains(pb.cert->apex))
              throw std::runtime_error("ClassClosureViolation: pullback apex " +
                                       cat.obj_key(pb.cert->apex) + " escapes class " + cls.name);
          }
        }
        const auto& hi = cat.hom(c, b);
        const auto& hf = cat.hom(c, cp);
        size_t si = std::max<size_t>(1, hi.size() / 3), sf = std::max<size_t>(1, hf.size() / 3);
        for (size_t x = 0; x < hi.size(); x += si) {
          if (!is_kernel_mor(hi[x], bound)) continue;
          for (size_t y = 0; y < hf.size(); y += sf) {
            if (budget == 0) return;
            --budget;
            auto po = pushout(hi[x], hf[y]);
            if (po.ok() && !cls.contains(po.cert->apex))
              throw std::runtime_error("ClassClosureViolation: pushout apex " +
                                       cat.obj_key(po.cert->apex) + " escapes class " + cls.name);
          }
        }
      }
    }
  }
}

SemiStableVerdict certified_verdict(StabilityKind kind, const Mor& m, const ObjectClass& cls,
                                    int bound) {
  SemiStableVerdict v;
  v.kind = kind;
  v.subject = m;
  v.certified = true;
  v.bound = bound;
  v.class_name = cls.name;
  return v;
}

SemiStableVerdict refuted_verdict(StabilityKind kind, const Mor& m, const ObjectClass& cls,
                                  int bound, const Mor& witness, const char* failure) {
  SemiStableVerdict v;
  v.kind = kind;
  v.subject = m;
  v.certified = false;
  v.bound = bound;
  v.class_name = cls.name;
  v.witness = witness;
  v.failure = failure;
  return v;
}

}  // namespace

std::vector<Obj> objects_in_class(const Category& cat, const ObjectClass& cls, int bound) {
  std::vector<Obj> out;
  std::set<std::string> seen_keys;
  for (const Obj& o : cat.objects(bound)) {
    if (!cls.contains(o)) continue;
    if (cls.dedup_iso) {
      if (cls.iso_rep_key) {
        if (!seen_keys.insert(cls.iso_rep_key(o)).second) continue;
      } else {
        bool dup = false;
        for (const Obj& kept : out)
          if (objects_isomorphic(cat, kept, o)) {
            dup = true;
            break;
          }
        if (dup) continue;
      }
    }
    out.push_back(o);
  }
  return out;
}

bool weakly_idempotent_complete(const Category& cat, int bound) {
  static std::mutex mu;
  static std::map<std::string, bool> memo;
  std::string key = cat.name() + '|' + std::to_string(bound);
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  bool ok = true;
  auto objs = cat.objects(bound);
  for (const Obj& x : objs) {
    for (const Obj& y : objs) {
      if (!ok) break;
      for (const Mor& r : cat.hom(x, y)) {
        // r is a retraction iff it has a right inverse (linear solve).
        if (!solve_post(r, cat.identity(y))) continue;
        if (cat.kernel_rule(r).verdict != RuleVerdict::Representable) {
          ok = false;
          break;
        }
      }
    }
  }
  std::lock_guard<std::mutex> lk(mu);
  memo[key] = ok;
  return ok;
}

SemiStableVerdict certify_semistable_cokernel(const Mor& d, const ObjectClass& cls, int bound,
                                              StabilityContext* ctx) {
  const Category* cat = d.cat();
  std::string ekey, ikey;
  if (ctx) {
    ekey = verdict_key(StabilityKind::Cokernel, cls.name, bound, cat->mor_key(d));
    auto it = ctx->exact.find(ekey);
    if (it != ctx->exact.end()) return it->second;
    ikey = verdict_key(StabilityKind::Cokernel, cls.name, bound, cat->mor_iso_key(d));
    auto jt = ctx->iso_certified.find(ikey);
    if (jt != ctx->iso_certified.end() && jt->second) {
      SemiStableVerdict v = certified_verdict(StabilityKind::Cokernel, d, cls, bound);
      ctx->exact.emplace(ekey, v);
      return v;
    }
  }
  if (!is_cokernel_mor(d, bound))
    throw std::runtime_error("SubjectNotCokernel: " + cat->mor_key(d));
  check_class_closure(*cat, cls, bound);

  SemiStableVerdict out = certified_verdict(StabilityKind::Cokernel, d, cls, bound);
  // Isomorphisms certify immediately; so do collapses to the zero object.
  bool fast = find_inverse(d).has_value() || cat->obj_eq(d.cod, cat->zero_obj());
  if (!fast) {
    for (const Obj& cp : objects_in_class(*cat, cls, bound)) {
      for (const Mor& h : cat->hom(cp, d.cod)) {
        auto sq = pullback(d, h);
        if (!sq.ok()) {
          out = refuted_verdict(StabilityKind::Cokernel, d, cls, bound, h, "PullbackMissing");
          break;
        }
        if (!is_cokernel_mor(sq.cert->dprime, bound)) {
          out = refuted_verdict(StabilityKind::Cokernel, d, cls, bound, h, "NotACokernel");
          break;
        }
      }
      if (!out.certified) break;
    }
  }
  if (ctx) {
    ctx->exact.emplace(ekey, out);
    ctx->iso_certified.emplace(ikey, out.certified);
  }
  return out;
}

SemiStableVerdict certify_semistable_kernel(const Mor& i, const ObjectClass& cls, int bound,
                                            StabilityContext* ctx) {
  const Category* cat = i.cat();
  std::string ekey, ikey;
  if (ctx) {
    ekey = verdict_key(StabilityKind::Kernel, cls.name, bound, cat->mor_key(i));
    auto it = ctx->exact.find(ekey);
    if (it != ctx->exact.end()) return it->second;
    ikey = verdict_key(StabilityKind::Kernel, cls.name, bound, cat->mor_iso_key(i));
    auto jt = ctx->iso_certified.find(ikey);
    if (jt != ctx->iso_certified.end() && jt->second) {
      SemiStableVerdict v = certified_verdict(StabilityKind::Kernel, i, cls, bound);
      ctx->exact.emplace(ekey, v);
      return v;
    }
  }
  if (!is_kernel_mor(i, bound)) throw std::runtime_error("SubjectNotKernel: " + cat->mor_key(i));
  check_class_closure(*cat, cls, bound);

  SemiStableVerdict out = certified_verdict(StabilityKind::Kernel, i, cls, bound);
  bool fast = find_inverse(i).has_value() || cat->obj_eq(i.dom, cat->zero_obj());
  if (!fast) {
    for (const Obj& ap : objects_in_class(*cat, cls, bound)) {
      for (const Mor& f : cat->hom(i.dom, ap)) {
        auto sq = pushout(i, f);
        if (!sq.ok()) {
          out = refuted_verdict(StabilityKind::Kernel, i, cls, bound, f, "PushoutMissing");
          break;
        }
        if (!is_kernel_mor(sq.cert->iprime, bound)) {
          out = refuted_verdict(StabilityKind::Kernel, i, cls, bound, f, "NotAKernel");
          break;
        }
      }
      if (!out.certified) break;
    }
  }
  if (ctx) {
    ctx->exact.emplace(ekey, out);
    ctx->iso_certified.emplace(ikey, out.certified);
  }
  return out;
}

ComposeResult compose_semistable(const Mor& d, const Mor& p, const ObjectClass& cls, int bound,
                                 StabilityContext* ctx) {
  const Category* cat = d.cat();
  if (!cat->obj_eq(d.cod, p.dom))
    throw std::invalid_argument("compose_semistable: cod(d) != dom(p)");
  if (!cls.contains(d.cod))
    throw std::runtime_error("compose_semistable: middle object not in class " + cls.name);
  SemiStableVerdict vd = certify_semistable_cokernel(d, cls, bound, ctx);
  SemiStableVerdict vp = certify_semistable_cokernel(p, cls, bound, ctx);
  if (!vd.certified || !vp.certified)
    throw std::runtime_error("compose_semistable: inputs are not certified semi-stable cokernels");

  Mor pd = cat->compose(p, d);
  // Constructed kernel of p.d: pull the kernel of p back along d; the B-leg
  // of that square is the kernel inclusion.
  auto hker = kernel(p);
  if (!hker.ok()) throw std::logic_error("compose_semistable: certified p lost its kernel");
  auto dsq = pullback(d, hker.cert->k);
  if (!dsq.ok()) throw std::logic_error("compose_semistable: pullback along ker(p) missing");
  Mor g = dsq.cert->g;
  if (!cat->is_zero_mor(cat->compose(pd, g)))
    throw std::logic_error("compose_semistable: constructed kernel does not annihilate p.d");

  ComposeResult res{certified_verdict(StabilityKind::Cokernel, pd, cls, bound), g, {}};
  // Certify p.d by the proof's two-step pullback route for every witness.
  for (const Obj& gobj : objects_in_class(*cat, cls, bound)) {
    for (const Mor& gamma : cat->hom(gobj, pd.cod)) {
      auto outer = pullback(p, gamma);
      if (!outer.ok()) {
        res.verdict =
            refuted_verdict(StabilityKind::Cokernel, pd, cls, bound, gamma, "PullbackMissing");
        break;
      }
      auto inner = pullback(d, outer.cert->g);
      if (!inner.ok()) {
        res.verdict =
            refuted_verdict(StabilityKind::Cokernel, pd, cls, bound, gamma, "PullbackMissing");
        break;
      }
      Mor vu = cat->compose(outer.cert->dprime, inner.cert->dprime);
      if (!is_pullback_square(pd, gamma, inner.cert->g, vu, bound))
        throw std::logic_error("compose_semistable: pasted rectangle is not a pullback");
      if (!is_cokernel_mor(vu, bound)) {
        res.verdict =
            refuted_verdict(StabilityKind::Cokernel, pd, cls, bound, gamma, "NotACokernel");
        break;
      }
      res.steps.push_back(ComposeStep{gamma, *outer.cert, *inner.cert, inner.cert->g, vu});
    }
    if (!res.verdict.certified) break;
  }
  if (ctx && res.verdict.certified) {
    ctx->exact.emplace(
        verdict_key(StabilityKind::Cokernel, cls.name, bound, cat->mor_key(pd)), res.verdict);
    ctx->iso_certified.emplace(
        verdict_key(StabilityKind::Cokernel, cls.name, bound, cat->mor_iso_key(pd)), true);
  }
  return res;
}

ComposeResult direct_sum_semistable(const Mor& d, const Mor& dp, const ObjectClass& cls, int bound,
                                    StabilityContext* ctx) {
  const Category* cat = d.cat();
  if (!cls.contains(d.cod) || !cls.contains(dp.dom))
    throw std::runtime_error("direct_sum_semistable: required corner objects not in class " +
                             cls.name);
  SemiStableVerdict vd = certify_semistable_cokernel(d, cls, bound, ctx);
  SemiStableVerdict vdp = certify_semistable_cokernel(dp, cls, bound, ctx);
  if (!vd.certified || !vdp.certified)
    throw std::runtime_error("direct_sum_semistable: inputs are not certified");
  Mor f1 = cat->diag_mor(d, cat->identity(dp.dom));   // B (+) B' -> C (+) B'
  Mor f2 = cat->diag_mor(cat->identity(d.cod), dp);   // C (+) B' -> C (+) C'
  return compose_semistable(f1, f2, cls, bound, ctx);
}

ObscureResult obscure_cokernel(const Mor& d, const Mor& p, const ObjectClass& cls, int bound,
                               StabilityContext* ctx) {
  const Category* cat = d.cat();
  if (!cat->obj_eq(d.cod, p.dom)) throw std::invalid_argument("obscure_cokernel: shape mismatch");
  if (!cls.contains(d.dom) || !cls.contains(d.cod))
    throw std::runtime_error("obscure_cokernel: B or C not in class " + cls.name);
  Mor pd = cat->compose(p, d);
  SemiStableVerdict vpd = certify_semistable_cokernel(pd, cls, bound, ctx);
  if (!vpd.certified)
    throw std::runtime_error("obscure_cokernel: p.d is not a certified semi-stable cokernel");

  if (!weakly_idempotent_complete(*cat, bound)) {
    ObscureResult routed = obscure_via_karoubi(d, p, cls, bound);
    routed.trace.routed_via_karoubi = true;
    return routed;
  }

  auto hker = kernel(p);
  if (!hker.ok()) throw std::runtime_error("KernelOfPMissing: " + hker.refutation);
  Mor h = hker.cert->k;  // C' -> C
  auto gker = kernel(pd);
  if (!gker.ok()) throw std::runtime_error("obscure_cokernel: kernel of p.d missing");
  Mor g = gker.cert->k;

  ObscureTrace trace;
  trace.h = h;
  trace.g = g;
  trace.dh = cat->block_row(d, h);  // B (+) C' -> C
  BiproductCert bc = cat->biproduct(d.dom, h.dom);
  trace.dh_square_pullback = is_pullback_square(pd, p, bc.proj1, trace.dh, bound);
  trace.dh_is_cokernel = is_cokernel_mor(trace.dh, bound);
  trace.p_is_coker_of_h = is_cokernel_of(h, p, bound);

  // [p 0]: C (+) B -> D as a composition of four recorded factors.
  Obj C = p.dom, B = d.dom, D = p.cod;
  BiproductCert cb = cat->biproduct(C, B);
  BiproductCert cd = cat->biproduct(C, D);
  Mor f1 = cat->add(cat->compose(cb.inj1, cat->sub(cb.proj1, cat->compose(d, cb.proj2))),
                    cat->compose(cb.inj2, cb.proj2));            // shear by -d
  Mor f2 = cat->diag_mor(cat->identity(C), pd);                  // C (+) B -> C (+) D
  Mor f3 = cat->add(cat->compose(cd.inj1, cd.proj1),
                    cat->compose(cd.inj2, cat->add(cat->compose(p, cd.proj1), cd.proj2)));
  Mor f4 = cat->block_row(cat->zero_mor(C, D), cat->identity(D));  // [0 1]: C (+) D -> D
  trace.chain = {f1, f2, f3, f4};
  trace.p0 = cat->block_row(p, cat->zero_mor(B, D));
  Mor composed = cat->compose(f4, cat->compose(f3, cat->compose(f2, f1)));
  trace.chain_composes = cat->mor_eq(composed, trace.p0);

  ObscureResult res{certified_verdict(StabilityKind::Cokernel, p, cls, bound), {}};
  bool fast = find_inverse(p).has_value() || find_inverse(d).has_value();
  if (!fast) {
    for (const Obj& gobj : objects_in_class(*cat, cls, bound)) {
      for (const Mor& c : cat->hom(gobj, D)) {
        auto ysq = pullback(trace.p0, c);
        if (!ysq.ok()) {
          res.verdict = refuted_verdict(StabilityKind::Cokernel, p, cls, bound, c,
                                        "PullbackMissing");
          break;
        }
        ObscureStep step;
        step.c = c;
        step.ysq = *ysq.cert;
        step.alpha_p = cat->compose(cb.proj1, ysq.cert->g);
        step.beta_p = cat->compose(cb.proj2, ysq.cert->g);
        step.gamma = ysq.cert->dprime;
        auto delta = ysq.cert->mediate(cb.inj2, cat->zero_mor(B, gobj));
        if (!delta) throw std::logic_error("obscure_cokernel: mediator for ([0;1], 0) missing");
        step.delta = *delta;
        if (!cat->is_identity(cat->compose(step.beta_p, step.delta)))
          throw std::logic_error("obscure_cokernel: beta'.delta is not the identity");
        if (!cat->is_zero_mor(cat->compose(step.gamma, step.delta)))
          throw std::logic_error("obscure_cokernel: gamma.delta is not zero");
        auto ksplit = kernel(step.beta_p);
        if (!ksplit.ok())
          throw std::runtime_error("RetractionUnsplittable: " + cat->mor_key(step.beta_p));
        step.ker_incl = ksplit.cert->k;
        step.leg_c = cat->compose(step.alpha_p, step.ker_incl);
        step.leg_g = cat->compose(step.gamma, step.ker_incl);
        if (!is_pullback_square(p, c, step.leg_c, step.leg_g, bound))
          throw std::logic_error("obscure_cokernel: assembled square is not a pullback");
        if (!is_cokernel_mor(step.leg_g, bound)) {
          res.verdict = refuted_verdict(StabilityKind::Cokernel, p, cls, bound, c, "NotACokernel");
          break;
        }
        res.trace.steps.push_back(std::move(step));
      }
      if (!res.verdict.certified) break;
    }
  }
  // Keep the structural part of the trace regardless of step count.
  res.trace.h = trace.h;
  res.trace.g = trace.g;
  res.trace.dh = trace.dh;
  res.trace.dh_square_pullback = trace.dh_square_pullback;
  res.trace.dh_is_cokernel = trace.dh_is_cokernel;
  res.trace.p_is_coker_of_h = trace.p_is_coker_of_h;
  res.trace.p0 = trace.p0;
  res.trace.chain = trace.chain;
  res.trace.chain_composes = trace.chain_composes;
  if (ctx && res.verdict.certified) {
    ctx->exact.emplace(verdict_key(StabilityKind::Cokernel, cls.name, bound, cat->mor_key(p)),
                       res.verdict);
    ctx->iso_certified.emplace(
        verdict_key(StabilityKind::Cokernel, cls.name, bound, cat->mor_iso_key(p)), true);
  }
  return res;
}

StableSesCert certify_stable_ses(const Mor& i, const Mor& d, int bound, StabilityContext* ctx) {
  const Category* cat = i.cat();
  if (!cat->obj_eq(i.cod, d.dom))
    throw std::invalid_argument("certify_stable_ses: middle object mismatch");
  if (!is_kernel_of(d, i, bound) || !is_cokernel_of(i, d, bound))
    throw std::runtime_error("NotAKernelCokernelPair");
  ObjectClass cls = all_objects_class();
  StableSesCert cert;
  cert.i = i;
  cert.d = d;
  cert.kernel_verdict = certify_semistable_kernel(i, cls, bound, ctx);
  cert.cokernel_verdict = certify_semistable_cokernel(d, cls, bound, ctx);
  cert.stable = cert.kernel_verdict.certified && cert.cokernel_verdict.certified;
  return cert;
}

std::vector<ClassifyRecord> classify_sweep(const Category& cat, int bound, bool dedup_iso,
                                           StabilityContext* ctx) {
  std::vector<ClassifyRecord> out;
  std::set<std::string> seen_iso;
  auto objs = cat.objects(bound);
  for (const Obj& b : objs) {
    for (const Obj& c : objs) {
      for (const Mor& d : cat.hom(b, c)) {
        if (!is_cokernel_mor(d, bound)) continue;
        auto ko = kernel(d);
        if (!ko.ok()) continue;  // no kernel inclusion, so no kernel-cokernel pair
        if (!is_cokernel_of(ko.cert->k, d, bound)) continue;
        if (dedup_iso && !seen_iso.insert(cat.mor_iso_key(d)).second) continue;
        ClassifyRecord rec;
        rec.i = ko.cert->k;
        rec.d = d;
        ObjectClass cls = all_objects_class();
        rec.kernel_verdict = certify_semistable_kernel(rec.i, cls, bound, ctx);
        rec.cokernel_verdict = certify_semistable_cokernel(rec.d, cls, bound, ctx);
        rec.stable = rec.kernel_verdict.certified && rec.cokernel_verdict.certified;
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

}  // namespace stabex
